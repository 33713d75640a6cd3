"""Dissipative models of the full NV + nuclei system."""

from __future__ import annotations

import math

from spinbus.dynamics.lindblad import CollapseOperator, LindbladModel
from spinbus.physics.hamiltonian import build_full_hamiltonian, build_nuclear_hamiltonian
from spinbus.physics.operators import SM, SP, SZ, HilbertLayout, Operator
from spinbus.physics.register import DipolarCoupling, NuclearSpin, SpinRegister


def dephasing_rate(t2: float) -> float:
    """Rate of the I^z collapse operator giving coherence decay e^{−t/T2}."""
    return 0.0 if math.isinf(t2) else 2.0 / t2


def nuclear_dephasing(
    layout: HilbertLayout, nuclei: tuple[NuclearSpin, ...]
) -> list[CollapseOperator]:
    ops = []
    for k, spin in enumerate(nuclei):
        rate = dephasing_rate(spin.t2)
        if rate > 0.0:
            ops.append(CollapseOperator(Operator(layout.nuclear_op(SZ, k), f"Iz_{k}"), rate))
    return ops


def build_exact_model(
    register: SpinRegister,
    nv_dephasing_rate: float = 0.0,
    include_dipolar: bool = False,
) -> LindbladModel:
    """Full Lindblad model of the register.

    D_e: |+x⟩⟨−x| and |−x⟩⟨+x| each at rate 1/(2 T1ρ), plus optional dressed
    dephasing σ_z at rate 2γ (coherence decay γ). D_n: I^z_i at rate 2/T2_i.
    """
    layout = register.layout
    relax = 1.0 / (2.0 * register.t1_rho)
    ops = [
        CollapseOperator(Operator(layout.nv_op(SP), "nv_up"), relax),
        CollapseOperator(Operator(layout.nv_op(SM), "nv_down"), relax),
    ]
    if nv_dephasing_rate > 0.0:
        dephasing = Operator(layout.nv_op(SZ), "nv_dephasing")
        ops.append(CollapseOperator(dephasing, 2.0 * nv_dephasing_rate))
    ops.extend(nuclear_dephasing(layout, register.nuclei))
    return LindbladModel(
        hamiltonian=build_full_hamiltonian(register, include_dipolar=include_dipolar),
        collapse_ops=tuple(ops),
        layout=layout,
    )


def build_nuclear_model(
    larmors: list[float],
    dipolar: tuple[DipolarCoupling, ...] = (),
    t2: list[float] | None = None,
) -> LindbladModel:
    """Nuclei-only model (no NV), used for decoupling-sequence checks."""
    layout = HilbertLayout(n_nuclei=len(larmors), has_nv=False)
    ops: list[CollapseOperator] = []
    for k, t in enumerate(t2 or []):
        rate = dephasing_rate(t)
        if rate > 0.0:
            ops.append(CollapseOperator(Operator(layout.nuclear_op(SZ, k), f"Iz_{k}"), rate))
    return LindbladModel(
        hamiltonian=build_nuclear_hamiltonian(larmors, dipolar),
        collapse_ops=tuple(ops),
        layout=layout,
    )
