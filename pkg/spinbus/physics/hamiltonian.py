"""Hamiltonian assembly in the NV dressed frame.

    H = Ω σ_z + Σ_i (ω_Li I^z_i + ½ A_i·I_i) + σ_x ⊗ Σ_i A_i·I_i
        [+ Σ_{i<j} d_ij (3 I^z_i I^z_j − I_i·I_j)]

with A_i expressed in the field frame so I^z_i is the nuclear quantization
axis.
"""

from __future__ import annotations

import numpy as np

from spinbus.physics.operators import (
    SX,
    SY,
    SZ,
    ComplexMatrix,
    HilbertLayout,
    Operator,
    vector_dot_spin,
)
from spinbus.physics.register import DipolarCoupling, NuclearSpin, SpinRegister


def dipolar_term(layout: HilbertLayout, coupling: DipolarCoupling) -> ComplexMatrix:
    i, j = coupling.i, coupling.j
    zz = layout.nuclear_pair(SZ, i, SZ, j)
    dot = layout.nuclear_pair(SX, i, SX, j) + layout.nuclear_pair(SY, i, SY, j) + zz
    return coupling.d * (3.0 * zz - dot)


def nuclear_zeeman(layout: HilbertLayout, nuclei: tuple[NuclearSpin, ...]) -> ComplexMatrix:
    h = np.zeros((layout.dim, layout.dim), dtype=np.complex128)
    for k, spin in enumerate(nuclei):
        h += spin.larmor * layout.nuclear_op(SZ, k)
    return h


def build_full_hamiltonian(register: SpinRegister, include_dipolar: bool = False) -> Operator:
    """Assemble the dressed-frame Hamiltonian of NV plus nuclei.

    Args:
        register: Spin register
        include_dipolar: Add the register's internuclear couplings

    Returns:
        Operator: Hermitian matrix of dimension 2^(N+1), NV first

    Example:
        >>> reg = SpinRegister(nuclei=(spin,), rabi_frequency=2e6, t1_rho=1e-3)
        >>> build_full_hamiltonian(reg).dim
        4
    """
    layout = register.layout
    h = register.rabi_frequency * layout.nv_op(SZ)
    h = h + nuclear_zeeman(layout, register.nuclei)
    nv_x = layout.nv_op(SX)
    hyperfine_sum = np.zeros_like(h)
    for k, spin in enumerate(register.nuclei):
        hyperfine_sum += layout.nuclear_op(vector_dot_spin(spin.hyperfine_b), k)
    h = h + 0.5 * hyperfine_sum + nv_x @ hyperfine_sum
    if include_dipolar:
        for coupling in register.dipolar:
            h = h + dipolar_term(layout, coupling)
    label = f"H_full[N={register.n_nuclei}{',dipolar' if include_dipolar else ''}]"
    return Operator(matrix=np.asarray(h), label=label)


def build_nuclear_hamiltonian(
    larmors: list[float],
    dipolar: tuple[DipolarCoupling, ...] = (),
) -> Operator:
    """Nuclei-only Hamiltonian Σ ω_i I^z_i + dipolar terms (no NV factor)."""
    layout = HilbertLayout(n_nuclei=len(larmors), has_nv=False)
    h = np.zeros((layout.dim, layout.dim), dtype=np.complex128)
    for k, w in enumerate(larmors):
        h += w * layout.nuclear_op(SZ, k)
    for coupling in dipolar:
        h += dipolar_term(layout, coupling)
    return Operator(matrix=h, label=f"H_nuclear[N={len(larmors)}]")
