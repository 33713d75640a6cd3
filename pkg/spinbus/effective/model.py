"""Effective Lindblad model of the two nuclei (NV eliminated).

    H_eff = Σ_i (ω_Li + δ_i) I^z_i + pA_wo (I^+_1 I^−_2 + I^−_1 I^+_2) + pJ_zz I^z_1 I^z_2

Dissipation: nuclear dephasing I^z_i at rate 2/T2_i, plus the NV-induced
channel Γ_eff. Γ_eff is a Kossakowski matrix over (I^−_1, I^−_2); it is
diagonalized, Γ = U diag(γ) Uᵀ, and each eigenvector becomes a collapse
operator L_k = Σ_i U_ik I^−_i with rate γ_k. Negative eigenvalues are
clipped to zero.
"""

from __future__ import annotations

import logging

import numpy as np

from spinbus.core.enums import PolarizationModel, ShiftModel
from spinbus.dynamics.lindblad import CollapseOperator, LindbladModel
from spinbus.dynamics.models import nuclear_dephasing
from spinbus.effective.params import EffectiveParams, compute_effective_params
from spinbus.physics.operators import SM, SP, SZ, HilbertLayout, Operator
from spinbus.physics.register import NuclearSpin, SpinRegister

logger = logging.getLogger(__name__)

NUCLEAR_PAIR = HilbertLayout(n_nuclei=2, has_nv=False)


def effective_hamiltonian(params: EffectiveParams) -> Operator:
    layout = NUCLEAR_PAIR
    h = np.zeros((4, 4), dtype=np.complex128)
    for k in range(2):
        h += (params.larmor[k] + params.delta[k]) * layout.nuclear_op(SZ, k)
    flip_flop = layout.nuclear_pair(SP, 0, SM, 1) + layout.nuclear_pair(SM, 0, SP, 1)
    h += params.pa_wo * flip_flop
    h += params.pj_zz * layout.nuclear_pair(SZ, 0, SZ, 1)
    return Operator(matrix=h, label="H_eff")


def effective_collapse_operators(params: EffectiveParams) -> list[CollapseOperator]:
    gamma = params.gamma_eff_matrix
    rates, vectors = np.linalg.eigh(gamma)
    lowering = [NUCLEAR_PAIR.nuclear_op(SM, k) for k in range(2)]
    ops: list[CollapseOperator] = []
    for k, rate in enumerate(rates):
        if rate < 0.0:
            logger.warning(f"Clipping negative effective dissipation rate {rate:.3e}/s to zero")
            continue
        if rate == 0.0:
            continue
        op = vectors[0, k] * lowering[0] + vectors[1, k] * lowering[1]
        ops.append(CollapseOperator(Operator(op, f"D_eff_{k}"), float(rate)))
    return ops


def model_from_params(params: EffectiveParams) -> LindbladModel:
    spins = tuple(
        NuclearSpin.from_components(0.0, 0.0, params.larmor[k], params.t2[k]) for k in range(2)
    )
    ops = [*nuclear_dephasing(NUCLEAR_PAIR, spins), *effective_collapse_operators(params)]
    return LindbladModel(
        hamiltonian=effective_hamiltonian(params),
        collapse_ops=tuple(ops),
        layout=NUCLEAR_PAIR,
    )


def build_effective_liouvillian(
    register: SpinRegister,
    t_re: float,
    shift_model: ShiftModel = ShiftModel.printed,
    polarization_model: PolarizationModel = PolarizationModel.printed,
    pair: tuple[int, int] = (0, 1),
) -> LindbladModel:
    """Four-dimensional effective model of nuclei ``pair``.

    Regime warnings from the parameter derivation are emitted as
    ValidityWarning.
    """
    params = compute_effective_params(register, t_re, shift_model, polarization_model, pair)
    return model_from_params(params)
