"""Instantaneous channels: NV reset and ideal nuclear pulses."""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import expm

from spinbus.core.errors import InputError
from spinbus.physics.geometry import as_vector, require_unit
from spinbus.physics.operators import (
    ID2,
    NV_RESET_STATE,
    ComplexMatrix,
    HilbertLayout,
    kron_all,
    partial_trace_nv,
    vector_dot_spin,
)


def reset_channel(rho: ComplexMatrix) -> ComplexMatrix:
    """ρ → |−x⟩⟨−x| ⊗ Tr_NV ρ.

    The nuclear marginal is preserved exactly; the NV factor is replaced.
    """
    return np.asarray(np.kron(NV_RESET_STATE, partial_trace_nv(rho)))


def reset_columns(states: NDArray[np.complex128], d: int) -> NDArray[np.complex128]:
    """Reset applied to a batch of row-major vectorized operators (d², k)."""
    half = d // 2
    k = states.shape[1]
    blocks = states.reshape(2, half, 2, half, k)
    nuclear = blocks[0, :, 0, :, :] + blocks[1, :, 1, :, :]
    out = np.zeros((2, half, 2, half, k), dtype=np.complex128)
    out[1, :, 1, :, :] = nuclear  # |−x⟩ is NV basis index 1
    return out.reshape(d * d, k)


def pulse_unitary(
    layout: HilbertLayout,
    axis: tuple[float, float, float] | NDArray[np.float64],
    angle: float,
    targets: tuple[int, ...] | list[int],
) -> ComplexMatrix:
    """U = ⊗_targets exp(−i·angle·(n·I)).

    Raises:
        InputError: If ``axis`` is not a unit vector or ``targets`` is empty
    """
    if not targets:
        raise InputError("Pulse needs at least one target nucleus")
    n = require_unit(as_vector(axis), "axis")
    single = expm(-1j * angle * vector_dot_spin(n))
    factors = [ID2] * layout.n_sites
    for t in targets:
        factors[layout.nucleus_site(t)] = single
    return kron_all(factors)


def apply_pulse(
    rho: ComplexMatrix,
    layout: HilbertLayout,
    axis: tuple[float, float, float] | NDArray[np.float64],
    angle: float,
    targets: tuple[int, ...] | list[int],
) -> ComplexMatrix:
    """ρ → UρU† for an ideal instantaneous rotation of the target nuclei."""
    u = pulse_unitary(layout, axis, angle, targets)
    return np.asarray(u @ rho @ u.conj().T)
