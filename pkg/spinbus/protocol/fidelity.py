"""Process maps and average gate fidelity.

A channel on d-dimensional operators is stored as its d²×d² superoperator in
row-major vectorization; the superoperator of U·U† is U ⊗ U*. For a target
unitary U the entanglement fidelity is F_e = Tr(S_U† S) / d², and the average
gate fidelity F_avg = (d·F_e + 1) / (d + 1).
"""

from __future__ import annotations

import itertools
import logging
import math

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import expm
from scipy.optimize import minimize

from spinbus.core.enums import GateFrame
from spinbus.core.errors import ChannelValidationError
from spinbus.dynamics.lindblad import unitary_superoperator
from spinbus.physics.operators import SM, SP, SZ, ComplexMatrix, HilbertLayout

logger = logging.getLogger(__name__)

TP_TOLERANCE: float = 1e-6
_PAIR = HilbertLayout(n_nuclei=2, has_nv=False)
_FRAME_GRID: int = 12


def flip_flop_operator() -> ComplexMatrix:
    return np.asarray(_PAIR.nuclear_pair(SP, 0, SM, 1) + _PAIR.nuclear_pair(SM, 0, SP, 1))


def flip_flop_unitary(angle: float) -> ComplexMatrix:
    """exp(−i·angle·(I^+_1 I^−_2 + I^−_1 I^+_2)); angle = pA_wo·t."""
    return np.asarray(expm(-1j * angle * flip_flop_operator()))


def frame_unitary(phases: NDArray[np.float64] | tuple[float, ...]) -> ComplexMatrix:
    """exp(−i(φ1 I^z_1 + φ2 I^z_2 [+ φzz I^z_1 I^z_2])), diagonal."""
    gen = phases[0] * _PAIR.nuclear_op(SZ, 0) + phases[1] * _PAIR.nuclear_op(SZ, 1)
    if len(phases) > 2:
        gen = gen + phases[2] * _PAIR.nuclear_pair(SZ, 0, SZ, 1)
    return np.diag(np.exp(-1j * np.real(np.diag(gen))))


def check_trace_preserving(channel: ComplexMatrix, tol: float = TP_TOLERANCE) -> None:
    """Tr Φ(E_ab) = δ_ab for every matrix unit.

    Raises:
        ChannelValidationError: If any trace deviates by more than ``tol``
    """
    d = int(round(math.sqrt(channel.shape[0])))
    traces = channel.reshape(d, d, d * d)
    traces = np.einsum("iij->j", traces)
    expected = np.eye(d, dtype=np.complex128).reshape(-1)
    err = float(np.max(np.abs(traces - expected)))
    if err > tol:
        raise ChannelValidationError(
            f"Channel is not trace preserving (max deviation {err:.3e})", extra={"deviation": err}
        )


def entanglement_fidelity(channel: ComplexMatrix, target: ComplexMatrix) -> float:
    d = target.shape[0]
    s_target = unitary_superoperator(target)
    return float(np.real(np.trace(s_target.conj().T @ channel))) / d**2


def average_gate_fidelity(channel: ComplexMatrix, target: ComplexMatrix) -> float:
    """F_avg of ``channel`` (superoperator) against unitary ``target``.

    Raises:
        ChannelValidationError: If the channel is not trace preserving
    """
    check_trace_preserving(channel)
    d = target.shape[0]
    f_e = entanglement_fidelity(channel, target)
    return (d * f_e + 1.0) / (d + 1.0)


def ising_limited_fidelity(phase: float) -> float:
    """Best local-frame F_avg of exp(−i·phase·I^z_1 I^z_2) against the identity.

    Local Z rotations reach only the parity flip Z_π ⊗ Z_π, so the
    entanglement fidelity is max(cos², sin²)(phase/4).
    """
    quarter = 0.25 * phase
    f_e = max(math.cos(quarter) ** 2, math.sin(quarter) ** 2)
    d = _PAIR.dim
    return (d * f_e + 1.0) / (d + 1.0)


def frame_corrected_fidelity(
    channel: ComplexMatrix,
    target: ComplexMatrix,
    frame: GateFrame = GateFrame.local,
) -> tuple[float, tuple[float, ...]]:
    """Best F_avg against Z(φ)·target over the frame phases.

    Coarse grid (12 points per phase) followed by Nelder–Mead refinement.

    Returns:
        tuple[float, tuple[float, ...]]: Fidelity and the optimal phases
    """
    if frame is GateFrame.none:
        return average_gate_fidelity(channel, target), ()
    check_trace_preserving(channel)
    n_phases = 2 if frame is GateFrame.local else 3
    periods = [2 * math.pi, 2 * math.pi, 4 * math.pi][:n_phases]
    d = target.shape[0]

    def infidelity(phases: NDArray[np.float64]) -> float:
        f_e = entanglement_fidelity(channel, frame_unitary(phases) @ target)
        return 1.0 - (d * f_e + 1.0) / (d + 1.0)

    axes = [np.linspace(0.0, p, _FRAME_GRID, endpoint=False) for p in periods]
    best = min(itertools.product(*axes), key=lambda ph: infidelity(np.asarray(ph)))
    result = minimize(
        infidelity,
        np.asarray(best),
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-15, "maxiter": 4000, "maxfev": 8000},
    )
    phases = tuple(float(v) for v in result.x)
    fidelity = 1.0 - float(result.fun)
    logger.debug(f"Frame {frame.value}: F={fidelity:.9f} at phases {phases}")
    return fidelity, phases
