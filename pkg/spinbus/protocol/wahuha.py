"""WAHUHA homonuclear decoupling.

One cycle of length t_c = 6τ is

    τ  X  τ  −Y  2τ  Y  τ  −X  τ

with ideal π/2 pulses on the target nuclei. The toggling frame visits z, y
and x for 2τ each, so the secular dipolar term averages to zero while any
Zeeman-like I^z term is scaled by 1/√3 and tilted onto (1, 1, 1)/√3.
"""

from __future__ import annotations

from collections.abc import Sequence
import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.linalg import expm, logm

from spinbus.core.errors import ScheduleError
from spinbus.dynamics.channels import pulse_unitary
from spinbus.dynamics.schedule import Axis, PulseEvent
from spinbus.physics.operators import ComplexMatrix, HilbertLayout

logger = logging.getLogger(__name__)

# (offset in units of τ, axis)
CYCLE: tuple[tuple[int, Axis], ...] = (
    (1, (1.0, 0.0, 0.0)),
    (2, (0.0, -1.0, 0.0)),
    (4, (0.0, 1.0, 0.0)),
    (5, (-1.0, 0.0, 0.0)),
)
PULSE_ANGLE: float = math.pi / 2
SCALING: float = 1.0 / math.sqrt(3.0)
_CYCLE_TOLERANCE: float = 1e-9


def cycle_count(total_time: float, cycle_time: float) -> int:
    """Number of whole cycles in ``total_time``.

    Raises:
        ScheduleError: If the ratio is not an integer within 1e-9
    """
    if cycle_time <= 0:
        raise ScheduleError(f"WAHUHA cycle time must be positive, got {cycle_time}")
    if total_time < 0:
        raise ScheduleError(f"WAHUHA total time must be non-negative, got {total_time}")
    ratio = total_time / cycle_time
    n = round(ratio)
    if abs(ratio - n) > _CYCLE_TOLERANCE * max(1.0, ratio):
        raise ScheduleError(
            f"T = {total_time} s is not an integer number of {cycle_time} s cycles ({ratio:.9g})",
            extra={"total_time": total_time, "cycle_time": cycle_time},
        )
    return int(n)


def wahuha_schedule(
    total_time: float,
    cycle_time: float,
    targets: Sequence[int],
    start: float = 0.0,
) -> list[PulseEvent]:
    """Pulse events of back-to-back WAHUHA cycles covering ``total_time``."""
    n = cycle_count(total_time, cycle_time)
    tau = cycle_time / 6.0
    target_tuple = tuple(targets)
    events = [
        PulseEvent(
            time=start + (6 * c + k) * tau, axis=axis, angle=PULSE_ANGLE, targets=target_tuple
        )
        for c in range(n)
        for k, axis in CYCLE
    ]
    logger.debug(f"WAHUHA: {n} cycles of {cycle_time:.6g} s on nuclei {target_tuple}")
    return events


def cycle_propagator(
    hamiltonian: ComplexMatrix,
    cycle_time: float,
    targets: Sequence[int],
    layout: HilbertLayout,
) -> ComplexMatrix:
    """Unitary of one lab-frame cycle under a static Hamiltonian."""
    tau = cycle_time / 6.0
    u = np.eye(hamiltonian.shape[0], dtype=np.complex128)
    now = 0
    for k, axis in CYCLE:
        u = expm(-1j * hamiltonian * (k - now) * tau) @ u
        u = pulse_unitary(layout, axis, PULSE_ANGLE, tuple(targets)) @ u
        now = k
    return np.asarray(expm(-1j * hamiltonian * (6 - now) * tau) @ u)


def average_hamiltonian(
    hamiltonian: ComplexMatrix,
    cycle_time: float,
    targets: Sequence[int],
    layout: HilbertLayout,
) -> ComplexMatrix:
    """H̄ with exp(−i H̄ t_c) equal to the cycle propagator (principal log)."""
    u = cycle_propagator(hamiltonian, cycle_time, targets, layout)
    h_bar = 1j * logm(u) / cycle_time
    return np.asarray(0.5 * (h_bar + h_bar.conj().T))


class DecouplingSpec(BaseModel):
    """WAHUHA settings for one propagation.

    Attributes:
        cycle_time (float): t_c in s (τ = t_c / 6)
        targets (tuple[int, ...]): Nuclei receiving the pulses
        reference_frequency (float | None): Angular frequency the pulse phases
            are locked to; ``None`` uses the Larmor frequency of the first
            target
    """

    model_config = ConfigDict(frozen=True)

    cycle_time: float = Field(gt=0)
    targets: tuple[int, ...] = Field(min_length=1)
    reference_frequency: float | None = None
