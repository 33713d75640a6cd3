"""Measurement-time estimates for registering one dip.

Each NV readout is a Bernoulli draw with success probability
q = C·S + (1 − C)/2, C being the combined contrast and collection
efficiency. The NV is read out at every reset, so one shot of length T
collects M = ⌊T / t_re⌋ readouts instead of one. Telling the dip
(S = 1 − depth) from the baseline (S = 1) needs C·depth to exceed
``target_snr`` standard errors; with q(1 − q) ≤ 1/4,

    N = target_snr² / (4 M (C·depth)²)

shots per sweep point, and the total time is n_steps · N · T. N is kept
fractional for the total (shots are spread over the sweep until the
threshold is met); the rounded-up count is reported next to it.
"""

from __future__ import annotations

import logging
import math

from pydantic import BaseModel, ConfigDict

from spinbus.core.errors import InputError

logger = logging.getLogger(__name__)

DEFAULT_SNR: float = 3.0
DEFAULT_DEPTH: float = 0.5


class BudgetEstimate(BaseModel):
    model_config = ConfigDict(frozen=True)

    shots_per_point: float
    shots_rounded: int
    readouts_per_shot: int
    total_time: float
    contrast: float
    n_steps: int
    evolution_time: float

    def as_report(self) -> dict[str, object]:
        return {
            "budget_shots_per_point": self.shots_per_point,
            "budget_readouts_per_shot": self.readouts_per_shot,
            "budget_total_time": self.total_time,
        }


def readouts_per_shot(evolution_time: float, reset_period: float | None) -> int:
    """⌊T / t_re⌋ readouts per shot, one without resets."""
    if reset_period is None:
        return 1
    if reset_period <= 0:
        raise InputError(f"Reset period must be positive, got {reset_period}")
    return max(1, math.floor(evolution_time / reset_period + 1e-9))


def shots_per_point(
    contrast: float,
    depth: float = DEFAULT_DEPTH,
    target_snr: float = DEFAULT_SNR,
    readouts: int = 1,
) -> float:
    """Shot-noise-limited repetitions per point (not rounded)."""
    if not 0.0 < contrast <= 1.0:
        raise InputError(f"Contrast must lie in (0, 1], got {contrast}")
    if not 0.0 < depth <= 1.0:
        raise InputError(f"Dip depth must lie in (0, 1], got {depth}")
    if readouts < 1:
        raise InputError(f"Readouts per shot must be >= 1, got {readouts}")
    return target_snr**2 / (4.0 * readouts * (contrast * depth) ** 2)


def measurement_time_estimate(
    contrast: float,
    n_steps: int,
    evolution_time: float,
    target_snr: float = DEFAULT_SNR,
    depth: float = DEFAULT_DEPTH,
    shots: int | None = None,
    reset_period: float | None = None,
) -> BudgetEstimate:
    """Total acquisition time n_steps · shots · T.

    Args:
        contrast: Combined readout contrast and collection efficiency C
        n_steps: Number of frequency steps in the sweep
        evolution_time: Evolution time T per shot in s
        target_snr: Required separation of dip and baseline in standard errors
        depth: Dip depth 1 − S at resonance (½ at the first dip)
        shots: Fixed repetitions per point, overriding the shot-noise model
        reset_period: NV reset period t_re; each reset adds one readout
    """
    if n_steps < 1 or evolution_time <= 0:
        raise InputError("Measurement budget needs n_steps >= 1 and T > 0")
    readouts = readouts_per_shot(evolution_time, reset_period)
    if shots is None:
        raw = shots_per_point(contrast, depth, target_snr, readouts)
        rounded = math.ceil(raw)
    else:
        raw, rounded = float(shots), shots
    total = n_steps * raw * evolution_time
    logger.debug(
        f"Budget: C={contrast} M={readouts} N={raw:.4g} shots/point, "
        f"{n_steps} steps -> {total:.4g} s"
    )
    return BudgetEstimate(
        shots_per_point=raw,
        shots_rounded=rounded,
        readouts_per_shot=readouts,
        total_time=total,
        contrast=contrast,
        n_steps=n_steps,
        evolution_time=evolution_time,
    )


def implied_shots(total_time: float, n_steps: int, evolution_time: float) -> float:
    """Repetitions per point implied by a quoted total time."""
    return total_time / (n_steps * evolution_time)
