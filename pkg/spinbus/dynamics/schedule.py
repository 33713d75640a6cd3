"""Control schedules: NV resets, instantaneous pulses and output grids."""

from __future__ import annotations

from collections.abc import Sequence
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from spinbus.core.errors import ScheduleError

Axis = tuple[float, float, float]


class PulseEvent(BaseModel):
    """Ideal rotation exp(−i·angle·(axis·I)) on ``targets`` at ``time``."""

    model_config = ConfigDict(frozen=True)

    time: float = Field(ge=0)
    axis: Axis
    angle: float
    targets: tuple[int, ...]

    @field_validator("targets")
    @classmethod
    def _nonempty(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        if not v:
            raise ValueError("pulse targets must be nonempty")
        return v


class ControlSchedule(BaseModel):
    """Duration, reset period and pulse list of one propagation.

    Attributes:
        duration (float): Total time T in s
        reset_period (float | None): t_re in s; ``None`` disables resets
            (nuclei-only models)
        pulses (tuple[PulseEvent, ...]): Strictly time-ordered pulses in [0, T]
        reference_frequency (float): Pulse axes are given in a frame rotating
            at this angular frequency about z; 0 means lab-frame axes
    """

    model_config = ConfigDict(frozen=True)

    duration: float = Field(gt=0)
    reset_period: float | None = None
    pulses: tuple[PulseEvent, ...] = ()
    reference_frequency: float = 0.0

    @model_validator(mode="after")
    def _check(self) -> ControlSchedule:
        if self.reset_period is not None and not 0 < self.reset_period <= self.duration:
            raise ValueError("reset_period must satisfy 0 < t_re <= T")
        times = [p.time for p in self.pulses]
        if any(b <= a for a, b in zip(times, times[1:], strict=False)):
            raise ValueError("pulse times must be strictly increasing")
        if times and times[-1] > self.duration * (1 + 1e-12):
            raise ValueError("pulse times must lie within [0, T]")
        return self

    def reset_times(self) -> list[float]:
        """k·t_re for k ≥ 1 up to T (no reset at t = 0)."""
        if self.reset_period is None:
            return []
        n = int(math.floor(self.duration / self.reset_period * (1 + 1e-12)))
        return [k * self.reset_period for k in range(1, n + 1)]

    def lab_axis(self, pulse: PulseEvent) -> Axis:
        """Pulse axis in the lab frame at the pulse time."""
        if self.reference_frequency == 0.0:
            return pulse.axis
        phase = self.reference_frequency * pulse.time
        c, s = math.cos(phase), math.sin(phase)
        x, y, z = pulse.axis
        return (c * x - s * y, s * x + c * y, z)

    def with_duration(self, duration: float) -> ControlSchedule:
        """Same schedule truncated or extended to ``duration``."""
        pulses = tuple(p for p in self.pulses if p.time <= duration)
        t_re = self.reset_period
        if t_re is not None and t_re > duration:
            t_re = duration
        return ControlSchedule(
            duration=duration,
            reset_period=t_re,
            pulses=pulses,
            reference_frequency=self.reference_frequency,
        )


def make_schedule(
    duration: float,
    reset_period: float | None,
    pulses: Sequence[PulseEvent] = (),
    reference_frequency: float = 0.0,
) -> ControlSchedule:
    """Validated schedule; validation failures become ScheduleError."""
    try:
        return ControlSchedule(
            duration=duration,
            reset_period=reset_period,
            pulses=tuple(pulses),
            reference_frequency=reference_frequency,
        )
    except ValueError as exc:
        extra = {"duration": duration, "reset_period": reset_period}
        raise ScheduleError(str(exc), extra=extra) from exc


def output_grid(
    duration: float, step: float | None = None, points: int | None = None
) -> np.ndarray:
    """Uniform output times from 0 to ``duration`` inclusive.

    Either ``step`` (the last point is always ``duration``) or ``points``.
    """
    if points is not None:
        return np.linspace(0.0, duration, points)
    if step is None or step <= 0:
        raise ScheduleError("output grid needs a positive step or a point count")
    n = int(math.floor(duration / step * (1 + 1e-12)))
    grid = [k * step for k in range(n + 1)]
    if duration - grid[-1] > 1e-12 * duration:
        grid.append(duration)
    return np.asarray(grid, dtype=np.float64)
