"""Parameter sweeps of the sensing and transfer signals.

Each grid point is an independent pure evaluation of the exact model, so
points may run in a process pool. Results are slotted back by grid index;
the output does not depend on the worker count or on completion order.
A failing point becomes NaN with a diagnostic instead of aborting the sweep.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor, as_completed
from datetime import datetime, timezone

UTC = timezone.utc
import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from spinbus import ENGINE_VERSION
from spinbus.core.enums import PolarizationModel, SweepObservable, SweepParameter
from spinbus.core.errors import AppError
from spinbus.effective.resonance import trim_to_resonance
from spinbus.physics.assembly import reorient_register
from spinbus.physics.geometry import field_direction
from spinbus.physics.register import SpinRegister
from spinbus.protocol.analysis import dip_depth, dip_positions, fwhm
from spinbus.protocol.sensing import TargetState, pair_transfer_signal, sensing_protocol
from spinbus.protocol.wahuha import DecouplingSpec
from spinbus.utils.hashing import parameter_hash

logger = logging.getLogger(__name__)

_FIELD_PARAMETERS = (SweepParameter.field_theta, SweepParameter.field_phi)


class SweepSpec(BaseModel):
    """One sweep: a base configuration and the axis to vary.

    Attributes:
        parameter (SweepParameter): Swept quantity
        grid (tuple[float, ...]): Strictly monotonic values in SI units
            (rad/s, rad or s)
        spin_register (SpinRegister): Base register
        duration (float): Evolution time T in s
        t_re (float | None): Reset period, T1ρ when omitted
        sensor (int): Sensor nucleus
        target (int): Target nucleus shifted by ``delta_detuning`` sweeps
        observable (SweepObservable): Recorded signal
        target_state (TargetState): Initial state of non-sensor nuclei
        field_angles (tuple[float, float] | None): Base (θ, φ) in rad,
            required for field sweeps
        decoupling (DecouplingSpec | None): WAHUHA on the targets
        trim (bool): Trim the target onto resonance with the sensor first
        include_dipolar (bool): Add internuclear dipolar couplings
        nv_dephasing_rate (float): Dressed-state dephasing of the NV
        steps_per_period (int | None): Integrator resolution override
        label (str | None): Tag carried into the result (per-target spectra)
    """

    model_config = ConfigDict(frozen=True)

    parameter: SweepParameter
    grid: tuple[float, ...] = Field(min_length=1)
    spin_register: SpinRegister
    duration: float = Field(gt=0)
    t_re: float | None = Field(default=None, gt=0)
    sensor: int = Field(default=0, ge=0)
    target: int = Field(default=1, ge=0)
    observable: SweepObservable = SweepObservable.sensor_down
    target_state: TargetState = "mixed"
    field_angles: tuple[float, float] | None = None
    decoupling: DecouplingSpec | None = None
    trim: bool = False
    include_dipolar: bool = False
    nv_dephasing_rate: float = Field(default=0.0, ge=0)
    steps_per_period: int | None = Field(default=None, ge=50)
    label: str | None = None

    @model_validator(mode="after")
    def _check(self) -> SweepSpec:
        steps = np.diff(np.asarray(self.grid, dtype=np.float64))
        if steps.size and not (np.all(steps > 0) or np.all(steps < 0)):
            raise ValueError("sweep grid must be strictly monotonic")
        if not all(math.isfinite(v) for v in self.grid):
            raise ValueError("sweep grid values must be finite")
        if self.parameter in _FIELD_PARAMETERS and self.field_angles is None:
            raise ValueError(f"{self.parameter.value} sweeps need field_angles")
        n = self.spin_register.n_nuclei
        if self.sensor >= n:
            raise ValueError(f"sensor index {self.sensor} outside a {n}-nucleus register")
        needs_target = self.observable is SweepObservable.pair_du or self.trim or (
            self.parameter is SweepParameter.delta_detuning
        )
        if needs_target and (self.target >= n or self.target == self.sensor):
            raise ValueError(
                f"target index {self.target} is not a distinct nucleus of the register"
            )
        return self

    def grid_spec(self) -> str:
        lo, hi = self.grid[0], self.grid[-1]
        return f"{self.parameter.value}:{lo!r}..{hi!r}:{len(self.grid)}"


class SweepResult(BaseModel):
    """Signals on a sweep grid plus provenance metadata.

    ``metadata`` holds only reproducible entries (parameter hash, grid spec,
    engine version, observable); wall-clock timestamps are kept apart so
    they never reach the CSV.
    """

    model_config = ConfigDict(frozen=True)

    parameter: SweepParameter
    grid: tuple[float, ...]
    signals: tuple[float, ...]
    diagnostics: tuple[str | None, ...]
    metadata: dict[str, str]
    started_at: str
    finished_at: str
    label: str | None = None

    @model_validator(mode="after")
    def _check(self) -> SweepResult:
        if not len(self.grid) == len(self.signals) == len(self.diagnostics):
            raise ValueError("grid, signals and diagnostics must have equal length")
        for s in self.signals:
            if not math.isnan(s) and not 0.0 <= s <= 1.0:
                raise ValueError(f"signal {s} outside [0, 1]")
        return self

    @property
    def failures(self) -> list[tuple[float, str]]:
        return [(x, d) for x, d in zip(self.grid, self.diagnostics, strict=True) if d is not None]

    def dip_summary(self, prominence: float = 0.01) -> dict[str, object]:
        """Dip positions (deepest first), depth and FWHM of the deepest dip."""
        return {
            "dips": dip_positions(self.grid, self.signals, prominence=prominence),
            "depth": dip_depth(self.signals),
            "fwhm": fwhm(self.grid, self.signals),
        }


def point_register(spec: SweepSpec, value: float) -> SpinRegister:
    """Base register with the swept quantity set to ``value``."""
    register = spec.spin_register
    match spec.parameter:
        case SweepParameter.rabi_frequency:
            return register.with_updates(rabi_frequency=value)
        case SweepParameter.delta_detuning:
            spin = register.nuclei[spec.target]
            # the static shift of a nucleus is a_par / 2
            return register.replace_nucleus(spec.target, spin.with_a_par(spin.a_par + 2.0 * value))
        case SweepParameter.field_theta | SweepParameter.field_phi:
            assert spec.field_angles is not None
            theta, phi = spec.field_angles
            if spec.parameter is SweepParameter.field_theta:
                theta = value
            else:
                phi = value
            b = field_direction(theta, phi)
            return reorient_register(register, (float(b[0]), float(b[1]), float(b[2])))
        case _:
            return register


def evaluate_point(spec: SweepSpec, value: float) -> float:
    """Signal of one grid point."""
    register = point_register(spec, value)
    duration = value if spec.parameter is SweepParameter.evolution_time else spec.duration
    t_re = value if spec.parameter is SweepParameter.t_re else spec.t_re
    if spec.observable is SweepObservable.pair_du:
        return pair_transfer_signal(
            register,
            duration,
            sensor=spec.sensor,
            target=spec.target,
            t_re=t_re,
            include_dipolar=spec.include_dipolar,
            steps_per_period=spec.steps_per_period,
        )
    return sensing_protocol(
        register,
        duration,
        sensor=spec.sensor,
        t_re=t_re,
        target_state=spec.target_state,
        decoupling=spec.decoupling,
        include_dipolar=spec.include_dipolar,
        nv_dephasing_rate=spec.nv_dephasing_rate,
        steps_per_period=spec.steps_per_period,
    )


def _evaluate_safe(spec: SweepSpec, index: int, value: float) -> tuple[int, float, str | None]:
    try:
        return index, evaluate_point(spec, value), None
    except AppError as exc:
        return index, math.nan, f"{type(exc).__name__}: {exc.message}"
    except Exception as exc:
        logger.exception(f"Sweep point {index} (value {value!r}) raised unexpectedly")
        return index, math.nan, f"{type(exc).__name__}: {exc}"


def prepare_spec(
    spec: SweepSpec, polarization_model: PolarizationModel = PolarizationModel.printed
) -> SweepSpec:
    """Apply the one-off resonance trim before points are dispatched."""
    if not spec.trim:
        return spec
    trimmed = trim_to_resonance(
        spec.spin_register, spec.sensor, spec.target, spec.t_re, polarization_model
    )
    return spec.model_copy(update={"spin_register": trimmed, "trim": False})


def spectrum_sweep(spec: SweepSpec, workers: int = 1) -> SweepResult:
    """Evaluate the signal at every grid point.

    Args:
        spec: Sweep definition
        workers: Process count; 1 evaluates in-process

    Returns:
        SweepResult: Signals in grid order, NaN where a point failed
    """
    started = datetime.now(UTC).isoformat()
    metadata = {
        "parameter_hash": parameter_hash(spec.model_dump()),
        "grid_spec": spec.grid_spec(),
        "engine_version": ENGINE_VERSION,
        "observable": spec.observable.value,
    }
    ready = prepare_spec(spec)
    n = len(ready.grid)
    signals = [math.nan] * n
    diagnostics: list[str | None] = [None] * n
    if workers <= 1 or n == 1:
        outcomes = [_evaluate_safe(ready, k, v) for k, v in enumerate(ready.grid)]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, n)) as pool:
            futures = {
                pool.submit(_evaluate_safe, ready, k, v): k for k, v in enumerate(ready.grid)
            }
            outcomes = []
            for future in as_completed(futures):
                try:
                    outcomes.append(future.result())
                except Exception as exc:
                    # the worker itself died, e.g. a broken pool
                    outcomes.append((futures[future], math.nan, f"{type(exc).__name__}: {exc}"))
    for index, signal, diagnostic in outcomes:
        signals[index] = signal
        diagnostics[index] = diagnostic
        if diagnostic is not None:
            logger.warning(f"Sweep point {ready.grid[index]!r} failed: {diagnostic}")
    logger.info(
        f"Sweep {metadata['grid_spec']} done with {workers} worker(s), "
        f"{sum(d is not None for d in diagnostics)} failed point(s)"
    )
    return SweepResult(
        parameter=spec.parameter,
        grid=spec.grid,
        signals=tuple(signals),
        diagnostics=tuple(diagnostics),
        metadata=metadata,
        started_at=started,
        finished_at=datetime.now(UTC).isoformat(),
        label=spec.label,
    )


def selectivity_scan(
    register: SpinRegister,
    detunings: tuple[float, ...] | list[float],
    duration: float,
    t_re: float | None = None,
    trim: bool = True,
    workers: int = 1,
    steps_per_period: int | None = None,
) -> SweepResult:
    """P(|↓↑⟩) at T as nucleus 1 is detuned by Δδ from the sensor resonance."""
    spec = SweepSpec(
        parameter=SweepParameter.delta_detuning,
        grid=tuple(float(v) for v in detunings),
        spin_register=register,
        duration=duration,
        t_re=t_re,
        observable=SweepObservable.pair_du,
        trim=trim,
        steps_per_period=steps_per_period,
    )
    return spectrum_sweep(spec, workers=workers)
