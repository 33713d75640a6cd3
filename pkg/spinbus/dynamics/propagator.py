"""Fixed-step RK4 propagation with scheduled resets and pulses.

Between events the state follows dρ/dt = L ρ integrated with classic
fourth-order Runge–Kutta. For a linear generator one RK4 step of size h is the
matrix M(h) = Σ_{k≤4} (hL)^k / k!, so a segment of n steps is applied as
M(h)^n. Segments are split exactly at event times with h = τ/n,
n = ceil(τ/h_max), h_max = 1/(steps_per_period · f_max).

Event order at a shared instant: integrate up to it, reset the NV, apply
pulses, then record outputs.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
import logging
import math

import numpy as np
from numpy.typing import NDArray

from spinbus.config import get_settings
from spinbus.core.errors import InputError, InvariantViolationError, ResourceError
from spinbus.dynamics.channels import pulse_unitary, reset_columns
from spinbus.dynamics.lindblad import (
    LindbladModel,
    liouvillian,
    max_frequency,
    unitary_superoperator,
)
from spinbus.dynamics.observables import Observable, expectation
from spinbus.dynamics.schedule import ControlSchedule, PulseEvent
from spinbus.physics.operators import ComplexMatrix, HilbertLayout

logger = logging.getLogger(__name__)

TRACE_TOLERANCE: float = 1e-9
POSITIVITY_TOLERANCE: float = 1e-8
_TIME_QUANTUM: float = 1e-15

OutputHook = Callable[[int, float, NDArray[np.complex128]], None]


@dataclass
class Trajectory:
    """Recorded observables (and optionally states) on an output grid."""

    times: NDArray[np.float64]
    observables: dict[str, NDArray[np.float64]]
    states: list[ComplexMatrix] | None = None
    steps: int = 0

    def series(self, label: str) -> NDArray[np.float64]:
        return self.observables[label]

    @property
    def labels(self) -> list[str]:
        return list(self.observables)


@dataclass
class _Instant:
    time: float
    reset: bool = False
    pulses: list[PulseEvent] = field(default_factory=list)
    outputs: list[int] = field(default_factory=list)


def check_state(rho: ComplexMatrix, time: float | None = None) -> None:
    """Raise InvariantViolationError if ρ lost unit trace or positivity."""
    trace = complex(np.trace(rho))
    if abs(trace - 1.0) >= TRACE_TOLERANCE:
        raise InvariantViolationError(
            f"Trace drifted to {trace.real:.12g} at t={time}",
            extra={"time": time, "trace": trace.real},
        )
    herm = 0.5 * (rho + rho.conj().T)
    min_eig = float(np.linalg.eigvalsh(herm)[0])
    if min_eig < -POSITIVITY_TOLERANCE:
        raise InvariantViolationError(
            f"Negative eigenvalue {min_eig:.3e} at t={time}",
            extra={"time": time, "min_eig": min_eig},
        )


def validate_density_matrix(rho: ComplexMatrix, d: int) -> ComplexMatrix:
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (d, d):
        raise InputError(f"Initial state has shape {rho.shape}, expected ({d}, {d})")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-10:
        raise InputError("Initial state is not Hermitian")
    try:
        check_state(rho, 0.0)
    except InvariantViolationError as exc:
        raise InputError(f"Initial state is not a density matrix: {exc.message}") from exc
    return rho


class Propagator:
    """Segment propagator for one model and schedule.

    Segment superoperators are memoized per instance by segment length; the
    cache dies with the propagator, nothing is shared between propagations.

    Args:
        model: Lindblad model
        schedule: Resets, pulses and duration
        steps_per_period: Steps per period of the fastest frequency
            (settings default when omitted)
        max_steps: Integrator step cap (settings default when omitted)
    """

    def __init__(
        self,
        model: LindbladModel,
        schedule: ControlSchedule,
        steps_per_period: int | None = None,
        max_steps: int | None = None,
    ) -> None:
        settings = get_settings()
        self.model = model
        self.schedule = schedule
        self.layout = model.layout or HilbertLayout(
            n_nuclei=int(math.log2(model.dim)), has_nv=False
        )
        self.steps_per_period = steps_per_period or settings.steps_per_period
        self.max_steps = max_steps or settings.max_steps
        self._generator = liouvillian(model)
        f_max = max_frequency(model)
        self.h_max = math.inf if f_max == 0.0 else 1.0 / (self.steps_per_period * f_max)
        self._segments: dict[int, ComplexMatrix] = {}
        self._pulses: dict[tuple[float, ...], ComplexMatrix] = {}
        self.steps = 0
        if schedule.reset_period is not None and not self.layout.has_nv:
            raise InputError("Schedule has resets but the model has no NV subsystem")
        needed = schedule.duration / self.h_max
        if needed > self.max_steps:
            raise ResourceError(
                f"Propagation needs ~{needed:.3g} steps, cap is {self.max_steps}",
                extra={"h_max": self.h_max, "duration": schedule.duration},
            )

    def step_count(self, length: float) -> int:
        if math.isinf(self.h_max):
            return 1
        return max(1, math.ceil(length / self.h_max - 1e-9))

    def segment(self, length: float) -> ComplexMatrix:
        """Superoperator advancing the state by ``length`` seconds."""
        key = round(length / _TIME_QUANTUM)
        cached = self._segments.get(key)
        if cached is not None:
            return cached
        n = self.step_count(length)
        hl = self._generator * (length / n)
        term = np.eye(hl.shape[0], dtype=np.complex128)
        step = term.copy()
        for k in range(1, 5):
            term = term @ hl / k
            step = step + term
        sup = np.linalg.matrix_power(step, n)
        self._segments[key] = sup
        return sup

    def pulse(self, event: PulseEvent) -> ComplexMatrix:
        axis = self.schedule.lab_axis(event)
        key = (*axis, event.angle, *event.targets)
        cached = self._pulses.get(key)
        if cached is None:
            unitary = pulse_unitary(self.layout, axis, event.angle, event.targets)
            cached = unitary_superoperator(unitary)
            self._pulses[key] = cached
        return cached

    def _instants(self, output_times: Sequence[float]) -> list[_Instant]:
        duration = self.schedule.duration
        tol = 1e-12 * duration
        raw: list[tuple[float, str, object]] = []
        raw.extend((t, "reset", None) for t in self.schedule.reset_times())
        raw.extend((p.time, "pulse", p) for p in self.schedule.pulses)
        raw.extend((float(t), "output", k) for k, t in enumerate(output_times))
        raw.sort(key=lambda item: item[0])
        instants: list[_Instant] = []
        for t, kind, payload in raw:
            if t < -tol or t > duration + tol:
                raise InputError(f"Event at t={t} lies outside [0, {duration}]")
            if not instants or t - instants[-1].time > tol:
                instants.append(_Instant(time=t))
            inst = instants[-1]
            if kind == "reset":
                inst.reset = True
            elif kind == "pulse":
                assert isinstance(payload, PulseEvent)
                inst.pulses.append(payload)
            else:
                assert isinstance(payload, int)
                inst.outputs.append(payload)
        return instants

    def run(
        self,
        states: NDArray[np.complex128],
        output_times: Sequence[float] = (),
        on_output: OutputHook | None = None,
    ) -> NDArray[np.complex128]:
        """Advance a batch of vectorized operators (d², k) through the schedule.

        ``on_output(index, time, states)`` is called at every output time.
        Returns the batch at time T.
        """
        d = self.model.dim
        current = 0.0
        self.steps = 0
        for inst in self._instants(output_times):
            length = inst.time - current
            if length > 1e-12 * self.schedule.duration:
                states = self.segment(length) @ states
                self.steps += self.step_count(length)
                current = inst.time
            if inst.reset:
                states = reset_columns(states, d)
            for p in inst.pulses:
                states = self.pulse(p) @ states
            if on_output is not None:
                for k in inst.outputs:
                    on_output(k, inst.time, states)
        tail = self.schedule.duration - current
        if tail > 1e-12 * self.schedule.duration:
            states = self.segment(tail) @ states
            self.steps += self.step_count(tail)
        return states


def propagate(
    rho0: ComplexMatrix,
    model: LindbladModel,
    schedule: ControlSchedule,
    observables: Sequence[Observable] = (),
    output_times: Sequence[float] | NDArray[np.float64] | None = None,
    store_states: bool = False,
    steps_per_period: int | None = None,
    check_invariants: bool = True,
) -> Trajectory:
    """Integrate ρ0 through ``schedule`` and record observables.

    Args:
        rho0: Initial density matrix
        model: Lindblad model
        schedule: Resets, pulses and duration
        observables: Expectation values to record
        output_times: Recording grid within [0, T]; defaults to (0, T)
        store_states: Keep the full state at each output time
        steps_per_period: Override the integrator resolution
        check_invariants: Verify trace and positivity at each output

    Returns:
        Trajectory: Output grid, observable series and optional states

    Raises:
        InvariantViolationError: If a recorded state loses trace or positivity
        ResourceError: If the step count exceeds the configured cap
    """
    d = model.dim
    rho0 = validate_density_matrix(rho0, d)
    times = np.asarray(
        output_times if output_times is not None else [0.0, schedule.duration], dtype=np.float64
    )
    if times.size > 1 and np.any(np.diff(times) <= 0):
        raise InputError("Output times must be strictly increasing")
    series = {o.label: np.zeros(times.size) for o in observables}
    snapshots: list[ComplexMatrix] | None = [] if store_states else None
    propagator = Propagator(model, schedule, steps_per_period=steps_per_period)

    def record(index: int, time: float, states: NDArray[np.complex128]) -> None:
        rho = states[:, 0].reshape(d, d)
        if check_invariants:
            check_state(rho, time)
        for o in observables:
            series[o.label][index] = expectation(o, rho)
        if snapshots is not None:
            snapshots.append(rho.copy())

    propagator.run(rho0.reshape(d * d, 1), times, on_output=record)
    logger.debug(
        f"Propagated {model.hamiltonian.label} over T={schedule.duration:.6g}s "
        f"in {propagator.steps} steps (h_max={propagator.h_max:.3g}s)"
    )
    return Trajectory(times=times, observables=series, states=snapshots, steps=propagator.steps)


def propagate_states(
    inputs: Sequence[ComplexMatrix] | NDArray[np.complex128],
    model: LindbladModel,
    schedule: ControlSchedule,
    steps_per_period: int | None = None,
) -> NDArray[np.complex128]:
    """Final operators for a batch of inputs (k, d, d), physical or not.

    The evolution is linear, so this is how process maps are sampled.
    """
    d = model.dim
    batch = np.asarray(inputs, dtype=np.complex128)
    if batch.ndim != 3 or batch.shape[1:] != (d, d):
        raise InputError(f"Inputs must have shape (k, {d}, {d}), got {batch.shape}")
    columns = batch.reshape(batch.shape[0], d * d).T
    final = Propagator(model, schedule, steps_per_period=steps_per_period).run(columns)
    return np.asarray(final.T.reshape(batch.shape[0], d, d))
