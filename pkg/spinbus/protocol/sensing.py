"""Single-nucleus detection with a nuclear sensor.

The protocol has three steps: polarize the sensor to |↓⟩, let the NV mediate
the sensor–target interaction for a time T with periodic NV resets, then read
P(sensor = |↓⟩). Polarization and readout are ideal here; only the middle
step is simulated, with the exact Lindblad model.
"""

from __future__ import annotations

import logging
from typing import Literal

from spinbus.dynamics.models import build_exact_model
from spinbus.dynamics.observables import Observable, spin_down_probability
from spinbus.dynamics.propagator import propagate
from spinbus.dynamics.schedule import ControlSchedule, make_schedule
from spinbus.physics.operators import (
    DOWN,
    ID2,
    NV_RESET_STATE,
    UP,
    ComplexMatrix,
    HilbertLayout,
    kron_all,
    projector,
)
from spinbus.physics.register import SpinRegister
from spinbus.protocol.wahuha import DecouplingSpec, wahuha_schedule

logger = logging.getLogger(__name__)

TargetState = Literal["mixed", "up", "down"]

_SINGLE = {"mixed": 0.5 * ID2, "up": projector(UP), "down": projector(DOWN)}


def sensing_initial_state(
    layout: HilbertLayout, sensor: int = 0, target_state: TargetState = "mixed"
) -> ComplexMatrix:
    """|−x⟩⟨−x| ⊗ |↓⟩⟨↓|_sensor ⊗ (target states)."""
    factors = [NV_RESET_STATE]
    for k in range(layout.n_nuclei):
        factors.append(projector(DOWN) if k == sensor else _SINGLE[target_state])
    return kron_all(factors)


def pair_initial_state(
    layout: HilbertLayout, sensor: int = 0, target: int = 1, spectator_state: TargetState = "up"
) -> ComplexMatrix:
    """|−x⟩⟨−x| ⊗ |↓⟩_sensor |↑⟩_target ⊗ (spectators)."""
    factors = [NV_RESET_STATE]
    for k in range(layout.n_nuclei):
        if k == sensor:
            factors.append(projector(DOWN))
        elif k == target:
            factors.append(projector(UP))
        else:
            factors.append(_SINGLE[spectator_state])
    return kron_all(factors)


def pair_population_observable(
    layout: HilbertLayout, sensor: int = 0, target: int = 1
) -> Observable:
    """Population of |↓⟩_sensor |↑⟩_target, other nuclei traced over."""
    op = layout.nuclear_pair(projector(DOWN), sensor, projector(UP), target)
    return Observable(label="P_du", matrix=op)


def sensing_schedule(
    register: SpinRegister,
    duration: float,
    t_re: float | None = None,
    decoupling: DecouplingSpec | None = None,
) -> ControlSchedule:
    """Resets every t_re (default T1ρ) plus optional WAHUHA on the targets.

    A reset period longer than T means no reset happens during the run.
    """
    period = t_re if t_re is not None else register.t1_rho
    reset = period if period <= duration else None
    if decoupling is None:
        return make_schedule(duration, reset)
    reference = decoupling.reference_frequency
    if reference is None:
        reference = register.nuclei[decoupling.targets[0]].larmor
    pulses = wahuha_schedule(duration, decoupling.cycle_time, decoupling.targets)
    return make_schedule(duration, reset, pulses, reference_frequency=reference)


def final_expectation(
    register: SpinRegister,
    rho0: ComplexMatrix,
    observable: Observable,
    schedule: ControlSchedule,
    include_dipolar: bool = False,
    nv_dephasing_rate: float = 0.0,
    steps_per_period: int | None = None,
) -> float:
    """⟨O⟩ at the end of ``schedule``, clipped to [0, 1]."""
    model = build_exact_model(
        register, nv_dephasing_rate=nv_dephasing_rate, include_dipolar=include_dipolar
    )
    trajectory = propagate(
        rho0,
        model,
        schedule,
        observables=[observable],
        output_times=[schedule.duration],
        steps_per_period=steps_per_period,
    )
    value = float(trajectory.series(observable.label)[-1])
    return min(1.0, max(0.0, value))


def sensing_protocol(
    register: SpinRegister,
    duration: float,
    sensor: int = 0,
    t_re: float | None = None,
    target_state: TargetState = "mixed",
    decoupling: DecouplingSpec | None = None,
    include_dipolar: bool = False,
    nv_dephasing_rate: float = 0.0,
    steps_per_period: int | None = None,
) -> float:
    """Signal S = P(sensor = |↓⟩) after evolving for ``duration``.

    Args:
        register: Sensor plus zero or more target nuclei
        duration: Evolution time T in s
        sensor: Index of the sensor nucleus
        t_re: NV reset period (defaults to T1ρ)
        target_state: Initial state of every other nucleus
        decoupling: Optional WAHUHA sequence on the targets
        include_dipolar: Add internuclear dipolar couplings
        nv_dephasing_rate: Optional dressed-state dephasing of the NV
        steps_per_period: Integrator resolution override

    Returns:
        float: S in [0, 1]
    """
    layout = register.layout
    rho0 = sensing_initial_state(layout, sensor, target_state)
    schedule = sensing_schedule(register, duration, t_re, decoupling)
    signal = final_expectation(
        register,
        rho0,
        spin_down_probability(layout, sensor),
        schedule,
        include_dipolar=include_dipolar,
        nv_dephasing_rate=nv_dephasing_rate,
        steps_per_period=steps_per_period,
    )
    logger.debug(f"Sensing: Ω={register.rabi_frequency:.6g} T={duration:.6g}s S={signal:.9f}")
    return signal


def pair_transfer_signal(
    register: SpinRegister,
    duration: float,
    sensor: int = 0,
    target: int = 1,
    t_re: float | None = None,
    spectator_state: TargetState = "up",
    include_dipolar: bool = False,
    steps_per_period: int | None = None,
) -> float:
    """P(|↓↑⟩) on (sensor, target) after ``duration``, starting from |↓↑⟩."""
    layout = register.layout
    rho0 = pair_initial_state(layout, sensor, target, spectator_state)
    return final_expectation(
        register,
        rho0,
        pair_population_observable(layout, sensor, target),
        sensing_schedule(register, duration, t_re),
        include_dipolar=include_dipolar,
        steps_per_period=steps_per_period,
    )

