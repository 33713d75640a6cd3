"""Exact and effective propagation services."""

from __future__ import annotations

import logging

import numpy as np

from spinbus.core.errors import InputError
from spinbus.dynamics.models import build_exact_model
from spinbus.dynamics.observables import computational_populations
from spinbus.dynamics.propagator import Trajectory, propagate
from spinbus.dynamics.schedule import output_grid
from spinbus.effective.params import compute_effective_params
from spinbus.effective.sensitivity import sensitivity_estimate
from spinbus.effective.signal import effective_trajectory, predicted_dip, transfer_time
from spinbus.physics.operators import NV_RESET_STATE, nuclear_ket, projector
from spinbus.physics.register import SpinRegister
from spinbus.protocol.sensing import sensing_schedule
from spinbus.protocol.wahuha import DecouplingSpec
from spinbus.schemas.run_config import RunConfig
from spinbus.services import (
    EffectiveRun,
    EffectiveServiceInterface,
    RegisterServiceInterface,
    SimulationServiceInterface,
)

logger = logging.getLogger(__name__)


def _grid(config: RunConfig) -> np.ndarray:
    s = config.schedule
    if s.output_step is not None:
        return output_grid(s.duration, step=s.output_step)
    return output_grid(s.duration, points=s.output_points)


def decoupling_for(
    config: RunConfig, register: SpinRegister, sensor: int = 0
) -> DecouplingSpec | None:
    """WAHUHA on every non-sensor nucleus when the schedule enables it."""
    s = config.schedule
    targets = tuple(k for k in range(register.n_nuclei) if k != sensor)
    if not s.wahuha or not targets:
        return None
    assert s.wahuha_cycle is not None
    return DecouplingSpec(cycle_time=s.wahuha_cycle, targets=targets)


class SimulationServiceImpl(SimulationServiceInterface):
    """Exact Lindblad propagation of the configured register.

    Args:
        registers: Register builder
    """

    def __init__(self, registers: RegisterServiceInterface):
        self._registers = registers

    def simulate(self, config: RunConfig) -> Trajectory:
        register = self._registers.build(config)
        bits = config.initial_bits(register.n_nuclei)
        rho0 = np.kron(NV_RESET_STATE, projector(nuclear_ket(bits)))
        model = build_exact_model(
            register,
            nv_dephasing_rate=config.model.nv_dephasing_rate,
            include_dipolar=config.model.include_dipolar,
        )
        schedule = sensing_schedule(
            register,
            config.schedule.duration,
            config.schedule.t_re,
            decoupling_for(config, register),
        )
        logger.info(
            f"Simulating {register.n_nuclei} nuclei from |{bits}⟩ over {schedule.duration:.6g}s"
        )
        return propagate(
            rho0,
            model,
            schedule,
            computational_populations(register.layout),
            _grid(config),
            steps_per_period=config.model.steps_per_period,
        )


class EffectiveServiceImpl(EffectiveServiceInterface):
    """Effective-model report and trajectory for nuclei 0 and 1.

    Args:
        registers: Register builder
    """

    def __init__(self, registers: RegisterServiceInterface):
        self._registers = registers

    def effective(self, config: RunConfig) -> EffectiveRun:
        register = self._registers.build(config)
        if register.n_nuclei < 2:
            raise InputError("The effective model needs at least two nuclei")
        t_re = config.schedule.t_re if config.schedule.t_re is not None else register.t1_rho
        params = compute_effective_params(
            register, t_re, config.model.shift_model, config.model.polarization_model
        )
        duration = config.schedule.duration
        trajectory = effective_trajectory(
            register,
            t_re,
            duration,
            initial=config.initial_bits(register.n_nuclei)[:2],
            output_times=_grid(config),
            shift_model=config.model.shift_model,
            polarization_model=config.model.polarization_model,
            params=params,
        )
        sensitivity = sensitivity_estimate(
            register, polarization_model=config.model.polarization_model
        )
        report: dict[str, object] = {
            **params.as_report(),
            "transfer_time": transfer_time(params),
            "predicted_dip": predicted_dip(params.pa_wo, duration),
            "sensitivity_exact": sensitivity.exact,
            "sensitivity_approximate": sensitivity.approximate,
            "sensitivity_ratio": sensitivity.ratio,
            "warnings": list(params.warnings),
        }
        return EffectiveRun(params=params, trajectory=trajectory, report=report)
