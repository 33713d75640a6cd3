"""Gate-fidelity service."""

from __future__ import annotations

from spinbus.protocol.gate import GateResult, run_gate_experiment
from spinbus.schemas.run_config import RunConfig
from spinbus.services import FidelityServiceInterface, RegisterServiceInterface


class FidelityServiceImpl(FidelityServiceInterface):
    """Runs the flip-flop gate on nuclei 0 and 1.

    Args:
        registers: Register builder
    """

    def __init__(self, registers: RegisterServiceInterface):
        self._registers = registers

    def fidelity(self, config: RunConfig) -> GateResult:
        register = self._registers.build(config)
        options = config.fidelity
        return run_gate_experiment(
            register,
            duration=options.duration,
            t_re=config.schedule.t_re,
            frame=options.frame,
            initial=config.initial_bits(register.n_nuclei)[:2],
            trim=options.trim,
            output_points=config.schedule.output_points,
            polarization_model=config.model.polarization_model,
            include_dipolar=config.model.include_dipolar,
            steps_per_period=config.model.steps_per_period,
        )
