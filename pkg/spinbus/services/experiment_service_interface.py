"""Experiment service interfaces.

One interface per CLI subcommand, so each handler depends only on the
experiment it runs. Implementations live in ``services/impl``.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field

from spinbus.dynamics.propagator import Trajectory
from spinbus.effective.params import EffectiveParams
from spinbus.physics.register import SpinRegister
from spinbus.protocol.gate import GateResult
from spinbus.protocol.molecule import MoleculeResult
from spinbus.protocol.sweep import SweepResult
from spinbus.schemas.run_config import RunConfig


@dataclass
class EffectiveRun:
    """Effective-model parameters, their report and the effective trajectory."""

    params: EffectiveParams
    trajectory: Trajectory
    report: dict[str, object] = field(default_factory=dict)


class RegisterServiceInterface(ABC):
    """Turn the register section of a config into a SpinRegister."""

    @abstractmethod
    def build(self, config: RunConfig) -> SpinRegister:
        """Build the register, loading the geometry file when one is named."""
        pass


class SimulationServiceInterface(ABC):
    @abstractmethod
    def simulate(self, config: RunConfig) -> Trajectory:
        """Exact propagation of the configured register and schedule."""
        pass


class EffectiveServiceInterface(ABC):
    @abstractmethod
    def effective(self, config: RunConfig) -> EffectiveRun:
        """Effective parameters, validity diagnostics and effective trajectory."""
        pass


class SweepServiceInterface(ABC):
    @abstractmethod
    def sweep(self, config: RunConfig, workers: int) -> list[SweepResult]:
        """One sweep per configured variant (a single one when none are given)."""
        pass


class FidelityServiceInterface(ABC):
    @abstractmethod
    def fidelity(self, config: RunConfig) -> GateResult:
        """Gate experiment with process map and frame-corrected fidelities."""
        pass


class MoleculeServiceInterface(ABC):
    @abstractmethod
    def molecule(self, config: RunConfig, workers: int) -> MoleculeResult:
        """Total and per-target spectra of a geometry-defined molecule."""
        pass
