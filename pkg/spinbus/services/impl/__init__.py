"""Service implementations of the interfaces in the parent package."""

from .fidelity_service_impl import FidelityServiceImpl
from .register_service_impl import RegisterServiceImpl
from .simulation_service_impl import EffectiveServiceImpl, SimulationServiceImpl
from .sweep_service_impl import MoleculeServiceImpl, SweepServiceImpl

__all__ = [
    "EffectiveServiceImpl",
    "FidelityServiceImpl",
    "MoleculeServiceImpl",
    "RegisterServiceImpl",
    "SimulationServiceImpl",
    "SweepServiceImpl",
]
