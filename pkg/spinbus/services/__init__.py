"""Services package.

Service interfaces live in this package, implementations in the impl/
subfolder.
"""

from .experiment_service_interface import (
    EffectiveRun,
    EffectiveServiceInterface,
    FidelityServiceInterface,
    MoleculeServiceInterface,
    RegisterServiceInterface,
    SimulationServiceInterface,
    SweepServiceInterface,
)

__all__ = [
    "EffectiveRun",
    "EffectiveServiceInterface",
    "FidelityServiceInterface",
    "MoleculeServiceInterface",
    "RegisterServiceInterface",
    "SimulationServiceInterface",
    "SweepServiceInterface",
]
