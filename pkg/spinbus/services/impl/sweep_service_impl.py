"""Sweep and molecule-spectrum services."""

from __future__ import annotations

import logging

from spinbus.core.errors import InputError
from spinbus.physics.register import SpinRegister
from spinbus.protocol.molecule import MoleculeResult, molecule_experiment
from spinbus.protocol.sweep import SweepResult, SweepSpec, spectrum_sweep
from spinbus.repositories import GeometryRepositoryInterface
from spinbus.schemas.run_config import RunConfig, SweepVariant, hz
from spinbus.services import (
    MoleculeServiceInterface,
    RegisterServiceInterface,
    SweepServiceInterface,
)
from spinbus.services.impl.simulation_service_impl import decoupling_for

logger = logging.getLogger(__name__)


def apply_variant(register: SpinRegister, variant: SweepVariant, target: int) -> SpinRegister:
    """Register with one variant's T1ρ, target T2 and Rabi overrides applied."""
    if variant.t1_rho is not None:
        register = register.with_updates(t1_rho=variant.t1_rho)
    if variant.rabi_frequency is not None:
        register = register.with_updates(rabi_frequency=hz(variant.rabi_frequency))
    if variant.target_t2 is not None:
        spin = register.nuclei[target].with_t2(variant.target_t2)
        register = register.replace_nucleus(target, spin)
    return register


class SweepServiceImpl(SweepServiceInterface):
    """Spectrum sweeps described by the ``[sweep]`` section.

    Args:
        registers: Register builder
    """

    def __init__(self, registers: RegisterServiceInterface):
        self._registers = registers

    def _spec(self, config: RunConfig, register: SpinRegister, label: str | None) -> SweepSpec:
        sweep = config.sweep
        assert sweep is not None
        return SweepSpec(
            parameter=sweep.parameter,
            grid=sweep.grid(),
            spin_register=register,
            duration=config.schedule.duration,
            t_re=config.schedule.t_re,
            sensor=sweep.sensor,
            target=sweep.target,
            observable=sweep.observable,
            target_state=sweep.target_state,
            field_angles=config.spin_register.field_angles_rad,
            decoupling=decoupling_for(config, register, sweep.sensor),
            trim=sweep.trim,
            include_dipolar=config.model.include_dipolar,
            nv_dephasing_rate=config.model.nv_dephasing_rate,
            steps_per_period=config.model.steps_per_period,
            label=label,
        )

    def sweep(self, config: RunConfig, workers: int) -> list[SweepResult]:
        if config.sweep is None:
            raise InputError("Config has no [sweep] section")
        register = self._registers.build(config)
        variants = config.sweep.variants
        if not variants:
            return [spectrum_sweep(self._spec(config, register, None), workers=workers)]
        results = []
        for variant in variants:
            varied = apply_variant(register, variant, config.sweep.target)
            logger.info(f"Sweep variant '{variant.name}'")
            spec = self._spec(config, varied, variant.name)
            results.append(spectrum_sweep(spec, workers=workers))
        return results


class MoleculeServiceImpl(MoleculeServiceInterface):
    """Molecule spectra from a geometry file.

    Args:
        geometry_repository: Source of nuclear positions
    """

    def __init__(self, geometry_repository: GeometryRepositoryInterface):
        self._geometry = geometry_repository

    def molecule(self, config: RunConfig, workers: int) -> MoleculeResult:
        path = config.geometry_path()
        if config.molecule is None or path is None or config.spin_register.sensor is None:
            raise InputError("Molecule runs need [molecule], register.geometry and register.sensor")
        reg = config.spin_register
        schedule = config.schedule
        return molecule_experiment(
            self._geometry.load(path),
            reg.sensor,
            reg.field_angles_rad,
            config.molecule.omega_grid(),
            schedule.duration,
            reg.t1_rho,
            reg.larmor_rad,
            t_re=schedule.t_re,
            nv_axis=reg.nv_axis,
            nv_transition=reg.nv_transition,
            wahuha_cycle=schedule.wahuha_cycle if schedule.wahuha else None,
            include_dipolar=config.molecule.include_dipolar,
            per_target=config.molecule.per_target,
            contrast=config.molecule.contrast,
            budget_steps=config.molecule.budget_steps,
            workers=workers,
            steps_per_period=config.model.steps_per_period,
        )
