"""Spectroscopy of a small molecule with a nuclear sensor.

The total spectrum simulates the sensor with every target at once, WAHUHA
acting on the targets. Each per-target spectrum keeps only the sensor and
that one target, which is the same as zeroing every other target's
couplings. For every target the exact sensor/target resonance on the Ω grid
and the mediated coupling pA_wo there are reported next to the dips found
in its spectrum.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
import logging
import math

from spinbus.core.enums import SweepParameter
from spinbus.core.errors import NoRootError
from spinbus.effective.params import compute_effective_params
from spinbus.effective.resonance import spectral_resonance
from spinbus.physics.assembly import GeometryEntry, register_from_geometry
from spinbus.physics.geometry import field_direction
from spinbus.physics.register import SpinRegister
from spinbus.protocol.analysis import dip_positions
from spinbus.protocol.budget import BudgetEstimate, measurement_time_estimate
from spinbus.protocol.sweep import SweepResult, SweepSpec, spectrum_sweep
from spinbus.protocol.wahuha import DecouplingSpec

logger = logging.getLogger(__name__)


@dataclass
class TargetLine:
    """One target's line: exact resonance, coupling there, and observed dip.

    Attributes:
        label (str): Target label from the geometry
        resonance (float): Ω where sensor and target splittings coincide, NaN if
            they do not cross on the grid
        p_a_wo (float): pA_wo at ``resonance`` in rad/s
        dip (float): Deepest dip of the per-target spectrum, NaN when none
    """

    label: str
    resonance: float
    p_a_wo: float
    dip: float = math.nan

    def as_report(self) -> dict[str, object]:
        return {
            f"{self.label}_resonance": self.resonance,
            f"{self.label}_p_a_wo": self.p_a_wo,
            f"{self.label}_dip": self.dip,
        }


@dataclass
class MoleculeResult:
    register: SpinRegister
    total: SweepResult
    per_target: list[SweepResult]
    lines: list[TargetLine] = field(default_factory=list)
    budget: BudgetEstimate | None = None

    @property
    def total_dips(self) -> list[float]:
        return dip_positions(self.total.grid, self.total.signals)

    def as_report(self) -> dict[str, object]:
        report: dict[str, object] = {
            "nuclei": [spin.label for spin in self.register.nuclei],
            "total_dips": self.total_dips,
            "failures": len(self.total.failures),
        }
        for line in self.lines:
            report.update(line.as_report())
        if self.budget is not None:
            report.update(self.budget.as_report())
        return report


def _decoupling(
    cycle_time: float | None, targets: tuple[int, ...], reference: float
) -> DecouplingSpec | None:
    if cycle_time is None or not targets:
        return None
    return DecouplingSpec(cycle_time=cycle_time, targets=targets, reference_frequency=reference)


def target_line(
    register: SpinRegister,
    target: int,
    omega_range: tuple[float, float],
    t_re: float | None = None,
) -> TargetLine:
    """Resonance and pA_wo of the sensor (nucleus 0) with nucleus ``target`` alone."""
    pair = register.subset([0, target])
    label = register.nuclei[target].label
    try:
        omega = spectral_resonance(pair, omega_range, t_re=t_re).rabi_frequency
    except NoRootError as exc:
        logger.warning(f"Target '{label}': {exc.message}")
        return TargetLine(label=label, resonance=math.nan, p_a_wo=math.nan)
    params = compute_effective_params(pair.with_updates(rabi_frequency=omega), t_re or pair.t1_rho)
    logger.info(
        f"Target '{label}': resonance at Ω/2π = {omega / (2 * math.pi):.6g} Hz, "
        f"pA_wo/2π = {params.pa_wo / (2 * math.pi):.4g} Hz"
    )
    return TargetLine(label=label, resonance=omega, p_a_wo=params.pa_wo)


def molecule_experiment(
    entries: Sequence[GeometryEntry],
    sensor: str,
    field_angles: tuple[float, float],
    omega_grid: Sequence[float],
    duration: float,
    t1_rho: float,
    larmor: float,
    t_re: float | None = None,
    nv_axis: tuple[float, float, float] = (0.0, 0.0, 1.0),
    nv_transition: int = -1,
    wahuha_cycle: float | None = None,
    include_dipolar: bool = True,
    per_target: bool = True,
    workers: int = 1,
    steps_per_period: int | None = None,
    contrast: float | None = None,
    budget_steps: int = 15,
) -> MoleculeResult:
    """Sweep Ω for the molecule and for each target alone.

    Args:
        entries: Parsed geometry (positions in nm)
        sensor: Label of the sensor nucleus
        field_angles: Field direction (θ, φ) in rad
        omega_grid: Rabi frequencies in rad/s
        duration: Evolution time T in s
        t1_rho: NV T1ρ in s
        larmor: Nuclear Larmor frequency in rad/s
        t_re: Reset period (defaults to T1ρ)
        nv_axis: NV symmetry axis
        nv_transition: m_s of the driven NV transition
        wahuha_cycle: WAHUHA cycle time t_c; ``None`` disables decoupling
        include_dipolar: Keep internuclear dipolar couplings
        per_target: Also compute the single-target spectra
        workers: Sweep process count
        steps_per_period: Integrator resolution override
        contrast: Readout contrast C for the time budget; ``None`` skips it
        budget_steps: Frequency steps assumed by the time budget

    Returns:
        MoleculeResult: Total spectrum, one spectrum and one line per target
    """
    theta, phi = field_angles
    b = field_direction(theta, phi)
    register = register_from_geometry(
        entries,
        sensor,
        rabi_frequency=float(omega_grid[0]),
        t1_rho=t1_rho,
        larmor=larmor,
        field_direction=(float(b[0]), float(b[1]), float(b[2])),
        nv_axis=nv_axis,
        transition=nv_transition,
    )
    targets = tuple(range(1, register.n_nuclei))
    base = SweepSpec(
        parameter=SweepParameter.rabi_frequency,
        grid=tuple(float(w) for w in omega_grid),
        spin_register=register,
        duration=duration,
        t_re=t_re,
        decoupling=_decoupling(wahuha_cycle, targets, larmor),
        include_dipolar=include_dipolar,
        steps_per_period=steps_per_period,
        label="total",
    )
    logger.info(f"Molecule spectrum: sensor '{sensor}' with {len(targets)} target(s)")
    total = spectrum_sweep(base, workers=workers)

    omega_range = (min(base.grid), max(base.grid))
    if omega_range[0] < omega_range[1]:
        lines = [target_line(register, k, omega_range, t_re) for k in targets]
    else:
        lines = [
            TargetLine(label=register.nuclei[k].label, resonance=math.nan, p_a_wo=math.nan)
            for k in targets
        ]
    spectra: list[SweepResult] = []
    if per_target:
        for k, line in zip(targets, lines, strict=True):
            spec = base.model_copy(
                update={
                    "spin_register": register.subset([0, k]),
                    "decoupling": _decoupling(wahuha_cycle, (1,), larmor),
                    "label": f"target{k}",
                }
            )
            spectrum = spectrum_sweep(spec, workers=workers)
            dips = dip_positions(spectrum.grid, spectrum.signals)
            line.dip = dips[0] if dips else math.nan
            spectra.append(spectrum)
    budget = None
    if contrast is not None:
        budget = measurement_time_estimate(
            contrast, budget_steps, duration, reset_period=t_re or t1_rho
        )
    return MoleculeResult(
        register=register, total=total, per_target=spectra, lines=lines, budget=budget
    )
