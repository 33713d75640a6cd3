"""Pydantic models for TOML run configurations.

Every CLI subcommand reads one TOML file, validated here before anything is
computed. Frequencies are written in Hz and angles in degrees; the schema
converts them to rad/s and rad. Times are in seconds throughout.

Example:
    >>> config = load_run_config(Path("configs/gate.toml"))
    >>> config.spin_register.rabi_frequency_rad  # 2π·300e3
"""

from __future__ import annotations

import math
from pathlib import Path
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from typing import Any, Literal

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PrivateAttr,
    ValidationError,
    ValidationInfo,
    field_validator,
    model_validator,
)

from spinbus.core.enums import (
    Experiment,
    GateFrame,
    PolarizationModel,
    ShiftModel,
    SweepObservable,
    SweepParameter,
)
from spinbus.core.errors import ParseError
from spinbus.core.exception_handlers import schema_error_from_validation
from spinbus.physics.assembly import GeometryEntry, register_from_geometry
from spinbus.physics.constants import GAMMA_13C, TWO_PI
from spinbus.physics.geometry import field_direction
from spinbus.physics.register import NuclearSpin, SpinRegister, Vec3

_Strict = ConfigDict(extra="forbid", frozen=True)

# Sweep axes given in Hz (converted to rad/s) and in degrees (converted to rad)
_HZ_PARAMETERS = {SweepParameter.rabi_frequency, SweepParameter.delta_detuning}
_DEG_PARAMETERS = {SweepParameter.field_theta, SweepParameter.field_phi}


def hz(value: float) -> float:
    return TWO_PI * value


class NucleusConfig(BaseModel):
    """One nucleus, given either by its couplings or by its position.

    Attributes:
        label (str | None): Name used in reports
        a_par (float | None): Parallel hyperfine coupling in Hz
        a_perp (float | None): Transverse hyperfine coupling in Hz (≥ 0)
        position_nm (Vec3 | None): Position relative to the NV in nm
        larmor (float | None): Larmor frequency in Hz (register default when omitted)
        t2 (float | None): Coherence time in s (no dephasing when omitted)
    """

    model_config = _Strict

    label: str | None = None
    a_par: float | None = None
    a_perp: float | None = Field(default=None, ge=0)
    position_nm: Vec3 | None = None
    larmor: float | None = Field(default=None, gt=0)
    t2: float | None = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _one_source(self) -> NucleusConfig:
        by_coupling = self.a_par is not None or self.a_perp is not None
        if by_coupling == (self.position_nm is not None):
            raise ValueError("give either a_par and a_perp, or position_nm")
        if by_coupling and (self.a_par is None or self.a_perp is None):
            raise ValueError("a_par and a_perp must be given together")
        return self


class RegisterConfig(BaseModel):
    """Register section: NV drive, lifetimes, field and nuclei.

    Attributes:
        rabi_frequency (float): Ω in Hz
        t1_rho (float): T1ρ in s
        larmor (float | None): Default nuclear Larmor frequency in Hz
        b0 (float | None): Field magnitude in T, used with the 13C
            gyromagnetic ratio when ``larmor`` is omitted
        field_theta (float): Field polar angle in degrees
        field_phi (float): Field azimuth in degrees
        nv_axis (Vec3): NV symmetry axis (unit vector)
        nv_transition (int): m_s of the driven NV transition, sets the sign of
            hyperfine vectors computed from positions
        geometry (str | None): Geometry file, relative to the config file
        sensor (str | None): Sensor label within the geometry file
        nuclei (list[NucleusConfig]): Inline nuclei, nucleus 0 is the sensor
    """

    model_config = _Strict

    rabi_frequency: float = Field(gt=0)
    t1_rho: float = Field(gt=0)
    larmor: float | None = Field(default=None, gt=0)
    b0: float | None = Field(default=None, gt=0)
    field_theta: float = 0.0
    field_phi: float = 0.0
    nv_axis: Vec3 = (0.0, 0.0, 1.0)
    nv_transition: Literal[-1, 1] = -1
    geometry: str | None = None
    sensor: str | None = None
    nuclei: list[NucleusConfig] = Field(default_factory=list, validate_default=True, max_length=4)

    @field_validator("nuclei")
    @classmethod
    def _has_nuclei(cls, v: list[NucleusConfig], info: ValidationInfo) -> list[NucleusConfig]:
        geometry = info.data.get("geometry")
        if not v and geometry is None:
            raise ValueError("register needs at least one nucleus or a geometry file")
        if v and geometry is not None:
            raise ValueError("give inline nuclei or a geometry file, not both")
        return v

    @model_validator(mode="after")
    def _field_and_sensor(self) -> RegisterConfig:
        if self.larmor is None and self.b0 is None:
            raise ValueError("register needs larmor or b0")
        if self.geometry is not None and self.sensor is None:
            raise ValueError("a geometry register needs a sensor label")
        return self

    @property
    def rabi_frequency_rad(self) -> float:
        return hz(self.rabi_frequency)

    @property
    def larmor_rad(self) -> float:
        if self.larmor is not None:
            return hz(self.larmor)
        assert self.b0 is not None
        return GAMMA_13C * self.b0

    @property
    def field_angles_rad(self) -> tuple[float, float]:
        return math.radians(self.field_theta), math.radians(self.field_phi)

    @property
    def field_vector(self) -> Vec3:
        b = field_direction(*self.field_angles_rad)
        return (float(b[0]), float(b[1]), float(b[2]))

    def _nucleus(self, index: int, nucleus: NucleusConfig) -> NuclearSpin:
        larmor = hz(nucleus.larmor) if nucleus.larmor is not None else self.larmor_rad
        t2 = nucleus.t2 if nucleus.t2 is not None else math.inf
        label = nucleus.label or f"n{index}"
        assert nucleus.a_par is not None and nucleus.a_perp is not None
        return NuclearSpin.from_components(hz(nucleus.a_par), hz(nucleus.a_perp), larmor, t2, label)

    def to_register(self, entries: list[GeometryEntry] | None = None) -> SpinRegister:
        """SpinRegister in rad/s.

        Positioned nuclei (inline or from ``entries``) get their hyperfine
        vectors from the point-dipole formula in the configured field.
        """
        if self.geometry is not None:
            if entries is None:
                raise ValueError("geometry entries must be loaded before building the register")
            assert self.sensor is not None
            return register_from_geometry(
                entries,
                self.sensor,
                self.rabi_frequency_rad,
                self.t1_rho,
                self.larmor_rad,
                self.field_vector,
                self.nv_axis,
                self.nv_transition,
            )
        if all(n.position_nm is not None for n in self.nuclei):
            inline = [
                GeometryEntry(
                    label=n.label or f"n{k}",
                    position_nm=n.position_nm,  # type: ignore[arg-type]
                    t2=n.t2 if n.t2 is not None else math.inf,
                )
                for k, n in enumerate(self.nuclei)
            ]
            return register_from_geometry(
                inline,
                inline[0].label,
                self.rabi_frequency_rad,
                self.t1_rho,
                self.larmor_rad,
                self.field_vector,
                self.nv_axis,
                self.nv_transition,
            )
        if any(n.position_nm is not None for n in self.nuclei):
            raise ValueError("inline nuclei must all use couplings or all use positions")
        return SpinRegister(
            nuclei=tuple(self._nucleus(k, n) for k, n in enumerate(self.nuclei)),
            rabi_frequency=self.rabi_frequency_rad,
            nv_axis=self.nv_axis,
            field_direction=self.field_vector,
            t1_rho=self.t1_rho,
        )


class ScheduleConfig(BaseModel):
    """Evolution time, reset period, output grid and decoupling toggle."""

    model_config = _Strict

    duration: float = Field(gt=0)
    t_re: float | None = Field(default=None, gt=0)
    output_step: float | None = Field(default=None, gt=0)
    output_points: int = Field(default=201, ge=2)
    wahuha: bool = False
    wahuha_cycle: float | None = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _cycle(self) -> ScheduleConfig:
        if self.wahuha and self.wahuha_cycle is None:
            raise ValueError("wahuha = true needs wahuha_cycle")
        return self


class ModelConfig(BaseModel):
    model_config = _Strict

    shift_model: ShiftModel = ShiftModel.spectral
    polarization_model: PolarizationModel = PolarizationModel.printed
    include_dipolar: bool = False
    nv_dephasing_rate: float = Field(default=0.0, ge=0)
    steps_per_period: int | None = Field(default=None, ge=50)


class SweepVariant(BaseModel):
    """Overrides for one curve of a multi-curve sweep (e.g. T1ρ/T2 combinations)."""

    model_config = _Strict

    name: str = Field(min_length=1, pattern=r"^[A-Za-z0-9_.-]+$")
    t1_rho: float | None = Field(default=None, gt=0)
    target_t2: float | None = Field(default=None, gt=0)
    rabi_frequency: float | None = Field(default=None, gt=0)


class SweepConfig(BaseModel):
    """Sweep axis and observable.

    Rabi frequency and Δδ grids are in Hz, field angles in degrees, t_re and
    evolution time in seconds. Give either ``values`` or ``start``/``stop``/
    ``points``.
    """

    model_config = _Strict

    parameter: SweepParameter
    values: list[float] | None = None
    start: float | None = None
    stop: float | None = None
    points: int | None = Field(default=None, ge=1)
    observable: SweepObservable = SweepObservable.sensor_down
    sensor: int = Field(default=0, ge=0)
    target: int = Field(default=1, ge=0)
    target_state: Literal["mixed", "up", "down"] = "mixed"
    trim: bool = False
    variants: list[SweepVariant] = Field(default_factory=list)

    @model_validator(mode="after")
    def _grid(self) -> SweepConfig:
        ranged = (self.start, self.stop, self.points)
        if self.values is None and any(v is None for v in ranged):
            raise ValueError("sweep needs values or start, stop and points")
        if self.values is not None and any(v is not None for v in ranged):
            raise ValueError("give values or start/stop/points, not both")
        if self.values is not None and not self.values:
            raise ValueError("sweep values must not be empty")
        names = [v.name for v in self.variants]
        if len(set(names)) != len(names):
            raise ValueError("sweep variant names must be unique")
        return self

    def grid(self) -> tuple[float, ...]:
        """Grid in SI units (rad/s, rad, s)."""
        if self.values is not None:
            raw = list(self.values)
        else:
            assert self.start is not None and self.stop is not None and self.points is not None
            if self.points == 1:
                raw = [self.start]
            else:
                step = (self.stop - self.start) / (self.points - 1)
                raw = [self.start + k * step for k in range(self.points)]
        if self.parameter in _HZ_PARAMETERS:
            return tuple(hz(v) for v in raw)
        if self.parameter in _DEG_PARAMETERS:
            return tuple(math.radians(v) for v in raw)
        return tuple(float(v) for v in raw)


class FidelityConfig(BaseModel):
    model_config = _Strict

    frame: GateFrame = GateFrame.local
    duration: float | None = Field(default=None, gt=0)
    trim: bool = True


class MoleculeConfig(BaseModel):
    """Ω grid (Hz) of a molecule spectrum and the readout figures of its time budget."""

    model_config = _Strict

    omega_start: float = Field(gt=0)
    omega_stop: float = Field(gt=0)
    points: int = Field(ge=1)
    per_target: bool = True
    include_dipolar: bool = True
    contrast: float = Field(default=0.2, gt=0, le=1)
    budget_steps: int = Field(default=15, ge=1)

    def omega_grid(self) -> tuple[float, ...]:
        if self.points == 1:
            return (hz(self.omega_start),)
        step = (self.omega_stop - self.omega_start) / (self.points - 1)
        return tuple(hz(self.omega_start + k * step) for k in range(self.points))


class RunConfig(BaseModel):
    """Top-level run configuration.

    Attributes:
        experiment (Experiment): Default subcommand for this config
        out (str | None): Output prefix, relative to the working directory
        workers (int | None): Sweep workers (CLI flag and env take precedence)
        spin_register (RegisterConfig): Spin register, the ``[register]`` section
        schedule (ScheduleConfig): Timing
        model (ModelConfig): Model switches
        initial (str): Initial nuclear product state (``u``/``d`` per nucleus,
            missing nuclei padded with ``u``)
        sweep (SweepConfig | None): Sweep definition
        fidelity (FidelityConfig): Gate-fidelity options
        molecule (MoleculeConfig | None): Molecule-spectrum options
    """

    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)

    experiment: Experiment = Experiment.simulate
    out: str | None = None
    workers: int | None = Field(default=None, ge=1)
    spin_register: RegisterConfig = Field(alias="register")
    schedule: ScheduleConfig
    model: ModelConfig = Field(default_factory=ModelConfig)
    initial: str = Field(default="du", pattern=r"^[ud]{1,4}$")
    sweep: SweepConfig | None = None
    fidelity: FidelityConfig = Field(default_factory=FidelityConfig)
    molecule: MoleculeConfig | None = None

    _base_dir: Path = PrivateAttr(default_factory=Path.cwd)

    @model_validator(mode="after")
    def _sections(self) -> RunConfig:
        if self.experiment is Experiment.sweep and self.sweep is None:
            raise ValueError("experiment 'sweep' needs a [sweep] section")
        if self.experiment is Experiment.molecule:
            if self.molecule is None:
                raise ValueError("experiment 'molecule' needs a [molecule] section")
            if self.spin_register.geometry is None:
                raise ValueError("experiment 'molecule' needs register.geometry")
        return self

    @property
    def base_dir(self) -> Path:
        return self._base_dir

    def geometry_path(self) -> Path | None:
        if self.spin_register.geometry is None:
            return None
        path = Path(self.spin_register.geometry)
        return path if path.is_absolute() else self._base_dir / path

    def initial_bits(self, n_nuclei: int) -> str:
        if len(self.initial) > n_nuclei:
            raise ValueError(f"initial state '{self.initial}' is longer than the register")
        return self.initial + "u" * (n_nuclei - len(self.initial))


def parse_run_config(
    data: dict[str, Any], source: str | None = None, base_dir: Path | None = None
) -> RunConfig:
    """Validate a decoded TOML document.

    Raises:
        SchemaError: With one item per offending field path
    """
    try:
        config = RunConfig.model_validate(data)
    except ValidationError as exc:
        raise schema_error_from_validation(exc, source) from exc
    if base_dir is not None:
        config._base_dir = base_dir
    return config


def load_run_config(path: Path) -> RunConfig:
    """Read and validate a TOML run config.

    Raises:
        ParseError: If the file cannot be read or is not valid TOML
        SchemaError: If the document does not match the schema
    """
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise ParseError(f"cannot read config: {exc.strerror}", source=str(path)) from exc
    try:
        data = tomllib.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(f"invalid TOML: {exc}", source=str(path)) from exc
    return parse_run_config(data, source=str(path), base_dir=Path(path).resolve().parent)


def run_config_json_schema() -> dict[str, Any]:
    return RunConfig.model_json_schema()
