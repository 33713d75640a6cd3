"""Spin register domain types.

A register is the NV dressed spin plus one to MAX_NUCLEI nuclear spins.
Nuclear hyperfine vectors are stored in the field frame (e1, e2, b) because
that is the frame the Hamiltonian is written in; when a nucleus was derived
from geometry, its lab-frame vector and position are kept too so field
orientation sweeps can recompute the field-frame components.
"""

from __future__ import annotations

import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from spinbus.physics.constants import MAX_NUCLEI, UNIT_TOLERANCE
from spinbus.physics.operators import HilbertLayout

Vec3 = tuple[float, float, float]


def _norm(v: Vec3) -> float:
    return math.sqrt(sum(c * c for c in v))


class NuclearSpin(BaseModel):
    """One spin-1/2 nucleus.

    Attributes:
        label (str): Free-form name (e.g. ``sensor``, ``C2``)
        hyperfine_b (Vec3): Hyperfine vector in the field frame, rad/s
        larmor (float): Larmor angular frequency ω_L, rad/s
        t2 (float): Coherence time T2 in s (``inf`` disables dephasing)
        position_nm (Vec3 | None): Position relative to the NV, nm
        hyperfine_lab (Vec3 | None): Hyperfine vector in lab coordinates, rad/s
    """

    model_config = ConfigDict(frozen=True)

    label: str = ""
    hyperfine_b: Vec3
    larmor: float
    t2: float = Field(default=math.inf, gt=0)
    position_nm: Vec3 | None = None
    hyperfine_lab: Vec3 | None = None

    @model_validator(mode="after")
    def _check_norms(self) -> NuclearSpin:
        if self.hyperfine_lab is not None:
            lab, frame = _norm(self.hyperfine_lab), _norm(self.hyperfine_b)
            if abs(lab - frame) > 1e-10 * max(lab, frame, 1.0):
                raise ValueError("hyperfine_lab and hyperfine_b have different magnitudes")
        return self

    @property
    def a_par(self) -> float:
        return float(self.hyperfine_b[2])

    @property
    def a_perp(self) -> float:
        return math.hypot(self.hyperfine_b[0], self.hyperfine_b[1])

    @property
    def hyperfine_norm(self) -> float:
        return _norm(self.hyperfine_b)

    @classmethod
    def from_components(
        cls,
        a_par: float,
        a_perp: float,
        larmor: float,
        t2: float = math.inf,
        label: str = "",
    ) -> NuclearSpin:
        """Nucleus whose transverse coupling lies along e1 of the field frame."""
        if a_perp < 0:
            raise ValueError("a_perp must be non-negative")
        return cls(label=label, hyperfine_b=(a_perp, 0.0, a_par), larmor=larmor, t2=t2)

    def with_a_par(self, a_par: float) -> NuclearSpin:
        x, y, _ = self.hyperfine_b
        return self.model_copy(update={"hyperfine_b": (x, y, a_par), "hyperfine_lab": None})

    def with_t2(self, t2: float) -> NuclearSpin:
        return self.model_copy(update={"t2": t2})

    def decoupled(self) -> NuclearSpin:
        return self.model_copy(update={"hyperfine_b": (0.0, 0.0, 0.0), "hyperfine_lab": None})


class DipolarCoupling(BaseModel):
    """Secular homonuclear coupling d_ij(3 I^z_i I^z_j − I_i·I_j), rad/s."""

    model_config = ConfigDict(frozen=True)

    i: int = Field(ge=0)
    j: int = Field(ge=0)
    d: float

    @model_validator(mode="after")
    def _ordered(self) -> DipolarCoupling:
        if self.i >= self.j:
            raise ValueError("dipolar coupling indices must satisfy i < j")
        return self


class SpinRegister(BaseModel):
    """NV dressed spin plus nuclei.

    Attributes:
        nuclei (tuple[NuclearSpin, ...]): 1 to MAX_NUCLEI nuclei
        rabi_frequency (float): Ω in rad/s
        nv_axis (Vec3): Unit NV symmetry axis
        field_direction (Vec3): Unit static-field direction b
        t1_rho (float): Dressed-state lifetime T1ρ in s
        dipolar (tuple[DipolarCoupling, ...]): Internuclear couplings, used
            only when a Hamiltonian is built with ``include_dipolar``
    """

    model_config = ConfigDict(frozen=True)

    nuclei: tuple[NuclearSpin, ...]
    rabi_frequency: float = Field(gt=0)
    nv_axis: Vec3 = (0.0, 0.0, 1.0)
    field_direction: Vec3 = (0.0, 0.0, 1.0)
    t1_rho: float = Field(gt=0)
    dipolar: tuple[DipolarCoupling, ...] = ()

    @field_validator("nuclei")
    @classmethod
    def _count(cls, nuclei: tuple[NuclearSpin, ...]) -> tuple[NuclearSpin, ...]:
        if not 1 <= len(nuclei) <= MAX_NUCLEI:
            raise ValueError(f"register holds 1 to {MAX_NUCLEI} nuclei, got {len(nuclei)}")
        return nuclei

    @field_validator("nv_axis", "field_direction")
    @classmethod
    def _unit(cls, v: Vec3) -> Vec3:
        if abs(_norm(v) - 1.0) > UNIT_TOLERANCE:
            raise ValueError(f"must be a unit vector within {UNIT_TOLERANCE}, |v| = {_norm(v)!r}")
        return v

    @model_validator(mode="after")
    def _dipolar_indices(self) -> SpinRegister:
        for c in self.dipolar:
            if c.j >= len(self.nuclei):
                raise ValueError(f"dipolar coupling ({c.i}, {c.j}) refers to a missing nucleus")
        return self

    @property
    def n_nuclei(self) -> int:
        return len(self.nuclei)

    @property
    def layout(self) -> HilbertLayout:
        return HilbertLayout(n_nuclei=self.n_nuclei, has_nv=True)

    @property
    def b(self) -> np.ndarray:
        return np.asarray(self.field_direction, dtype=np.float64)

    def replace_nucleus(self, index: int, spin: NuclearSpin) -> SpinRegister:
        nuclei = list(self.nuclei)
        nuclei[index] = spin
        return self.model_copy(update={"nuclei": tuple(nuclei)})

    def subset(self, indices: list[int]) -> SpinRegister:
        """Register restricted to ``indices``; dipolar terms are re-indexed."""
        remap = {old: new for new, old in enumerate(indices)}
        dipolar = tuple(
            DipolarCoupling(i=remap[c.i], j=remap[c.j], d=c.d)
            for c in self.dipolar
            if c.i in remap and c.j in remap
        )
        return SpinRegister(
            nuclei=tuple(self.nuclei[k] for k in indices),
            rabi_frequency=self.rabi_frequency,
            nv_axis=self.nv_axis,
            field_direction=self.field_direction,
            t1_rho=self.t1_rho,
            dipolar=dipolar,
        )

    def with_updates(self, **fields: object) -> SpinRegister:
        """Validated copy with top-level fields replaced."""
        data = self.model_dump()
        data.update(fields)
        return SpinRegister.model_validate(data)
