"""Build registers from nuclear positions and re-orient them in a new field."""

from __future__ import annotations

from collections.abc import Sequence
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from spinbus.core.errors import InputError
from spinbus.physics.geometry import (
    as_vector,
    dipolar_hyperfine,
    hyperfine_in_field_frame,
    internuclear_dipolar,
)
from spinbus.physics.register import DipolarCoupling, NuclearSpin, SpinRegister, Vec3


def _vec3(v: np.ndarray) -> Vec3:
    return (float(v[0]), float(v[1]), float(v[2]))


def nucleus_from_position(
    position_nm: Vec3,
    nv_axis: Vec3,
    field_direction: Vec3,
    larmor: float,
    t2: float = math.inf,
    label: str = "",
    transition: int = -1,
) -> NuclearSpin:
    """Nucleus with its point-dipole hyperfine vector expressed in the field frame.

    ``transition`` is the m_s of the driven NV transition (m_s = 0 <-> ±1); the
    coupling vector the nucleus sees is transition times the point-dipole vector.
    """
    if transition not in (-1, 1):
        raise InputError(f"NV transition must be -1 or +1, got {transition!r}")
    a_lab = transition * dipolar_hyperfine(as_vector(position_nm), as_vector(nv_axis))
    a_b = hyperfine_in_field_frame(a_lab, as_vector(field_direction))
    return NuclearSpin(
        label=label,
        hyperfine_b=_vec3(a_b),
        larmor=larmor,
        t2=t2,
        position_nm=position_nm,
        hyperfine_lab=_vec3(a_lab),
    )


def dipolar_network(
    nuclei: Sequence[NuclearSpin], field_direction: Vec3
) -> tuple[DipolarCoupling, ...]:
    """All pairwise couplings between nuclei that carry positions."""
    couplings: list[DipolarCoupling] = []
    for i, ni in enumerate(nuclei):
        for j in range(i + 1, len(nuclei)):
            nj = nuclei[j]
            if ni.position_nm is None or nj.position_nm is None:
                continue
            d = internuclear_dipolar(
                as_vector(ni.position_nm), as_vector(nj.position_nm), as_vector(field_direction)
            )
            couplings.append(DipolarCoupling(i=i, j=j, d=d))
    return tuple(couplings)


def register_from_positions(
    positions_nm: Sequence[Vec3],
    rabi_frequency: float,
    t1_rho: float,
    larmor: float | Sequence[float],
    field_direction: Vec3,
    nv_axis: Vec3 = (0.0, 0.0, 1.0),
    t2: float | Sequence[float] = math.inf,
    labels: Sequence[str] | None = None,
    transition: int = -1,
) -> SpinRegister:
    """Register from nuclear positions; nucleus 0 is conventionally the sensor."""
    n = len(positions_nm)
    larmors = [larmor] * n if isinstance(larmor, float | int) else list(larmor)
    t2s = [t2] * n if isinstance(t2, float | int) else list(t2)
    names = list(labels) if labels is not None else [f"n{k}" for k in range(n)]
    nuclei = tuple(
        nucleus_from_position(p, nv_axis, field_direction, float(w), float(t), name, transition)
        for p, w, t, name in zip(positions_nm, larmors, t2s, names, strict=True)
    )
    return SpinRegister(
        nuclei=nuclei,
        rabi_frequency=rabi_frequency,
        nv_axis=nv_axis,
        field_direction=field_direction,
        t1_rho=t1_rho,
        dipolar=dipolar_network(nuclei, field_direction),
    )


def reorient_register(register: SpinRegister, field_direction: Vec3) -> SpinRegister:
    """Same register under a new field direction.

    Nuclei that remember their lab hyperfine vector get new field-frame
    components; dipolar couplings between positioned nuclei are recomputed.
    Nuclei defined only by (a_par, a_perp) are left unchanged.
    """
    b = as_vector(field_direction)
    nuclei = []
    for spin in register.nuclei:
        if spin.hyperfine_lab is None:
            nuclei.append(spin)
            continue
        a_b = hyperfine_in_field_frame(as_vector(spin.hyperfine_lab), b)
        nuclei.append(spin.model_copy(update={"hyperfine_b": _vec3(a_b)}))
    kept = tuple(
        c
        for c in register.dipolar
        if register.nuclei[c.i].position_nm is None or register.nuclei[c.j].position_nm is None
    )
    recomputed = dipolar_network(nuclei, field_direction)
    return register.with_updates(
        nuclei=tuple(nuclei),
        field_direction=field_direction,
        dipolar=tuple(sorted((*kept, *recomputed), key=lambda c: (c.i, c.j))),
    )


class GeometryEntry(BaseModel):
    """One nucleus of a geometry file: label, position in nm, optional T2 in s."""

    model_config = ConfigDict(frozen=True)

    label: str = Field(min_length=1)
    position_nm: Vec3
    t2: float = Field(default=math.inf, gt=0)


def register_from_geometry(
    entries: Sequence[GeometryEntry],
    sensor: str,
    rabi_frequency: float,
    t1_rho: float,
    larmor: float,
    field_direction: Vec3,
    nv_axis: Vec3 = (0.0, 0.0, 1.0),
    transition: int = -1,
) -> SpinRegister:
    """Register with the nucleus labelled ``sensor`` first, others in file order.

    Raises:
        InputError: If no entry carries the sensor label
    """
    ordered = [e for e in entries if e.label == sensor]
    if not ordered:
        raise InputError(f"Sensor '{sensor}' not found among {[e.label for e in entries]}")
    ordered += [e for e in entries if e.label != sensor]
    return register_from_positions(
        [e.position_nm for e in ordered],
        rabi_frequency,
        t1_rho,
        larmor,
        field_direction,
        nv_axis=nv_axis,
        t2=[e.t2 for e in ordered],
        labels=[e.label for e in ordered],
        transition=transition,
    )
