"""Geometry to coupling coefficients.

Point-dipole electron–nuclear and nuclear–nuclear couplings, field
orientation helpers and the (a_par, a_perp) decomposition of a hyperfine
vector. Positions are in nm with the NV at the origin; couplings in rad/s.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.typing import NDArray

from spinbus.core.errors import GeometryError, InputError
from spinbus.physics.constants import (
    CONTACT_RADIUS_NM,
    ELECTRON_NUCLEAR_DIPOLE_1NM,
    NUCLEAR_NUCLEAR_DIPOLE_1NM,
    UNIT_TOLERANCE,
)

Vector = NDArray[np.float64]


def as_vector(v: Vector | tuple[float, ...] | list[float]) -> Vector:
    arr = np.asarray(v, dtype=np.float64)
    if arr.shape != (3,):
        raise InputError(f"Expected a 3-vector, got shape {arr.shape}")
    return arr


def require_unit(v: Vector, name: str) -> Vector:
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > UNIT_TOLERANCE:
        raise InputError(f"{name} must be a unit vector (|{name}| = {norm!r})")
    return v


def field_direction(theta: float, phi: float) -> Vector:
    """Unit vector for polar angle ``theta`` and azimuth ``phi`` (radians)."""
    return np.array(
        [math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)]
    )


def field_frame(b: Vector) -> tuple[Vector, Vector, Vector]:
    """Orthonormal frame (e1, e2, b) with b as the quantization axis.

    e1 is the lab x axis (y if b is within ~25° of x) projected orthogonal
    to b, so the frame is a deterministic function of b.
    """
    b = require_unit(as_vector(b), "b")
    helper = np.array([1.0, 0.0, 0.0]) if abs(b[0]) <= 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = helper - float(helper @ b) * b
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(b, e1)
    return e1, e2, b


def hyperfine_components(hyperfine: Vector, b: Vector) -> tuple[float, float]:
    """Split A into components parallel and perpendicular to b.

    Args:
        hyperfine: Hyperfine vector A (rad/s)
        b: Unit field direction

    Returns:
        tuple[float, float]: (a_par, a_perp) with a_par = A·b and
            a_perp = sqrt(|A|² − a_par²) ≥ 0

    Raises:
        InputError: If ``b`` is not a unit vector
    """
    a = as_vector(hyperfine)
    b = require_unit(as_vector(b), "b")
    a_par = float(a @ b)
    a_perp_sq = float(a @ a) - a_par * a_par
    return a_par, math.sqrt(max(a_perp_sq, 0.0))


def hyperfine_in_field_frame(hyperfine: Vector, b: Vector) -> Vector:
    """Components of A along (e1, e2, b)."""
    e1, e2, bb = field_frame(b)
    a = as_vector(hyperfine)
    return np.array([float(a @ e1), float(a @ e2), float(a @ bb)])


def dipolar_hyperfine(position_nm: Vector, nv_axis: Vector) -> Vector:
    """Secular point-dipole hyperfine vector of a 13C at ``position_nm``.

    A = (μ0 γ_e γ_n ħ / 4π r³)·(3(ẑ·r̂)r̂ − ẑ) with ẑ the NV axis.

    Raises:
        GeometryError: If the nucleus sits inside the contact radius (0.3 nm)
    """
    r = as_vector(position_nm)
    z = require_unit(as_vector(nv_axis), "nv_axis")
    dist = float(np.linalg.norm(r))
    if dist <= CONTACT_RADIUS_NM:
        raise GeometryError(
            f"Nucleus at {dist:.3f} nm is inside the contact radius ({CONTACT_RADIUS_NM} nm)",
            extra={"position_nm": r.tolist()},
        )
    r_hat = r / dist
    prefactor = ELECTRON_NUCLEAR_DIPOLE_1NM / dist**3
    return np.asarray(prefactor * (3.0 * float(z @ r_hat) * r_hat - z))


def internuclear_dipolar(pos_i: Vector, pos_j: Vector, b: Vector) -> float:
    """Secular homonuclear coupling d_ij (rad/s).

    d_ij = (μ0 γ_n² ħ / 4π r³)·(1 − 3cos²θ)/2, θ between r_ij and b; enters the
    Hamiltonian as d_ij(3 I^z_i I^z_j − I_i·I_j).
    """
    ri, rj = as_vector(pos_i), as_vector(pos_j)
    b = require_unit(as_vector(b), "b")
    rij = rj - ri
    dist = float(np.linalg.norm(rij))
    if dist == 0.0:
        raise GeometryError("Coincident nuclear positions", extra={"position_nm": ri.tolist()})
    cos_theta = float(rij @ b) / dist
    return NUCLEAR_NUCLEAR_DIPOLE_1NM / dist**3 * (1.0 - 3.0 * cos_theta**2) / 2.0
