import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from spinbus.core.errors import GeometryError, InputError
from spinbus.physics.assembly import (
    GeometryEntry,
    nucleus_from_position,
    register_from_geometry,
    register_from_positions,
    reorient_register,
)
from spinbus.physics.constants import ELECTRON_NUCLEAR_DIPOLE_1NM, TWO_PI
from spinbus.physics.geometry import (
    dipolar_hyperfine,
    field_direction,
    field_frame,
    hyperfine_components,
    hyperfine_in_field_frame,
    internuclear_dipolar,
)

VALINE = [
    GeometryEntry(label="sensor", position_nm=(-0.601, 0.676, -0.692)),
    GeometryEntry(label="c1", position_nm=(-1.260, -1.451, 2.904)),
    GeometryEntry(label="c2", position_nm=(-1.260, -1.317, 3.135)),
    GeometryEntry(label="c3", position_nm=(-1.260, -1.317, 2.673)),
]

angles = st.floats(min_value=0.0, max_value=math.pi)
azimuths = st.floats(min_value=0.0, max_value=2 * math.pi)
components = st.floats(min_value=-1e5, max_value=1e5, allow_nan=False)


@given(angles, azimuths)
def test_field_direction_is_unit(theta, phi):
    assert np.linalg.norm(field_direction(theta, phi)) == pytest.approx(1.0, abs=1e-12)


@given(angles, azimuths)
def test_field_frame_is_orthonormal(theta, phi):
    e1, e2, b = field_frame(field_direction(theta, phi))
    frame = np.stack([e1, e2, b])
    assert np.allclose(frame @ frame.T, np.eye(3), atol=1e-12)
    assert np.linalg.det(frame) == pytest.approx(1.0, abs=1e-12)


@given(components, components, components, angles, azimuths)
@settings(max_examples=200)
def test_components_preserve_norm(x, y, z, theta, phi):
    a = np.array([x, y, z])
    b = field_direction(theta, phi)
    a_par, a_perp = hyperfine_components(a, b)
    assert a_perp >= 0.0
    assert a_par**2 + a_perp**2 == pytest.approx(float(a @ a), rel=1e-9, abs=1e-6)
    in_frame = hyperfine_in_field_frame(a, b)
    assert in_frame[2] == pytest.approx(a_par, rel=1e-9, abs=1e-6)


def test_components_require_unit_field():
    with pytest.raises(InputError):
        hyperfine_components(np.ones(3), np.array([0.0, 0.0, 2.0]))


def test_on_axis_dipole_is_twice_the_prefactor():
    a = dipolar_hyperfine(np.array([0.0, 0.0, 2.0]), np.array([0.0, 0.0, 1.0]))
    assert a[2] == pytest.approx(2.0 * ELECTRON_NUCLEAR_DIPOLE_1NM / 8.0, rel=1e-12)
    assert a[0] == pytest.approx(0.0, abs=1e-9)


def test_contact_radius_is_rejected():
    with pytest.raises(GeometryError):
        dipolar_hyperfine(np.array([0.1, 0.1, 0.1]), np.array([0.0, 0.0, 1.0]))


def test_internuclear_coupling_vanishes_at_magic_angle():
    theta_m = math.acos(1.0 / math.sqrt(3.0))
    b = field_direction(theta_m, 0.0)
    d = internuclear_dipolar(np.zeros(3), np.array([0.0, 0.0, 0.5]), b)
    assert d == pytest.approx(0.0, abs=1e-9)


def test_coincident_nuclei_are_rejected():
    with pytest.raises(GeometryError):
        internuclear_dipolar(np.ones(3), np.ones(3), np.array([0.0, 0.0, 1.0]))


def test_valine_coupling_magnitudes():
    b = tuple(field_direction(math.radians(44.7), math.radians(52.0)))
    register = register_from_geometry(VALINE, "sensor", TWO_PI * 400e3, 1e-3, TWO_PI * 200e3, b)
    assert [s.label for s in register.nuclei] == ["sensor", "c1", "c2", "c3"]
    for entry, nucleus in zip(VALINE, register.nuclei, strict=True):
        r = float(np.linalg.norm(entry.position_nm))
        scale = ELECTRON_NUCLEAR_DIPOLE_1NM / r**3
        assert scale * (1 - 1e-9) <= nucleus.hyperfine_norm <= 2.0 * scale * (1 + 1e-9)
    # sensor couples in the 10 kHz range, targets near 1 kHz
    assert TWO_PI * 5e3 < register.nuclei[0].hyperfine_norm < TWO_PI * 40e3
    assert all(s.hyperfine_norm < TWO_PI * 2e3 for s in register.nuclei[1:])
    assert len(register.dipolar) == 6


def test_register_from_geometry_needs_sensor():
    with pytest.raises(InputError):
        register_from_geometry(VALINE, "missing", 1.0, 1e-3, 1.0, (0.0, 0.0, 1.0))


def test_reorient_keeps_hyperfine_magnitude():
    register = register_from_positions(
        [e.position_nm for e in VALINE[:2]], TWO_PI * 400e3, 1e-3, TWO_PI * 200e3, (0.0, 0.0, 1.0)
    )
    b = tuple(float(v) for v in field_direction(0.7, 1.1))
    turned = reorient_register(register, b)
    for before, after in zip(register.nuclei, turned.nuclei, strict=True):
        assert after.hyperfine_norm == pytest.approx(before.hyperfine_norm, rel=1e-12)
    assert turned.field_direction == b
    assert turned.dipolar[0].d != pytest.approx(register.dipolar[0].d)


def test_driven_transition_sets_hyperfine_sign():
    position = (0.3, -0.4, 1.1)
    b = (0.0, 0.0, 1.0)
    lower = nucleus_from_position(position, (0.0, 0.0, 1.0), b, TWO_PI * 200e3)
    upper = nucleus_from_position(position, (0.0, 0.0, 1.0), b, TWO_PI * 200e3, transition=1)
    point_dipole = dipolar_hyperfine(np.array(position), np.array([0.0, 0.0, 1.0]))
    assert np.allclose(upper.hyperfine_lab, point_dipole, rtol=1e-12)
    assert np.allclose(lower.hyperfine_lab, -point_dipole, rtol=1e-12)
    assert lower.a_par == pytest.approx(-upper.a_par, rel=1e-12)
    assert lower.a_perp == pytest.approx(upper.a_perp, rel=1e-12)


def test_unknown_transition_is_rejected():
    with pytest.raises(InputError):
        nucleus_from_position((0.0, 0.0, 1.0), (0.0, 0.0, 1.0), (0.0, 0.0, 1.0), 1.0, transition=0)


@given(angles, azimuths, angles, azimuths)
@settings(max_examples=50)
def test_point_dipole_is_rotation_covariant(theta_r, phi_r, theta_q, phi_q):
    axis = np.array([0.3, -0.2, 0.93])
    axis /= np.linalg.norm(axis)
    rotation = Rotation.from_euler("zyz", [phi_r, theta_r, phi_q + theta_q])
    r = np.array([0.7, -1.1, 1.6])
    rotated = dipolar_hyperfine(rotation.apply(r), rotation.apply(axis))
    assert np.allclose(rotated, rotation.apply(dipolar_hyperfine(r, axis)), rtol=1e-10, atol=1e-6)
