import math

from pydantic import ValidationError
import pytest

from spinbus.physics.register import DipolarCoupling, NuclearSpin, SpinRegister
from tests.conftest import KHZ, spin


def test_from_components_places_a_perp_on_e1():
    nucleus = NuclearSpin.from_components(2.0, 3.0, 10.0)
    assert nucleus.hyperfine_b == (3.0, 0.0, 2.0)
    assert nucleus.a_par == 2.0
    assert nucleus.a_perp == 3.0
    assert math.isinf(nucleus.t2)


def test_negative_a_perp_is_rejected():
    with pytest.raises(ValueError):
        NuclearSpin.from_components(0.0, -1.0, 1.0)


@pytest.mark.parametrize("count", [0, 5])
def test_register_size_bounds(count):
    with pytest.raises(ValidationError):
        SpinRegister(
            nuclei=tuple(spin(1.0, 1.0) for _ in range(count)), rabi_frequency=1.0, t1_rho=1.0
        )


def test_axes_must_be_unit_vectors():
    with pytest.raises(ValidationError):
        SpinRegister(
            nuclei=(spin(1.0, 1.0),), rabi_frequency=1.0, t1_rho=1.0, nv_axis=(0.0, 0.0, 2.0)
        )


def test_dipolar_indices_are_checked():
    with pytest.raises(ValidationError):
        DipolarCoupling(i=1, j=1, d=1.0)
    with pytest.raises(ValidationError):
        SpinRegister(
            nuclei=(spin(1.0, 1.0),),
            rabi_frequency=1.0,
            t1_rho=1.0,
            dipolar=(DipolarCoupling(i=0, j=1, d=1.0),),
        )


def test_subset_reindexes_dipolar_terms(gate_three):
    register = gate_three.model_copy(
        update={
            "dipolar": (
                DipolarCoupling(i=0, j=1, d=1.0),
                DipolarCoupling(i=0, j=2, d=2.0),
                DipolarCoupling(i=1, j=2, d=3.0),
            )
        }
    )
    sub = register.subset([0, 2])
    assert [n.label for n in sub.nuclei] == ["n1", "n3"]
    assert sub.dipolar == (DipolarCoupling(i=0, j=1, d=2.0),)


def test_with_updates_validates(gate_pair):
    changed = gate_pair.with_updates(rabi_frequency=400 * KHZ)
    assert changed.rabi_frequency == 400 * KHZ
    assert changed.nuclei == gate_pair.nuclei
    with pytest.raises(ValidationError):
        gate_pair.with_updates(t1_rho=-1.0)


def test_with_a_par_drops_lab_vector():
    nucleus = NuclearSpin(
        label="c", hyperfine_b=(3.0, 0.0, 4.0), hyperfine_lab=(0.0, 0.0, 5.0), larmor=1.0
    )
    moved = nucleus.with_a_par(1.0)
    assert moved.a_par == 1.0
    assert moved.hyperfine_lab is None


def test_lab_and_frame_vectors_must_match():
    with pytest.raises(ValidationError):
        NuclearSpin(hyperfine_b=(1.0, 0.0, 0.0), hyperfine_lab=(2.0, 0.0, 0.0), larmor=1.0)
