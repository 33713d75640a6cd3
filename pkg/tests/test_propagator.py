import math

import numpy as np
import pytest
from scipy.linalg import expm

from spinbus.core.errors import InputError, ResourceError
from spinbus.dynamics.lindblad import liouvillian
from spinbus.dynamics.models import build_exact_model, build_nuclear_model
from spinbus.dynamics.observables import (
    Observable,
    computational_populations,
    population,
    spin_down_probability,
)
from spinbus.dynamics.propagator import Propagator, propagate, propagate_states
from spinbus.dynamics.schedule import PulseEvent, make_schedule
from spinbus.physics.operators import (
    NV_PLUS,
    NV_RESET_STATE,
    HilbertLayout,
    nuclear_ket,
    projector,
)
from tests.conftest import KHZ


def _full_state(nv: np.ndarray, bits: str) -> np.ndarray:
    return np.kron(projector(nv), projector(nuclear_ket(bits)))


def test_nuclear_precession_matches_exact_evolution():
    w1, w2 = 2 * KHZ, 3 * KHZ
    model = build_nuclear_model([w1, w2])
    plus = np.array([1.0, 1.0], dtype=np.complex128) / math.sqrt(2)
    rho0 = np.kron(projector(plus), projector(nuclear_ket("u")))
    period = 2 * math.pi / (w1 + w2)
    duration = 3 * period
    times = np.linspace(0.0, duration, 7)
    schedule = make_schedule(duration, None)
    traj = propagate(rho0, model, schedule, store_states=True, output_times=times)
    h = model.hamiltonian.matrix
    for t, rho in zip(times, traj.states, strict=True):
        u = expm(-1j * h * t)
        assert np.max(np.abs(rho - u @ rho0 @ u.conj().T)) < 1e-5


def test_segment_matches_matrix_exponential(gate_pair):
    model = build_exact_model(gate_pair)
    propagator = Propagator(model, make_schedule(1e-5, None))
    exact = expm(liouvillian(model) * 1e-5)
    assert np.max(np.abs(propagator.segment(1e-5) - exact)) < 1e-4


def test_resolution_converges(gate_pair):
    model = build_exact_model(gate_pair)
    schedule = make_schedule(2e-4, 1e-4)
    layout = gate_pair.layout
    rho0 = _full_state(NV_PLUS, "du")
    observables = computational_populations(layout)
    coarse = propagate(rho0, model, schedule, observables, steps_per_period=100)
    fine = propagate(rho0, model, schedule, observables, steps_per_period=200)
    for label in coarse.labels:
        assert np.allclose(coarse.series(label), fine.series(label), atol=1e-4)
    assert fine.steps > coarse.steps


def test_reset_and_pulse_apply_before_recording(uncoupled_pair):
    model = build_exact_model(uncoupled_pair)
    layout = uncoupled_pair.layout
    duration = 1e-4
    flip = PulseEvent(time=duration, axis=(1.0, 0.0, 0.0), angle=math.pi, targets=(0,))
    schedule = make_schedule(duration, duration, [flip])
    nv_reset = Observable("nv_reset", np.kron(NV_RESET_STATE, np.eye(4)))
    traj = propagate(
        _full_state(NV_PLUS, "uu"),
        model,
        schedule,
        [nv_reset, population(layout, "uu"), population(layout, "du")],
        output_times=[0.0, duration],
    )
    assert traj.series("nv_reset")[0] == pytest.approx(0.0, abs=1e-12)
    assert traj.series("nv_reset")[1] == pytest.approx(1.0, abs=1e-9)
    assert traj.series("P_uu")[0] == pytest.approx(1.0)
    assert traj.series("P_du")[1] == pytest.approx(1.0, abs=1e-8)


def test_step_cap_raises_resource_error(gate_pair):
    model = build_exact_model(gate_pair)
    with pytest.raises(ResourceError):
        Propagator(model, make_schedule(1e-3, 1e-4), max_steps=10)


def test_resets_need_an_nv():
    model = build_nuclear_model([KHZ, 2 * KHZ])
    with pytest.raises(InputError):
        Propagator(model, make_schedule(1e-3, 1e-4))


def test_invalid_initial_states(gate_pair):
    model = build_exact_model(gate_pair)
    schedule = make_schedule(1e-5, None)
    with pytest.raises(InputError):
        propagate(np.eye(4) / 4, model, schedule)
    with pytest.raises(InputError):
        propagate(2 * _full_state(NV_PLUS, "uu"), model, schedule)
    skew = _full_state(NV_PLUS, "uu").astype(np.complex128)
    skew[0, 1] = 0.1j
    with pytest.raises(InputError):
        propagate(skew, model, schedule)


def test_output_times_must_increase_and_fit(gate_pair):
    model = build_exact_model(gate_pair)
    schedule = make_schedule(1e-5, None)
    rho0 = _full_state(NV_PLUS, "uu")
    with pytest.raises(InputError):
        propagate(rho0, model, schedule, output_times=[0.0, 5e-6, 5e-6])
    with pytest.raises(InputError):
        propagate(rho0, model, schedule, output_times=[0.0, 2e-5])


def test_batch_propagation_matches_single_state(gate_pair):
    model = build_exact_model(gate_pair)
    schedule = make_schedule(5e-5, 2e-5)
    rho0 = _full_state(NV_PLUS, "ud")
    single = propagate(rho0, model, schedule, store_states=True)
    batch = propagate_states([rho0, _full_state(NV_PLUS, "dd")], model, schedule)
    assert batch.shape == (2, 8, 8)
    assert np.allclose(batch[0], single.states[-1], atol=1e-12)


def test_batch_shape_is_checked(gate_pair):
    model = build_exact_model(gate_pair)
    with pytest.raises(InputError):
        propagate_states(np.eye(16)[None], model, make_schedule(1e-5, None))


def test_relaxation_drives_nv_to_mixture(uncoupled_pair):
    # NV relaxation alone: populations of |±x⟩ approach 1/2 at rate 1/T1ρ
    model = build_exact_model(uncoupled_pair)
    t = 1e-3
    nv_plus = Observable("nv_plus", np.kron(projector(NV_PLUS), np.eye(4)))
    traj = propagate(_full_state(NV_PLUS, "uu"), model, make_schedule(t, None), [nv_plus])
    expected = 0.5 * (1 + math.exp(-t / uncoupled_pair.t1_rho))
    assert traj.series("nv_plus")[-1] == pytest.approx(expected, rel=1e-4)


def test_observables_on_nuclear_layout():
    layout = HilbertLayout(n_nuclei=2, has_nv=False)
    labels = [o.label for o in computational_populations(layout)]
    assert labels == ["P_uu", "P_ud", "P_du", "P_dd"]
    rho = projector(nuclear_ket("du"))
    assert float(np.real(np.trace(spin_down_probability(layout, 0).matrix @ rho))) == 1.0
    with pytest.raises(ValueError):
        population(layout, "u")


def test_repeated_runs_are_bit_identical(gate_pair):
    model = build_exact_model(gate_pair)
    schedule = make_schedule(3e-4, 1e-4)
    rho0 = np.kron(NV_RESET_STATE, projector(nuclear_ket("du")))
    observables = computational_populations(gate_pair.layout)
    first = propagate(rho0, model, schedule, observables, store_states=True)
    second = propagate(rho0, model, schedule, observables, store_states=True)
    assert np.array_equal(first.times, second.times)
    for label, series in first.observables.items():
        assert np.array_equal(series, second.series(label))
    assert all(np.array_equal(a, b) for a, b in zip(first.states, second.states, strict=True))
