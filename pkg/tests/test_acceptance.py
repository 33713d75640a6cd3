"""End-to-end checks of the bundled experiments at desk scale."""

import math

import numpy as np
import pytest

from spinbus.core.di_container import configure_dependencies, inject
from spinbus.core.enums import GateFrame, ShiftModel, SweepParameter
from spinbus.dynamics.models import build_exact_model
from spinbus.dynamics.observables import computational_populations
from spinbus.dynamics.propagator import propagate
from spinbus.dynamics.schedule import make_schedule, output_grid
from spinbus.effective.params import compute_effective_params
from spinbus.effective.resonance import trim_to_resonance
from spinbus.effective.signal import closed_form_signal, effective_trajectory, transfer_time
from spinbus.physics.constants import TWO_PI
from spinbus.physics.operators import NV_RESET_STATE, nuclear_ket, projector
from spinbus.protocol.analysis import fwhm
from spinbus.protocol.gate import run_gate_experiment
from spinbus.protocol.molecule import target_line
from spinbus.protocol.sensing import sensing_protocol
from spinbus.protocol.sweep import SweepSpec, spectrum_sweep
from spinbus.repositories.impl import load_geometry
from spinbus.schemas.run_config import load_run_config
from spinbus.services import SweepServiceInterface
from tests.conftest import CONFIGS

pytestmark = pytest.mark.slow


def _sweep(name: str, **sweep_updates):
    config = load_run_config(CONFIGS / name)
    assert config.sweep is not None
    sweep = config.sweep.model_copy(update=sweep_updates)
    configure_dependencies()
    updated = config.model_copy(update={"sweep": sweep})
    return inject(SweepServiceInterface).sweep(updated, workers=1)


def test_exact_flip_flop_tracks_effective_model(gate_pair):
    trimmed = trim_to_resonance(gate_pair, t_re=1e-3)
    params = compute_effective_params(trimmed, 1e-3, shift_model=ShiftModel.spectral)
    times = output_grid(0.06, points=121)
    rho0 = np.kron(NV_RESET_STATE, projector(nuclear_ket("du")))
    exact = propagate(
        rho0,
        build_exact_model(trimmed),
        make_schedule(0.06, 1e-3),
        computational_populations(trimmed.layout),
        times,
    )
    effective = effective_trajectory(trimmed, 1e-3, 0.06, "du", output_times=times, params=params)

    window = times <= 0.04
    for label in ("P_du", "P_ud"):
        deviation = np.abs(exact.series(label) - effective.series(label))[window]
        assert deviation.max() < 0.05
    transferred = exact.series("P_ud")
    assert transferred.max() > 0.9
    first_maximum = times[int(np.argmax(transferred))]
    assert first_maximum == pytest.approx(transfer_time(params), rel=0.15)


def test_resonant_sensing_dip_reaches_half(gate_pair):
    trimmed = trim_to_resonance(gate_pair, t_re=1e-3)
    params = compute_effective_params(trimmed, 1e-3, shift_model=ShiftModel.spectral)
    t_dip = transfer_time(params)
    signal = sensing_protocol(trimmed, t_dip, sensor=0, t_re=1e-3)
    # closed_form_signal takes the rate of a flip-flop element pA_wo/2
    expected = closed_form_signal(t_dip, 2 * params.pa_wo, *params.delta)
    assert expected == pytest.approx(0.5, abs=1e-3)
    assert signal == pytest.approx(expected, abs=0.05)


def test_gate_fidelity_is_limited_by_mediated_ising_phase(gate_pair):
    result = run_gate_experiment(gate_pair, output_points=11)
    assert result.frame is GateFrame.local
    assert result.fidelity == result.fidelity_local
    assert result.duration == pytest.approx(0.052, rel=0.02)
    assert result.ising_phase == pytest.approx(26.3 * result.duration, rel=0.05)
    # with the two-nucleus phase absorbed only dissipation and leakage remain
    assert result.fidelity_diagonal >= 0.97
    f_e = (5 * result.fidelity_diagonal - 1) / 4 * (5 * result.ising_fidelity_bound - 1) / 4
    assert result.fidelity_local == pytest.approx((4 * f_e + 1) / 5, abs=0.02)


def test_gate_selectivity(clean_container):
    (result,) = _sweep(
        "selectivity.toml", start=None, stop=None, points=None, values=[0.0, 300.0, 1000.0]
    )
    resonant, detuned, far = result.signals
    assert resonant <= 0.05
    # 0.3 kHz already decouples the pair; what is left is NV pumping
    assert detuned == pytest.approx(far, abs=5e-3)
    assert detuned >= 0.94


def test_linewidth_follows_target_t2_not_t1_rho(clean_container):
    results = {r.label: r for r in _sweep("bandwidth.toml", points=15)}
    widths = {label: fwhm(r.grid, r.signals) for label, r in results.items()}
    assert all(math.isfinite(w) for w in widths.values())
    short, long_ = widths["t1rho_0.05ms_t2_5ms"], widths["t1rho_1ms_t2_5ms"]
    assert short == pytest.approx(long_, rel=0.1)
    assert long_ >= 2 * widths["t1rho_1ms_t2_50ms"]


def test_lower_rabi_frequency_broadens_dip(clean_container):
    results = {r.label: r for r in _sweep("filter.toml", start=-150.0, stop=150.0, points=21)}
    narrow = fwhm(results["omega_400khz"].grid, results["omega_400khz"].signals)
    broad = fwhm(results["omega_300khz"].grid, results["omega_300khz"].signals)
    assert math.isfinite(narrow) and math.isfinite(broad)
    assert broad > narrow


def test_valine_per_target_dips_sit_at_their_resonances():
    config = load_run_config(CONFIGS / "valine.toml")
    register = config.spin_register.to_register(load_geometry(CONFIGS / "valine.xyz"))
    grid = config.molecule.omega_grid()
    offsets = TWO_PI * 1e3 * np.array([-1.0, -0.5, 0.0, 0.5, 1.0])
    dips = []
    for k in (1, 2, 3):
        line = target_line(register, k, (grid[0], grid[-1]))
        spec = SweepSpec(
            parameter=SweepParameter.rabi_frequency,
            grid=tuple(float(w) for w in line.resonance + offsets),
            spin_register=register.subset([0, k]),
            duration=config.schedule.duration,
            t_re=config.schedule.t_re,
        )
        signals = np.asarray(spectrum_sweep(spec).signals)
        deepest = int(np.argmin(signals))
        assert deepest in (1, 2, 3)
        assert signals[deepest] < 0.8
        dips.append(spec.grid[deepest])
    assert len(set(dips)) == 3
