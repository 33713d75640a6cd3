from concurrent.futures import Future
from concurrent.futures.process import BrokenProcessPool
import math

import numpy as np
from pydantic import ValidationError
import pytest

from spinbus.core.enums import SweepObservable, SweepParameter
from spinbus.core.errors import InputError
from spinbus.protocol.sweep import (
    SweepResult,
    SweepSpec,
    evaluate_point,
    point_register,
    prepare_spec,
    selectivity_scan,
    spectrum_sweep,
)
from tests.conftest import KHZ


def _rabi_spec(register, **kw) -> SweepSpec:
    return SweepSpec(
        parameter=SweepParameter.rabi_frequency,
        grid=(380 * KHZ, 400 * KHZ, 420 * KHZ),
        spin_register=register,
        duration=1e-4,
        **kw,
    )


def test_grid_must_be_monotonic(bandwidth_register):
    with pytest.raises(ValidationError):
        SweepSpec(
            parameter=SweepParameter.rabi_frequency,
            grid=(1.0, 3.0, 2.0),
            spin_register=bandwidth_register,
            duration=1e-4,
        )


def test_field_sweep_needs_angles(bandwidth_register):
    with pytest.raises(ValidationError):
        SweepSpec(
            parameter=SweepParameter.field_theta,
            grid=(0.1, 0.2),
            spin_register=bandwidth_register,
            duration=1e-4,
        )


def test_indices_are_checked(bandwidth_register):
    with pytest.raises(ValidationError):
        _rabi_spec(bandwidth_register, sensor=2)
    with pytest.raises(ValidationError):
        SweepSpec(
            parameter=SweepParameter.delta_detuning,
            grid=(-1.0, 1.0),
            spin_register=bandwidth_register,
            duration=1e-4,
            target=0,
        )


def test_point_register_detuning_moves_target(bandwidth_register):
    spec = SweepSpec(
        parameter=SweepParameter.delta_detuning,
        grid=(-KHZ, KHZ),
        spin_register=bandwidth_register,
        duration=1e-4,
    )
    moved = point_register(spec, 0.25 * KHZ)
    assert moved.nuclei[1].a_par == pytest.approx(bandwidth_register.nuclei[1].a_par + 0.5 * KHZ)
    assert moved.nuclei[0] == bandwidth_register.nuclei[0]


def test_point_register_rabi_frequency(bandwidth_register):
    moved = point_register(_rabi_spec(bandwidth_register), 410 * KHZ)
    assert moved.rabi_frequency == 410 * KHZ


def test_point_register_field_angle(bandwidth_register):
    spec = SweepSpec(
        parameter=SweepParameter.field_theta,
        grid=(0.0, 0.5),
        spin_register=bandwidth_register,
        duration=1e-4,
        field_angles=(0.0, 0.0),
    )
    moved = point_register(spec, 0.5)
    assert moved.field_direction == pytest.approx((math.sin(0.5), 0.0, math.cos(0.5)))


def test_evolution_time_sweep_uses_grid_as_duration(uncoupled_pair):
    spec = SweepSpec(
        parameter=SweepParameter.evolution_time,
        grid=(5e-5, 1e-4),
        spin_register=uncoupled_pair,
        duration=1e-4,
        observable=SweepObservable.pair_du,
    )
    assert evaluate_point(spec, 5e-5) == pytest.approx(1.0, abs=1e-6)


def test_worker_count_does_not_change_results(bandwidth_register):
    spec = _rabi_spec(bandwidth_register)
    serial = spectrum_sweep(spec, workers=1)
    parallel = spectrum_sweep(spec, workers=2)
    assert np.allclose(serial.signals, parallel.signals, atol=1e-12, rtol=0)
    assert serial.metadata == parallel.metadata
    assert serial.grid == spec.grid


def test_failing_point_becomes_nan(monkeypatch, bandwidth_register):
    calls = []

    def flaky(register, *args, **kwargs):
        calls.append(register.rabi_frequency)
        if len(calls) == 2:
            raise InputError("integrator refused")
        return 0.75

    monkeypatch.setattr("spinbus.protocol.sweep.sensing_protocol", flaky)
    result = spectrum_sweep(_rabi_spec(bandwidth_register), workers=1)
    assert result.signals[0] == 0.75
    assert math.isnan(result.signals[1])
    assert result.diagnostics[1] == "InputError: integrator refused"
    assert result.failures == [(400 * KHZ, "InputError: integrator refused")]


def test_unexpected_exception_becomes_nan(monkeypatch, bandwidth_register):
    def broken(register, *args, **kwargs):
        if register.rabi_frequency == 400 * KHZ:
            raise RuntimeError("matrix went singular")
        return 0.9

    monkeypatch.setattr("spinbus.protocol.sweep.sensing_protocol", broken)
    result = spectrum_sweep(_rabi_spec(bandwidth_register), workers=1)
    assert result.signals[0] == 0.9 and result.signals[2] == 0.9
    assert math.isnan(result.signals[1])
    assert result.diagnostics[1] == "RuntimeError: matrix went singular"


class _DeadPool:
    def __init__(self, max_workers: int) -> None:
        self.max_workers = max_workers

    def __enter__(self) -> "_DeadPool":
        return self

    def __exit__(self, *exc_info: object) -> bool:
        return False

    def submit(self, fn, *args) -> Future:
        future: Future = Future()
        future.set_exception(BrokenProcessPool("worker exited"))
        return future


def test_dead_worker_pool_marks_every_point(monkeypatch, bandwidth_register):
    monkeypatch.setattr("spinbus.protocol.sweep.ProcessPoolExecutor", _DeadPool)
    result = spectrum_sweep(_rabi_spec(bandwidth_register), workers=2)
    assert all(math.isnan(s) for s in result.signals)
    assert result.diagnostics == ["BrokenProcessPool: worker exited"] * 3


def test_metadata_is_reproducible(bandwidth_register):
    spec = _rabi_spec(bandwidth_register, label="total")
    result = spectrum_sweep(spec)
    assert result.label == "total"
    assert set(result.metadata) == {"parameter_hash", "grid_spec", "engine_version", "observable"}
    assert result.metadata["grid_spec"].startswith("rabi_frequency:")


def test_prepare_spec_trims_once(gate_pair):
    spec = SweepSpec(
        parameter=SweepParameter.delta_detuning,
        grid=(-KHZ, KHZ),
        spin_register=gate_pair,
        duration=1e-4,
        t_re=1e-3,
        observable=SweepObservable.pair_du,
        trim=True,
    )
    ready = prepare_spec(spec)
    assert not ready.trim
    assert ready.spin_register.nuclei[1].a_par != gate_pair.nuclei[1].a_par
    assert prepare_spec(ready) is ready


def test_selectivity_scan_on_uncoupled_pair(uncoupled_pair):
    result = selectivity_scan(uncoupled_pair, (-1 * KHZ, 0.0, 1 * KHZ), 1e-4, trim=False)
    assert result.parameter is SweepParameter.delta_detuning
    assert result.metadata["observable"] == "pair_du"
    assert result.signals == pytest.approx((1.0, 1.0, 1.0), abs=1e-6)
    assert result.failures == []


def test_result_rejects_out_of_range_signal():
    with pytest.raises(ValidationError):
        SweepResult(
            parameter=SweepParameter.rabi_frequency,
            grid=(1.0,),
            signals=(1.5,),
            diagnostics=(None,),
            metadata={},
            started_at="",
            finished_at="",
        )


def test_dip_summary_reports_positions_depth_and_width():
    grid = tuple(float(x) for x in range(7))
    result = SweepResult(
        parameter=SweepParameter.rabi_frequency,
        grid=grid,
        signals=(1.0, 0.95, 0.75, 0.5, 0.75, 0.95, 1.0),
        diagnostics=(None,) * 7,
        metadata={},
        started_at="",
        finished_at="",
    )
    summary = result.dip_summary()
    assert summary["dips"] == [3.0]
    assert summary["depth"] == pytest.approx(0.5)
    assert summary["fwhm"] == pytest.approx(2.0)
