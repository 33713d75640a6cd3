import math

import numpy as np
from pydantic import ValidationError
import pytest

from spinbus.core.errors import ScheduleError
from spinbus.dynamics.schedule import PulseEvent, make_schedule, output_grid


def _pulse(time: float, axis=(1.0, 0.0, 0.0)) -> PulseEvent:
    return PulseEvent(time=time, axis=axis, angle=math.pi / 2, targets=(0,))


@pytest.mark.parametrize(
    "kwargs",
    [
        {"duration": 0.0, "reset_period": None},
        {"duration": 1e-3, "reset_period": 2e-3},
        {"duration": 1e-3, "reset_period": -1e-4},
        {"duration": 1e-3, "reset_period": None, "pulses": [_pulse(5e-4), _pulse(2e-4)]},
        {"duration": 1e-3, "reset_period": None, "pulses": [_pulse(2e-4), _pulse(2e-4)]},
        {"duration": 1e-3, "reset_period": None, "pulses": [_pulse(2e-3)]},
    ],
)
def test_invalid_schedules(kwargs):
    with pytest.raises(ScheduleError):
        make_schedule(**kwargs)


def test_pulse_needs_targets():
    with pytest.raises(ValidationError):
        PulseEvent(time=0.0, axis=(1.0, 0.0, 0.0), angle=math.pi, targets=())


def test_reset_times_reach_duration():
    schedule = make_schedule(1e-3, 1e-4)
    times = schedule.reset_times()
    assert len(times) == 10
    assert times[0] == pytest.approx(1e-4)
    assert times[-1] == pytest.approx(1e-3)


def test_reset_times_skip_partial_period():
    assert len(make_schedule(1e-3, 3e-4).reset_times()) == 3
    assert make_schedule(1e-3, None).reset_times() == []


def test_lab_axis_rotates_with_reference_frame():
    omega = 2 * math.pi * 1e3
    t = 0.25e-3  # quarter turn
    schedule = make_schedule(1e-3, None, [_pulse(t)], reference_frequency=omega)
    x, y, z = schedule.lab_axis(schedule.pulses[0])
    assert (x, y, z) == pytest.approx((0.0, 1.0, 0.0), abs=1e-12)


def test_lab_axis_without_reference_frame():
    schedule = make_schedule(1e-3, None, [_pulse(1e-4, axis=(0.0, -1.0, 0.0))])
    assert schedule.lab_axis(schedule.pulses[0]) == (0.0, -1.0, 0.0)


def test_with_duration_truncates():
    schedule = make_schedule(1e-3, 5e-4, [_pulse(1e-4), _pulse(8e-4)])
    short = schedule.with_duration(3e-4)
    assert short.duration == 3e-4
    assert short.reset_period == 3e-4
    assert [p.time for p in short.pulses] == [1e-4]


def test_output_grid_by_step_ends_at_duration():
    grid = output_grid(1.0, step=0.3)
    assert np.allclose(grid, [0.0, 0.3, 0.6, 0.9, 1.0])


def test_output_grid_by_points():
    assert np.allclose(output_grid(2.0, points=5), [0.0, 0.5, 1.0, 1.5, 2.0])


def test_output_grid_needs_step_or_points():
    with pytest.raises(ScheduleError):
        output_grid(1.0)
    with pytest.raises(ScheduleError):
        output_grid(1.0, step=0.0)
