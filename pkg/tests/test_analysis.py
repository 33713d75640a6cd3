import math

import numpy as np
import pytest

from spinbus.protocol.analysis import dip_depth, dip_positions, fwhm


def lorentzian_dip(x: np.ndarray, center: float, gamma: float, depth: float = 0.5) -> np.ndarray:
    return 1.0 - depth * gamma**2 / ((x - center) ** 2 + gamma**2)


def test_fwhm_of_lorentzian():
    x = np.linspace(-100.0, 100.0, 20001)
    assert fwhm(x, lorentzian_dip(x, 3.0, 2.0)) == pytest.approx(4.0, rel=1e-2)


def test_fwhm_ignores_nan_samples():
    x = np.linspace(-50.0, 50.0, 1001)
    y = lorentzian_dip(x, 0.0, 1.0)
    y[::7] = np.nan
    assert fwhm(x, y) == pytest.approx(2.0, rel=2e-2)


def test_fwhm_nan_when_level_not_crossed():
    x = np.linspace(0.0, 1.0, 11)
    assert math.isnan(fwhm(x, 1.0 - x))  # minimum at the edge
    assert math.isnan(fwhm(x, np.ones_like(x)))
    assert math.isnan(fwhm(x[:2], x[:2]))


def test_dip_depth():
    assert dip_depth([1.0, 0.6, np.nan, 0.9]) == pytest.approx(0.4)
    assert math.isnan(dip_depth([np.nan]))


def test_dip_positions_sorted_by_depth():
    x = np.linspace(-10.0, 10.0, 2001)
    y = lorentzian_dip(x, -4.0, 0.5, depth=0.2) + lorentzian_dip(x, 5.0, 0.5, depth=0.4) - 1.0
    positions = dip_positions(x, y)
    assert positions == pytest.approx([5.0, -4.0], abs=1e-9)


def test_dip_positions_respects_prominence():
    x = np.linspace(-10.0, 10.0, 201)
    y = lorentzian_dip(x, 0.0, 1.0, depth=0.005)
    assert dip_positions(x, y) == []
    assert dip_positions(x, y, prominence=1e-3) == pytest.approx([0.0], abs=1e-9)


def test_dip_positions_skip_nan_samples():
    x = np.linspace(-5.0, 5.0, 101)
    y = lorentzian_dip(x, 1.0, 0.4)
    y[::7] = np.nan
    assert dip_positions(x, y) == pytest.approx([1.0], abs=1e-9)
    assert dip_positions(x[:2], y[:2]) == []
