"""Dip analysis on sampled spectra."""

from __future__ import annotations

from collections.abc import Sequence
import math

import numpy as np
from numpy.typing import NDArray
from scipy.signal import find_peaks


def _crossing(x0: float, y0: float, x1: float, y1: float, level: float) -> float:
    if y1 == y0:
        return x0
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0)


def fwhm(
    grid: Sequence[float] | NDArray[np.float64], signal: Sequence[float] | NDArray[np.float64]
) -> float:
    """Full width at half depth of the deepest dip, by linear interpolation.

    The half level sits midway between the largest sample and the minimum.
    NaN when the level is not crossed on both sides of the minimum or the
    signal holds no finite samples.
    """
    x = np.asarray(grid, dtype=np.float64)
    y = np.asarray(signal, dtype=np.float64)
    finite = np.isfinite(y)
    if finite.sum() < 3:
        return math.nan
    x, y = x[finite], y[finite]
    m = int(np.argmin(y))
    level = 0.5 * (float(np.max(y)) + float(y[m]))
    if level == y[m]:
        return math.nan
    left = right = math.nan
    for k in range(m, 0, -1):
        if y[k - 1] >= level:
            left = _crossing(x[k], y[k], x[k - 1], y[k - 1], level)
            break
    for k in range(m, len(y) - 1):
        if y[k + 1] >= level:
            right = _crossing(x[k], y[k], x[k + 1], y[k + 1], level)
            break
    return abs(right - left)


def dip_depth(signal: Sequence[float] | NDArray[np.float64]) -> float:
    """max − min over the finite samples."""
    y = np.asarray(signal, dtype=np.float64)
    y = y[np.isfinite(y)]
    return float(np.max(y) - np.min(y)) if y.size else math.nan


def dip_positions(
    grid: Sequence[float] | NDArray[np.float64],
    signal: Sequence[float] | NDArray[np.float64],
    prominence: float = 0.01,
) -> list[float]:
    """Grid positions of interior minima with at least ``prominence``, deepest first.

    NaN samples are dropped before the search.
    """
    x = np.asarray(grid, dtype=np.float64)
    y = np.asarray(signal, dtype=np.float64)
    finite = np.isfinite(y)
    x, y = x[finite], y[finite]
    if y.size < 3:
        return []
    peaks, _ = find_peaks(-y, prominence=prominence)
    order = np.argsort(y[peaks], kind="stable")
    return [float(x[peaks[k]]) for k in order]
