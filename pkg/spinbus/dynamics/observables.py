"""Observables recorded along trajectories."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from spinbus.physics.operators import (
    DOWN,
    ID2,
    ComplexMatrix,
    HilbertLayout,
    nuclear_ket,
    projector,
)


@dataclass(frozen=True)
class Observable:
    label: str
    matrix: ComplexMatrix


def expectation(observable: Observable, rho: ComplexMatrix) -> float:
    """Re Tr(O ρ)."""
    return float(np.real(np.sum(observable.matrix.T * rho)))


def _with_nv(layout: HilbertLayout, nuclear: ComplexMatrix) -> ComplexMatrix:
    return np.asarray(np.kron(ID2, nuclear)) if layout.has_nv else nuclear


def population(layout: HilbertLayout, bits: str) -> Observable:
    """Projector onto a nuclear product state, e.g. ``du`` = |↓↑⟩."""
    if len(bits) != layout.n_nuclei:
        raise ValueError(f"state label '{bits}' needs {layout.n_nuclei} characters")
    return Observable(label=f"P_{bits}", matrix=_with_nv(layout, projector(nuclear_ket(bits))))


def computational_populations(layout: HilbertLayout) -> list[Observable]:
    """All nuclear product-state populations in lexicographic u/d order."""
    return [population(layout, "".join(bits)) for bits in product("ud", repeat=layout.n_nuclei)]


def spin_down_probability(layout: HilbertLayout, index: int) -> Observable:
    """P(nucleus ``index`` in |↓⟩)."""
    op = layout.nuclear_op(projector(DOWN), index)
    return Observable(label=f"P_down_{index}", matrix=op)
