"""Lindblad generator: model type, right-hand side and superoperator.

Vectorization is row-major, vec(ρ) = ρ.reshape(-1), so that
vec(A ρ B) = (A ⊗ Bᵀ) vec(ρ).
"""

from __future__ import annotations

from dataclasses import dataclass, field
import logging
import math

import numpy as np
from numpy.typing import NDArray

from spinbus.core.errors import InputError
from spinbus.physics.operators import ComplexMatrix, HilbertLayout, Operator

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CollapseOperator:
    """Jump operator L with rate r entering r(LρL† − ½{L†L, ρ})."""

    operator: Operator
    rate: float

    def __post_init__(self) -> None:
        if not self.rate >= 0 or math.isnan(self.rate):
            raise InputError(
                f"Collapse rate must be >= 0, got {self.rate!r} for {self.operator.label}"
            )


@dataclass(frozen=True)
class LindbladModel:
    """Hamiltonian plus weighted collapse operators over one layout."""

    hamiltonian: Operator
    collapse_ops: tuple[CollapseOperator, ...] = ()
    layout: HilbertLayout | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        d = self.hamiltonian.dim
        for c in self.collapse_ops:
            if c.operator.dim != d:
                raise InputError(
                    f"Collapse operator {c.operator.label} has dimension {c.operator.dim}, "
                    f"expected {d}"
                )
        if self.layout is not None and self.layout.dim != d:
            raise InputError(f"Layout dimension {self.layout.dim} does not match H ({d})")

    @property
    def dim(self) -> int:
        return self.hamiltonian.dim

    @property
    def total_rate(self) -> float:
        return float(sum(c.rate for c in self.collapse_ops))


def lindblad_rhs(rho: ComplexMatrix, model: LindbladModel) -> ComplexMatrix:
    """dρ/dt = −i[H, ρ] + Σ_k r_k (L_k ρ L_k† − ½{L_k†L_k, ρ}).

    Raises:
        InputError: If ``rho`` does not match the model dimension
    """
    if rho.shape != (model.dim, model.dim):
        raise InputError(f"State shape {rho.shape} does not match model dimension {model.dim}")
    h = model.hamiltonian.matrix
    out = -1j * (h @ rho - rho @ h)
    for c in model.collapse_ops:
        if c.rate == 0.0:
            continue
        lk = c.operator.matrix
        lk_dag = lk.conj().T
        ldl = lk_dag @ lk
        out = out + c.rate * (lk @ rho @ lk_dag - 0.5 * (ldl @ rho + rho @ ldl))
    return np.asarray(out)


def liouvillian(model: LindbladModel) -> ComplexMatrix:
    """Superoperator L with vec(dρ/dt) = L vec(ρ)."""
    d = model.dim
    ident = np.eye(d, dtype=np.complex128)
    h = model.hamiltonian.matrix
    sup = -1j * (np.kron(h, ident) - np.kron(ident, h.T))
    for c in model.collapse_ops:
        if c.rate == 0.0:
            continue
        lk = c.operator.matrix
        ldl = lk.conj().T @ lk
        sup = sup + c.rate * (
            np.kron(lk, lk.conj()) - 0.5 * np.kron(ldl, ident) - 0.5 * np.kron(ident, ldl.T)
        )
    return np.asarray(sup)


def max_frequency(model: LindbladModel) -> float:
    """Largest frequency the integrator has to resolve, in Hz.

    The Hamiltonian eigenvalue spread sets the fastest coherence; the total
    collapse rate bounds the fastest decay.
    """
    energies = np.linalg.eigvalsh(model.hamiltonian.matrix)
    spread = float(energies[-1] - energies[0]) / (2.0 * math.pi)
    return max(spread, model.total_rate)


def unitary_superoperator(u: ComplexMatrix) -> ComplexMatrix:
    """Superoperator of ρ → UρU†."""
    return np.asarray(np.kron(u, u.conj()))


def vec(rho: ComplexMatrix) -> NDArray[np.complex128]:
    return np.asarray(rho.reshape(-1))


def unvec(v: NDArray[np.complex128], d: int) -> ComplexMatrix:
    return np.asarray(v.reshape(d, d))
