"""Spin-1/2 operators and tensor-product embedding.

Half-Pauli convention throughout: every spin component has eigenvalues ±1/2
and I^± = I^x ± iI^y. The NV dressed two-level system uses the same matrices
with basis order (|+x⟩, |−x⟩), so σ_z|±x⟩ = ±½|±x⟩. Nuclear basis order is
(|↑⟩, |↓⟩). In composite spaces the NV, when present, is subsystem 0 and
nucleus i is subsystem i+1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np
from numpy.typing import NDArray

from spinbus.core.errors import InputError

ComplexMatrix = NDArray[np.complex128]

ID2: ComplexMatrix = np.eye(2, dtype=np.complex128)
SX: ComplexMatrix = 0.5 * np.array([[0, 1], [1, 0]], dtype=np.complex128)
SY: ComplexMatrix = 0.5 * np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SZ: ComplexMatrix = 0.5 * np.array([[1, 0], [0, -1]], dtype=np.complex128)
SP: ComplexMatrix = np.array([[0, 1], [0, 0]], dtype=np.complex128)
SM: ComplexMatrix = np.array([[0, 0], [1, 0]], dtype=np.complex128)

UP: NDArray[np.complex128] = np.array([1, 0], dtype=np.complex128)
DOWN: NDArray[np.complex128] = np.array([0, 1], dtype=np.complex128)
NV_PLUS: NDArray[np.complex128] = UP
NV_MINUS: NDArray[np.complex128] = DOWN

# |−x⟩⟨−x|, the NV state after every reset
NV_RESET_STATE: ComplexMatrix = np.outer(NV_MINUS, NV_MINUS.conj())


@dataclass(frozen=True)
class Operator:
    """Square complex matrix over a composite space, with a label."""

    matrix: ComplexMatrix
    label: str = ""

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    def hermiticity_error(self) -> float:
        """max |H − H†| relative to max |H| (0 for the zero matrix)."""
        scale = float(np.max(np.abs(self.matrix))) if self.matrix.size else 0.0
        if scale == 0.0:
            return 0.0
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T))) / scale

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return self.hermiticity_error() < tol

    def __add__(self, other: Operator) -> Operator:
        return Operator(self.matrix + other.matrix, self.label or other.label)


@dataclass(frozen=True)
class HilbertLayout:
    """Which subsystems a composite space holds.

    Attributes:
        n_nuclei (int): Number of spin-1/2 nuclei
        has_nv (bool): Whether subsystem 0 is the NV dressed spin
    """

    n_nuclei: int
    has_nv: bool = True

    @property
    def n_sites(self) -> int:
        return self.n_nuclei + (1 if self.has_nv else 0)

    @property
    def dim(self) -> int:
        return int(2**self.n_sites)

    @property
    def nuclear_dim(self) -> int:
        return int(2**self.n_nuclei)

    def nucleus_site(self, index: int) -> int:
        if not 0 <= index < self.n_nuclei:
            raise InputError(f"Nucleus index {index} out of range for {self.n_nuclei} nuclei")
        return index + (1 if self.has_nv else 0)

    def nv_op(self, op: ComplexMatrix) -> ComplexMatrix:
        if not self.has_nv:
            raise InputError("Layout has no NV subsystem")
        return embed(op, 0, self.n_sites)

    def nuclear_op(self, op: ComplexMatrix, index: int) -> ComplexMatrix:
        return embed(op, self.nucleus_site(index), self.n_sites)

    def nuclear_pair(
        self, op_i: ComplexMatrix, i: int, op_j: ComplexMatrix, j: int
    ) -> ComplexMatrix:
        factors = [ID2] * self.n_sites
        factors[self.nucleus_site(i)] = op_i
        factors[self.nucleus_site(j)] = op_j
        return kron_all(factors)


def kron_all(factors: list[ComplexMatrix]) -> ComplexMatrix:
    return reduce(np.kron, factors, np.ones((1, 1), dtype=np.complex128))


def embed(op: ComplexMatrix, site: int, n_sites: int) -> ComplexMatrix:
    """Place a single-site operator at ``site`` with identities elsewhere."""
    factors = [ID2] * n_sites
    factors[site] = op
    return kron_all(factors)


def vector_dot_spin(vector: NDArray[np.float64] | tuple[float, float, float]) -> ComplexMatrix:
    """v·I for a single spin-1/2."""
    vx, vy, vz = (float(c) for c in vector)
    return vx * SX + vy * SY + vz * SZ


def nuclear_ket(bits: str) -> NDArray[np.complex128]:
    """Product ket from a string of ``u``/``d`` (or ``↑``/``↓``), nucleus 0 first."""
    mapping = {"u": UP, "d": DOWN, "↑": UP, "↓": DOWN}
    try:
        kets = [mapping[b] for b in bits]
    except KeyError as exc:
        raise InputError(f"Invalid nuclear state label '{bits}'") from exc
    return reduce(np.kron, kets, np.ones(1, dtype=np.complex128))


def projector(ket: NDArray[np.complex128]) -> ComplexMatrix:
    return np.outer(ket, ket.conj())


def partial_trace_nv(rho: ComplexMatrix) -> ComplexMatrix:
    """Trace out subsystem 0 (the NV) of a composite density matrix."""
    d = rho.shape[0] // 2
    blocks = rho.reshape(2, d, 2, d)
    return np.asarray(blocks[0, :, 0, :] + blocks[1, :, 1, :])


def partial_trace_keep(rho: ComplexMatrix, keep: list[int], n_sites: int) -> ComplexMatrix:
    """Reduced density matrix of the sites in ``keep`` (ascending order)."""
    shape = [2] * (2 * n_sites)
    tensor = rho.reshape(shape)
    traced = [s for s in range(n_sites) if s not in keep]
    for offset, site in enumerate(traced):
        axis = site - offset
        tensor = np.trace(tensor, axis1=axis, axis2=axis + n_sites - offset)
    k = 2 ** len(keep)
    return np.asarray(tensor.reshape(k, k))
