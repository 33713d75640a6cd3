"""Exact nuclear splittings from dense diagonalization.

For each nucleus the NV + single-nucleus Hamiltonian (4×4) is diagonalized.
Eigenstates are matched one-to-one to the product states |s, ↑⟩ and |s, ↓⟩ by
maximum total overlap (Hungarian assignment, so degenerate eigenvectors never
share a label), giving the nuclear splitting conditional on the NV dressed state s.
The nucleus precesses at the population-weighted mean of the two.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import eigh
from scipy.optimize import linear_sum_assignment

from spinbus.physics.hamiltonian import build_full_hamiltonian
from spinbus.physics.register import SpinRegister


def assign_product_states(vectors: NDArray[np.complex128]) -> NDArray[np.intp]:
    """Eigenvector column for each product-basis row, one-to-one."""
    overlap = np.abs(vectors) ** 2
    _, columns = linear_sum_assignment(overlap, maximize=True)
    return np.asarray(columns)


def conditional_splittings(register: SpinRegister, index: int) -> tuple[float, float]:
    """Nuclear splittings (E_↑ − E_↓) with the NV in |+x⟩ and in |−x⟩, rad/s."""
    single = register.subset([index])
    h = build_full_hamiltonian(single).matrix
    energies, vectors = eigh(h)
    # rows: product basis |+↑, +↓, −↑, −↓⟩
    e = energies[assign_product_states(vectors)]
    split_plus = float(e[0] - e[1])
    split_minus = float(e[2] - e[3])
    return split_plus, split_minus


def spectral_splitting(register: SpinRegister, index: int, p_reset: float) -> float:
    """Effective Larmor frequency of nucleus ``index`` given the NV populations.

    Args:
        register: Spin register
        index: Nucleus index
        p_reset: Population of the reset state |−x⟩

    Returns:
        float: p_reset·split(−x) + (1 − p_reset)·split(+x), rad/s
    """
    split_plus, split_minus = conditional_splittings(register, index)
    return p_reset * split_minus + (1.0 - p_reset) * split_plus


def spectral_shift(register: SpinRegister, index: int, p_reset: float) -> float:
    """Exact counterpart of δ_i: weighted splitting minus the bare ω_L."""
    return spectral_splitting(register, index, p_reset) - register.nuclei[index].larmor
