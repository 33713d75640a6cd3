"""Derived parameters of the two-nucleus effective model.

All frequencies in rad/s. With L(Δ) = Δ / (Δ² + (Γ_N/2)²) and
K(Δ) = Γ_N / (Δ² + (Γ_N/2)²):

    Δ±i      = Ω ± (ω_Li + a_par,i / 2)
    δ_i      = a_par,i / 2 − (a_perp,i² / 16)·[L(Δ−i) + L(Δ+i)]
    A_wo     = Σ_i (a_perp,1 a_perp,2 / 32)·[L(Δ−i) + L(Δ+i)]
    Γ_eff,ij = (a_perp,i a_perp,j / 32)·[K(Δ+j) + K(Δ−i)], symmetrized
    J_zz     = (a_par,1 a_par,2 / 2)·L(Ω)

J_zz is the Ising term that the σ_x a_par I^z part of the hyperfine coupling
leaves at the same order as A_wo. It enters H_eff as pJ_zz I^z_1 I^z_2 and
commutes with the flip-flop, so it changes phases but never populations.
"""

from __future__ import annotations

from collections.abc import Sequence
import logging

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, model_validator

from spinbus.core.enums import PolarizationModel, ShiftModel
from spinbus.core.errors import InputError
from spinbus.effective.polarization import gamma_n as gamma_n_rate, steady_state_polarization
from spinbus.effective.validity import check_regime, emit
from spinbus.physics.register import NuclearSpin, SpinRegister
from spinbus.physics.spectral import spectral_shift

logger = logging.getLogger(__name__)

Matrix2 = tuple[tuple[float, float], tuple[float, float]]


def detunings(rabi_frequency: float, larmor: float, a_par: float) -> tuple[float, float]:
    """(Δ+, Δ−) = Ω ± (ω_L + a_par/2); warns when either vanishes."""
    offset = larmor + a_par / 2.0
    delta_plus = rabi_frequency + offset
    delta_minus = rabi_frequency - offset
    if delta_plus == 0.0 or delta_minus == 0.0:
        emit(f"NV detuning is zero (Ω={rabi_frequency!r}, ω_L + a_par/2={offset!r})")
    return delta_plus, delta_minus


def lorentzian_dispersive(delta: float, gamma_n: float) -> float:
    return delta / (delta * delta + (gamma_n / 2.0) ** 2)


def lorentzian_absorptive(delta: float, gamma_n: float) -> float:
    return gamma_n / (delta * delta + (gamma_n / 2.0) ** 2)


def effective_shift(
    a_par: float,
    a_perp: float,
    delta_plus: float,
    delta_minus: float,
    gamma_n: float,
    check: bool = True,
) -> float:
    """δ = a_par/2 − (a_perp²/16)·[L(Δ−) + L(Δ+)].

    Warns when min|Δ±| < 10·a_perp unless ``check`` is False.
    """
    if check and min(abs(delta_plus), abs(delta_minus)) < 10.0 * abs(a_perp):
        emit(
            f"min|Δ±|/a_perp = {min(abs(delta_plus), abs(delta_minus)) / abs(a_perp):.3g} < 10; "
            "shift formula outside its perturbative regime"
        )
    bracket = lorentzian_dispersive(delta_minus, gamma_n) + lorentzian_dispersive(
        delta_plus, gamma_n
    )
    return a_par / 2.0 - a_perp * a_perp / 16.0 * bracket


def pair_coupling(
    a_perp: tuple[float, float],
    delta_plus: tuple[float, float],
    delta_minus: tuple[float, float],
    gamma_n: float,
) -> float:
    """A_wo from per-nucleus detunings."""
    prefactor = a_perp[0] * a_perp[1] / 32.0
    return prefactor * sum(
        lorentzian_dispersive(dm, gamma_n) + lorentzian_dispersive(dp, gamma_n)
        for dp, dm in zip(delta_plus, delta_minus, strict=True)
    )


def ising_coupling(
    a_par: tuple[float, float], rabi_frequency: float, gamma_n: float
) -> float:
    """J_zz = (a_par,1 a_par,2 / 2)·L(Ω), same sign convention as A_wo."""
    return a_par[0] * a_par[1] / 2.0 * lorentzian_dispersive(rabi_frequency, gamma_n)


def pair_dissipator(
    a_perp: tuple[float, float],
    delta_plus: tuple[float, float],
    delta_minus: tuple[float, float],
    gamma_n: float,
) -> NDArray[np.float64]:
    """Symmetrized 2×2 Γ_eff."""
    g = np.zeros((2, 2))
    for i in range(2):
        for j in range(2):
            g[i, j] = (a_perp[i] * a_perp[j] / 32.0) * (
                lorentzian_absorptive(delta_plus[j], gamma_n)
                + lorentzian_absorptive(delta_minus[i], gamma_n)
            )
    return np.asarray(0.5 * (g + g.T))


def _pair(register: SpinRegister, pair: tuple[int, int]) -> tuple[NuclearSpin, NuclearSpin]:
    i, j = pair
    if i == j or not (0 <= i < register.n_nuclei and 0 <= j < register.n_nuclei):
        raise InputError(f"Invalid nucleus pair {pair} for a register of {register.n_nuclei}")
    return register.nuclei[i], register.nuclei[j]


def _pair_detunings(
    register: SpinRegister, spins: Sequence[NuclearSpin]
) -> tuple[tuple[float, float], tuple[float, float]]:
    pairs = [detunings(register.rabi_frequency, s.larmor, s.a_par) for s in spins]
    plus, minus = zip(*pairs, strict=True)
    return (plus[0], plus[1]), (minus[0], minus[1])


def effective_coupling(
    register: SpinRegister, gamma_n: float, pair: tuple[int, int] = (0, 1)
) -> float:
    """A_wo for nuclei ``pair`` of ``register``."""
    spins = _pair(register, pair)
    plus, minus = _pair_detunings(register, spins)
    return pair_coupling((spins[0].a_perp, spins[1].a_perp), plus, minus, gamma_n)


def effective_dissipator(
    register: SpinRegister, gamma_n: float, pair: tuple[int, int] = (0, 1)
) -> NDArray[np.float64]:
    """Γ_eff (2×2, 1/s) for nuclei ``pair`` of ``register``."""
    spins = _pair(register, pair)
    plus, minus = _pair_detunings(register, spins)
    return pair_dissipator((spins[0].a_perp, spins[1].a_perp), plus, minus, gamma_n)


class EffectiveParams(BaseModel):
    """Derived quantities of the effective nuclear model.

    Attributes:
        p_plus, p_minus, p (float): NV populations and polarization
        gamma_n (float): Γ_N in 1/s
        delta_plus, delta_minus (tuple[float, float]): Δ±i per nucleus
        delta (tuple[float, float]): Shifts δ_i per nucleus
        a_wo (float): Mediated coupling A_wo
        j_zz (float): Mediated Ising coupling J_zz
        gamma_eff (Matrix2): Symmetric Γ_eff in 1/s
        larmor (tuple[float, float]): Bare ω_Li
        t2 (tuple[float, float]): Nuclear T2
        warnings (tuple[str, ...]): Regime diagnostics raised while deriving
    """

    model_config = ConfigDict(frozen=True)

    p_plus: float
    p_minus: float
    p: float
    gamma_n: float
    delta_plus: tuple[float, float]
    delta_minus: tuple[float, float]
    delta: tuple[float, float]
    a_wo: float
    gamma_eff: Matrix2
    j_zz: float = 0.0
    larmor: tuple[float, float]
    t2: tuple[float, float]
    t_re: float
    shift_model: ShiftModel = ShiftModel.printed
    polarization_model: PolarizationModel = PolarizationModel.printed
    polarization_substituted: bool = False
    warnings: tuple[str, ...] = ()

    @model_validator(mode="after")
    def _invariants(self) -> EffectiveParams:
        if abs(self.p_plus + self.p_minus - 1.0) > 1e-12 or abs(self.p) > 1.0:
            raise ValueError("polarization must satisfy p_plus + p_minus = 1 and |p| <= 1")
        g = self.gamma_eff
        if abs(g[0][1] - g[1][0]) > 1e-12 * max(abs(g[0][1]), 1e-300):
            raise ValueError("gamma_eff must be symmetric")
        if g[0][0] < 0 or g[1][1] < 0:
            raise ValueError("gamma_eff diagonal must be non-negative")
        return self

    @property
    def pa_wo(self) -> float:
        return self.p * self.a_wo

    @property
    def pj_zz(self) -> float:
        return self.p * self.j_zz

    @property
    def gamma_eff_matrix(self) -> NDArray[np.float64]:
        return np.asarray(self.gamma_eff, dtype=np.float64)

    def as_report(self) -> dict[str, object]:
        return {
            "p_plus": self.p_plus,
            "p_minus": self.p_minus,
            "p": self.p,
            "gamma_N": self.gamma_n,
            "delta_plus": list(self.delta_plus),
            "delta_minus": list(self.delta_minus),
            "delta": list(self.delta),
            "a_wo": self.a_wo,
            "p_a_wo": self.pa_wo,
            "j_zz": self.j_zz,
            "p_j_zz": self.pj_zz,
            "gamma_eff": [list(row) for row in self.gamma_eff],
            "shift_model": self.shift_model.value,
            "polarization_model": self.polarization_model.value,
            "polarization_substituted": self.polarization_substituted,
        }


def compute_effective_params(
    register: SpinRegister,
    t_re: float,
    shift_model: ShiftModel = ShiftModel.printed,
    polarization_model: PolarizationModel = PolarizationModel.printed,
    pair: tuple[int, int] = (0, 1),
) -> EffectiveParams:
    """Evaluate every effective-model quantity for nuclei ``pair``.

    Args:
        register: Spin register (extra nuclei beyond ``pair`` are ignored)
        t_re: NV reset period in s
        shift_model: Closed-form or spectral shifts
        polarization_model: Branch formula or exact average for p
        pair: Indices of the two nuclei

    Returns:
        EffectiveParams: Derived quantities plus regime warnings
    """
    spins = _pair(register, pair)
    pol = steady_state_polarization(t_re, register.t1_rho, polarization_model)
    g_n = gamma_n_rate(t_re, register.t1_rho)
    plus, minus = _pair_detunings(register, spins)
    a_perp = (spins[0].a_perp, spins[1].a_perp)
    found = check_regime(a_perp, (*plus, *minus), g_n)

    if shift_model is ShiftModel.spectral:
        delta = (
            spectral_shift(register, pair[0], pol.p_plus),
            spectral_shift(register, pair[1], pol.p_plus),
        )
    else:
        delta = tuple(
            effective_shift(s.a_par, s.a_perp, dp, dm, g_n, check=False)
            for s, dp, dm in zip(spins, plus, minus, strict=True)
        )

    gamma_eff = pair_dissipator(a_perp, plus, minus, g_n)
    a_wo = pair_coupling(a_perp, plus, minus, g_n)
    j_zz = ising_coupling((spins[0].a_par, spins[1].a_par), register.rabi_frequency, g_n)
    logger.debug(
        f"Effective params: p={pol.p:.6g} A_wo={a_wo:.6g} J_zz={j_zz:.6g} rad/s Γ_N={g_n:.6g}/s"
    )
    return EffectiveParams(
        p_plus=pol.p_plus,
        p_minus=pol.p_minus,
        p=pol.p,
        gamma_n=g_n,
        delta_plus=plus,
        delta_minus=minus,
        delta=(float(delta[0]), float(delta[1])),
        a_wo=a_wo,
        j_zz=j_zz,
        gamma_eff=(
            (float(gamma_eff[0, 0]), float(gamma_eff[0, 1])),
            (float(gamma_eff[1, 0]), float(gamma_eff[1, 1])),
        ),
        larmor=(spins[0].larmor, spins[1].larmor),
        t2=(spins[0].t2, spins[1].t2),
        t_re=t_re,
        shift_model=shift_model,
        polarization_model=polarization_model,
        polarization_substituted=pol.substituted,
        warnings=tuple(found),
    )
