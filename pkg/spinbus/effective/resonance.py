"""Energy-matching condition δ_sensor = δ_target.

``resonance_solve`` finds the Rabi frequency at which the closed-form shifts
coincide. ``trim_to_resonance`` instead moves the target's a_par so the exact
(spectral) nuclear splittings coincide at the register's own Ω, which is the
reference point for detuning scans against exact simulation.
"""

from __future__ import annotations

import logging

from pydantic import BaseModel, ConfigDict
from scipy.optimize import bisect, brentq

from spinbus.core.enums import PolarizationModel
from spinbus.core.errors import InputError, NoRootError
from spinbus.effective.params import detunings, effective_shift
from spinbus.effective.polarization import gamma_n as gamma_n_rate, steady_state_polarization
from spinbus.physics.register import NuclearSpin, SpinRegister
from spinbus.physics.spectral import spectral_splitting

logger = logging.getLogger(__name__)

RESONANCE_RTOL: float = 1e-9
_BRACKET_EXPANSIONS: int = 4


class ResonanceResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    rabi_frequency: float
    degenerate: bool = False
    residual: float = 0.0


def shift_mismatch(
    sensor: NuclearSpin, target: NuclearSpin, rabi_frequency: float, gamma_n: float
) -> float:
    """δ_sensor(Ω) − δ_target(Ω) from the closed-form shift."""
    values = []
    for spin in (sensor, target):
        dp, dm = detunings(rabi_frequency, spin.larmor, spin.a_par)
        values.append(effective_shift(spin.a_par, spin.a_perp, dp, dm, gamma_n, check=False))
    return values[0] - values[1]


def resonance_solve(
    sensor: NuclearSpin,
    target: NuclearSpin,
    omega_range: tuple[float, float],
    t_re: float,
    t1_rho: float,
) -> ResonanceResult:
    """Rabi frequency Ω* in ``omega_range`` with δ_sensor(Ω*) = δ_target(Ω*).

    Bisection to relative tolerance 1e-9. The mismatch depends on Ω only at
    second order in a_perp/Δ, so Ω* is insensitive to small Rabi drifts.

    Raises:
        NoRootError: If the mismatch does not change sign on the range
    """
    lo, hi = sorted(omega_range)
    if not 0 < lo < hi:
        raise InputError(f"Invalid Ω range {omega_range}")
    g_n = gamma_n_rate(t_re, t1_rho)

    def mismatch(omega: float) -> float:
        return shift_mismatch(sensor, target, omega, g_n)

    f_lo, f_mid, f_hi = mismatch(lo), mismatch(0.5 * (lo + hi)), mismatch(hi)
    scale = max(abs(sensor.a_par), abs(target.a_par), sensor.a_perp, target.a_perp, 1e-300)
    if max(abs(f_lo), abs(f_mid), abs(f_hi)) <= 1e-12 * scale:
        logger.info("Shifts coincide over the whole Ω range; returning the midpoint")
        return ResonanceResult(rabi_frequency=0.5 * (lo + hi), degenerate=True)
    if f_lo == 0.0:
        return ResonanceResult(rabi_frequency=lo)
    if f_hi == 0.0:
        return ResonanceResult(rabi_frequency=hi)
    if f_lo * f_hi > 0:
        raise NoRootError(
            "δ_sensor − δ_target does not change sign on the Ω range",
            extra={"omega_lo": lo, "omega_hi": hi, "mismatch_lo": f_lo, "mismatch_hi": f_hi},
        )
    root = float(bisect(mismatch, lo, hi, xtol=1e-300, rtol=RESONANCE_RTOL, maxiter=500))
    logger.info(
        f"Resonance at Ω = {root:.9g} rad/s; the condition depends on Ω only at second order"
    )
    return ResonanceResult(rabi_frequency=root, residual=mismatch(root))


def trim_to_resonance(
    register: SpinRegister,
    sensor: int = 0,
    target: int = 1,
    t_re: float | None = None,
    polarization_model: PolarizationModel = PolarizationModel.printed,
) -> SpinRegister:
    """Register with the target's a_par adjusted so exact splittings coincide.

    Raises:
        NoRootError: If no a_par within a few bracket widths matches
    """
    t_re = t_re or register.t1_rho
    p_reset = steady_state_polarization(t_re, register.t1_rho, polarization_model).p_plus
    s_spin, t_spin = register.nuclei[sensor], register.nuclei[target]
    goal = spectral_splitting(register, sensor, p_reset)

    def mismatch(a_par: float) -> float:
        trial = register.replace_nucleus(target, t_spin.with_a_par(a_par))
        return spectral_splitting(trial, target, p_reset) - goal

    a0 = t_spin.a_par
    width = 0.5 * max(abs(s_spin.a_par), abs(a0), s_spin.a_perp, t_spin.a_perp, 1.0)
    for _ in range(_BRACKET_EXPANSIONS):
        lo, hi = a0 - width, a0 + width
        f_lo, f_hi = mismatch(lo), mismatch(hi)
        if f_lo * f_hi <= 0:
            break
        width *= 2.0
    else:
        raise NoRootError(
            "Could not bracket the target a_par that matches the sensor splitting",
            extra={"a_lo": lo, "a_hi": hi, "mismatch_lo": f_lo, "mismatch_hi": f_hi},
        )
    a_star = float(brentq(mismatch, lo, hi, xtol=1e-12, rtol=1e-14, maxiter=200))
    logger.debug(f"Trimmed nucleus {target} a_par {a0:.9g} -> {a_star:.9g} rad/s")
    return register.replace_nucleus(target, t_spin.with_a_par(a_star))


def spectral_resonance(
    register: SpinRegister,
    omega_range: tuple[float, float],
    sensor: int = 0,
    target: int = 1,
    t_re: float | None = None,
    polarization_model: PolarizationModel = PolarizationModel.printed,
) -> ResonanceResult:
    """Rabi frequency in ``omega_range`` where the exact splittings coincide.

    Counterpart of ``resonance_solve`` for strongly coupled sensors, where the
    closed-form shift is no longer accurate. Couplings are left untouched.

    Raises:
        NoRootError: If the exact mismatch does not change sign on the range
    """
    lo, hi = sorted(omega_range)
    if not 0 < lo < hi:
        raise InputError(f"Invalid Ω range {omega_range}")
    t_re = t_re or register.t1_rho
    p_reset = steady_state_polarization(t_re, register.t1_rho, polarization_model).p_plus

    def mismatch(omega: float) -> float:
        trial = register.with_updates(rabi_frequency=omega)
        return spectral_splitting(trial, sensor, p_reset) - spectral_splitting(
            trial, target, p_reset
        )

    f_lo, f_hi = mismatch(lo), mismatch(hi)
    if f_lo * f_hi > 0:
        raise NoRootError(
            "Exact sensor and target splittings do not cross on the Ω range",
            extra={"omega_lo": lo, "omega_hi": hi, "mismatch_lo": f_lo, "mismatch_hi": f_hi},
        )
    root = float(brentq(mismatch, lo, hi, xtol=1e-9, rtol=RESONANCE_RTOL, maxiter=200))
    logger.debug(f"Exact resonance of nuclei {sensor}/{target} at Ω = {root:.9g} rad/s")
    return ResonanceResult(rabi_frequency=root, residual=mismatch(root))
