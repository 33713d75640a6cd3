"""Sensitivity figure of merit of the nuclear sensor.

With t_re = T1ρ the mediated coupling pA_wo falls as 1/Δ while the coherence
time 1/Γ_eff grows as Δ², so the accumulated signal per √time,
pA_wo·√(1/Γ_eff), is independent of the detuning and close to
(a_perp,target / 4)·√T1ρ.
"""

from __future__ import annotations

import math

from pydantic import BaseModel, ConfigDict

from spinbus.core.enums import PolarizationModel
from spinbus.effective.params import compute_effective_params
from spinbus.physics.register import SpinRegister


class SensitivityEstimate(BaseModel):
    """Both forms of the figure of merit, in rad·s^{-1/2}."""

    model_config = ConfigDict(frozen=True)

    exact: float
    approximate: float
    ratio: float
    p_a_wo: float
    gamma_eff_sensor: float


def approximate_sensitivity(a_perp_target: float, t1_rho: float) -> float:
    """(a_perp,target / 4)·√T1ρ."""
    return abs(a_perp_target) / 4.0 * math.sqrt(t1_rho)


def sensitivity_figure(pa_wo: float, gamma_eff_sensor: float) -> float:
    """pA_wo·√(1/Γ_eff) (inf when the sensor is not damped at all)."""
    if pa_wo == 0.0:
        return 0.0
    if gamma_eff_sensor <= 0.0:
        return math.inf
    return abs(pa_wo) / math.sqrt(gamma_eff_sensor)


def sensitivity_estimate(
    register: SpinRegister,
    sensor: int = 0,
    target: int = 1,
    polarization_model: PolarizationModel = PolarizationModel.printed,
) -> SensitivityEstimate:
    """Evaluate the figure of merit at t_re = T1ρ for ``sensor``/``target``."""
    params = compute_effective_params(
        register, register.t1_rho, polarization_model=polarization_model, pair=(sensor, target)
    )
    gamma_sensor = params.gamma_eff[0][0]
    exact = sensitivity_figure(params.pa_wo, gamma_sensor)
    approx = approximate_sensitivity(register.nuclei[target].a_perp, register.t1_rho)
    return SensitivityEstimate(
        exact=exact,
        approximate=approx,
        ratio=exact / approx if approx > 0 else math.nan,
        p_a_wo=params.pa_wo,
        gamma_eff_sensor=gamma_sensor,
    )
