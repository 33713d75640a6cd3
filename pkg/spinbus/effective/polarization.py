"""NV quasi-steady polarization between resets.

x = t_re / T1ρ. The two-branch approximation

    x ≤ 1:  p_+ = 1 − e^{−x} / (2x)
    x > 1:  p_+ = ½ − (1 − e^{−1}) / (2x)

is compared against the exact time average of the reset-state population,
p̄ = ½ + (1 − e^{−x}) / (2x). Both agree at x = 1. The branch value is read as
the population of one dressed state; the larger of it and its complement is
assigned to the reset state |−x⟩, so p = p_+ − p_− ≥ 0.
"""

from __future__ import annotations

import logging
import math
import warnings

from pydantic import BaseModel, ConfigDict

from spinbus.core.enums import PolarizationModel
from spinbus.core.errors import InputError, ValidityWarning

logger = logging.getLogger(__name__)

BRANCH_SWITCH_RATIO: float = 0.1


class NvPolarization(BaseModel):
    """Dressed-state populations of the NV between resets.

    Attributes:
        p_plus (float): Population of the reset state |−x⟩
        p_minus (float): Population of the other dressed state
        p (float): |p_plus − p_minus|
        substituted (bool): The branch formula was replaced by the exact average
    """

    model_config = ConfigDict(frozen=True)

    p_plus: float
    p_minus: float
    p: float
    substituted: bool = False


def exact_reset_population(t_re: float, t1_rho: float) -> float:
    """Time-averaged population of |−x⟩ between resets, ½ + (1 − e^{−x})/(2x)."""
    x = t_re / t1_rho
    return 0.5 + (-math.expm1(-x)) / (2.0 * x)


def branch_reset_population(t_re: float, t1_rho: float) -> float:
    x = t_re / t1_rho
    if x <= 1.0:
        return 1.0 - math.exp(-x) / (2.0 * x)
    return 0.5 - (1.0 - math.exp(-1.0)) / (2.0 * x)


def _from_majority(p_plus: float, substituted: bool) -> NvPolarization:
    p_minus = 1.0 - p_plus
    return NvPolarization(
        p_plus=p_plus, p_minus=p_minus, p=abs(p_plus - p_minus), substituted=substituted
    )


def steady_state_polarization(
    t_re: float,
    t1_rho: float,
    model: PolarizationModel = PolarizationModel.printed,
) -> NvPolarization:
    """Quasi-steady NV populations for reset period ``t_re``.

    Below x = 0.1, or whenever the branch value leaves [0, 1], the exact
    average is substituted and a ValidityWarning is emitted.

    Raises:
        InputError: If either time is not positive
    """
    if not (t_re > 0 and t1_rho > 0):
        raise InputError(f"t_re and t1_rho must be positive (got {t_re!r}, {t1_rho!r})")
    exact = exact_reset_population(t_re, t1_rho)
    if model is PolarizationModel.exact:
        return _from_majority(exact, False)
    x = t_re / t1_rho
    branch = branch_reset_population(t_re, t1_rho)
    if x < BRANCH_SWITCH_RATIO or not 0.0 <= branch <= 1.0:
        message = (
            f"Branch polarization formula gives p_+={branch:.6g} at t_re/T1rho={x:.3g}; "
            f"using the exact average {exact:.6g}"
        )
        logger.warning(message)
        warnings.warn(message, ValidityWarning, stacklevel=2)
        return _from_majority(exact, True)
    # the second branch evaluates to the minority population
    return _from_majority(max(branch, 1.0 - branch), False)


def gamma_n(t_re: float, t1_rho: float) -> float:
    """Γ_N = 1/T1ρ + 1/t_re."""
    return 1.0 / t1_rho + 1.0 / t_re
