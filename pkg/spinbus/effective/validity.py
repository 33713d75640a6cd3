"""Regime checks for the perturbative effective model."""

from __future__ import annotations

from collections.abc import Sequence
import logging
import warnings

from spinbus.core.errors import ValidityWarning

logger = logging.getLogger(__name__)

PERTURBATIVE_RATIO: float = 0.1


def emit(message: str) -> str:
    logger.warning(message)
    warnings.warn(message, ValidityWarning, stacklevel=3)
    return message


def check_regime(
    a_perp: Sequence[float],
    detunings: Sequence[float],
    gamma_n: float | None = None,
) -> list[str]:
    """Warnings for couplings or Γ_N that are not small against min |Δ±|."""
    found: list[str] = []
    min_delta = min(abs(d) for d in detunings)
    if min_delta == 0.0:
        found.append(emit("NV detuning Δ is exactly zero; the effective model is invalid here"))
        return found
    ratio = max(abs(a) for a in a_perp) / min_delta
    if ratio > PERTURBATIVE_RATIO:
        found.append(
            emit(f"max(a_perp)/min|Δ| = {ratio:.3g} exceeds {PERTURBATIVE_RATIO}; "
                 "second-order shifts and couplings are unreliable")
        )
    if gamma_n is not None and gamma_n > PERTURBATIVE_RATIO * min_delta:
        found.append(
            emit(
                f"Γ_N = {gamma_n:.3g}/s exceeds min|Δ|/10 = "
                f"{PERTURBATIVE_RATIO * min_delta:.3g}/s"
            )
        )
    return found
