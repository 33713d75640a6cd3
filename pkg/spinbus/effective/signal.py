"""Closed-form sensing signal and effective-model trajectories."""

from __future__ import annotations

from collections.abc import Sequence
import math

import numpy as np
from numpy.typing import NDArray

from spinbus.core.enums import PolarizationModel, ShiftModel
from spinbus.dynamics.observables import Observable, computational_populations
from spinbus.dynamics.propagator import Trajectory, propagate
from spinbus.dynamics.schedule import make_schedule
from spinbus.effective.model import NUCLEAR_PAIR, model_from_params
from spinbus.effective.params import EffectiveParams, compute_effective_params
from spinbus.physics.operators import ComplexMatrix, nuclear_ket, projector
from spinbus.physics.register import SpinRegister


def closed_form_signal(t: float, pa_wo: float, delta_1: float, delta_2: float) -> float:
    """S(t) = 1 − (pA)² sin²((t/2)·√((pA)² + Δδ²)) / (2[(pA)² + Δδ²]).

    Bounded in [½, 1]; S = 1 when both pA_wo and δ1 − δ2 vanish.
    """
    mismatch = delta_1 - delta_2
    denom = pa_wo * pa_wo + mismatch * mismatch
    if denom == 0.0:
        return 1.0
    rate = math.sqrt(denom)
    return 1.0 - pa_wo * pa_wo * math.sin(0.5 * t * rate) ** 2 / (2.0 * denom)


def predicted_dip(pa_wo: float, t: float) -> float:
    """On-resonance dip S^d = 1 − ½ sin²(pA_wo·t/2)."""
    return 1.0 - 0.5 * math.sin(0.5 * pa_wo * t) ** 2


def transfer_time(params: EffectiveParams) -> float:
    """Full flip-flop time t_g = π / (2|pA_wo|) of H_eff (inf if uncoupled)."""
    if params.pa_wo == 0.0:
        return math.inf
    return math.pi / (2.0 * abs(params.pa_wo))


def product_state(bits: str) -> ComplexMatrix:
    return projector(nuclear_ket(bits))


def effective_trajectory(
    register: SpinRegister,
    t_re: float,
    duration: float,
    initial: ComplexMatrix | str = "du",
    output_times: Sequence[float] | NDArray[np.float64] | None = None,
    shift_model: ShiftModel = ShiftModel.spectral,
    polarization_model: PolarizationModel = PolarizationModel.printed,
    observables: Sequence[Observable] | None = None,
    params: EffectiveParams | None = None,
) -> Trajectory:
    """Propagate the effective pair model with the exact-model engine.

    Args:
        register: Register whose nuclei 0 and 1 form the pair
        t_re: Reset period entering p and Γ_N
        duration: Evolution time in s
        initial: Nuclear pair state or a ``u``/``d`` label
        output_times: Recording grid (defaults to 0 and T)
        shift_model: Shift model (spectral by default so it can be compared
            with exact simulation)
        polarization_model: Polarization model
        observables: Defaults to the four product-state populations
        params: Precomputed parameters, skips the derivation when given
    """
    params = params or compute_effective_params(register, t_re, shift_model, polarization_model)
    model = model_from_params(params)
    rho0 = product_state(initial) if isinstance(initial, str) else initial
    obs = list(observables) if observables is not None else computational_populations(NUCLEAR_PAIR)
    schedule = make_schedule(duration, None)
    return propagate(rho0, model, schedule, obs, output_times)
