"""Shared registers and helpers for the test suite."""

from __future__ import annotations

from pathlib import Path

import pytest

from spinbus.core.di_container import get_container
from spinbus.physics.constants import TWO_PI
from spinbus.physics.register import NuclearSpin, SpinRegister

REPO_ROOT = Path(__file__).resolve().parents[1]
CONFIGS = REPO_ROOT / "configs"

KHZ = TWO_PI * 1e3


def spin(
    a_par_khz: float, a_perp_khz: float, larmor_khz: float = 200.0, **kw: object
) -> NuclearSpin:
    return NuclearSpin.from_components(a_par_khz * KHZ, a_perp_khz * KHZ, larmor_khz * KHZ, **kw)


@pytest.fixture
def gate_pair() -> SpinRegister:
    """Nuclei 1 and 2 of the three-nucleus gate register."""
    return SpinRegister(
        nuclei=(spin(1.99, 2.01, label="n1"), spin(2.00, 5.01, label="n2")),
        rabi_frequency=300 * KHZ,
        t1_rho=1e-3,
    )


@pytest.fixture
def gate_three(gate_pair: SpinRegister) -> SpinRegister:
    return gate_pair.model_copy(
        update={"nuclei": (*gate_pair.nuclei, spin(2.30, 2.01, label="n3"))}
    )


@pytest.fixture
def bandwidth_register() -> SpinRegister:
    return SpinRegister(
        nuclei=(spin(0.0, 10.0, label="sensor"), spin(0.0, 1.0, label="target", t2=5e-3)),
        rabi_frequency=400 * KHZ,
        t1_rho=1e-3,
    )


@pytest.fixture
def uncoupled_pair() -> SpinRegister:
    return SpinRegister(
        nuclei=(spin(0.0, 0.0), spin(0.0, 0.0)),
        rabi_frequency=300 * KHZ,
        t1_rho=1e-3,
    )


@pytest.fixture
def clean_container():
    container = get_container()
    container.clear()
    yield container
    container.clear()
