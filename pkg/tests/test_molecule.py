import math
from pathlib import Path

import numpy as np
import pytest

from spinbus.core.errors import InputError
from spinbus.physics.assembly import GeometryEntry
from spinbus.physics.constants import TWO_PI
from spinbus.protocol.molecule import target_line
from spinbus.repositories import GeometryRepositoryInterface
from spinbus.repositories.impl import load_geometry
from spinbus.schemas.run_config import load_run_config, parse_run_config
from spinbus.services.impl import MoleculeServiceImpl
from tests.conftest import CONFIGS

ENTRIES = [
    GeometryEntry(label="sensor", position_nm=(0.0, 0.0, 1.2)),
    GeometryEntry(label="c1", position_nm=(0.8, 0.0, 1.5)),
    GeometryEntry(label="c2", position_nm=(0.0, 0.9, 1.8)),
]


class FakeGeometry(GeometryRepositoryInterface):
    def __init__(self, entries: list[GeometryEntry]):
        self.entries = entries
        self.loaded: list[Path] = []

    def load(self, path: Path) -> list[GeometryEntry]:
        self.loaded.append(path)
        return list(self.entries)


def _config(tmp_path, **molecule):
    data = {
        "experiment": "molecule",
        "register": {
            "rabi_frequency": 300e3,
            "larmor": 200e3,
            "t1_rho": 1e-3,
            "geometry": "mol.xyz",
            "sensor": "sensor",
        },
        "schedule": {"duration": 1.2e-4, "wahuha": True, "wahuha_cycle": 6e-5},
        "molecule": {"omega_start": 290e3, "omega_stop": 310e3, "points": 2, **molecule},
    }
    return parse_run_config(data, base_dir=tmp_path)


def test_molecule_spectra_shapes(tmp_path):
    repo = FakeGeometry(ENTRIES)
    result = MoleculeServiceImpl(repo).molecule(_config(tmp_path), workers=1)
    assert repo.loaded == [tmp_path / "mol.xyz"]
    assert [s.label for s in result.register.nuclei] == ["sensor", "c1", "c2"]
    assert result.total.label == "total"
    assert len(result.total.signals) == 2
    assert [s.label for s in result.per_target] == ["target1", "target2"]
    for spectrum in [result.total, *result.per_target]:
        signals = np.asarray(spectrum.signals)
        assert np.all((signals >= 0) & (signals <= 1))
        assert spectrum.grid == pytest.approx((2 * np.pi * 290e3, 2 * np.pi * 310e3))


def test_molecule_total_only(tmp_path):
    result = MoleculeServiceImpl(FakeGeometry(ENTRIES)).molecule(
        _config(tmp_path, per_target=False), workers=1
    )
    assert result.per_target == []


def test_molecule_needs_section(tmp_path):
    config = _config(tmp_path).model_copy(update={"molecule": None})
    with pytest.raises(InputError):
        MoleculeServiceImpl(FakeGeometry(ENTRIES)).molecule(config, workers=1)


def test_molecule_report_carries_lines_and_budget(tmp_path):
    result = MoleculeServiceImpl(FakeGeometry(ENTRIES)).molecule(_config(tmp_path), workers=1)
    assert [line.label for line in result.lines] == ["c1", "c2"]
    report = result.as_report()
    assert report["nuclei"] == ["sensor", "c1", "c2"]
    assert {"c1_resonance", "c1_p_a_wo", "c1_dip", "c2_dip"} <= set(report)
    # one readout per shot: T = 0.12 ms is shorter than the 1 ms reset period
    assert report["budget_readouts_per_shot"] == 1
    assert report["budget_total_time"] == pytest.approx(15 * 225 * 1.2e-4)


def _valine_register():
    config = load_run_config(CONFIGS / "valine.toml")
    register = config.spin_register.to_register(load_geometry(CONFIGS / "valine.xyz"))
    grid = config.molecule.omega_grid()
    return register, (grid[0], grid[-1])


def test_valine_lines_are_distinct_and_in_coupling_window():
    register, omega_range = _valine_register()
    lines = [target_line(register, k, omega_range) for k in (1, 2, 3)]
    resonances = [line.resonance for line in lines]
    assert all(omega_range[0] < w < omega_range[1] for w in resonances)
    ordered = sorted(resonances)
    assert all(b - a > TWO_PI * 0.3e3 for a, b in zip(ordered, ordered[1:], strict=False))
    for line in lines:
        assert 8.0 <= line.p_a_wo / TWO_PI <= 32.0


def test_valine_lines_vanish_on_the_other_transition():
    register, omega_range = _valine_register()
    config = load_run_config(CONFIGS / "valine.toml")
    flipped = config.spin_register.model_copy(update={"nv_transition": 1}).to_register(
        load_geometry(CONFIGS / "valine.xyz")
    )
    for k in (1, 2, 3):
        assert register.nuclei[k].a_par == pytest.approx(-flipped.nuclei[k].a_par)
        assert math.isnan(target_line(flipped, k, omega_range).resonance)
