import textwrap

import orjson
import pytest

from spinbus.config import Settings
from spinbus.core.enums import ExitCode, Experiment
from spinbus.main import build_parser, main, resolve_prefix, resolve_workers
from spinbus.schemas.run_config import parse_run_config

PAIR = """\
[register]
rabi_frequency = 300e3
larmor = 200e3
t1_rho = 1e-3

[[register.nuclei]]
a_par = 1.99e3
a_perp = 2.01e3

[[register.nuclei]]
a_par = 2.00e3
a_perp = 5.01e3

[schedule]
duration = 1e-4
t_re = 5e-5
output_points = 5
"""

MINIMAL = {
    "register": {
        "rabi_frequency": 1.0,
        "larmor": 1.0,
        "t1_rho": 1.0,
        "nuclei": [{"a_par": 0.0, "a_perp": 0.0}],
    },
    "schedule": {"duration": 1.0},
}


@pytest.fixture
def workdir(tmp_path, monkeypatch, clean_container):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("SPINBUS_WORKERS", raising=False)
    return tmp_path


def _config(path, text: str, extra: str = ""):
    path.write_text(textwrap.dedent(text) + extra)
    return path


def _meta(path) -> dict:
    return orjson.loads(path.read_bytes())


def test_schema_to_stdout(workdir, capsys):
    assert main(["schema"]) == 0
    schema = orjson.loads(capsys.readouterr().out)
    assert "register" in schema["properties"]


def test_schema_to_file(workdir):
    assert main(["schema", "--out", "schema.json"]) == 0
    assert "properties" in _meta(workdir / "schema.json")


def test_simulate_writes_csv_and_sidecar(workdir):
    config = _config(workdir / "pair.toml", PAIR)
    assert main(["simulate", "--config", str(config), "--out", "run/pair", "--workers", "1"]) == 0
    lines = (workdir / "run" / "pair.csv").read_text().splitlines()
    assert lines[0] == "t_s,P_uu,P_ud,P_du,P_dd"
    assert len(lines) == 6
    meta = _meta(workdir / "run" / "pair.meta.json")
    assert meta["success"] is True
    assert meta["meta"]["command"] == "simulate"
    assert meta["meta"]["workers"] == 1
    assert meta["meta"]["run_id"]
    assert meta["data"]["points"] == 5
    assert isinstance(meta["warnings"], list)


def test_outputs_are_reproducible(workdir):
    config = _config(workdir / "pair.toml", PAIR)
    main(["simulate", "--config", str(config), "--out", "a"])
    main(["simulate", "--config", str(config), "--out", "b"])
    assert (workdir / "a.csv").read_bytes() == (workdir / "b.csv").read_bytes()
    meta_a, meta_b = _meta(workdir / "a.meta.json"), _meta(workdir / "b.meta.json")
    assert meta_a["meta"]["config_hash"] == meta_b["meta"]["config_hash"]
    assert meta_a["meta"]["run_id"] != meta_b["meta"]["run_id"]


def test_default_prefix_is_config_stem(workdir):
    config = _config(workdir / "pair.toml", PAIR)
    assert main(["simulate", "--config", str(config)]) == 0
    assert (workdir / "pair.csv").exists()


def test_effective_writes_report(workdir):
    config = _config(workdir / "pair.toml", PAIR)
    assert main(["effective", "--config", str(config), "--out", "eff"]) == 0
    report = (workdir / "eff.report.txt").read_text()
    assert "p_a_wo" in report
    assert "sensitivity_exact" in report
    assert (workdir / "eff.csv").exists()


def test_fidelity_on_uncoupled_pair(workdir):
    text = PAIR
    for old in ("a_par = 1.99e3", "a_par = 2.00e3"):
        text = text.replace(old, "a_par = 0.0")
    for old in ("a_perp = 2.01e3", "a_perp = 5.01e3"):
        text = text.replace(old, "a_perp = 0.0")
    extra = "\n[fidelity]\nframe = \"local\"\nduration = 5e-5\ntrim = false\n"
    config = _config(workdir / "gate.toml", text, extra)
    assert main(["fidelity", "--config", str(config), "--out", "gate"]) == 0
    meta = _meta(workdir / "gate.meta.json")
    assert meta["data"]["frame"] == "local"
    assert meta["data"]["fidelity"] > 1 - 1e-5


def test_sweep_with_variants(workdir):
    extra = textwrap.dedent(
        """
        [sweep]
        parameter = "rabi_frequency"
        values = [290e3, 310e3]

        [[sweep.variants]]
        name = "short"
        t1_rho = 5e-4

        [[sweep.variants]]
        name = "long"
        t1_rho = 2e-3
        """
    )
    config = _config(workdir / "scan.toml", PAIR, extra)
    assert main(["sweep", "--config", str(config), "--out", "scan", "--workers", "1"]) == 0
    lines = (workdir / "scan_short.csv").read_text().splitlines()
    assert "# label=short" in lines
    assert lines[-3] == "param,rabi_frequency,S"
    assert (workdir / "scan_long.csv").exists()
    assert _meta(workdir / "scan.meta.json")["data"]["failures"] == {}


def test_sweep_without_section_is_an_input_error(workdir):
    config = _config(workdir / "pair.toml", PAIR)
    assert main(["sweep", "--config", str(config)]) == int(ExitCode.schema)


def test_invalid_config_exits_two(workdir, capsys):
    config = _config(workdir / "bad.toml", PAIR.replace("duration = 1e-4", "duration = -1.0"))
    assert main(["simulate", "--config", str(config)]) == 2
    line = orjson.loads(capsys.readouterr().err.splitlines()[-1])
    assert line["errorcode"] == "SCHEMA_ERROR"
    assert line["errorField"] == "schedule.duration"
    assert not (workdir / "bad.csv").exists()


def test_missing_config_exits_two(workdir):
    assert main(["simulate", "--config", "nope.toml"]) == 2


def test_worker_precedence(workdir, monkeypatch):
    config = parse_run_config({**MINIMAL, "workers": 2})
    assert resolve_workers(5, config, Settings(workers=3)) == 5
    assert resolve_workers(None, config, Settings(workers=3)) == 3
    assert resolve_workers(None, config, Settings()) == 2
    monkeypatch.setenv("SPINBUS_WORKERS", "4")
    assert resolve_workers(None, config, Settings()) == 4
    no_workers = config.model_copy(update={"workers": None})
    monkeypatch.delenv("SPINBUS_WORKERS")
    assert resolve_workers(None, no_workers, Settings()) >= 1


def test_prefix_precedence(workdir):
    config = parse_run_config({**MINIMAL, "out": "cfg/out"})
    assert str(resolve_prefix("flag", config, workdir / "run.toml")) == "flag"
    assert str(resolve_prefix(None, config, workdir / "run.toml")) == "cfg/out"
    bare = config.model_copy(update={"out": None})
    assert str(resolve_prefix(None, bare, workdir / "run.toml")) == "run"


@pytest.mark.parametrize("experiment", list(Experiment))
def test_every_experiment_shares_config_and_workers(experiment):
    args = build_parser().parse_args([experiment.value, "--config", "run.toml", "--workers", "3"])
    assert str(args.config) == "run.toml"
    assert args.workers == 3
    assert args.out is None


def test_experiments_require_config_and_schema_takes_none():
    parser = build_parser()
    with pytest.raises(SystemExit):
        parser.parse_args(["simulate"])
    with pytest.raises(SystemExit):
        parser.parse_args(["schema", "--config", "run.toml"])
