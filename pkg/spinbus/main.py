"""Command-line entry point.

Usage:
    spinbus <simulate|effective|sweep|fidelity|molecule> --config RUN.toml
        [--out PREFIX] [--workers N] [--verbose]
    spinbus schema [--out PATH]

Primary outputs are written under PREFIX; a ``PREFIX.meta.json`` sidecar
records run id, timings, worker count, warnings and the config hash. Exit
codes: 0 success, 2 schema or input error, 3 physics error, 4 resource
limit, 1 anything else.
"""

from __future__ import annotations

import argparse
from collections.abc import Sequence
import logging
import os
from pathlib import Path
import sys
from typing import Any
import warnings

import orjson

from spinbus import ENGINE_VERSION, __version__
from spinbus.config import Settings, get_settings
from spinbus.core.di_container import configure_dependencies, inject
from spinbus.core.enums import Experiment, ExitCode
from spinbus.core.errors import ValidityWarning
from spinbus.core.exception_handlers import handle_exception
from spinbus.core.report import ok, with_warnings
from spinbus.core.run_context import run_scope
from spinbus.dispatch import HANDLERS
from spinbus.repositories import ResultRepositoryInterface
from spinbus.schemas.run_config import RunConfig, load_run_config, run_config_json_schema
from spinbus.utils.hashing import parameter_hash
from spinbus.utils.loging_utils import configure_logging

logger = logging.getLogger(__name__)

SCHEMA_COMMAND = "schema"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=str, default=None, help="Output prefix")
    common.add_argument("--verbose", "-v", action="store_true", help="Debug logging")

    run = argparse.ArgumentParser(add_help=False, parents=[common])
    run.add_argument("--config", type=Path, required=True, help="TOML run config")
    run.add_argument("--workers", type=int, default=None, help="Sweep worker processes")

    parser = argparse.ArgumentParser(
        prog="spinbus",
        description="Simulate NV-mediated coupling between nuclear spins.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for experiment in Experiment:
        sub.add_parser(experiment.value, parents=[run])
    sub.add_parser(SCHEMA_COMMAND, parents=[common], help="Print the run-config JSON schema")
    return parser


def resolve_workers(flag: int | None, config: RunConfig, settings: Settings) -> int:
    """``--workers`` beats SPINBUS_WORKERS, which beats the config, then the CPU count."""
    if flag is not None:
        workers = flag
    elif "workers" in settings.model_fields_set:
        workers = settings.workers
    elif config.workers is not None:
        workers = config.workers
    else:
        workers = os.cpu_count() or 1
    return max(1, workers)


def resolve_prefix(flag: str | None, config: RunConfig, config_path: Path) -> Path:
    if flag is not None:
        return Path(flag)
    if config.out is not None:
        return Path(config.out)
    return Path(config_path.stem)


def write_schema(out: str | None) -> None:
    payload = orjson.dumps(run_config_json_schema(), option=orjson.OPT_INDENT_2)
    if out is None:
        sys.stdout.write(payload.decode() + "\n")
    else:
        Path(out).write_bytes(payload + b"\n")


def run_experiment(args: argparse.Namespace, settings: Settings) -> int:
    experiment = Experiment(args.command)
    config = load_run_config(args.config)
    configure_dependencies()
    workers = resolve_workers(args.workers, config, settings)
    prefix = resolve_prefix(args.out, config, args.config)
    prefix.parent.mkdir(parents=True, exist_ok=True)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ValidityWarning)
        with run_scope(experiment.value) as ctx:
            output = HANDLERS[experiment](config, prefix, workers)

    raised = [str(w.message) for w in caught if issubclass(w.category, ValidityWarning)]
    meta: dict[str, Any] = {
        **ctx.as_metadata(),
        "engine_version": ENGINE_VERSION,
        "config": str(args.config),
        "config_hash": parameter_hash(config.model_dump(mode="json")),
        "workers": workers,
        "outputs": [str(p) for p in output.paths],
    }
    envelope = with_warnings(ok(output.summary, meta), raised)
    sidecar = inject(ResultRepositoryInterface).write_metadata(prefix, envelope)
    logger.info(f"Wrote {len(output.paths)} output(s) and {sidecar}")
    return int(ExitCode.success)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    settings = get_settings()
    configure_logging(settings.log_level, args.verbose)
    try:
        if args.command == SCHEMA_COMMAND:
            write_schema(args.out)
            return int(ExitCode.success)
        return run_experiment(args, settings)
    except Exception as exc:
        return handle_exception(exc)


if __name__ == "__main__":
    sys.exit(main())
