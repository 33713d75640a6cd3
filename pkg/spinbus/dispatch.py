"""Subcommand handlers.

Each handler resolves its service through the DI container, runs it, and
writes the primary outputs through the result repository. Handlers return
the written paths plus a summary for the metadata sidecar.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
import logging
from pathlib import Path
from typing import Any

from spinbus.core.di_container import inject
from spinbus.core.enums import Experiment
from spinbus.repositories import ResultRepositoryInterface
from spinbus.schemas.run_config import RunConfig
from spinbus.services import (
    EffectiveServiceInterface,
    FidelityServiceInterface,
    MoleculeServiceInterface,
    SimulationServiceInterface,
    SweepServiceInterface,
)

logger = logging.getLogger(__name__)


@dataclass
class HandlerOutput:
    paths: list[Path]
    summary: dict[str, Any] = field(default_factory=dict)


Handler = Callable[[RunConfig, Path, int], HandlerOutput]


def cmd_simulate(config: RunConfig, prefix: Path, workers: int) -> HandlerOutput:
    trajectory = inject(SimulationServiceInterface).simulate(config)
    path = inject(ResultRepositoryInterface).write_trajectory(prefix, trajectory)
    summary = {"steps": trajectory.steps, "points": int(trajectory.times.size)}
    return HandlerOutput([path], summary)


def cmd_effective(config: RunConfig, prefix: Path, workers: int) -> HandlerOutput:
    run = inject(EffectiveServiceInterface).effective(config)
    repo = inject(ResultRepositoryInterface)
    paths = [repo.write_report(prefix, run.report), repo.write_trajectory(prefix, run.trajectory)]
    summary = {"p_a_wo": run.params.pa_wo, "warnings": list(run.params.warnings)}
    return HandlerOutput(paths, summary)


def cmd_sweep(config: RunConfig, prefix: Path, workers: int) -> HandlerOutput:
    results = inject(SweepServiceInterface).sweep(config, workers)
    repo = inject(ResultRepositoryInterface)
    paths = [
        repo.write_sweep(prefix, r, suffix="" if r.label is None else f"_{r.label}")
        for r in results
    ]
    failures = {
        (r.label or "sweep"): [{"value": x, "diagnostic": d} for x, d in r.failures]
        for r in results
        if r.failures
    }
    for label, items in failures.items():
        logger.warning(f"{label}: {len(items)} sweep point(s) failed")
    summary = {
        "failures": failures,
        "results": [r.metadata for r in results],
        "dips": {(r.label or "sweep"): r.dip_summary() for r in results},
    }
    return HandlerOutput(paths, summary)


def cmd_fidelity(config: RunConfig, prefix: Path, workers: int) -> HandlerOutput:
    result = inject(FidelityServiceInterface).fidelity(config)
    repo = inject(ResultRepositoryInterface)
    paths = [
        repo.write_report(prefix, result.as_report()),
        repo.write_trajectory(prefix, result.trajectory),
    ]
    return HandlerOutput(paths, {"fidelity": result.fidelity, "frame": result.frame.value})


def cmd_molecule(config: RunConfig, prefix: Path, workers: int) -> HandlerOutput:
    result = inject(MoleculeServiceInterface).molecule(config, workers)
    repo = inject(ResultRepositoryInterface)
    paths = [repo.write_sweep(prefix, result.total)]
    for k, spectrum in enumerate(result.per_target, start=1):
        paths.append(repo.write_sweep(prefix, spectrum, suffix=f"_target{k}"))
    report = result.as_report()
    paths.append(repo.write_report(prefix, report))
    return HandlerOutput(paths, report)


HANDLERS: dict[Experiment, Handler] = {
    Experiment.simulate: cmd_simulate,
    Experiment.effective: cmd_effective,
    Experiment.sweep: cmd_sweep,
    Experiment.fidelity: cmd_fidelity,
    Experiment.molecule: cmd_molecule,
}
