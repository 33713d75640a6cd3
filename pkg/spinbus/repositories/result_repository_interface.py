"""Result repository interfaces.

Writers for the artifacts every subcommand leaves behind, split so a caller
depends only on the outputs it produces.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Mapping
from pathlib import Path
from typing import Any

from spinbus.dynamics.propagator import Trajectory
from spinbus.protocol.sweep import SweepResult


class TrajectoryWriterInterface(ABC):
    """Persist time series."""

    @abstractmethod
    def write_trajectory(self, prefix: Path, trajectory: Trajectory) -> Path:
        """Write ``<prefix>.csv`` with a ``t_s`` column and one column per observable."""
        pass


class SweepWriterInterface(ABC):
    """Persist sweep spectra."""

    @abstractmethod
    def write_sweep(self, prefix: Path, result: SweepResult, suffix: str = "") -> Path:
        """Write ``<prefix><suffix>.csv`` with ``#`` metadata lines."""
        pass


class RunArtifactWriterInterface(ABC):
    """Persist reports and run metadata."""

    @abstractmethod
    def write_report(self, prefix: Path, entries: Mapping[str, Any]) -> Path:
        """Write a ``key = value`` report to ``<prefix>.report.txt``."""
        pass

    @abstractmethod
    def write_metadata(self, prefix: Path, metadata: Mapping[str, Any]) -> Path:
        """Write the ``<prefix>.meta.json`` sidecar."""
        pass


class ResultRepositoryInterface(
    TrajectoryWriterInterface, SweepWriterInterface, RunArtifactWriterInterface
):
    """All output writers together."""
