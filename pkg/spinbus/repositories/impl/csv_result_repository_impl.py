"""CSV and JSON writers for run outputs.

Primary outputs (CSV, reports) contain only reproducible content written
with 17 significant digits, so identical configs give byte-identical files.
Run ids and timestamps go to the JSON sidecar only.
"""

from __future__ import annotations

from collections.abc import Mapping
import logging
from pathlib import Path
from typing import Any

import orjson

from spinbus.dynamics.propagator import Trajectory
from spinbus.protocol.sweep import SweepResult
from spinbus.repositories import ResultRepositoryInterface
from spinbus.utils.text import CSV_DIGITS, format_float, format_row, to_report

logger = logging.getLogger(__name__)

_METADATA_ORDER = ("parameter_hash", "grid_spec", "engine_version", "observable")


def _with_suffix(prefix: Path, suffix: str) -> Path:
    return prefix.with_name(prefix.name + suffix)


def _json_default(obj: Any) -> Any:
    if hasattr(obj, "model_dump"):
        return obj.model_dump(mode="json")
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"Cannot serialize {type(obj).__name__}")


class CsvResultRepositoryImpl(ResultRepositoryInterface):
    """File-system writer for trajectories, sweeps, reports and sidecars.

    Args:
        digits: Significant digits for floats
    """

    def __init__(self, digits: int = CSV_DIGITS):
        self._digits = digits

    def _write(self, path: Path, text: str) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8", newline="\n")
        logger.info(f"Wrote {path}")
        return path

    def write_trajectory(self, prefix: Path, trajectory: Trajectory) -> Path:
        labels = trajectory.labels
        lines = [",".join(["t_s", *labels])]
        for k, t in enumerate(trajectory.times):
            row = [float(t), *(float(trajectory.observables[label][k]) for label in labels)]
            lines.append(format_row(row, self._digits))
        return self._write(_with_suffix(prefix, ".csv"), "\n".join(lines) + "\n")

    def write_sweep(self, prefix: Path, result: SweepResult, suffix: str = "") -> Path:
        """Header lines ``# key=value``, then ``param,<name>,S``.

        The ``param`` column holds the grid index, the second the swept value
        in SI units.
        """
        lines = [
            f"# {key}={result.metadata[key]}" for key in _METADATA_ORDER if key in result.metadata
        ]
        if result.label is not None:
            lines.append(f"# label={result.label}")
        lines.append(f"param,{result.parameter.value},S")
        for k, (x, s) in enumerate(zip(result.grid, result.signals, strict=True)):
            lines.append(f"{k},{format_float(x, self._digits)},{format_float(s, self._digits)}")
        return self._write(_with_suffix(prefix, f"{suffix}.csv"), "\n".join(lines) + "\n")

    def write_report(self, prefix: Path, entries: Mapping[str, Any]) -> Path:
        return self._write(_with_suffix(prefix, ".report.txt"), to_report(entries, self._digits))

    def write_metadata(self, prefix: Path, metadata: Mapping[str, Any]) -> Path:
        raw = orjson.dumps(
            dict(metadata),
            option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY,
            default=_json_default,
        )
        return self._write(_with_suffix(prefix, ".meta.json"), raw.decode("utf-8") + "\n")
