"""Run identity and timing for CLI invocations.

Every subcommand runs inside a ``run_scope``: it receives a run id, logs start
and finish with wall-clock duration, and exposes the timestamps that go into
the metadata sidecar. Timestamps never enter the primary outputs.
"""

from __future__ import annotations

from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass, field
from datetime import datetime, timezone

UTC = timezone.utc
import logging
import time
import uuid


@dataclass
class RunContext:
    """Identity and timing of one CLI run.

    Attributes:
        command (str): Subcommand name
        run_id (str): Random UUID4 string
        started_at (str): ISO-8601 UTC start time
        finished_at (str | None): ISO-8601 UTC finish time, set on exit
        duration_ms (float | None): Wall time, set on exit
    """

    command: str
    run_id: str = field(default_factory=lambda: str(uuid.uuid4()))
    started_at: str = field(default_factory=lambda: datetime.now(UTC).isoformat())
    finished_at: str | None = None
    duration_ms: float | None = None

    def as_metadata(self) -> dict[str, object]:
        return {
            "command": self.command,
            "run_id": self.run_id,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "duration_ms": self.duration_ms,
        }


@contextmanager
def run_scope(command: str, logger: logging.Logger | None = None) -> Iterator[RunContext]:
    """Open a RunContext and log ``command``, status and duration on exit.

    Log Format:
        command=sweep status=ok duration_ms=1532.10 run=uuid-here
    """
    log = logger or logging.getLogger("spinbus.run")
    ctx = RunContext(command=command)
    log.info(f"command={command} status=start run={ctx.run_id}")
    start = time.perf_counter()
    status = "error"
    try:
        yield ctx
        status = "ok"
    finally:
        ctx.duration_ms = (time.perf_counter() - start) * 1000
        ctx.finished_at = datetime.now(UTC).isoformat()
        log.info(
            "command=%s status=%s duration_ms=%.2f run=%s",
            command,
            status,
            ctx.duration_ms,
            ctx.run_id,
        )
