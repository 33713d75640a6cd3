"""Plain-text geometry files.

One nucleus per line::

    # label  x_nm  y_nm  z_nm  [t2_s]
    C1  -0.601  0.676  -0.692
    C2  -1.260  -1.451  2.904  0.005

Blank lines and ``#`` comments are ignored; positions are in nm relative to
the NV.
"""

from __future__ import annotations

import logging
import math
from pathlib import Path

from pydantic import ValidationError

from spinbus.core.errors import ParseError
from spinbus.physics.assembly import GeometryEntry
from spinbus.repositories import GeometryRepositoryInterface

logger = logging.getLogger(__name__)


def _number(token: str, what: str, line: int, source: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"{what} '{token}' is not a number", line=line, source=source) from None
    if math.isnan(value):
        raise ParseError(f"{what} is NaN", line=line, source=source)
    return value


def parse_geometry(text: str, source: str = "<string>") -> list[GeometryEntry]:
    """Parse geometry text.

    Raises:
        ParseError: On malformed lines (with the 1-based line number),
            duplicate labels or an empty file
    """
    entries: list[GeometryEntry] = []
    seen: set[str] = set()
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        tokens = body.split()
        if len(tokens) not in (4, 5):
            raise ParseError(
                f"expected 'label x y z [t2]', got {len(tokens)} fields", line=number, source=source
            )
        label = tokens[0]
        if label in seen:
            raise ParseError(f"duplicate label '{label}'", line=number, source=source)
        x, y, z = (
            _number(tok, axis, number, source)
            for tok, axis in zip(tokens[1:4], "xyz", strict=True)
        )
        t2 = _number(tokens[4], "t2", number, source) if len(tokens) == 5 else math.inf
        try:
            entries.append(GeometryEntry(label=label, position_nm=(x, y, z), t2=t2))
        except ValidationError as exc:
            message = exc.errors()[0]["msg"]
            raise ParseError(f"invalid entry: {message}", line=number, source=source) from None
        seen.add(label)
    if not entries:
        raise ParseError("geometry holds no nuclei", source=source)
    return entries


class GeometryFileRepositoryImpl(GeometryRepositoryInterface):
    """Reads geometry files from disk."""

    def load(self, path: Path) -> list[GeometryEntry]:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            message = f"cannot read geometry file: {exc.strerror}"
            raise ParseError(message, source=str(path)) from exc
        entries = parse_geometry(text, source=str(path))
        logger.debug(f"Loaded {len(entries)} nuclei from {path}")
        return entries


def load_geometry(path: Path | str) -> list[GeometryEntry]:
    return GeometryFileRepositoryImpl().load(Path(path))
