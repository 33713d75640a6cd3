"""Number formatting for CSV outputs and key-value reports.

All floats leave the process with 17 significant digits so doubles survive a
write/read cycle unchanged and golden-file comparisons stay byte-exact.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
import math
from typing import Any

CSV_DIGITS: int = 17


def format_float(value: float, digits: int = CSV_DIGITS) -> str:
    """Format a float with ``digits`` significant digits.

    NaN and infinities are written as ``nan``, ``inf`` and ``-inf``.

    Example:
        >>> format_float(0.1)
        '0.10000000000000001'
    """
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.{digits}g}"


def format_row(values: Iterable[float], digits: int = CSV_DIGITS) -> str:
    return ",".join(format_float(float(v), digits) for v in values)


def _format_value(value: Any, digits: int) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float | int) and not isinstance(value, bool):
        return format_float(float(value), digits)
    if isinstance(value, list | tuple):
        return "[" + ", ".join(_format_value(v, digits) for v in value) + "]"
    if value is None:
        return "none"
    return str(value)


def to_report(entries: Mapping[str, Any], digits: int = CSV_DIGITS) -> str:
    """Render a flat ``key = value`` report, one entry per line.

    Nested sequences (per-nucleus lists, the 2x2 dissipator) are written as
    bracketed lists on a single line.
    """
    width = max((len(k) for k in entries), default=0)
    lines = [
        f"{key.ljust(width)} = {_format_value(value, digits)}" for key, value in entries.items()
    ]
    return "\n".join(lines) + "\n"


__all__ = ["CSV_DIGITS", "format_float", "format_row", "to_report"]
