"""Stable content hashes for run metadata."""

from __future__ import annotations

import hashlib
from typing import Any

import orjson


def parameter_hash(payload: Any) -> str:
    """SHA-256 of the canonical JSON form of ``payload``.

    Keys are sorted and numpy arrays serialized natively, so equal
    parameter sets hash identically across processes.
    """
    raw = orjson.dumps(
        payload,
        option=orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY | orjson.OPT_NON_STR_KEYS,
        default=_fallback,
    )
    return hashlib.sha256(raw).hexdigest()


def _fallback(obj: Any) -> Any:
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if hasattr(obj, "model_dump"):
        return obj.model_dump(mode="json")
    if isinstance(obj, set | frozenset):
        return sorted(obj)
    raise TypeError(f"Cannot hash object of type {type(obj).__name__}")
