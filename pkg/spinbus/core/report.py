"""Result envelopes for the metadata sidecar.

Every subcommand's sidecar has the same top-level shape: ``success``, the
handler summary under ``data``, run provenance under ``meta`` and the
validity warnings raised during the run.
"""

from typing import Any


def ok(data: dict[str, Any] | None = None, meta: dict[str, Any] | None = None) -> dict[str, Any]:
    """Create a success envelope.

    Example:
        >>> ok({"fidelity": 0.99})
        {'success': True, 'data': {'fidelity': 0.99}, 'meta': {}, 'warnings': []}
    """
    return {"success": True, "data": data or {}, "meta": meta or {}, "warnings": []}


def with_warnings(envelope: dict[str, Any], warnings: list[str]) -> dict[str, Any]:
    envelope["warnings"] = [*envelope.get("warnings", []), *warnings]
    return envelope
