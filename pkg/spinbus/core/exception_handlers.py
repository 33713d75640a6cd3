"""Central exception handling for the CLI.

Maps every exception that escapes a subcommand to structured error lines on
stderr and a process exit code, so each failure class has a distinct code.
"""

from __future__ import annotations

import logging
import sys
from typing import Any, TextIO

import orjson
from pydantic import ValidationError

from spinbus.core.enums import ErrorCode, ExitCode
from spinbus.core.errors import AppError, ErrorItem, SchemaError

logger = logging.getLogger(__name__)


def validation_error_items(exc: ValidationError) -> list[ErrorItem]:
    """Convert pydantic validation errors into one ErrorItem per field path.

    Args:
        exc (ValidationError): Error raised while validating a run config

    Returns:
        list[ErrorItem]: Items whose ``field`` is the dotted location,
            e.g. ``register.nuclei.0.t2``
    """
    items: list[ErrorItem] = []
    for err in exc.errors():
        loc = err.get("loc", ())
        field = ".".join(str(p) for p in loc) if loc else None
        payload: dict[str, Any] = {
            "errorcode": ErrorCode.schema_error.value,
            "errormessage": str(err.get("msg", "Validation failed")),
            "errorStatus": int(ExitCode.schema),
            "errorField": field,
        }
        items.append(ErrorItem.model_validate(payload))
    return items


def schema_error_from_validation(exc: ValidationError, source: str | None = None) -> SchemaError:
    items = validation_error_items(exc)
    fields = ", ".join(i.field or "?" for i in items)
    return SchemaError(
        f"Invalid configuration{f' in {source}' if source else ''}: {fields}",
        extra={"source": source},
        errors=items,
    )


def handle_exception(exc: BaseException, stream: TextIO | None = None) -> int:
    """Report ``exc`` and return the exit code for it.

    AppError subclasses use their own exit code; pydantic ValidationError is a
    schema error; anything else is logged with traceback and exits 1.
    """
    out = stream if stream is not None else sys.stderr
    if isinstance(exc, ValidationError):
        exc = schema_error_from_validation(exc)

    if isinstance(exc, AppError):
        items = exc.errors or [
            ErrorItem(
                code=exc.code.value,
                message=exc.message,
                status=int(exc.exit_code),
                field=None,
            )
        ]
        logger.error(f"{exc.code.value}: {exc.message}")
        for item in items:
            out.write(orjson.dumps(item.model_dump(by_alias=True)).decode() + "\n")
        return int(exc.exit_code)

    logger.exception("Unexpected error", exc_info=exc)
    item = ErrorItem(
        code=ErrorCode.internal_error.value,
        message=f"{type(exc).__name__}: {exc}",
        status=int(ExitCode.unexpected),
        field=None,
    )
    out.write(orjson.dumps(item.model_dump(by_alias=True)).decode() + "\n")
    return int(ExitCode.unexpected)
