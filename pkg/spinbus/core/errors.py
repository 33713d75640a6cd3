"""Error hierarchy for spinbus.

Every failure the engine raises on purpose is an AppError carrying an
ErrorCode and the CLI exit code it maps to. Physics-validity conditions that
do not stop a computation are emitted as ValidityWarning instead.
"""

from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from spinbus.core.enums import ErrorCode, ExitCode


class ValidityWarning(UserWarning):
    """An approximation is being used outside its stated regime."""


class AppError(Exception):
    """Base application error with structured error information.

    Args:
        message (str): Human-readable error message
        code (ErrorCode, optional): Error code. Defaults to internal_error.
        exit_code (ExitCode, optional): CLI exit code. Defaults to unexpected.
        extra (dict, optional): Additional diagnostic data
        errors (list[ErrorItem], optional): Field-level error items

    Example:
        >>> raise AppError("bad grid", code=ErrorCode.input_error, exit_code=ExitCode.schema)
    """

    def __init__(
        self,
        message: str,
        code: ErrorCode = ErrorCode.internal_error,
        exit_code: ExitCode = ExitCode.unexpected,
        extra: dict[str, Any] | None = None,
        errors: list["ErrorItem"] | None = None,
    ) -> None:
        super().__init__(message)
        self.message = message
        self.code = code
        self.exit_code = exit_code
        self.extra = extra or {}
        self.errors = errors


class SchemaError(AppError):
    """Run config failed validation; ``errors`` names the offending fields."""

    def __init__(
        self,
        message: str = "Invalid configuration",
        extra: dict[str, Any] | None = None,
        errors: list["ErrorItem"] | None = None,
    ) -> None:
        super().__init__(message, ErrorCode.schema_error, ExitCode.schema, extra, errors)


class InputError(AppError):
    def __init__(self, message: str, extra: dict[str, Any] | None = None) -> None:
        super().__init__(message, ErrorCode.input_error, ExitCode.schema, extra)


class GeometryError(AppError):
    def __init__(self, message: str, extra: dict[str, Any] | None = None) -> None:
        super().__init__(message, ErrorCode.geometry_error, ExitCode.schema, extra)


class ParseError(AppError):
    """Geometry or config text could not be parsed.

    Args:
        message (str): What went wrong
        line (int, optional): 1-based line number of the offending line
        source (str, optional): File the line came from
    """

    def __init__(self, message: str, line: int | None = None, source: str | None = None) -> None:
        where = f"{source or '<input>'}:{line}: " if line is not None else ""
        super().__init__(
            f"{where}{message}",
            ErrorCode.parse_error,
            ExitCode.schema,
            {"line": line, "source": source},
        )
        self.line = line


class ScheduleError(AppError):
    def __init__(self, message: str, extra: dict[str, Any] | None = None) -> None:
        super().__init__(message, ErrorCode.schedule_error, ExitCode.schema, extra)


class ChannelValidationError(AppError):
    def __init__(self, message: str, extra: dict[str, Any] | None = None) -> None:
        super().__init__(message, ErrorCode.channel_error, ExitCode.physics, extra)


class NoRootError(AppError):
    """Resonance condition has no sign change on the requested range.

    ``extra`` holds the endpoints and the residual at each.
    """

    def __init__(self, message: str, extra: dict[str, Any] | None = None) -> None:
        super().__init__(message, ErrorCode.no_root, ExitCode.physics, extra)


class PhysicsValidityError(AppError):
    def __init__(self, message: str, extra: dict[str, Any] | None = None) -> None:
        super().__init__(message, ErrorCode.physics_validity, ExitCode.physics, extra)


class InvariantViolationError(AppError):
    """A stored state lost trace or positivity beyond tolerance."""

    def __init__(self, message: str, extra: dict[str, Any] | None = None) -> None:
        super().__init__(message, ErrorCode.invariant_violation, ExitCode.physics, extra)


class ResourceError(AppError):
    def __init__(self, message: str, extra: dict[str, Any] | None = None) -> None:
        super().__init__(message, ErrorCode.resource_error, ExitCode.resource, extra)


class ErrorItem(BaseModel):
    """Single error line with field-level context.

    Attributes:
        code (str): Error code (aliased as 'errorcode')
        message (str): Error message (aliased as 'errormessage')
        status (int, optional): Exit code (aliased as 'errorStatus')
        field (str, optional): Config field path (aliased as 'errorField')
    """

    model_config = ConfigDict(populate_by_name=True)
    code: str = Field(alias="errorcode")
    message: str = Field(alias="errormessage")
    status: int | None = Field(default=None, alias="errorStatus")
    field: str | None = Field(default=None, alias="errorField")
