import json
from typing import Any, ClassVar, List, Optional, Sequence


class LabException(Exception):
    """Base class of every error raised by quintlab.

    :param code: A short string that uniquely identifies the reason for this error.
        Useful for programmatic error handling.
    :param message: A brief human-readable message describing the error.
    :param details: A lengthier explanation, usually containing a hint on how to resolve it.
    :param context: Additional JSON-serializable context, depending on the error code.
    """

    DEFAULT_MESSAGE: ClassVar[str] = "An unknown error occurred."
    EXIT_CODE: ClassVar[int] = 1

    code: str
    """A short string that uniquely identifies the reason for this error."""

    message: str
    """A brief human-readable message describing the error."""

    details: Optional[str]
    """A lengthier explanation of the error, usually with a hint on how to resolve it."""

    context: Any
    """Additional context that might be present depending on the error code."""

    def __init__(
        self,
        *,
        code: str,
        message: str = DEFAULT_MESSAGE,
        details: Optional[str] = None,
        context: Any = None,
    ):
        msg = f"{type(self).__name__}[{code}]: {message}"
        if details:
            msg += " " + details
        if context:
            msg += f" (context={json.dumps(context, default=str, sort_keys=True)})"
        super().__init__(msg)

        self.code = code
        self.message = message
        self.details = details
        self.context = context

    @property
    def exit_code(self) -> int:
        return self.EXIT_CODE


class ValidationError(LabException):
    """Raised when inputs or configuration violate a documented constraint.
    All violations found in one pass are reported together in :attr:`violations`.
    """

    EXIT_CODE: ClassVar[int] = 2

    violations: List[str]
    """Every violated constraint, in the order they were detected."""

    def __init__(
        self,
        message: str,
        *,
        code: str = "invalid_input",
        violations: Optional[Sequence[str]] = None,
        details: Optional[str] = None,
        context: Any = None,
    ):
        self.violations = list(violations) if violations is not None else [message]
        if violations is not None and len(self.violations) > 0:
            message = message + " " + "; ".join(self.violations)
        super().__init__(code=code, message=message, details=details, context=context)


class ResourceCapError(LabException):
    """Raised when an operation would exceed a configured resource cap."""

    EXIT_CODE: ClassVar[int] = 3

    required: int
    """The amount the operation needs (bytes, items or terms)."""

    allowed: int
    """The configured cap."""

    def __init__(
        self,
        message: str,
        *,
        required: int,
        allowed: int,
        code: str = "resource_cap_exceeded",
        details: Optional[str] = None,
    ):
        super().__init__(
            code=code,
            message=f"{message} (required={required}, allowed={allowed})",
            details=details,
        )
        self.required = required
        self.allowed = allowed


class NumericalError(LabException):
    """Raised on nonfinite values, solver failures and similar numerical breakdowns."""

    EXIT_CODE: ClassVar[int] = 4

    def __init__(
        self,
        message: str,
        *,
        code: str = "numerical_failure",
        details: Optional[str] = None,
        context: Any = None,
    ):
        super().__init__(code=code, message=message, details=details, context=context)


class CanonicalizationError(NumericalError):
    """Raised when bringing a collapse map into echelon form exceeds its move budget."""

    def __init__(self, message: str, *, context: Any = None):
        super().__init__(
            message,
            code="move_budget_exhausted",
            details="HINT: this indicates a bug in the move bookkeeping, please report it.",
            context=context,
        )
