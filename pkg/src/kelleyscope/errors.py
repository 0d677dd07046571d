"""Exception hierarchy shared by the library and the CLI.

The CLI maps each class onto a fixed exit code, so library code should raise
the most specific class that applies.
"""


class KelleyscopeError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class StructuralError(KelleyscopeError, ValueError):
    """Shapes or references do not line up (mismatched grounds, bad indices, dimensions)."""

    exit_code = 2


class DomainError(KelleyscopeError, ValueError):
    """A value lies outside the domain of an operation (zero element, improper ideal, bad epsilon)."""

    exit_code = 2


class BudgetError(KelleyscopeError, RuntimeError):
    """An enumeration or search exceeded its configured budget."""

    exit_code = 3

    def __init__(self, message: str, *, budget: int, used: int | None = None, hint: str | None = None):
        super().__init__(message)
        self.budget = budget
        self.used = used
        self.hint = hint


class CertificateError(KelleyscopeError):
    """A supplied certificate failed verification."""

    exit_code = 4

    def __init__(self, message: str, *, class_index: int | None = None):
        super().__init__(message)
        self.class_index = class_index
