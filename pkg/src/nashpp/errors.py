"""Exception hierarchy shared across the package.

CLI exit codes: InputError -> 2, BudgetExceededError -> 3,
ConsistencyError -> 4.  Everything else is a bug.
"""


class NashppError(Exception):
    """Base class for all package errors."""


class InputError(NashppError):
    """Malformed or invalid user input (bad syntax, off-variety point, ...)."""


class BudgetExceededError(NashppError):
    """A Groebner-type computation exceeded its configured resource budget."""


class ConsistencyError(NashppError):
    """Two independently computed quantities that must agree did not."""


class InconclusiveError(NashppError):
    """A truncated computation could not be certified; raise the bound."""
