"""Error taxonomy shared across the package.

Exit-code mapping used by the CLI: ConventionFault -> 1, InvalidInput and
WindowViolation -> 2, BudgetExceeded -> 3.
"""


class ConventionFault(RuntimeError):
    """An exact self-check failed; a sign or ordering convention is wrong."""


class InvalidInput(ValueError):
    """Malformed user input (space expression, CDGA data, config)."""


class WindowViolation(InvalidInput):
    """Requested report range exceeds what the truncation parameters certify."""


class BudgetExceeded(RuntimeError):
    """A computation would materialize more basis elements than allowed."""
