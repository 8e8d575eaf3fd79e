"""Exception types shared across the package.

The CLI maps each family to an exit code: input problems exit with 2,
size guards with 3 and broken internal invariants with 4.
"""


class HammologyError(Exception):
    exit_code = 1


class InputError(HammologyError, ValueError):
    """Malformed input: shape mismatch, bad rational, duplicate strings..."""

    exit_code = 2


class CapExceededError(HammologyError):
    exit_code = 3


class InvariantViolation(HammologyError, AssertionError):
    exit_code = 4


class LPError(HammologyError):
    """Raised by the exact LP solver for infeasible or unbounded programs."""

    exit_code = 4
