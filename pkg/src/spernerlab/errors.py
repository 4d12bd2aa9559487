"""Exception types with distinct command-line exit codes.

The CLI maps exceptions to exit statuses: precondition and invariant
failures exit 1, malformed input or usage errors exit 2 (`ValueError`,
`OSError`, argparse), and feasibility refusals exit 3.
"""

from __future__ import annotations


class SpernerlabError(Exception):
    """Base class for package-specific failures."""


class PreconditionError(SpernerlabError):
    """A documented mathematical precondition was violated (exit 1)."""


class InvariantViolation(SpernerlabError):
    """A result failed its own postcondition check (exit 1)."""


class FeasibilityError(SpernerlabError):
    """The request exceeds a resource guard and was refused (exit 3)."""


class ConstructionError(SpernerlabError):
    """A randomized construction could not reach the requested size."""

    def __init__(self, message: str, achieved: int):
        super().__init__(message)
        self.achieved = achieved
