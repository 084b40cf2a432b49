"""Exception types shared across the toolkit.

The CLI maps these onto exit codes: parse and domain problems are usage
errors (exit 2), resource gates are exit 3.  Verification failures are not
exceptions; they are ordinary return values.
"""

from __future__ import annotations


class TransferkitError(Exception):
    """Base class for all toolkit errors."""


class SpecError(TransferkitError):
    """A group spec, subgroup label, file, or expression failed to parse."""

    def __init__(self, message: str, *, position: int | None = None):
        super().__init__(message)
        self.position = position


class DomainError(TransferkitError):
    """Arguments are well-formed but mathematically out of domain.

    Examples: K is not a subgroup of H where containment is required, levels
    of Burnside elements do not match, a norm was applied to a virtual
    element.
    """


class GatingError(TransferkitError):
    """An operation is not admitted by the indexing transfer systems."""


class ResourceError(TransferkitError):
    """A configured resource gate (order cap, size cap) was exceeded."""
