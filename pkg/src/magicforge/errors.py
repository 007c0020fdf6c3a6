"""Exception types shared across the package.

The CLI maps these onto exit codes: validation problems exit 2, search or
verification failures exit 1, everything else is a crash.
"""

from __future__ import annotations


class MagicforgeError(Exception):
    """Base class for all package errors."""


class ValidationError(MagicforgeError, ValueError):
    """Malformed or out-of-contract input (bad masks, ranks, JSON, angles)."""


class CapacityError(ValidationError):
    """Request exceeds the documented dense-enumeration size caps."""


class SearchError(MagicforgeError):
    """An exhaustive or randomized search finished without a result.

    Raised instead of returning a partial object so that "not found by this
    strategy" is always explicit.
    """
