"""
Exception hierarchy for xmodkit.

Validation entry points return reports; these exceptions are raised when a
caller needs a valid object and does not get one, or when a size bound is hit.
"""

from __future__ import annotations

from typing import Any, Optional


class XmodkitError(Exception):
    """Base class for all library errors.

    Args:
        message: Human readable description
        witness: Optional data pinpointing the failure (elements, tuples, ...)
    """

    def __init__(self, message: str, witness: Optional[Any] = None) -> None:
        super().__init__(message)
        self.witness = witness


class InputError(XmodkitError):
    """Raised when an input document or table is malformed."""

    pass


class GroupAxiomError(InputError):
    """Raised when a Cayley table violates a group axiom."""

    pass


class BudgetExceeded(XmodkitError):
    """Raised when an exhaustive search would exceed its size budget."""

    pass


class CrossedModuleError(XmodkitError):
    """Raised when a crossed module or one of its morphisms is invalid."""

    pass


class GrCategoryError(XmodkitError):
    """Raised when a strict Gr-category or Gr-functor is malformed."""

    pass


class CohomologyError(XmodkitError):
    """Raised on malformed modules or cochains."""

    pass


class ReductionError(XmodkitError):
    """Raised when a stick or reduction fails an internal check."""

    pass


class FactorSetError(XmodkitError):
    """Raised when a factor set breaks the cocycle, action or normalization rules."""

    pass


class ExtensionError(XmodkitError):
    """Raised when an extension cannot be built or normalized."""

    pass
