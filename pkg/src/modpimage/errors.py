"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: ``CapacityError`` -> 3, every other
``ModpImageError`` -> 2.
"""

from __future__ import annotations


class ModpImageError(Exception):
    """Base class for all library errors."""


class ParameterError(ModpImageError, ValueError):
    """Operands live over different fields/algebras, or parameters are malformed."""


class DomainError(ModpImageError, ValueError):
    """An argument is outside the domain of the operation (zero divisor, bad range...)."""


class NonUnitError(DomainError, ZeroDivisionError):
    """Inversion of zero or of a non-unit."""


class CapacityError(ModpImageError, RuntimeError):
    """An enumeration would exceed the configured cap."""

    def __init__(self, message: str, required: int | None = None, cap: int | None = None):
        super().__init__(message)
        self.required = required
        self.cap = cap


class ContractError(ModpImageError, AssertionError):
    """A documented pre/postcondition does not hold on the given input."""


class TheoremViolation(ContractError):
    """A brute-force check produced a counterexample to a proven statement."""


class Unrealizable(ModpImageError):
    """No module structure produces the observed number of traces."""

    def __init__(self, t: int, below: int | None, above: int | None):
        super().__init__(
            f"t={t} is not a realizable trace count (nearest: below={below}, above={above})"
        )
        self.t = t
        self.below = below
        self.above = above


class DatasetError(ModpImageError, ValueError):
    """A Hecke dataset failed validation. ``code`` identifies the failure kind."""

    SCHEMA = "schema"
    COMPOSITE_ELL = "composite-ell"
    BAD_ELL = "ell-divides-Np"
    DUPLICATE_ELL = "duplicate-ell"
    COORDINATES = "coordinate-length"

    def __init__(self, code: str, message: str):
        super().__init__(f"[{code}] {message}")
        self.code = code
