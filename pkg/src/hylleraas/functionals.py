"""Rayleigh-quotient energies of the correlated two-electron trial function.

Both the standard Schrodinger functional and the delta-improved one go
through the same matrix assembly; the standard case is the one with every
coupling and basis exponent set to zero.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .constants_deltas import (
    ZERO_EXPONENTS,
    BasisExponents,
    DeltaSet,
    _check_z,
    basis_exponents,
)
from .errors import DomainError, SingularMatrixError
from .integrals import overlap_and_numerator_rows

MAX_ORDER = 3


class ModelKind(enum.Enum):
    SCHRODINGER = "schrodinger"
    IMPROVED = "improved"

    @classmethod
    def parse(cls, text: str) -> "ModelKind":
        try:
            return cls(text.lower())
        except ValueError:
            raise ValueError(f"unknown model {text!r}; expected 'schrodinger' or 'improved'") from None


@dataclass(frozen=True)
class HylleraasState:
    """Orbital exponents plus r12 polynomial coefficients.

    Exponents are kept canonical (xi1 <= xi2).  ``swapped`` records that the
    orbital carrying (A0, B0) uses xi2 rather than xi1; it only matters for the
    improved functional, whose two orbitals differ.
    """

    xi1: float
    xi2: float
    coeffs: tuple[float, ...] = (1.0,)
    swapped: bool = False
    _order: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not (self.xi1 > 0 and self.xi2 > 0 and np.isfinite(self.xi1) and np.isfinite(self.xi2)):
            raise DomainError(f"orbital exponents must be positive and finite, got {self.xi1}, {self.xi2}")
        if self.xi1 > self.xi2:
            raise DomainError("exponents must satisfy xi1 <= xi2; build through HylleraasState.from_roles")
        coeffs = tuple(float(c) for c in self.coeffs)
        if not 1 <= len(coeffs) <= MAX_ORDER + 1:
            raise DomainError(f"expected 1 to {MAX_ORDER + 1} coefficients, got {len(coeffs)}")
        if coeffs[0] != 1.0:
            raise DomainError(f"leading coefficient must be 1, got {coeffs[0]}")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "_order", len(coeffs) - 1)

    @property
    def order(self) -> int:
        return self._order

    @classmethod
    def from_roles(cls, xi_first: float, xi_second: float, coeffs=(1.0,)) -> "HylleraasState":
        """State whose (A0, B0) orbital has ``xi_first`` and (A1, B1) orbital ``xi_second``."""
        if xi_first <= xi_second:
            return cls(xi_first, xi_second, tuple(coeffs), swapped=False)
        return cls(xi_second, xi_first, tuple(coeffs), swapped=True)

    def role_exponents(self) -> tuple[float, float]:
        """(exponent of the A0/B0 orbital, exponent of the A1/B1 orbital)."""
        return (self.xi2, self.xi1) if self.swapped else (self.xi1, self.xi2)

    def with_coeffs(self, coeffs) -> "HylleraasState":
        return HylleraasState(self.xi1, self.xi2, tuple(coeffs), self.swapped)


def model_exponents(Z: int, model: ModelKind, deltas: DeltaSet | None = None) -> BasisExponents:
    """Basis exponents used by ``model``; ``deltas`` overrides the couplings of Z."""
    if model is ModelKind.SCHRODINGER:
        return ZERO_EXPONENTS
    if model is ModelKind.IMPROVED:
        return basis_exponents(Z if deltas is None else deltas)
    raise TypeError(f"model must be a ModelKind, got {model!r}")


def matrices(
    state: HylleraasState,
    Z: int,
    model: ModelKind,
    deltas: DeltaSet | None = None,
    weight_exponents: bool = False,
) -> tuple[np.ndarray, np.ndarray]:
    """Overlap and numerator matrices at the state's exponents and order."""
    _check_z(Z)
    x0, x1 = state.role_exponents()
    exps = model_exponents(Z, model, deltas)
    return overlap_and_numerator_rows(x0, x1, exps, Z, state.order, weight_exponents)


def quotient(S: np.ndarray, N: np.ndarray, b) -> float:
    b = np.asarray(b, dtype=float)
    den = float(b @ S @ b)
    if not den > 0.0:
        raise SingularMatrixError(f"non-positive norm b.S.b = {den}")
    return float(b @ N @ b) / den


def energy(
    state: HylleraasState,
    Z: int,
    model: ModelKind,
    deltas: DeltaSet | None = None,
    weight_exponents: bool = False,
) -> float:
    """-(xi1^2 + xi2^2)/2 + b.N.b / b.S.b in hartree."""
    S, N = matrices(state, Z, model, deltas, weight_exponents)
    return -0.5 * (state.xi1**2 + state.xi2**2) + quotient(S, N, state.coeffs)


def functional_value_scaling(
    state: HylleraasState,
    c: float,
    Z: int = 2,
    model: ModelKind = ModelKind.IMPROVED,
) -> float:
    """Energy with every coefficient multiplied by ``c`` (leading one included).

    The quotient is homogeneous of degree zero, so this equals ``energy``.
    """
    if not c > 0:
        raise ValueError(f"scale must be positive, got {c}")
    S, N = matrices(state, Z, model)
    return -0.5 * (state.xi1**2 + state.xi2**2) + quotient(S, N, c * np.asarray(state.coeffs))
