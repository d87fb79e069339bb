"""Z-dependent model constants: the Lambda intermediates, the delta couplings
and the non-integer exponents of the improved single-particle orbitals.

Every quantity here is a small departure from a round number (Lambda1 ~ 1,
Lambda3 ~ 9, delta2 ~ 1/8 - 1/8), so the double-precision route never forms
those differences directly.  Each one is rewritten in terms of the small
excess it actually represents; ``oracle_row`` evaluates the formulas exactly as
printed in arbitrary precision and is the reference the fast route is tested
against.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import mpmath

from .errors import DegenerateInputError, DomainError

Z_MIN, Z_MAX = 1, 99


@dataclass(frozen=True)
class PhysicalConstants:
    """Fine-structure constant and the two hydrogen Lamb shifts (hartree)."""

    alpha: float
    delta_1S: float
    delta_2S: float

    @classmethod
    def with_alpha(cls, alpha: float) -> "PhysicalConstants":
        # Lamb shifts scale as alpha**3 with the fixed prefactors.
        return cls(alpha, 0.5556 * alpha**3, 0.4138 * alpha**3)


MODEL_CONSTANTS = PhysicalConstants.with_alpha(1.0 / 137.036)


@dataclass(frozen=True)
class LambdaSet:
    """Intermediate functions Lambda1..3 plus their cancellation-free offsets.

    ``excess`` holds (sqrt(L1) - 1, sqrt(L2) - 1, sqrt(L3) - 3) and ``diff21``
    holds L2 - L1; both are what the delta formulas really depend on.
    """

    L1: float
    L2: float
    L3: float
    kdot: int
    excess: tuple[float, float, float]
    diff21: float

    @classmethod
    def from_values(cls, L1: float, L2: float, L3: float, kdot: int = 1) -> "LambdaSet":
        """Build from plain values (offsets formed naively)."""
        if min(L1, L2, L3) < 0:
            raise DomainError("Lambda values must be non-negative")
        excess = (math.sqrt(L1) - 1.0, math.sqrt(L2) - 1.0, math.sqrt(L3) - 3.0)
        return cls(L1, L2, L3, kdot, excess, L2 - L1)


@dataclass(frozen=True)
class DeltaSet:
    d1: float
    d2: float
    d3: float

    def is_zero(self) -> bool:
        return self.d1 == 0.0 and self.d2 == 0.0 and self.d3 == 0.0


ZERO_DELTAS = DeltaSet(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class BasisExponents:
    """Powers of cos(theta), sin(theta) and r in the two improved orbitals."""

    A0: float
    A1: float
    B0: float
    B1: float
    C: float

    def swapped(self) -> "BasisExponents":
        return BasisExponents(self.A1, self.A0, self.B1, self.B0, self.C)


ZERO_EXPONENTS = BasisExponents(0.0, 0.0, 0.0, 0.0, 0.0)


def _check_z(Z: int) -> None:
    if isinstance(Z, bool) or int(Z) != Z:
        raise DomainError(f"nuclear charge must be an integer, got {Z!r}")
    if not Z_MIN <= Z <= Z_MAX:
        raise DomainError(f"nuclear charge {Z} outside supported range [{Z_MIN}, {Z_MAX}]")


def one_minus_sqrt1m(x: float) -> float:
    """1 - sqrt(1 - x) without cancellation for small x."""
    if x > 1.0:
        raise DomainError(f"sqrt(1 - x) undefined for x = {x}")
    return x / (1.0 + math.sqrt(1.0 - x))


def _sqrt(x: float, what: str) -> float:
    if x < 0.0:
        raise DomainError(f"negative radicand in {what}: {x!r}")
    return math.sqrt(x)


def kdot(Z: int, constants: PhysicalConstants = MODEL_CONSTANTS) -> int:
    """Integer part of alpha*|Z| + 1 (equals 1 throughout the periodic table)."""
    if Z < 1:
        raise DomainError(f"Z must be >= 1, got {Z}")
    if constants.alpha * abs(Z) >= 1.0:
        raise DomainError(f"alpha*Z = {constants.alpha * abs(Z)} >= 1 leaves the Lambda formulas complex")
    return math.floor(constants.alpha * abs(Z) + 1.0)


def lambdas(Z: int, constants: PhysicalConstants = MODEL_CONSTANTS) -> LambdaSet:
    _check_z(Z)
    return _lambdas(int(Z), constants)


@lru_cache(maxsize=None)
def _lambdas(Z: int, c: PhysicalConstants) -> LambdaSet:
    K = kdot(Z, c)
    if K != 1:
        raise DomainError("stable Lambda evaluation assumes kdot == 1")
    a = c.alpha
    az = a * Z
    x = az * az
    sqrt1m = math.sqrt(1.0 - x)
    # 2 - 2 sqrt(1 - x) and x minus that, both cancellation-free.
    s = 2.0 * x / (1.0 + sqrt1m)
    x_minus_s = -x * x / (1.0 + sqrt1m) ** 2
    lamb = c.delta_1S * a * a * Z**3
    X1 = s + 1.5 * lamb
    X2 = s - 0.5 * lamb
    if X1 <= 0.0 or X2 <= 0.0:
        raise DomainError(f"non-positive radicand in Lambda for Z={Z}")
    r1, r2 = math.sqrt(X1), math.sqrt(X2)

    # sqrt(L_k) = 2 aZ / sqrt(X_k) - 1, so sqrt(L_k) - 1 = 2 (aZ - sqrt(X_k)) / sqrt(X_k)
    x1 = 2.0 * (x_minus_s - 1.5 * lamb) / (r1 * (az + r1))
    x2 = 2.0 * (x_minus_s + 0.5 * lamb) / (r2 * (az + r2))
    y1, y2 = 1.0 + x1, 1.0 + x2
    # L2 - L1 = (y2 - y1)(y2 + y1) with X1 - X2 = 2 * lamb exactly
    diff21 = 2.0 * az * (2.0 * lamb) / (r1 * r2 * (r1 + r2)) * (y1 + y2)

    g = 3.0 + y1
    h = 8.0 * c.delta_2S * a * a * g * g
    root = _sqrt(16.0 - h, "Lambda3")
    # v = 4 g / sqrt(16 - h);  sqrt(L3) = v - 1;  v - 4 = 4 (g^2 - 16 + h) / (root (g + root))
    x3 = 4.0 * (x1 * (g + 4.0) + h) / (root * (g + root))
    return LambdaSet(y1 * y1, y2 * y2, (3.0 + x3) ** 2, K, (x1, x2, x3), diff21)


def deltas(Z: int, constants: PhysicalConstants = MODEL_CONSTANTS) -> DeltaSet:
    """The three correction couplings for nuclear charge ``Z``."""
    return deltas_from_lambdas(lambdas(Z, constants))


def deltas_from_lambdas(lam: LambdaSet) -> DeltaSet:
    """Evaluate delta1 -> delta2 -> delta3 from a Lambda set.

    Raises DegenerateInputError when delta1 vanishes (delta2 divides by it).
    """
    x1, x2, x3 = lam.excess
    d = lam.diff21
    u = lam.L2 - lam.L3 + 16.0
    u_minus_8 = x2 * (2.0 + x2) - x3 * (6.0 + x3)
    root = _sqrt(u * u - 64.0 * d, "delta1")
    # w = u - root, written without the subtraction
    denom = u + root
    if denom == 0.0:
        raise DegenerateInputError("u + sqrt(u^2 - 64 d) vanishes in delta1")
    w = 64.0 * d / denom
    d1 = w * w / 2048.0
    if d1 == 0.0:
        raise DegenerateInputError("delta1 = 0: delta2 divides by 1024*delta1")
    beta = abs(w) / 32.0  # sqrt(2 delta1)
    if w > 0.0:
        # delta2 = 1/8 - 2 (1/2 - r)^2 with r = (u + root)/64 = 1/4 + rho
        rho = (u_minus_8 + ((u_minus_8) * (u + 8.0) - 64.0 * d) / (root + 8.0)) / 64.0
        d2 = 2.0 * rho * (0.5 - rho)
    else:
        d2 = 0.125 - (16.0 * beta - d) ** 2 / (1024.0 * d1)
    if 1.0 - 8.0 * d2 < 0.0:
        raise DomainError(f"negative radicand sqrt(1 - 8 delta2), delta2 = {d2}")
    # p - sqrt(L1) with p = 2 - sqrt(1 - 8 delta2) - 2 sqrt(2 delta1)
    p_minus = one_minus_sqrt1m(8.0 * d2) - 2.0 * beta - x1
    p_plus = p_minus + 2.0 * (1.0 + x1)
    d3 = p_minus * p_plus / 8.0
    return DeltaSet(d1, d2, d3)


def cos_exponent(d2: float) -> float:
    """C = 1/2 - sqrt(1/4 - 2 delta2)."""
    if 0.25 - 2.0 * d2 < 0.0:
        raise DomainError(f"negative radicand sqrt(0.25 - 2 delta2), delta2 = {d2}")
    return 2.0 * d2 / (0.5 + math.sqrt(0.25 - 2.0 * d2))


def radial_exponent(L: float, d3: float) -> float:
    """-1/2 + sqrt((L + 1/2)^2 - 2 delta3), rewritten as a quotient."""
    s = _sqrt((L + 0.5) ** 2 - 2.0 * d3, "radial exponent")
    return (L * (L + 1.0) - 2.0 * d3) / (s + 0.5)


def basis_exponents(Z_or_deltas: int | DeltaSet) -> BasisExponents:
    """A0, A1, B0, B1, C for a nuclear charge or an explicit DeltaSet."""
    dl = Z_or_deltas if isinstance(Z_or_deltas, DeltaSet) else deltas(Z_or_deltas)
    if dl.d1 < 0.0:
        raise DomainError(f"delta1 = {dl.d1} < 0 has no real square root")
    C = cos_exponent(dl.d2)
    beta = math.sqrt(2.0 * dl.d1)
    # L + 1/2 = 1 - sqrt(1/4 - 2 delta2) -/+ sqrt(2 delta1) for P = 0, 1
    A0 = radial_exponent(C - beta, dl.d3)
    A1 = radial_exponent(C + beta, dl.d3)
    return BasisExponents(A0, A1, -beta, beta, C)


# -- arbitrary-precision oracle ----------------------------------------------

ORACLE_COLUMNS = ("Z", "L1", "L2", "L3", "d1", "d2", "d3", "A0", "A1", "B0", "B1", "C")


def oracle_row(Z: int, dps: int = 50) -> dict[str, mpmath.mpf]:
    """All model constants for ``Z`` from the formulas as printed, at ``dps`` digits."""
    _check_z(Z)
    with mpmath.workdps(dps):
        mpf, sqrt = mpmath.mpf, mpmath.sqrt
        a = 1 / mpf("137.036")
        D1 = mpf("0.5556") * a**3
        D2 = mpf("0.4138") * a**3
        K = mpmath.floor(a * Z + 1)
        inner = sqrt(1 - (a * Z) ** 2 / K**2)
        X1 = 2 + mpf("1.5") * D1 * a**2 * Z**3 / K**3 - 2 * inner
        X2 = 2 - mpf("0.5") * D1 * a**2 * Z**3 / K**3 - 2 * inner
        L1 = (2 * a * Z - (2 * K - 1) * sqrt(X1)) ** 2 / X1
        L2 = (2 * a * Z - (2 * K - 1) * sqrt(X2)) ** 2 / X2
        g = 2 * K + 1 + sqrt(L1)
        L3 = ((K + 1) ** 2 * g / sqrt((K + 1) ** 4 - 8 * D2 * a**2 * g**2) - 2 * K + 1) ** 2
        u = L2 - L3 + 16
        d1 = (u - sqrt(u**2 - 64 * L2 + 64 * L1)) ** 2 / 2048
        d2 = mpf(1) / 8 - (16 * sqrt(2 * d1) - L2 + L1) ** 2 / (1024 * d1)
        d3 = (2 - sqrt(1 - 8 * d2) - 2 * sqrt(2 * d1)) ** 2 / 8 - L1 / 8
        half_root = sqrt(mpf("0.25") - 2 * d2)
        A0, A1 = (
            -mpf("0.5") + sqrt((1 - half_root - (-1) ** p * sqrt(2 * d1)) ** 2 - 2 * d3)
            for p in (0, 1)
        )
        B0, B1 = (-sqrt(2 * d1), sqrt(2 * d1))
        C = mpf("0.5") - half_root
        values = (Z, L1, L2, L3, d1, d2, d3, A0, A1, B0, B1, C)
        return {k: (+v if k != "Z" else v) for k, v in zip(ORACLE_COLUMNS, values)}


def write_oracle_csv(path, digits: int = 20, dps: int = 50) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(ORACLE_COLUMNS)
        for Z in range(Z_MIN, Z_MAX + 1):
            row = oracle_row(Z, dps)
            w.writerow([Z] + [mpmath.nstr(row[k], digits, min_fixed=0, max_fixed=0) for k in ORACLE_COLUMNS[1:]])


@lru_cache(maxsize=1)
def load_oracle() -> dict[int, dict[str, float]]:
    """The checked-in oracle table (20 significant digits), keyed by Z."""
    text = resources.files("hylleraas.data").joinpath("delta_oracle.csv").read_text()
    out = {}
    for rec in csv.DictReader(text.splitlines()):
        Z = int(rec.pop("Z"))
        out[Z] = {k: float(v) for k, v in rec.items()}
    return out
