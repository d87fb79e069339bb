"""Correlated three-coordinate integrals and the Hylleraas matrix assembly.

    I(a, b, i, j, k) = int_0^inf int_0^inf int_|r1-r2|^(r1+r2)
                       r1^(i+1) r2^(j+1) r12^(k+1) exp(-a r1 - b r2) dr12 dr2 dr1

The r12 integral is done first, ((r1+r2)^n - |r1-r2|^n)/n with n = k + 2,
and the binomial expansion leaves only odd powers of the smaller radius.  Each
of the two wedges (r1 < r2, r1 > r2) is then

    W(p, q; a, b) = int_0^inf x^p e^(-a x) int_0^x y^q e^(-b y) dy dx,

which follows from integrating the lower incomplete gamma series of the inner
integral term by term:

    W = Gamma(p+q+2) / ((q+1) (a+b)^(p+q+2)) * sum_t (p+q+2)_t / (q+2)_t z^t,
    z = b / (a+b).

i and j may be real (k stays an integer), which is what non-integer orbital
powers need.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.special import gammaln

from .constants_deltas import BasisExponents
from .errors import ConvergenceError, DomainError

_SERIES_EPS = 1e-17
_MAX_SERIES_TERMS = 20000
_CHUNK = 48
_LOG_MAX = 700.0


@dataclass(frozen=True)
class IntegralKey:
    a: float
    b: float
    i: float
    j: float
    k: int

    def __post_init__(self):
        _check_domain(self.a, self.b, self.i, self.j, self.k)

    def swapped(self) -> "IntegralKey":
        return IntegralKey(self.b, self.a, self.j, self.i, self.k)


def _check_domain(a, b, i, j, k) -> None:
    if not (a > 0 and b > 0):
        raise DomainError(f"rates must be positive, got a={a}, b={b}")
    if int(k) != k or k < -1:
        raise DomainError(f"r12 power offset k must be an integer >= -1, got {k}")
    # integrand ~ r^(i+2) near r1 = 0 and the total degree must stay positive
    if not (i > -3 and j > -3 and i + j + k + 6 > 0):
        raise DomainError(f"powers (i={i}, j={j}, k={k}) outside the convergence region")


def _series(s, q, z):
    """sum_t (s)_t / (q+2)_t z^t, vectorized, to relative precision ~1e-17."""
    total = np.ones_like(z)
    last = np.ones_like(z)
    active = np.arange(z.size)
    t0 = 0
    while active.size:
        if t0 >= _MAX_SERIES_TERMS:
            raise ConvergenceError("wedge series did not converge")
        t = np.arange(t0 + 1, t0 + _CHUNK + 1, dtype=float)
        ss, qq, zz = s[active, None], q[active, None], z[active, None]
        terms = last[active, None] * np.cumprod((ss + t - 1) / (qq + 1 + t) * zz, axis=1)
        total[active] += terms.sum(axis=1)
        last[active] = terms[:, -1]
        t0 += _CHUNK
        # the term ratio tends to z < 1; stop once it is shrinking and negligible
        ratio = (s[active] + t0) / (q[active] + 2 + t0) * z[active]
        done = (last[active] <= _SERIES_EPS * total[active]) & (ratio < 1.0)
        active = active[~done]
    return total


def _wedges(p, q, a, b):
    """W(p, q; a, b) for arrays; q > -1 and p + q + 2 > 0 assumed."""
    s = p + q + 2.0
    c = a + b
    log_pref = gammaln(s) - s * np.log(c) - np.log(q + 1.0)
    if np.any(log_pref > _LOG_MAX):
        raise DomainError("integral overflows double precision")
    out = np.empty_like(s)

    # For z > 1/2 the complementary wedge converges faster; subtract it from
    # the full product integral when that loses at most one bit.
    use_comp = (b > a) & (p > -1.0)
    direct = ~use_comp
    if use_comp.any():
        idx = np.flatnonzero(use_comp)
        pc, qc, ac, bc, sc = p[idx], q[idx], a[idx], b[idx], s[idx]
        full = np.exp(gammaln(pc + 1) + gammaln(qc + 1) - (pc + 1) * np.log(ac) - (qc + 1) * np.log(bc))
        comp = np.exp(gammaln(sc) - sc * np.log(ac + bc) - np.log(pc + 1.0)) * _series(sc, pc, ac / (ac + bc))
        good = comp <= 0.5 * full
        out[idx[good]] = full[good] - comp[good]
        direct[idx[~good]] = True
    if direct.any():
        out[direct] = np.exp(log_pref[direct]) * _series(s[direct], q[direct], (b / c)[direct])
    return out


@lru_cache(maxsize=64)
def _expansion(n: int):
    """Odd-power binomial terms of ((x+y)^n - |x-y|^n)/n as (m, coefficient)."""
    ms = [m for m in range(n + 1) if (n - m) % 2 == 1]
    return np.array(ms, dtype=float), np.array([2.0 * math.comb(n, m) / n for m in ms])


def hylleraas_integrals(a, b, i, j, k) -> np.ndarray:
    """Vectorized I(a, b, i, j, k); arguments broadcast against each other."""
    a, b, i, j, k = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (a, b, i, j, k)))
    shape = a.shape
    a, b, i, j, k = (np.ravel(x) for x in (a, b, i, j, k))
    _check_domain_arrays(a, b, i, j, k)
    parts, layout = [], []
    for kv in np.unique(k):
        sel = np.flatnonzero(k == kv)
        n = int(kv) + 2
        ms, cs = _expansion(n)
        ai, bi, ii, ji = a[sel, None], b[sel, None], i[sel, None], j[sel, None]
        grid = np.ones((sel.size, ms.size))
        # r1 < r2 (r1 inner) and r1 > r2 (r2 inner)
        parts.append(
            (
                np.concatenate([(ji + 1 + ms) * grid, (ii + 1 + ms) * grid]).ravel(),
                np.concatenate([(ii + 1 + n - ms) * grid, (ji + 1 + n - ms) * grid]).ravel(),
                np.concatenate([bi * grid, ai * grid]).ravel(),
                np.concatenate([ai * grid, bi * grid]).ravel(),
            )
        )
        layout.append((sel, cs))
    w_all = _wedges(*(np.concatenate(col) for col in zip(*parts)))
    out = np.empty(a.size)
    start = 0
    for sel, cs in layout:
        stop = start + 2 * sel.size * cs.size
        w = w_all[start:stop].reshape(2, sel.size, cs.size)
        out[sel] = ((w[0] + w[1]) * cs).sum(axis=1)
        start = stop
    return out.reshape(shape)


def _check_domain_arrays(a, b, i, j, k) -> None:
    ok = (a > 0) & (b > 0) & (k == np.round(k)) & (k >= -1) & (i > -3) & (j > -3) & (i + j + k + 6 > 0)
    if not ok.all():
        bad = int(np.flatnonzero(~ok)[0])
        _check_domain(a[bad], b[bad], i[bad], j[bad], k[bad])
        raise DomainError("integral key outside the convergence region")


@lru_cache(maxsize=65536)
def _integral_cached(a: float, b: float, i: float, j: float, k: int) -> float:
    return float(hylleraas_integrals(a, b, i, j, k))


def hylleraas_integral(a, b=None, i=None, j=None, k=None) -> float:
    """Closed-form I for one key; accepts an IntegralKey or five numbers.

    Results are memoized on the exact bit pattern of the arguments.
    """
    if isinstance(a, IntegralKey):
        a, b, i, j, k = a.a, a.b, a.i, a.j, a.k
    _check_domain(a, b, i, j, k)
    return _integral_cached(float(a), float(b), float(i), float(j), int(k))


def quadrature_oracle(a, b=None, i=None, j=None, k=None, rel_tol: float = 1e-10, limit: int = 200) -> float:
    """Same integral by nested adaptive quadrature (r12 done analytically).

    Independent of the series route above: scipy QUADPACK on the two wedges of
    the inner r2 integral and on the outer r1 integral.
    """
    if isinstance(a, IntegralKey):
        a, b, i, j, k = a.a, a.b, a.i, a.j, a.k
    _check_domain(a, b, i, j, k)
    if not 1e-12 <= rel_tol <= 1e-4:
        raise ValueError("rel_tol must lie in [1e-12, 1e-4]")
    n = int(k) + 2
    inner_tol = max(rel_tol * 1e-2, 1e-13)

    def kernel(r2, r1):
        return r2 ** (j + 1) * math.exp(-b * r2) * ((r1 + r2) ** n - abs(r1 - r2) ** n)

    def inner(r1):
        lo = integrate.quad(kernel, 0.0, r1, args=(r1,), epsrel=inner_tol, epsabs=0.0, limit=limit)[0]
        hi = integrate.quad(kernel, r1, np.inf, args=(r1,), epsrel=inner_tol, epsabs=0.0, limit=limit)[0]
        return r1 ** (i + 1) * math.exp(-a * r1) * (lo + hi) / n

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(inner, 0.0, np.inf, epsrel=rel_tol, epsabs=0.0, limit=limit)
    if not err <= rel_tol * abs(val):
        raise ConvergenceError(f"quadrature estimate {err / abs(val):.2e} exceeds rel_tol={rel_tol}")
    return val


# -- matrix assembly ------------------------------------------------------------
#
# Local energy of one electron acting on phi0(r_self) phi1(r_other) r12^i,
# term by term.  Each row: (label, coefficient, power of r_self, power of
# r_other, offset added to the r12 power).  ``x``, ``A``, ``B`` belong to the
# electron the one-body operator acts on; ``i`` is the ket's r12 power.  The
# angle-dependent cross terms of the local energy (the cos/sin ratio terms in
# C and B) are dropped: their angular average is taken as zero.

NUMERATOR_TERMS = (
    ("nuclear", "x*(A+0.5*i+1)-Z", -1, 0, 0),
    ("centrifugal", "-0.5*i*(A-B-C)", -2, 0, 0),
    ("r12_kinetic", "-0.5*i*(A+B+C+i+1)", 0, 0, -2),
    ("cross_self", "0.5*i*x", 1, 0, -2),
    ("cross_other", "-0.5*i*x", -1, 2, -2),
    ("cross_angular", "0.5*i*(A-B-C)", -2, 2, -2),
)
# electron repulsion: the two 0.5/r12 halves of the one-electron operators
REPULSION_TERM = ("repulsion", "1", 0, 0, -1)


def _term_coefficient(label: str, i: int, x: float, A: float, B: float, C: float, Z: int) -> float:
    if label == "nuclear":
        return x * (A + 0.5 * i + 1.0) - Z
    if label == "centrifugal":
        return -0.5 * i * (A - B - C)
    if label == "r12_kinetic":
        return -0.5 * i * (A + B + C + i + 1.0)
    if label == "cross_self":
        return 0.5 * i * x
    if label == "cross_other":
        return -0.5 * i * x
    if label == "cross_angular":
        return 0.5 * i * (A - B - C)
    raise KeyError(label)


def overlap_and_numerator_rows(
    xi1: float,
    xi2: float,
    exps: BasisExponents,
    Z: int,
    order: int,
    weight_exponents: bool = False,
) -> tuple[np.ndarray, np.ndarray]:
    """Overlap S and (row-asymmetric) numerator N for the symmetrized basis.

    ``xi1`` is the exponent of the orbital carrying (A0, B0), ``xi2`` that of
    (A1, B1).  The energy is -(xi1^2 + xi2^2)/2 + b.N.b / b.S.b.  The common
    angular factor of every matrix element is the constant 2 and cancels.

    With ``weight_exponents`` the radial weights r^(2 A_p) of |phi|^2 are
    folded into the integral powers; by default integer powers are used.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    if not (xi1 > 0 and xi2 > 0):
        raise DomainError(f"orbital exponents must be positive, got {xi1}, {xi2}")
    S, N = _assemble(float(xi1), float(xi2), exps, int(Z), int(order), bool(weight_exponents))
    return S.copy(), N.copy()


@lru_cache(maxsize=4096)
def _assemble(xi1, xi2, exps, Z, order, weight_exponents):
    size = order + 1
    xis = (xi1, xi2)
    As, Bs, C = (exps.A0, exps.A1), (exps.B0, exps.B1), exps.C
    if weight_exponents:
        shift = (2.0 * exps.A0, 2.0 * exps.A1)
        shift_x = exps.A0 + exps.A1
    else:
        shift = (0.0, 0.0)
        shift_x = 0.0
    sigma = xi1 + xi2

    # Collect (row, col, coefficient, integral key) for both matrices; every
    # direct integral is written with rates (2 xi1, 2 xi2).
    keys: dict[tuple, int] = {}
    entries_S, entries_N = [], []

    def key_index(a, b, pi, pj, k):
        key = (a, b, pi, pj, k)
        if key not in keys:
            keys[key] = len(keys)
        return keys[key]

    def add_pair(entries, row, col, coef, role, p_self, p_other, k):
        if role == 0:
            d = key_index(2 * xi1, 2 * xi2, p_self + shift[0], p_other + shift[1], k)
        else:
            d = key_index(2 * xi1, 2 * xi2, p_other + shift[0], p_self + shift[1], k)
        e = key_index(sigma, sigma, p_self + shift_x, p_other + shift_x, k)
        entries.append((row, col, coef, d))
        entries.append((row, col, coef, e))

    for i in range(size):
        for j in range(size):
            k = i + j
            add_pair(entries_S, i, j, 1.0, 0, 0, 0, k)
            for role in (0, 1):
                x, A, B = xis[role], As[role], Bs[role]
                for label, _, p_self, p_other, off in NUMERATOR_TERMS:
                    coef = _term_coefficient(label, i, x, A, B, C, Z)
                    if coef == 0.0 and off < 0:
                        continue  # vanishing i-proportional terms; k + off may be out of range
                    add_pair(entries_N, i, j, coef, role, p_self, p_other, k + off)
            _, _, p_self, p_other, off = REPULSION_TERM
            add_pair(entries_N, i, j, 1.0, 0, p_self, p_other, k + off)

    arr = np.array(list(keys), dtype=float)
    values = hylleraas_integrals(arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3], arr[:, 4])

    def build(entries):
        M = np.zeros((size, size))
        for row, col, coef, idx in entries:
            M[row, col] += coef * values[idx]
        return M

    S, N = build(entries_S), build(entries_N)
    S.flags.writeable = False
    N.flags.writeable = False
    return S, N
