"""Closed-form hydrogen-like eigenfunctions of the delta-corrected one-electron
equation, plus the Dirac-correction comparator.

The orbital separates as Phi(phi) Theta(theta) R(r).  Theta is a sine power
times a terminating cosine polynomial and R is a shifted Laguerre-type
polynomial times exp(-xi r); both come back un-normalized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .constants_deltas import (
    MODEL_CONSTANTS,
    DeltaSet,
    PhysicalConstants,
    _check_z,
    cos_exponent,
    deltas as _deltas,
    radial_exponent,
)
from .errors import DomainError


@dataclass(frozen=True)
class Orbital:
    """Quantum numbers (n, l, m, J, P).

    J picks the sign in front of sqrt(1/4 - 2 delta2) and P the sign of the
    sine exponent.  Both labels are accepted for every m; the physically
    smooth branch at delta = 0 is J = 0 with P = 1 whenever m != 0.
    """

    n: int
    l: int
    m: int
    J: int = 0
    P: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"n must be >= 1, got {self.n}")
        if not 0 <= self.l <= self.n - 1:
            raise DomainError(f"l must lie in [0, n-1], got l={self.l}, n={self.n}")
        if abs(self.m) > self.l:
            raise DomainError(f"|m| must not exceed l, got m={self.m}, l={self.l}")
        if self.J not in (0, 1) or self.P not in (0, 1):
            raise DomainError("J and P are 0 or 1")


@dataclass(frozen=True)
class OrbitalSolution:
    orbital: Orbital
    Z: int
    deltas: DeltaSet
    T: float
    L: float
    xi: float
    energy: float
    angular_coeffs: tuple[float, ...]
    radial_coeffs: tuple[float, ...]
    radial_exponent: float  # power of r multiplying the k = 0 term
    sine_exponent: float

    def cosine_powers(self) -> list[float]:
        return [self.T - 2 * k for k in range(len(self.angular_coeffs))]


def _orbital_parameters(orb: Orbital, dl: DeltaSet) -> tuple[float, float, float, float]:
    """T, L, sine exponent and radial exponent for an orbital."""
    C = cos_exponent(dl.d2)
    # 1/2 - (-1)^J sqrt(1/4 - 2 d2) is C for J = 0 and 1 - C for J = 1
    T = orb.l - abs(orb.m) + (C if orb.J == 0 else 1.0 - C)
    rad = orb.m * orb.m + 2.0 * dl.d1
    if rad < 0.0:
        raise DomainError(f"negative radicand m^2 + 2 delta1 = {rad}")
    root = math.sqrt(rad)
    L = T - (root if orb.P == 0 else -root)
    sine = root if orb.P == 1 else -root
    return T, L, sine, radial_exponent(L, dl.d3)


def angular_coefficients(T: float, L: float, d2: float, count: int) -> list[float]:
    coeffs = [1.0]
    for k in range(1, count):
        den = 2 * k * (2 * L + 1 - 2 * k)
        if den == 0.0:
            raise ZeroDivisionError(f"angular recursion denominator vanishes at k={k}")
        num = (T - 2 * k + 2) * (T - 2 * k + 1) + 2.0 * d2
        coeffs.append(-num / den * coeffs[-1])
    return coeffs


def radial_coefficients(n: int, l: int, xi: float, gamma: float, count: int) -> list[float]:
    """b_k for k < count; ``count = n - l + 1`` exposes the vanishing term."""
    root = 2.0 * gamma + 1.0  # sqrt((2L+1)^2 - 8 delta3)
    coeffs = [1.0]
    for k in range(1, count):
        den = k * (k + root)
        if den == 0.0:
            raise ZeroDivisionError(f"radial recursion denominator vanishes at k={k}")
        coeffs.append(-2.0 * xi * (n - l - k) / den * coeffs[-1])
    return coeffs


def solve_orbital(orb: Orbital, Z: int, deltas: DeltaSet | None = None) -> OrbitalSolution:
    """Exact eigen-solution for one orbital.  ``deltas`` overrides the couplings of Z."""
    _check_z(Z)
    dl = _deltas(Z) if deltas is None else deltas
    T, L, sine, gamma = _orbital_parameters(orb, dl)
    xi = Z / (orb.n - orb.l + gamma)
    if xi <= 0.0:
        raise DomainError(f"non-positive orbital exponent {xi} for {orb}")
    ang = angular_coefficients(T, L, dl.d2, (orb.l - abs(orb.m)) // 2 + 1)
    radial = radial_coefficients(orb.n, orb.l, xi, gamma, orb.n - orb.l)
    return OrbitalSolution(orb, Z, dl, T, L, xi, -0.5 * xi * xi, tuple(ang), tuple(radial), gamma, sine)


# -- evaluation ---------------------------------------------------------------


def radial_derivatives(sol: OrbitalSolution, r):
    """R, dR/dr and d2R/dr2 from the closed form."""
    r = np.asarray(r, dtype=float)
    R = np.zeros_like(r)
    dR = np.zeros_like(r)
    d2R = np.zeros_like(r)
    with np.errstate(divide="ignore", invalid="ignore"):
        e = np.exp(-sol.xi * r)
        for k, b in enumerate(sol.radial_coeffs):
            nu = k + sol.radial_exponent
            f = b * r**nu * e
            g = nu / r - sol.xi
            R += f
            dR += g * f
            d2R += (g * g - nu / r**2) * f
    return R, dR, d2R


def radial_wavefunction(sol: OrbitalSolution, r):
    """Un-normalized R(r); r = 0 with a negative leading power gives +inf."""
    scalar = np.ndim(r) == 0
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("radial coordinate must be non-negative")
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.zeros_like(r)
        e = np.exp(-sol.xi * r)
        for k, b in enumerate(sol.radial_coeffs):
            out = out + b * r ** (k + sol.radial_exponent) * e
    return float(out) if scalar else out


def radial_residual(sol: OrbitalSolution, r):
    """Left-hand side of the radial equation applied to R (zero for an exact solution)."""
    r = np.asarray(r, dtype=float)
    R, dR, d2R = radial_derivatives(sol, r)
    L, d3 = sol.L, sol.deltas.d3
    return d2R + 2.0 / r * dR + 2.0 * sol.Z / r * R - (L * (L + 1.0) - 2.0 * d3) / r**2 * R + 2.0 * sol.energy * R


def _check_angle(sol: OrbitalSolution, theta: np.ndarray) -> None:
    s, c = np.sin(theta), np.cos(theta)
    if sol.sine_exponent < 0 and np.any(np.isclose(s, 0.0, atol=1e-300)):
        raise DomainError("negative sine power is singular at theta = 0 or pi")
    for nu in sol.cosine_powers():
        integral = float(nu).is_integer()
        if not integral and np.any(c < 0):
            raise DomainError(f"cos(theta)**{nu} is not real for theta > pi/2")
        if nu < 0 and np.any(np.abs(c) < 1e-15):
            raise DomainError(f"cos(theta)**{nu} is singular at theta = pi/2")


def angular_derivatives(sol: OrbitalSolution, theta):
    """Theta, dTheta/dtheta and its second derivative."""
    theta = np.asarray(theta, dtype=float)
    _check_angle(sol, theta)
    s, c = np.sin(theta), np.cos(theta)
    mu = sol.sine_exponent
    f0 = np.zeros_like(theta)
    f1 = np.zeros_like(theta)
    f2 = np.zeros_like(theta)
    for a, nu in zip(sol.angular_coeffs, sol.cosine_powers()):
        f0 += a * s**mu * c**nu
        f1 += a * (mu * s ** (mu - 1) * c ** (nu + 1) - nu * s ** (mu + 1) * c ** (nu - 1))
        f2 += a * (
            mu * ((mu - 1) * s ** (mu - 2) * c ** (nu + 2) - (nu + 1) * s**mu * c**nu)
            - nu * ((mu + 1) * s**mu * c**nu - (nu - 1) * s ** (mu + 2) * c ** (nu - 2))
        )
    return f0, f1, f2


def angular_wavefunction(sol: OrbitalSolution, theta):
    scalar = np.ndim(theta) == 0
    out = angular_derivatives(sol, theta)[0]
    return float(out) if scalar else out


def angular_residual(sol: OrbitalSolution, theta):
    theta = np.asarray(theta, dtype=float)
    f0, f1, f2 = angular_derivatives(sol, theta)
    s, c = np.sin(theta), np.cos(theta)
    m, dl, L = sol.orbital.m, sol.deltas, sol.L
    return f2 + c / s * f1 - (m * m + 2.0 * dl.d1) / s**2 * f0 + 2.0 * dl.d2 / c**2 * f0 + L * (L + 1.0) * f0


def azimuthal_wavefunction(m: int, phi):
    return np.cos(m * phi) if m >= 0 else np.sin(abs(m) * phi)


def radial_norm(sol: OrbitalSolution) -> float:
    """Numerical value of the integral of R(r)^2 r^2 over [0, inf)."""
    val, _ = integrate.quad(lambda r: radial_wavefunction(sol, r) ** 2 * r * r, 0.0, np.inf, limit=200)
    return val


def dirac_correction(Z: int, constants: PhysicalConstants = MODEL_CONSTANTS) -> float:
    """-Z^2/2 + (1 - sqrt(1 - (aZ)^2))/a^2 + 0.75 * Lamb(1S) * Z^3, in hartree."""
    a = constants.alpha
    x = (a * Z) ** 2
    if x >= 1.0:
        raise DomainError(f"(alpha Z)^2 = {x} >= 1")
    root = math.sqrt(1.0 - x)
    # the first two terms combine to Z^2 x / (2 (1 + root)^2)
    return Z * Z * x / (2.0 * (1.0 + root) ** 2) + 0.75 * constants.delta_1S * Z**3
