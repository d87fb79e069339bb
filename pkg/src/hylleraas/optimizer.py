"""Variational minimization of the energy functionals.

The r12 coefficients enter linearly and are found exactly from a small
generalized eigenproblem; the two orbital exponents are searched by a
deterministic Nelder-Mead simplex.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .constants_deltas import DeltaSet, _check_z
from .errors import ConvergenceError, DomainError, MissingDataError, SingularMatrixError
from .functionals import HylleraasState, ModelKind, model_exponents
from .integrals import overlap_and_numerator_rows

# v[0] smaller than this (relative to the largest component) cannot be scaled to 1
_LEAD_TOL = 1e-10


class SeedStrategy(enum.Enum):
    HEURISTIC = "heuristic"
    TABLE_SEED = "table_seed"


@dataclass(frozen=True)
class OptimizerConfig:
    xi_init_strategy: SeedStrategy = SeedStrategy.HEURISTIC
    outer_tol: float = 1e-9
    max_outer_iters: int = 500
    simplex_scale: float = 0.05
    x_tol: float = 1e-7
    order: int | None = None  # None picks the default for Z
    both_orderings: bool = True  # improved model: also search from the role-swapped seed

    def __post_init__(self):
        if isinstance(self.xi_init_strategy, str):
            object.__setattr__(self, "xi_init_strategy", SeedStrategy(self.xi_init_strategy))
        if not self.outer_tol > 0:
            raise ValueError(f"outer_tol must be positive, got {self.outer_tol}")
        if self.max_outer_iters < 1:
            raise ValueError(f"max_outer_iters must be >= 1, got {self.max_outer_iters}")
        if not self.simplex_scale > 0:
            raise ValueError(f"simplex_scale must be positive, got {self.simplex_scale}")
        if not self.x_tol > 0:
            raise ValueError(f"x_tol must be positive, got {self.x_tol}")
        if self.order is not None and not 0 <= self.order <= 3:
            raise ValueError(f"order must lie in 0..3, got {self.order}")


@dataclass(frozen=True)
class VariationalResult:
    energy: float
    state: HylleraasState
    outer_iters: int
    converged: bool
    history: tuple[float, ...] = field(default=(), repr=False)
    Z: int = 0
    model: ModelKind = ModelKind.IMPROVED


def default_order(Z: int) -> int:
    """Polynomial order of the r12 factor: 3 up to Z = 56, 2 beyond."""
    _check_z(Z)
    return 3 if Z <= 56 else 2


def solve_linear(
    xi1: float,
    xi2: float,
    Z: int,
    model: ModelKind,
    order: int,
    deltas: DeltaSet | None = None,
) -> tuple[tuple[float, ...], float]:
    """Optimal coefficients (leading one = 1) and energy at fixed exponents.

    ``xi1`` belongs to the orbital carrying (A0, B0).  Solves
    N_sym v = mu S v through a Cholesky reduction of S.
    """
    _check_z(Z)
    exps = model_exponents(Z, model, deltas)
    S, N = overlap_and_numerator_rows(xi1, xi2, exps, Z, order)
    Ns = 0.5 * (N + N.T)
    try:
        Lc = np.linalg.cholesky(S)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(f"overlap matrix is not positive definite at xi=({xi1}, {xi2})") from exc
    Linv = np.linalg.inv(Lc)
    reduced = Linv @ Ns @ Linv.T
    reduced = 0.5 * (reduced + reduced.T)
    mu, y = np.linalg.eigh(reduced)
    v = Linv.T @ y[:, 0]
    if abs(v[0]) <= _LEAD_TOL * np.max(np.abs(v)):
        raise SingularMatrixError("lowest eigenvector has a vanishing leading coefficient", vector=v)
    coeffs = v / v[0]
    coeffs[0] = 1.0
    return tuple(float(c) for c in coeffs), float(-0.5 * (xi1 * xi1 + xi2 * xi2) + mu[0])


def solve_state(
    xi1: float, xi2: float, Z: int, model: ModelKind, order: int, deltas: DeltaSet | None = None
) -> tuple[HylleraasState, float]:
    coeffs, e = solve_linear(xi1, xi2, Z, model, order, deltas)
    return HylleraasState.from_roles(xi1, xi2, coeffs), e


def seed_exponents(Z: int, model: ModelKind, cfg: OptimizerConfig) -> tuple[float, float]:
    """Starting (A0/B0-orbital, A1/B1-orbital) exponents."""
    if cfg.xi_init_strategy is SeedStrategy.TABLE_SEED:
        from .reference_data import reference_row

        try:
            row = reference_row(Z)
        except MissingDataError:
            pass
        else:
            if model is ModelKind.SCHRODINGER:
                return row.lambda1, row.lambda2
            return row.xi1, row.xi2
    return Z - 0.55, Z + 1.1


def nelder_mead(f, x0, step, fatol, xatol, max_iters):
    """Plain Nelder-Mead (reflect 1, expand 2, contract 1/2, shrink 1/2).

    Returns (best x, best f, iterations, converged, best-f history).
    """
    n = len(x0)
    pts = [np.asarray(x0, dtype=float)]
    for k in range(n):
        p = pts[0].copy()
        p[k] += step[k]
        pts.append(p)
    vals = [f(p) for p in pts]
    history = []
    converged = False
    it = 0
    while it < max_iters:
        order = sorted(range(n + 1), key=lambda i: vals[i])
        pts = [pts[i] for i in order]
        vals = [vals[i] for i in order]
        history.append(vals[0])
        size = max(np.max(np.abs(p - pts[0])) for p in pts[1:])
        if math.isfinite(vals[-1]) and vals[-1] - vals[0] <= fatol and size <= xatol:
            converged = True
            break
        it += 1
        centroid = np.mean(pts[:-1], axis=0)
        worst = pts[-1]
        xr = centroid + (centroid - worst)
        fr = f(xr)
        if fr < vals[0]:
            xe = centroid + 2.0 * (centroid - worst)
            fe = f(xe)
            pts[-1], vals[-1] = (xe, fe) if fe < fr else (xr, fr)
            continue
        if fr < vals[-2]:
            pts[-1], vals[-1] = xr, fr
            continue
        if fr < vals[-1]:
            xc = centroid + 0.5 * (xr - centroid)
            fc = f(xc)
            if fc <= fr:
                pts[-1], vals[-1] = xc, fc
                continue
        else:
            xc = centroid + 0.5 * (worst - centroid)
            fc = f(xc)
            if fc < vals[-1]:
                pts[-1], vals[-1] = xc, fc
                continue
        for i in range(1, n + 1):
            pts[i] = pts[0] + 0.5 * (pts[i] - pts[0])
            vals[i] = f(pts[i])
    best = int(np.argmin(vals))
    if not converged:
        history.append(vals[best])
    return pts[best], vals[best], it, converged, history


def solve_full(Z: int, model: ModelKind, cfg: OptimizerConfig | None = None) -> VariationalResult:
    """Minimize over both exponents and the r12 coefficients."""
    _check_z(Z)
    cfg = cfg or OptimizerConfig()
    order = default_order(Z) if cfg.order is None else cfg.order

    def objective(x):
        if not (x[0] > 0 and x[1] > 0):
            return math.inf
        try:
            return solve_linear(float(x[0]), float(x[1]), Z, model, order)[1]
        except (SingularMatrixError, ConvergenceError, DomainError, FloatingPointError):
            return math.inf

    x0 = seed_exponents(Z, model, cfg)
    seeds = [x0]
    # the two improved orbitals differ, so exchanging their exponents is a
    # different trial function with its own local minimum
    if model is ModelKind.IMPROVED and cfg.both_orderings:
        seeds.append((x0[1], x0[0]))
    step = cfg.simplex_scale * max(1.0, float(Z))
    best = None
    for seed in seeds:
        run = nelder_mead(objective, seed, (step, step), cfg.outer_tol, cfg.x_tol, cfg.max_outer_iters)
        if best is None or run[1] < best[1]:
            best = run
    x, _, iters, converged, history = best
    state, e = solve_state(float(x[0]), float(x[1]), Z, model, order)
    return VariationalResult(e, state, iters, converged, tuple(history), Z, model)


def with_order(cfg: OptimizerConfig, order: int | None) -> OptimizerConfig:
    return replace(cfg, order=order)
