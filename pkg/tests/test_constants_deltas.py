import math

import mpmath
import numpy as np
import pytest

from hylleraas.constants_deltas import (
    MODEL_CONSTANTS,
    ZERO_DELTAS,
    DeltaSet,
    LambdaSet,
    PhysicalConstants,
    basis_exponents,
    cos_exponent,
    deltas,
    deltas_from_lambdas,
    kdot,
    lambdas,
    load_oracle,
    one_minus_sqrt1m,
    oracle_row,
)
from hylleraas.errors import DegenerateInputError, DomainError
from hylleraas.hydrogenic import Orbital, solve_orbital

COLUMNS = ("L1", "L2", "L3", "d1", "d2", "d3", "A0", "A1", "B0", "B1", "C")


def double_row(Z):
    lam, dl, ex = lambdas(Z), deltas(Z), basis_exponents(Z)
    return dict(
        L1=lam.L1, L2=lam.L2, L3=lam.L3, d1=dl.d1, d2=dl.d2, d3=dl.d3, A0=ex.A0, A1=ex.A1, B0=ex.B0, B1=ex.B1, C=ex.C
    )


def test_constants_pinned():
    a = MODEL_CONSTANTS.alpha
    assert a == 1.0 / 137.036
    assert MODEL_CONSTANTS.delta_1S == pytest.approx(0.5556 * a**3, rel=1e-15)
    assert MODEL_CONSTANTS.delta_2S == pytest.approx(0.4138 * a**3, rel=1e-15)


@pytest.mark.parametrize("Z", [1, 99, 137])
def test_kdot_is_one(Z):
    assert kdot(Z) == 1


def test_kdot_rejects_alpha_z_at_least_one():
    with pytest.raises(DomainError):
        kdot(138)
    with pytest.raises(DomainError):
        kdot(0)


@pytest.mark.parametrize("Z", [0, 100, -3])
def test_z_outside_range(Z):
    with pytest.raises(DomainError):
        deltas(Z)


def test_double_route_matches_frozen_oracle_everywhere():
    oracle = load_oracle()
    assert sorted(oracle) == list(range(1, 100))
    worst = 0.0
    for Z, row in oracle.items():
        mine = double_row(Z)
        for k in COLUMNS:
            worst = max(worst, abs(mine[k] - row[k]) / abs(row[k]))
    assert worst < 1e-12


@pytest.mark.parametrize("Z", [1, 10, 99])
def test_frozen_oracle_matches_fresh_high_precision_run(Z):
    fresh = oracle_row(Z, dps=60)
    frozen = load_oracle()[Z]
    for k in COLUMNS:
        assert float(fresh[k]) == pytest.approx(frozen[k], rel=1e-18, abs=0)


def test_oracle_literals():
    # 20-digit values of the frozen table
    o = load_oracle()
    assert o[1]["d1"] == pytest.approx(5.8262816483097387877e-15, rel=1e-15)
    assert o[1]["d2"] == pytest.approx(1.6775955556110783353e-6, rel=1e-15)
    assert o[2]["d3"] == pytest.approx(2.0051256111785519004e-5, rel=1e-15)
    assert o[99]["C"] == pytest.approx(4.0188653969439656162e-2, rel=1e-15)


def test_lambdas_non_negative_and_kdot():
    for Z in range(1, 100):
        lam = lambdas(Z)
        assert lam.kdot == 1
        assert min(lam.L1, lam.L2, lam.L3) >= 0


def test_small_deltas_at_low_z():
    for Z in range(1, 11):
        dl = deltas(Z)
        assert max(abs(dl.d1), abs(dl.d2), abs(dl.d3)) < 0.01


def test_deltas_smooth_and_finite():
    rows = np.array([[*deltas(Z).__dict__.values()] for Z in range(1, 100)])
    assert np.all(np.isfinite(rows))
    assert np.all(rows[:, 0] >= 0)
    assert np.all(0.25 - 2 * rows[:, 1] >= 0)
    # no sign flips or jumps between neighbouring Z
    for col in range(3):
        ratio = rows[1:, col] / rows[:-1, col]
        assert np.all(ratio > 0) and np.all(ratio < 20)


def test_naive_form_loses_digits_but_stable_form_does_not():
    a = MODEL_CONSTANTS.alpha
    with mpmath.workdps(40):
        for Z in range(1, 100):
            x = (a * Z) ** 2
            exact = 2 - 2 * mpmath.sqrt(1 - mpmath.mpf(x))
            stable = 2 * one_minus_sqrt1m(x)
            naive = 2 - 2 * math.sqrt(1 - x)
            assert abs(stable - exact) / exact < 1e-15
            assert abs(naive - exact) / exact < 1e-10


def test_degenerate_zero_lambdas():
    with pytest.raises(DegenerateInputError):
        deltas_from_lambdas(LambdaSet.from_values(0.0, 0.0, 0.0))


def test_zero_deltas_give_zero_exponents():
    ex = basis_exponents(ZERO_DELTAS)
    assert (ex.A0, ex.A1, ex.B0, ex.B1, ex.C) == (0, 0, 0, 0, 0)


def test_basis_exponent_invariants():
    for Z in range(1, 100):
        ex = basis_exponents(Z)
        assert ex.B0 == -ex.B1
        assert ex.A0 > -0.5 and ex.A1 > -0.5


@pytest.mark.parametrize("Z", [1, 2, 17, 56, 99])
def test_exponents_match_hydrogenic_ground_orbital(Z):
    ex = basis_exponents(Z)
    for p, (A, B) in enumerate(((ex.A0, ex.B0), (ex.A1, ex.B1))):
        sol = solve_orbital(Orbital(1, 0, 0, 0, p), Z)
        assert sol.radial_exponent == pytest.approx(A, rel=1e-12, abs=1e-18)
        assert sol.sine_exponent == pytest.approx(B, rel=1e-12, abs=1e-18)
        assert sol.xi == pytest.approx(Z / (A + 1.0), rel=1e-12)


def test_cos_exponent_domain():
    assert cos_exponent(0.0) == 0.0
    with pytest.raises(DomainError):
        cos_exponent(0.2)


def test_negative_delta1_rejected():
    with pytest.raises(DomainError):
        basis_exponents(DeltaSet(-1e-6, 0.0, 0.0))


def test_alpha_override_changes_couplings():
    c = PhysicalConstants.with_alpha(1.0 / 100.0)
    assert deltas(5, c).d2 > deltas(5).d2
