import math

import numpy as np
import pytest

from hylleraas.constants_deltas import ZERO_DELTAS, PhysicalConstants, deltas
from hylleraas.errors import DomainError
from hylleraas.hydrogenic import (
    Orbital,
    angular_derivatives,
    angular_coefficients,
    angular_residual,
    angular_wavefunction,
    azimuthal_wavefunction,
    dirac_correction,
    radial_coefficients,
    radial_derivatives,
    radial_norm,
    radial_residual,
    radial_wavefunction,
    solve_orbital,
)


def physical(n, l, m):
    return Orbital(n, l, m, 0, 1 if m else 0)


@pytest.mark.parametrize("bad", [(0, 0, 0), (2, 2, 0), (2, 1, 2), (1, 0, 0, 2, 0), (1, 0, 0, 0, -1)])
def test_orbital_validation(bad):
    with pytest.raises(DomainError):
        Orbital(*bad)


def test_ground_state_without_corrections():
    for Z in (1, 2, 50):
        sol = solve_orbital(Orbital(1, 0, 0), Z, ZERO_DELTAS)
        assert sol.xi == Z
        assert sol.energy == -Z * Z / 2


def test_bohr_2s():
    assert solve_orbital(Orbital(2, 0, 0), 3, ZERO_DELTAS).energy == pytest.approx(-9 / 8, rel=1e-15)


def test_hydrogen_1s_with_corrections():
    sol = solve_orbital(Orbital(1, 0, 0), 1)
    # mpmath evaluation with oracle couplings
    assert sol.energy == pytest.approx(-0.50000681852354215224, rel=1e-14)
    assert abs(sol.energy + 0.5) < 1e-4


def test_solution_invariants():
    for Z in (1, 7, 99):
        for n in range(1, 5):
            for l in range(n):
                for m in range(-l, l + 1):
                    sol = solve_orbital(physical(n, l, m), Z)
                    assert sol.energy == -0.5 * sol.xi**2
                    assert sol.angular_coeffs[0] == 1.0 and sol.radial_coeffs[0] == 1.0
                    assert len(sol.radial_coeffs) == n - l
                    assert len(sol.angular_coeffs) == (l - abs(m)) // 2 + 1


@pytest.mark.parametrize("Z", [1, 2, 7, 40, 99])
def test_delta_zero_reduction_physical_branch(Z):
    for n in range(1, 6):
        for l in range(n):
            for m in range(-l, l + 1):
                e = solve_orbital(physical(n, l, m), Z, ZERO_DELTAS).energy
                assert e == pytest.approx(-Z * Z / (2 * n * n), rel=1e-14)


def test_other_branches_shift_the_level():
    # J = 1 adds one to the effective principal number at zero coupling
    e = solve_orbital(Orbital(2, 1, 0, 1, 0), 1, ZERO_DELTAS).energy
    assert e == pytest.approx(-1 / 18, rel=1e-14)


def test_radial_recursion_terminates():
    for Z in (1, 5, 10):
        for n in range(1, 5):
            for l in range(n):
                sol = solve_orbital(physical(n, l, 0), Z)
                extra = radial_coefficients(n, l, sol.xi, sol.radial_exponent, n - l + 1)
                assert extra[-1] == 0.0


def test_radial_residual_small():
    r = np.linspace(0.05, 12.0, 50)
    for Z in (1, 5, 10):
        for orb in (physical(1, 0, 0), physical(2, 1, 1), physical(3, 2, -2), Orbital(3, 1, 0, 1, 1)):
            sol = solve_orbital(orb, Z)
            res = radial_residual(sol, r / Z)
            scale = np.max(np.abs(radial_derivatives(sol, r / Z)[2]))
            assert np.max(np.abs(res)) / scale < 1e-10


def test_angular_residual_even_l_minus_m():
    theta = np.linspace(0.2, 1.4, 25)
    for Z in (1, 5, 10):
        for orb in (physical(1, 0, 0), physical(3, 2, 0), physical(2, 1, 1), Orbital(3, 2, 0, 1, 0)):
            sol = solve_orbital(orb, Z)
            scale = np.max(np.abs(angular_derivatives(sol, theta)[2])) + 1e-300
            res = np.max(np.abs(angular_residual(sol, theta)))
            assert res < 1e-8 * max(scale, 1.0)


def test_angular_residual_odd_l_minus_m_is_of_order_delta2():
    # the cosine series does not close for odd l - |m| once delta2 != 0
    theta = np.linspace(0.2, 1.4, 25)
    sol = solve_orbital(physical(2, 1, 0), 10)
    res = np.max(np.abs(angular_residual(sol, theta)))
    assert 1e-6 < res < 100 * deltas(10).d2
    sol0 = solve_orbital(physical(2, 1, 0), 10, ZERO_DELTAS)
    assert np.max(np.abs(angular_residual(sol0, theta))) < 1e-12


def test_radial_values():
    sol = solve_orbital(Orbital(1, 0, 0), 1, ZERO_DELTAS)
    assert radial_wavefunction(sol, 1.0) == pytest.approx(math.exp(-1), rel=1e-15)
    real = solve_orbital(Orbital(1, 0, 0), 1)
    assert radial_wavefunction(real, 1.0) == pytest.approx(0.36787693279391543209, rel=1e-14)


def test_2s_single_node():
    sol = solve_orbital(Orbital(2, 0, 0), 1, ZERO_DELTAS)
    r = np.geomspace(0.013, 40, 4000)  # avoids landing on the node at r = 2
    R = radial_wavefunction(sol, r)
    assert np.count_nonzero(R[:-1] * R[1:] < 0) == 1


def test_radial_at_origin_with_negative_power():
    sol = solve_orbital(Orbital(1, 0, 0), 10)
    assert sol.radial_exponent < 0
    assert radial_wavefunction(sol, 0.0) == math.inf
    with pytest.raises(DomainError):
        radial_wavefunction(sol, -1.0)


def test_angular_limits():
    th = np.linspace(0.1, 1.5, 7)
    s = solve_orbital(Orbital(1, 0, 0), 1, ZERO_DELTAS)
    assert np.allclose(angular_wavefunction(s, th), 1.0)
    p = solve_orbital(Orbital(2, 1, 0, 0, 1), 1, ZERO_DELTAS)
    assert np.allclose(angular_wavefunction(p, th), np.cos(th))
    d = solve_orbital(Orbital(3, 2, 0), 1, ZERO_DELTAS)
    assert d.angular_coeffs[1] / d.angular_coeffs[0] == pytest.approx(-1 / 3)
    # Legendre P2 ~ 3 cos^2 - 1: constant over cos^2 term is -1/3, i.e. ratio -3 the other way
    assert d.angular_coeffs[0] / d.angular_coeffs[1] == pytest.approx(-3.0)


def test_angular_domain_errors():
    sol = solve_orbital(Orbital(1, 0, 0), 5)
    assert sol.sine_exponent < 0
    with pytest.raises(DomainError):
        angular_wavefunction(sol, 0.0)
    with pytest.raises(DomainError):
        angular_wavefunction(sol, 2.5)  # cos < 0 with non-integer power


def test_angular_recursion_vanishing_denominator():
    with pytest.raises(ZeroDivisionError):
        angular_coefficients(2.0, 0.5, 0.0, 2)


def test_azimuthal():
    assert azimuthal_wavefunction(2, 0.3) == pytest.approx(math.cos(0.6))
    assert azimuthal_wavefunction(-2, 0.3) == pytest.approx(math.sin(0.6))


def test_energy_ordering():
    for Z in (1, 30, 99):
        es = [solve_orbital(Orbital(n, 0, 0), Z).energy for n in (1, 2, 3)]
        assert es[0] < es[1] < es[2]


def test_radial_norm_1s():
    sol = solve_orbital(Orbital(1, 0, 0), 2, ZERO_DELTAS)
    assert radial_norm(sol) == pytest.approx(2 / (2 * 2) ** 3, rel=1e-10)


def test_dirac_correction_values():
    # 40-digit evaluation of the printed formula
    assert dirac_correction(1) == pytest.approx(6.8185235421522362064e-6, rel=1e-13)
    assert dirac_correction(3) == pytest.approx(5.4367122903107745689e-4, rel=1e-13)


def test_dirac_correction_nonrelativistic_limit():
    c = PhysicalConstants.with_alpha(1e-9)
    assert abs(dirac_correction(2, c)) < 1e-15
