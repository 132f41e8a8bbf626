import cmath
import math
from decimal import Decimal, getcontext
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kurepa import special
from kurepa.errors import PoleError
from kurepa.special import ei_one, gamma, ln_gamma, minus_one_power, upper_gamma_at_minus_one

E = math.e


def close(a, b, rel):
    return abs(a - b) <= rel * abs(b)


def finite_complex(lo, hi):
    part = st.floats(lo, hi, allow_nan=False, allow_infinity=False)
    return st.builds(complex, part, part)


def off_poles(z, tol=1e-3):
    n = min(round(z.real), 0)
    return abs(z - n) > tol


# ------------------------------------------------------------------ gamma

@pytest.mark.parametrize("z, expected", [(1, 1.0), (5, 24.0), (0.5, math.sqrt(math.pi))])
def test_gamma_examples(z, expected):
    assert close(gamma(z), expected, 1e-15)


def test_gamma_matches_factorials():
    for n in range(1, 40):
        assert close(gamma(n), math.factorial(n - 1), 1e-13)


def test_gamma_against_mpmath_in_disk():
    mpmath.mp.dps = 30
    pts = [complex(r * math.cos(t), r * math.sin(t))
           for r in (0.3, 2.7, 11.0, 26.5, 49.0) for t in [k * 0.37 for k in range(17)]]
    for z in pts:
        if not off_poles(z):
            continue
        ref = complex(mpmath.gamma(mpmath.mpc(z.real, z.imag)))
        assert close(gamma(z), ref, 1e-12), z


@pytest.mark.parametrize("z", [0, -1, -7, -3 + 1e-13])
def test_gamma_pole_error(z):
    with pytest.raises(PoleError):
        gamma(z)


def test_gamma_reflection_identity():
    for z in (0.3 + 0.2j, 0.9 - 4j, 0.25, 0.1 + 7j):
        lhs = gamma(z) * gamma(1 - z)
        assert close(lhs, math.pi / cmath.sin(math.pi * z), 1e-13)


@settings(max_examples=200, deadline=None)
@given(finite_complex(-20, 20))
def test_gamma_recurrence_property(z):
    if not (off_poles(z) and off_poles(z + 1)):
        return
    assert abs(gamma(z + 1) / (z * gamma(z)) - 1) < 1e-10


@settings(max_examples=100, deadline=None)
@given(finite_complex(-30, 30))
def test_gamma_conjugate_symmetry(z):
    if not off_poles(z):
        return
    assert close(gamma(z.conjugate()), gamma(z).conjugate(), 1e-12)


# -------------------------------------------------------------- ln_gamma

def test_ln_gamma_examples():
    assert abs(ln_gamma(1)) < 1e-15
    assert abs(ln_gamma(2)) < 1e-15
    # ln 9! from the exact integer
    assert abs(ln_gamma(10) - math.log(362880)) < 1e-13
    assert abs(math.log(362880) - 12.801827480081469) < 1e-14


@settings(max_examples=100, deadline=None)
@given(finite_complex(-25, 25))
def test_ln_gamma_exp_consistency(z):
    if not off_poles(z):
        return
    assert close(cmath.exp(ln_gamma(z)), gamma(z), 1e-10)


# ---------------------------------------------------- branch and helpers

def test_minus_one_power_exact_at_integers():
    assert minus_one_power(0) == 1
    assert minus_one_power(1) == -1
    assert minus_one_power(2) == 1
    assert minus_one_power(-3) == -1
    assert minus_one_power(0.5) == 1j


@settings(max_examples=100, deadline=None)
@given(finite_complex(-40, 40))
def test_minus_one_power_shift(a):
    lhs = minus_one_power(a + 1)
    assert abs(lhs + minus_one_power(a)) <= 4e-16 * max(1.0, abs(lhs)) * (1 + abs(a))


def test_sinpi_cospi():
    for k in range(-6, 7):
        assert special.sinpi(k) == 0.0
        assert abs(special.cospi(k)) == 1.0
        assert special.cospi(k + 0.5) == 0.0
    for x in (0.1, 0.77, -3.3, 12.9):
        assert math.isclose(special.sinpi(x), math.sin(math.pi * x), rel_tol=1e-13)
        assert math.isclose(special.cospi(x), math.cos(math.pi * x), rel_tol=1e-13)


def test_expm1_and_phi1_small_arguments():
    for w in (1e-12 + 1e-12j, -3e-9, 2e-5j, 0.3 - 0.7j):
        ref = complex(mpmath.expm1(mpmath.mpc(w.real, w.imag)) if w else 0)
        assert close(special.expm1(w), ref, 1e-15)
    assert special.phi1(0) == 1


def test_zeta_table_against_mpmath():
    for k in range(2, 41):
        assert math.isclose(special._ZETA[k], float(mpmath.zeta(k)), rel_tol=4.5e-16)


# ------------------------------------------------ upper incomplete gamma

def test_upper_gamma_examples():
    assert abs(upper_gamma_at_minus_one(1) - E) < 1e-12
    assert abs(upper_gamma_at_minus_one(2)) < 1e-12
    # one recurrence step from the a = 2 case: Gamma(3,-1) = 2*0 + (-1)^2 e
    assert abs(upper_gamma_at_minus_one(3) - E) < 1e-12


def test_upper_gamma_positive_integers_closed_form():
    # Gamma(n, x) = (n-1)! e^-x sum_{k<n} x^k/k!
    for n in range(1, 18):
        partial = sum(Fraction((-1) ** k, math.factorial(k)) for k in range(n))
        ref = math.factorial(n - 1) * float(partial) * E
        assert abs(upper_gamma_at_minus_one(n) - ref) <= 1e-13 * max(1, abs(ref))


def test_upper_gamma_against_mpmath():
    mpmath.mp.dps = 30
    pts = [complex(x, y) for x in (-39.5, -17.2, -3.05, -0.95, 0.3, 4.4, 22.0, 38.9)
           for y in (-9.0, -0.4, 0.0, 2.5)]
    pts += [-n + e for n in range(0, 30, 3) for e in (0, 1e-9, -2e-4 + 1e-4j, 0.09j, 0.1)]
    for a in pts:
        if abs(a) > 40:
            continue
        ref = complex(mpmath.gammainc(mpmath.mpc(a.real, a.imag), -1))
        assert close(upper_gamma_at_minus_one(a), ref, 1e-10), a


@settings(max_examples=200, deadline=None)
@given(finite_complex(-14, 14))
def test_upper_gamma_recurrence(a):
    lhs = upper_gamma_at_minus_one(a + 1)
    rhs = a * upper_gamma_at_minus_one(a) + minus_one_power(a) * E
    assert abs(lhs - rhs) <= 1e-9 * (1 + abs(lhs))


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_upper_gamma_continuous_across_gamma_poles(k):
    at = upper_gamma_at_minus_one(-k)
    assert math.isfinite(abs(at))
    assert abs(upper_gamma_at_minus_one(-k + 1e-6) - at) < 1e-4


def test_upper_gamma_branch_switch_is_seamless():
    # the near-pole formula takes over at |a + n| = 0.1
    for n in (0, 2, 9):
        inside = upper_gamma_at_minus_one(-n + 0.0999999)
        outside = upper_gamma_at_minus_one(-n + 0.1000001)
        assert abs(inside - outside) < 1e-5


# -------------------------------------------------------------- Ei(1)

def _ei_one_oracle():
    # gamma to 20 digits plus 30 exact rational series terms
    getcontext().prec = 40
    series = sum(Fraction(1, k * math.factorial(k)) for k in range(1, 31))
    value = Decimal("0.57721566490153286061") + Decimal(series.numerator) / Decimal(series.denominator)
    return float(value)


def test_ei_one_oracle_value():
    assert _ei_one_oracle() == 1.8951178163559368
    assert abs(ei_one() - _ei_one_oracle()) <= 1e-14
    assert 1.8 < ei_one() < 2.0


def test_ei_one_consistent_with_upper_gamma_at_zero():
    # K(0) = 0 in the closed form forces Ei(1) + i pi = -Gamma(0, -1)
    assert abs(complex(ei_one(), math.pi) + upper_gamma_at_minus_one(0)) < 1e-10


def test_euler_gamma_literal():
    assert special.EULER_GAMMA == float(mpmath.euler)
