import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from mcharlier.core import ParameterSet, ValidationError, coefficients, eval_explicit
from mcharlier.zeros import (
    EmpiricalMeasure,
    IntegerPolynomial,
    ZeroCountError,
    ZeroSet,
    empirical_measure,
    find_zeros,
    interlacing_check,
    ks_distance,
)

P12 = ParameterSet((1, 2))
uniform01 = lambda y: min(1.0, max(0.0, y))


def test_linear_example():
    zs = find_zeros((1,), ParameterSet((1,)))
    assert zs.zeros == (1.0,)
    assert zs.brackets == ((1, 1),)


def test_quadratic_example():
    zs = find_zeros((1, 1), P12)
    assert zs.zeros == pytest.approx((2 - math.sqrt(2), 2 + math.sqrt(2)), abs=1e-12)
    assert zs.width <= 1e-12


def test_exact_integer_zeros():
    # C_2 with a = 2 is x^2 - 5x + 4 = (x - 1)(x - 4)
    zs = find_zeros((2,), ParameterSet((2,)))
    assert zs.zeros == (1.0, 4.0)
    assert all(lo == hi for lo, hi in zs.brackets)


def test_zero_degree():
    zs = find_zeros((0, 0), P12)
    assert len(zs) == 0 and zs.invariants()["positive"]
    with pytest.raises(ValidationError):
        empirical_measure(zs)


def test_bad_tol():
    with pytest.raises(ValidationError):
        find_zeros((1,), ParameterSet((1,)), tol=0)


def test_scan_cap_signals_bug():
    with pytest.raises(ZeroCountError):
        find_zeros((3, 3), P12, scan_cap=2)


def test_against_numpy_roots():
    n = (4, 3)
    p = ParameterSet((Fraction(1, 2), Fraction(7, 3)))
    zs = find_zeros(n, p)
    ref = np.sort(np.roots([float(c) for c in reversed(coefficients(n, p))]).real)
    assert np.allclose(zs.zeros, ref, atol=1e-8)


def test_brackets_are_certified():
    zs = find_zeros((5, 4), P12, N=3)
    poly = IntegerPolynomial(coefficients((5, 4), P12, N=3))
    for lo, hi in zs.brackets:
        assert hi - lo <= Fraction(1, 10**12)
        if lo != hi:
            assert poly.sign(lo) * poly.sign(hi) < 0


@pytest.mark.parametrize("x", [Fraction(-7, 3), Fraction(0), Fraction(11, 4), Fraction(5)])
def test_sign_oracle(x):
    poly = IntegerPolynomial(coefficients((3, 2), P12))
    value = eval_explicit((3, 2), P12, x)
    assert poly.sign(x) == (value > 0) - (value < 0)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3).flatmap(lambda r: st.tuples(
    st.lists(st.integers(0, 10), min_size=r, max_size=r),
    st.lists(st.fractions(Fraction(1, 5), 5, max_denominator=6), min_size=r, max_size=r, unique=True),
)), st.sampled_from([1, 2, 5]))
def test_invariants_property(system, N):
    n, a = system
    zs = find_zeros(tuple(n), ParameterSet(tuple(a)), N)
    assert len(zs) == sum(n)
    assert all(zs.invariants().values())


@pytest.mark.parametrize("k", [0, 1])
def test_interlacing_examples(k):
    assert interlacing_check((1, 1), P12, k)
    assert interlacing_check((0, 0), P12, k)
    assert interlacing_check((3, 2), P12, k)


def test_interlacing_three_systems():
    p = ParameterSet((Fraction(1, 3), 1, Fraction(5, 2)))
    for k in range(3):
        assert interlacing_check((2, 3, 1), p, k, N=2)


def test_empirical_measure_examples():
    assert empirical_measure(ZeroSet((1.0,), 1, 0.0)).atoms == (1.0,)
    m = empirical_measure(ZeroSet((2 - math.sqrt(2), 2 + math.sqrt(2)), 2, 0.0))
    assert m.atoms == pytest.approx((0.292893, 1.707107), abs=1e-6)
    assert m.mass == 0.5
    m = empirical_measure(find_zeros((5, 5), P12, 10))
    assert len(m.atoms) == 10 and m.mass * len(m.atoms) == pytest.approx(1)
    assert list(m.atoms) == sorted(m.atoms) and m.cdf(1e9) == 1.0


def test_ks_examples():
    assert ks_distance(EmpiricalMeasure((0.5,)), uniform01) == pytest.approx(0.5)
    m = 7
    quantiles = tuple((2 * i - 1) / (2 * m) for i in range(1, m + 1))
    assert ks_distance(EmpiricalMeasure(quantiles), uniform01) == pytest.approx(1 / (2 * m))


def test_ks_ties():
    assert ks_distance(EmpiricalMeasure((0.5, 0.5)), uniform01) == pytest.approx(0.5)


def test_ks_against_scipy():
    atoms = empirical_measure(find_zeros((10, 10), P12, 20)).atoms
    ref = stats.kstest(atoms, "uniform").statistic
    assert ks_distance(EmpiricalMeasure(atoms), uniform01) == pytest.approx(ref, abs=1e-12)


def test_ks_decreases_along_sweep():
    values = []
    for m in (5, 10, 20, 30):
        atoms = empirical_measure(find_zeros((m, m), P12, 2 * m))
        values.append(ks_distance(atoms, uniform01))
    assert values[2] < values[1]
    slack_steps = sum(1 for u, v in zip(values, values[1:]) if v >= u)
    assert slack_steps == 0 or all(v <= 1.1 * u for u, v in zip(values, values[1:]))
