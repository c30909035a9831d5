import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mcharlier.core import ParameterSet, multi_indices, recurrence_coeffs
from mcharlier.ortho import ContractError, _roots_below, max_relative_residual, moment_sum, normalization_sum
from oracles import brute_force_explicit

P12 = ParameterSet((1, 2))


def truncated_oracle(n, a, j, l, K=200):
    """Plain partial sum up to K using the literal explicit formula."""
    total = Fraction(0)
    weight = Fraction(1)
    for k in range(K + 1):
        if k:
            weight = weight * a[j] / k
        total += brute_force_explicit(n, a, k) * k**l * weight
    return total


def test_poisson_mean_example():
    res = moment_sum((1, 0), P12, 0, 0)
    assert abs(res.value) <= res.tail_bound + 1e-300
    assert res.relative < 1e-12


def test_zero_index_has_no_moments():
    with pytest.raises(ContractError):
        moment_sum((0, 0), P12, 0, 0)
    with pytest.raises(ContractError):
        moment_sum((2, 1), P12, 1, 1)


def test_second_system_example():
    res = moment_sum((2, 1), P12, 1, 0)
    assert res.relative < 1e-8
    oracle = truncated_oracle((2, 1), (Fraction(1), Fraction(2)), 1, 0)
    assert abs(float(oracle)) < 1e-8 * res.term_mass


@pytest.mark.parametrize("n, j, expected", [((1,), 0, 1), ((1, 1), 1, 2), ((2, 1), 0, 2)])
def test_normalization_examples(n, j, expected):
    p = ParameterSet((1,)) if len(n) == 1 else P12
    res = normalization_sum(n, p, j)
    assert res.ratio == pytest.approx(expected, rel=1e-8)


def test_normalization_contract():
    with pytest.raises(ContractError):
        normalization_sum((0, 2), P12, 0)


def test_tail_bound_is_certified():
    # value of the full sum is 0, so the returned partial sum is minus the tail
    p = ParameterSet((Fraction(5, 2), Fraction(1, 3)))
    for n in [(3, 2), (4, 4), (0, 5)]:
        for j in range(2):
            for l in range(n[j]):
                res = moment_sum(n, p, j, l)
                assert abs(res.value) <= res.tail_bound * (1 + 1e-9) + 1e-15 * res.term_mass
                assert res.relative < 1e-8


def test_truncation_respected():
    res = moment_sum((2, 1), P12, 0, 1, truncation=150)
    assert res.truncation_k >= 150


def test_max_relative_residual():
    p = ParameterSet((1, 2, 3))
    assert max_relative_residual((2, 2, 2), p) < 1e-8
    assert max_relative_residual((0, 0, 0), p) == 0.0


def test_scaled_residual():
    p = ParameterSet((Fraction(3, 2), Fraction(1, 5)), last_scaled=True)
    assert max_relative_residual((2, 2), p, N=10) < 1e-8


def test_normalization_matches_recurrence():
    p = ParameterSet((Fraction(1, 2), 3))
    for n in multi_indices(2, 6, 1):
        for j in range(2):
            if n[j]:
                expected = recurrence_coeffs(n, p, 0).avec[j]
                assert normalization_sum(n, p, j).ratio == pytest.approx(float(expected), rel=1e-8)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-5, 30), min_size=1, max_size=8), st.integers(-3, 40))
def test_roots_below_matches_numpy(roots, K):
    roots = [Fraction(r).limit_denominator(64) for r in roots]
    if any(r == K for r in roots):
        return
    coeffs = [Fraction(1)]
    for r in roots:
        # multiply by (x - r)
        coeffs = [-r * coeffs[0]] + [coeffs[i - 1] - r * coeffs[i] for i in range(1, len(coeffs))] + [coeffs[-1]]
    expected = max(roots) < K
    assert _roots_below(coeffs, K) is expected
    assert _roots_below([-c for c in coeffs], K) is expected
    numeric = np.roots([float(c) for c in reversed(coeffs)])
    assert bool(np.max(numeric.real) < K) == expected or math.isclose(max(map(float, roots)), K, abs_tol=1e-6)
