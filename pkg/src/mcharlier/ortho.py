"""Discrete orthogonality of multiple Charlier polynomials against Poisson weights.

Sums are accumulated exactly (rational arithmetic) up to a truncation point
``K`` and the discarded tail is bounded rigorously: once ``K`` exceeds the
largest zero of ``C_n``, the term ratio ``T_{k+1}/T_k`` is decreasing in
``k``, so the tail is dominated by a geometric series with ratio
``T_{K+1}/T_K``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import MultiIndex, ParameterSet, ValidationError, _prepare, coefficients, polyval, to_exact

TAIL_RELATIVE = Fraction(1, 10**12)
MAX_TRUNCATION = 100_000


class ContractError(ValueError):
    """The requested sum is not an orthogonality residual."""


@dataclass(frozen=True)
class MomentResidual:
    value: float
    term_mass: float
    truncation_k: int
    tail_bound: float

    @property
    def relative(self) -> float:
        return abs(self.value) / self.term_mass if self.term_mass else 0.0


@dataclass(frozen=True)
class NormalizationResult:
    numerator: MomentResidual
    denominator: MomentResidual
    ratio: float


def _roots_below(coeffs: list[Fraction], K: int) -> bool:
    """True iff every zero of the real-rooted polynomial is ``< K``.

    For real-rooted ``p``, ``p(x + K)`` has coefficients of one strict sign
    exactly when all zeros lie left of ``K``.
    """
    shifted = list(coeffs)
    d = len(shifted) - 1
    # Taylor shift by K (repeated synthetic division)
    for i in range(d):
        for j in range(d - 1, i - 1, -1):
            shifted[j] += K * shifted[j + 1]
    return all(c > 0 for c in shifted) if shifted[-1] > 0 else all(c < 0 for c in shifted)


def _poisson_sum(coeffs: list[Fraction], a: Fraction, ell: int, start: int) -> MomentResidual:
    """``sum_k p(k) k^ell a^k / k!`` with a certified tail bound."""
    value = Fraction(0)
    mass = Fraction(0)
    weight = Fraction(1)  # a^k / k!
    k = 0
    term = polyval(coeffs, 0) * (1 if ell == 0 else 0)
    roots_cleared = False
    while True:
        value += term
        mass += abs(term)
        next_weight = weight * a / (k + 1)
        next_term = polyval(coeffs, k + 1) * (k + 1) ** ell * next_weight
        if k >= start and term != 0:
            if not roots_cleared:
                roots_cleared = _roots_below(coeffs, k)
            if roots_cleared:
                ratio = abs(next_term / term)
                if ratio < 1:
                    tail = abs(term) * ratio / (1 - ratio)
                    if tail <= TAIL_RELATIVE * mass:
                        return MomentResidual(float(value), float(mass), k, float(tail))
        if k >= MAX_TRUNCATION:
            raise RuntimeError(f"Poisson sum did not converge by k={k}")
        k += 1
        weight, term = next_weight, next_term


def _system(n, params: ParameterSet, j: int, N: int):
    n, a = _prepare(n, params, N)
    if not 0 <= j < n.r:
        raise ValidationError(f"system index {j} out of range for r={n.r}")
    return n, tuple(to_exact(v) for v in a)


def moment_sum(n, params: ParameterSet, j: int, l: int, truncation: int = 0, *,
               N: int = 1) -> MomentResidual:
    """Truncated ``sum_k C_n(k) k^l a_j^k / k!`` for ``0 <= l < n_j``.

    ``truncation`` is the smallest admissible cut; it is extended until the
    tail bound drops below ``1e-12`` of the accumulated absolute mass.
    """
    n, a = _system(n, params, j, N)
    if not 0 <= l < n[j]:
        raise ContractError(f"moment order l={l} is not in 0..{n[j] - 1} for n={n.entries}")
    return _poisson_sum(coefficients(n, params, N=N), a[j], l, truncation)


def normalization_sum(n, params: ParameterSet, j: int, truncation: int = 0, *,
                      N: int = 1) -> NormalizationResult:
    """Ratio of the first non-vanishing moments of ``C_n`` and ``C_{n-e_j}``.

    Equals the recurrence coefficient ``a_{n,j} = n_j a_j``.
    """
    n, a = _system(n, params, j, N)
    if n[j] == 0:
        raise ContractError(f"n_{j} = 0 has no normalization moment")
    lower = n.minus(j)
    num = _poisson_sum(coefficients(n, params, N=N), a[j], n[j], truncation)
    den = _poisson_sum(coefficients(lower, params, N=N), a[j], n[j] - 1, truncation)
    return NormalizationResult(num, den, num.value / den.value)


def max_relative_residual(n, params: ParameterSet, *, N: int = 1) -> float:
    """Largest orthogonality residual over every valid ``(j, l)``; 0 if none."""
    n = MultiIndex.coerce(n)
    worst = 0.0
    for j in range(n.r):
        for l in range(n[j]):
            worst = max(worst, moment_sum(n, params, j, l, N=N).relative)
    return worst

