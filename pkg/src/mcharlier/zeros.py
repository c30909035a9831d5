"""Certified zeros of multiple Charlier polynomials.

All zeros are real, positive and at most one lies between two consecutive
integers, so exact signs at the integers isolate every zero; each isolating
interval is then bisected with exact signs at dyadic points.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .core import MultiIndex, ParameterSet, ValidationError, _prepare, coefficients

DEFAULT_TOL = 1e-12


class ZeroCountError(RuntimeError):
    """The integer scan found fewer zeros than the degree (evaluator bug)."""


class IntegerPolynomial:
    """Exact sign oracle for a rational polynomial.

    Coefficients are cleared to integers, and ``p(u/v)`` is evaluated as the
    integer ``sum_i c_i u^i v^(d-i)`` whose sign equals that of ``p(u/v)``.
    """

    def __init__(self, coeffs: Sequence[Fraction]):
        denom = math.lcm(*(Fraction(c).denominator for c in coeffs))
        self.coeffs = [int(Fraction(c) * denom) for c in coeffs]
        self.degree = len(self.coeffs) - 1

    def sign(self, x) -> int:
        x = Fraction(x)
        u, v = x.numerator, x.denominator
        acc = self.coeffs[-1]
        vpow = 1
        for c in reversed(self.coeffs[:-1]):
            vpow *= v
            acc = acc * u + c * vpow
        return (acc > 0) - (acc < 0)


@dataclass(frozen=True)
class ZeroSet:
    """Sorted zeros of ``C_n`` (unscaled) together with the scaling ``N``.

    ``brackets`` holds the exact enclosing intervals; ``width`` is the largest
    enclosure half-width.
    """

    zeros: tuple[float, ...]
    N: int
    width: float
    brackets: tuple[tuple[Fraction, Fraction], ...] = ()

    def __len__(self):
        return len(self.zeros)

    @property
    def scaled(self) -> tuple[float, ...]:
        return tuple(z / self.N for z in self.zeros)

    def invariants(self) -> dict[str, bool]:
        """Count, positivity, integer separation and the largest-zero bound."""
        zs = self.zeros
        if self.brackets:
            gaps = [math.floor(lo) if lo != hi or lo.denominator != 1 else None
                    for lo, hi in self.brackets]
            cells = [g for g in gaps if g is not None]
            separated = len(set(cells)) == len(cells)
        else:
            cells = [math.floor(z) for z in zs]
            separated = len(set(cells)) == len(cells)
        return {
            "positive": all(z > 0 for z in zs),
            "sorted": all(x < y for x, y in zip(zs, zs[1:])),
            "separated": separated,
            "largest_bound": not zs or zs[-1] >= len(zs) - 1,
        }


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Normalized zero counting measure with atoms ``x_i / N``."""

    atoms: tuple[float, ...]

    @property
    def mass(self) -> float:
        return 1.0 / len(self.atoms)

    def cdf(self, y: float) -> float:
        return bisect.bisect_right(self.atoms, y) / len(self.atoms)


def polynomial_sign_oracle(n, params: ParameterSet, N: int = 1) -> IntegerPolynomial:
    return IntegerPolynomial(coefficients(n, params, N=N))


def _refine(poly: IntegerPolynomial, lo: int, hi: int, s_lo: int, tol: float):
    lo, hi = Fraction(lo), Fraction(hi)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        s = poly.sign(mid)
        if s == 0:
            return mid, mid
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def find_zeros(n, params: ParameterSet, N: int = 1, tol: float = DEFAULT_TOL, *,
               scan_cap: int | None = None) -> ZeroSet:
    """All zeros of ``C_n`` (parameters resolved at scaling ``N``).

    Zeros lying on an integer are returned exactly.
    """
    n, a = _prepare(n, params, N)
    if not tol > 0:
        raise ValidationError(f"tol must be positive, got {tol}")
    degree = n.size
    if degree == 0:
        return ZeroSet((), N, 0.0, ())
    poly = polynomial_sign_oracle(n, params, N)
    if scan_cap is None:
        scan_cap = 10 * (degree + math.ceil(max(map(float, params.a)) * N))
    brackets: list[tuple[Fraction, Fraction]] = []
    prev = poly.sign(0)
    if prev == 0:
        raise ZeroCountError("C_n vanishes at 0")
    m = 0
    while len(brackets) < degree:
        if m >= scan_cap:
            raise ZeroCountError(f"found {len(brackets)} of {degree} zeros below {scan_cap}")
        cur = poly.sign(m + 1)
        if cur == 0:
            brackets.append((Fraction(m + 1), Fraction(m + 1)))
            # a simple zero at m+1 flips the sign on either side
            prev = -prev
        elif cur != prev:
            brackets.append(_refine(poly, m, m + 1, prev, tol))
            prev = cur
        m += 1
    zeros = tuple(float((lo + hi) / 2) for lo, hi in brackets)
    width = max(float((hi - lo) / 2) for lo, hi in brackets)
    return ZeroSet(zeros, N, width, tuple(brackets))


def interlacing_check(n, params: ParameterSet, k: int, N: int = 1) -> bool:
    """Strict interlacing of the zeros of ``C_n`` and ``C_{n+e_k}``."""
    n = MultiIndex.coerce(n)
    upper = n.plus(k)
    inner = find_zeros(n, params, N).brackets
    outer = find_zeros(upper, params, N).brackets
    if len(outer) != len(inner) + 1:
        return False
    # compare exact enclosures so that the verdict does not depend on rounding
    for i, (lo, hi) in enumerate(inner):
        below_hi = outer[i][1]
        above_lo = outer[i + 1][0]
        if not (below_hi < lo and hi < above_lo):
            return False
    return True


def empirical_measure(zs: ZeroSet) -> EmpiricalMeasure:
    if not zs.zeros:
        raise ValidationError("empty zero set has no counting measure")
    return EmpiricalMeasure(tuple(sorted(z / zs.N for z in zs.zeros)))


def ks_distance(measure: EmpiricalMeasure, cdf: Callable[[float], float]) -> float:
    """Kolmogorov-Smirnov distance to a continuous CDF.

    The supremum is attained at an atom, either just below it or at it.
    """
    atoms = measure.atoms
    m = len(atoms)
    worst = 0.0
    i = 0
    while i < m:
        j = i
        while j + 1 < m and atoms[j + 1] == atoms[i]:
            j += 1
        value = cdf(atoms[i])
        worst = max(worst, abs(value - i / m), abs((j + 1) / m - value))
        i = j + 1
    return worst
