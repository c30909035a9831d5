"""Domain types and evaluators for multiple Charlier polynomials.

Every evaluator accepts either exact rationals (``int`` / ``Fraction``) or
floating point numbers.  With ``exact=None`` (the default) the arithmetic
mode is inferred: exact when ``x`` and every parameter are rational, real
(float or complex) otherwise.  ``exact=True`` converts floats to their exact
binary value; ``exact=False`` forces double precision.

Directions ``k`` and system indices ``j`` are 0-based throughout the library.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

Scalar = Union[Fraction, float, complex]

SUMMAND_LIMIT = 10**7
SERIES_DEGREE_LIMIT = 30
CONTOUR_MAX_DIM = 2
CONTOUR_MIN_NODES = 64


class ValidationError(ValueError):
    """Invalid multi-index, parameter set or argument."""


class ResourceLimitError(RuntimeError):
    """A computation would exceed one of the truncation guards."""


# ---------------------------------------------------------------------------
# scalars
# ---------------------------------------------------------------------------

def is_rational(value) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def to_exact(value) -> Fraction:
    """Convert ``value`` to a Fraction without rounding.

    Strings such as ``"1/10"`` or ``"0.1"`` are parsed as decimal rationals;
    floats keep their exact binary value.
    """
    if isinstance(value, complex):
        if value.imag != 0:
            raise ValidationError(f"complex value {value!r} has no exact rational form")
        value = value.real
    if isinstance(value, float) and not math.isfinite(value):
        raise ValidationError(f"non-finite value {value!r}")
    return Fraction(value)


def to_real(value) -> float | complex:
    """One-way conversion to double precision (complex stays complex)."""
    if isinstance(value, complex):
        return value
    return float(value)


def _resolve_mode(x, a: Sequence, exact: bool | None):
    if exact is None:
        exact = is_rational(x) and all(is_rational(v) for v in a)
    if exact:
        return to_exact(x), tuple(to_exact(v) for v in a), True
    return to_real(x), tuple(float(v) for v in a), False


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MultiIndex:
    """Multi-index ``(n_1, ..., n_r)`` of nonnegative integers."""

    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(self.entries)
        if not entries:
            raise ValidationError("multi-index needs at least one entry")
        for e in entries:
            if isinstance(e, bool) or int(e) != e:
                raise ValidationError(f"multi-index entries must be integers, got {e!r}")
            if e < 0:
                raise ValidationError(f"multi-index entries must be >= 0, got {entries}")
        object.__setattr__(self, "entries", tuple(int(e) for e in entries))

    @classmethod
    def coerce(cls, n) -> "MultiIndex":
        if isinstance(n, MultiIndex):
            return n
        if isinstance(n, int):
            return cls((n,))
        return cls(tuple(n))

    @classmethod
    def zero(cls, r: int) -> "MultiIndex":
        return cls((0,) * r)

    @property
    def r(self) -> int:
        return len(self.entries)

    @property
    def size(self) -> int:
        return sum(self.entries)

    def _check_direction(self, k: int) -> None:
        if not 0 <= k < self.r:
            raise ValidationError(f"direction {k} out of range for r={self.r}")

    def plus(self, k: int) -> "MultiIndex":
        """``n + e_k``."""
        self._check_direction(k)
        e = list(self.entries)
        e[k] += 1
        return MultiIndex(tuple(e))

    def minus(self, k: int) -> "MultiIndex":
        """``n - e_k``; requires ``n_k >= 1``."""
        self._check_direction(k)
        if self.entries[k] == 0:
            raise ValidationError(f"cannot lower entry {k} of {self.entries}")
        e = list(self.entries)
        e[k] -= 1
        return MultiIndex(tuple(e))

    def box(self) -> Iterator["MultiIndex"]:
        """All multi-indices ``m <= n`` componentwise, ordered by size."""
        ranges = [range(e + 1) for e in self.entries]
        points = sorted(itertools.product(*ranges), key=lambda p: (sum(p), p))
        return (MultiIndex(p) for p in points)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return self.r

    def __getitem__(self, k):
        return self.entries[k]

    def __str__(self):
        return ",".join(map(str, self.entries))


def _parse_number(value):
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, bool):
        raise ValidationError("boolean is not a parameter value")
    if isinstance(value, int):
        return Fraction(value)
    return value


@dataclass(frozen=True)
class ParameterSet:
    """Poisson parameters ``a_1, ..., a_r``.

    With ``last_scaled`` the effective parameters for scaling ``N`` are
    ``(a_1, ..., a_{r-1}, N * a_r)``.
    """

    a: tuple
    last_scaled: bool = False

    def __post_init__(self):
        a = tuple(_parse_number(v) for v in self.a)
        if not a:
            raise ValidationError("need at least one parameter")
        for v in a:
            if isinstance(v, complex) or not v > 0:
                raise ValidationError(f"parameters must be positive reals, got {v!r}")
        # the scaled entry is checked per N in effective()
        fixed = a[:-1] if self.last_scaled else a
        if len(set(fixed)) != len(fixed):
            raise ValidationError(f"parameters must be pairwise distinct, got {self.a}")
        object.__setattr__(self, "a", a)

    @property
    def r(self) -> int:
        return len(self.a)

    def effective(self, N: int = 1) -> tuple:
        if not self.last_scaled:
            return self.a
        eff = self.a[:-1] + (self.a[-1] * N,)
        if eff[-1] in eff[:-1]:
            raise ValidationError(f"scaled parameter N*a_r={eff[-1]} collides with {eff[:-1]}")
        return eff


@dataclass(frozen=True)
class RecurrenceData:
    b: Scalar
    avec: tuple


def _prepare(n, params: ParameterSet, N: int):
    n = MultiIndex.coerce(n)
    if n.r != params.r:
        raise ValidationError(f"multi-index has r={n.r} but {params.r} parameters given")
    _check_scaling(N)
    return n, params.effective(N)


def _check_scaling(N) -> None:
    if isinstance(N, bool) or int(N) != N or N < 1:
        raise ValidationError(f"scaling N must be a positive integer, got {N!r}")


def _check_summands(n: MultiIndex) -> None:
    count = math.prod(e + 1 for e in n)
    if count > SUMMAND_LIMIT:
        raise ResourceLimitError(f"{count} summands exceeds the limit {SUMMAND_LIMIT}")


def _finish(value, exact: bool):
    return Fraction(value) if exact else value


# ---------------------------------------------------------------------------
# evaluators
# ---------------------------------------------------------------------------

def _explicit_weights(n: MultiIndex, a: Sequence) -> list:
    """Coefficients ``c_s`` with ``C_n(x) = sum_s c_s (-x)_s``.

    Each factor ``(-n_j)_k (-a_j)^(n_j-k) / k!`` equals
    ``(-1)^k binom(n_j, k) (-a_j)^(n_j-k)``; the r-fold sum is grouped by
    ``s = k_1 + ... + k_r``.
    """
    weights = [1]
    for nj, aj in zip(n, a):
        factor = [(-1) ** k * math.comb(nj, k) * (-aj) ** (nj - k) for k in range(nj + 1)]
        conv = [0] * (len(weights) + nj)
        for s, w in enumerate(weights):
            if w == 0:
                continue
            for k, f in enumerate(factor):
                conv[s + k] += w * f
        weights = conv
    return weights


def eval_explicit(n, params: ParameterSet, x, *, N: int = 1, exact: bool | None = None):
    """Evaluate ``C_n(x)`` from the hypergeometric-type explicit sum.

    ``N`` only resolves N-scaled parameters; ``x`` is not rescaled.
    """
    n, a = _prepare(n, params, N)
    _check_summands(n)
    x, a, exact = _resolve_mode(x, a, exact)
    weights = _explicit_weights(n, a)
    total = 0
    poch = 1
    for s, w in enumerate(weights):
        total += w * poch
        poch *= -x + s
    return _finish(total, exact)


def eval_rodrigues(n, params: ParameterSet, x, *, N: int = 1, exact: bool | None = None):
    """Evaluate ``C_n(x)`` by applying the Rodrigues difference operators.

    The weight ``1/Gamma(x+1)`` is tracked as a combination of shifted
    copies ``w(x - m)``; each operator ``a^-x nabla^n a^x`` maps
    ``w(x - m)`` to ``sum_k binom(n,k) (-1)^k a^-k w(x - m - k)``.  The final
    multiplication by ``Gamma(x+1)`` turns ``w(x - m)`` into the falling
    factorial ``x (x-1) ... (x-m+1)``.
    """
    n, a = _prepare(n, params, N)
    _check_summands(n)
    x, a, exact = _resolve_mode(x, a, exact)
    shifts = {0: 1}
    for nj, aj in zip(n, a):
        inv = 1 / aj
        out: dict[int, object] = {}
        for m, c in shifts.items():
            for k in range(nj + 1):
                out[m + k] = out.get(m + k, 0) + c * math.comb(nj, k) * (-1) ** k * inv**k
        shifts = out
    fall = [1]
    for m in range(1, max(shifts) + 1):
        fall.append(fall[-1] * (x - m + 1))
    total = sum(c * fall[m] for m, c in shifts.items())
    prefactor = (-1) ** n.size
    for nj, aj in zip(n, a):
        prefactor *= aj**nj
    return _finish(prefactor * total, exact)


def recurrence_coeffs(n, params: ParameterSet, k: int, N: int = 1) -> RecurrenceData:
    """``b_{n,k} = |n| + a_k`` and ``a_{n,j} = n_j a_j`` (effective parameters)."""
    n, a = _prepare(n, params, N)
    n._check_direction(k)
    return RecurrenceData(b=n.size + a[k], avec=tuple(nj * aj for nj, aj in zip(n, a)))


def subleading_coeff(n, params: ParameterSet, *, N: int = 1):
    """Coefficient of ``x^(|n|-1)`` in ``C_n``; 0 for the constant polynomial."""
    n, a = _prepare(n, params, N)
    return -Fraction(math.comb(n.size, 2)) - sum(aj * nj for aj, nj in zip(a, n))


@dataclass(frozen=True)
class ScaledPolynomialHandle:
    """``P_{n,N}(x) = C_n(N x) / N^|n|``, monic of degree ``|n|``."""

    n: MultiIndex
    params: ParameterSet
    N: int = 1

    def __post_init__(self):
        n = MultiIndex.coerce(self.n)
        object.__setattr__(self, "n", n)
        _prepare(n, self.params, self.N)

    @property
    def degree(self) -> int:
        return self.n.size

    def __call__(self, x, *, exact: bool | None = None, order: Sequence[int] | None = None):
        return eval_recurrence(self, x, exact=exact, order=order)


def _step_direction(p: tuple, order: Sequence[int]) -> int:
    for k in reversed(order):
        if p[k] > 0:
            return k
    raise AssertionError("origin has no predecessor")


def recurrence_table(corner, params: ParameterSet, N: int, x, *, exact: bool | None = None,
                     order: Sequence[int] | None = None) -> dict[tuple, Scalar]:
    """``P_{m,N}(x)`` for every ``m <= corner`` computed from the recurrence.

    The node ``p`` is reached from ``p - e_k`` where ``k`` is the last
    direction of ``order`` (default ``0, 1, ..., r-1``) with ``p_k > 0``; this
    is the lattice path that exhausts direction ``order[0]`` first.
    """
    corner, a = _prepare(corner, params, N)
    r = corner.r
    order = tuple(range(r)) if order is None else tuple(order)
    if sorted(order) != list(range(r)):
        raise ValidationError(f"order must be a permutation of 0..{r - 1}, got {order}")
    x, a, exact = _resolve_mode(x, a, exact)
    scale = Fraction(N) if exact else float(N)
    table: dict[tuple, Scalar] = {}
    for m in corner.box():
        p = m.entries
        if m.size == 0:
            table[p] = Fraction(1) if exact else x * 0 + 1
            continue
        k = _step_direction(p, order)
        q = list(p)
        q[k] -= 1
        prev = tuple(q)
        value = (x - (sum(prev) + a[k]) / scale) * table[prev]
        for j in range(r):
            if prev[j] > 0:
                lower = list(prev)
                lower[j] -= 1
                value -= prev[j] * a[j] / scale**2 * table[tuple(lower)]
        table[p] = value
    return table


def eval_recurrence(handle: ScaledPolynomialHandle, x, *, exact: bool | None = None,
                    order: Sequence[int] | None = None):
    """``P_{n,N}(x)`` by dynamic programming over the lattice box below ``n``."""
    table = recurrence_table(handle.n, handle.params, handle.N, x, exact=exact, order=order)
    return table[handle.n.entries]


def generating_coefficient(n, params: ParameterSet, x, *, N: int = 1, exact: bool | None = None):
    """``C_n(x)`` as ``n_1! ... n_r!`` times the ``t^n`` coefficient of
    ``(1 + t_1 + ... + t_r)^x exp(-a_1 t_1 - ... - a_r t_r)``."""
    from .series import TruncatedSeries

    n, a = _prepare(n, params, N)
    if n.size > SERIES_DEGREE_LIMIT:
        raise ResourceLimitError(f"total degree {n.size} exceeds {SERIES_DEGREE_LIMIT}")
    x, a, exact = _resolve_mode(x, a, exact)
    bound = n.entries
    total = TruncatedSeries.variable_sum(bound)
    # (1 + T)^x = sum_s binom(x, s) T^s
    binomial = TruncatedSeries.constant(bound, 1)
    power = TruncatedSeries.constant(bound, 1)
    coef = 1
    for s in range(1, n.size + 1):
        coef = coef * (x - s + 1) / s
        power = power * total
        binomial = binomial + power.scale(coef)
    series = binomial
    for j, aj in enumerate(a):
        terms = []
        term = 1
        for ell in range(bound[j] + 1):
            terms.append(term)
            term = term * (-aj) / (ell + 1)
        series = series * TruncatedSeries.univariate(bound, j, terms)
    value = series.coefficient(bound) * math.prod(math.factorial(e) for e in n)
    return _finish(value, exact)


def contour_integral_eval(n, params: ParameterSet, x: float, radii: Sequence[float] | None = None,
                          nodes_per_dim: int = 128, *, N: int = 1) -> float:
    """``C_n(x)`` from the r-fold Cauchy integral of the generating function.

    Circles ``|z_j| = radii[j]`` with ``sum(radii) < 1``; the product
    trapezoid rule is exact up to aliasing, which decays geometrically in
    ``nodes_per_dim``.
    """
    n, a = _prepare(n, params, N)
    if n.r > CONTOUR_MAX_DIM:
        raise ValidationError(f"contour quadrature supports r <= {CONTOUR_MAX_DIM}, got {n.r}")
    if nodes_per_dim < CONTOUR_MIN_NODES:
        raise ValidationError(f"need at least {CONTOUR_MIN_NODES} nodes per dimension")
    if isinstance(x, complex):
        raise ValidationError("contour evaluation needs a real x")
    x = float(x)
    if radii is None:
        radii = [0.5 / n.r] * n.r
    radii = [float(rho) for rho in radii]
    if len(radii) != n.r or any(rho <= 0 for rho in radii) or sum(radii) >= 1:
        raise ValidationError(f"radii must be positive with sum < 1, got {radii}")
    theta = 2 * np.pi * np.arange(nodes_per_dim) / nodes_per_dim
    grids = np.meshgrid(*[rho * np.exp(1j * theta) for rho in radii], indexing="ij")
    z_sum = sum(grids)
    integrand = (1 + z_sum) ** x * np.exp(-sum(aj * z for aj, z in zip(map(float, a), grids)))
    for z, nj in zip(grids, n):
        integrand = integrand * z ** (-nj)
    value = integrand.mean() * math.prod(math.factorial(e) for e in n)
    return float(value.real)


# ---------------------------------------------------------------------------
# exact monomial coefficients
# ---------------------------------------------------------------------------

def coefficients(n, params: ParameterSet, *, N: int = 1) -> list[Fraction]:
    """Exact monomial coefficients of ``C_n`` in ascending order."""
    n, a = _prepare(n, params, N)
    _check_summands(n)
    a = tuple(to_exact(v) for v in a)
    weights = _explicit_weights(n, a)
    coeffs = [Fraction(0)] * (n.size + 1)
    poch = [Fraction(1)]  # coefficients of (-x)_s
    for s, w in enumerate(weights):
        if w:
            for i, c in enumerate(poch):
                coeffs[i] += w * c
        # (-x)_{s+1} = (-x)_s * (s - x)
        nxt = [Fraction(0)] * (len(poch) + 1)
        for i, c in enumerate(poch):
            nxt[i] += s * c
            nxt[i + 1] -= c
        poch = nxt
    return coeffs


def polyval(coeffs: Sequence, x):
    """Horner evaluation of ascending coefficients."""
    value = 0
    for c in reversed(coeffs):
        value = value * x + c
    return value


def multi_indices(r: int, max_size: int, min_size: int = 0) -> Iterable[MultiIndex]:
    """All multi-indices of dimension ``r`` with ``min_size <= |n| <= max_size``."""
    for p in itertools.product(range(max_size + 1), repeat=r):
        if min_size <= sum(p) <= max_size:
            yield MultiIndex(p)
