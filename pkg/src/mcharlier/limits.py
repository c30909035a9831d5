"""Limit objects for scaled multiple Charlier polynomials.

Ratio limits, the algebraic function ``g_r`` for an N-scaled last parameter,
limiting zero densities and CDFs for both parameter regimes, Stieltjes
transforms, and the decay quantity comparing neighbouring ratios.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .core import MultiIndex, ParameterSet, ValidationError, _prepare, recurrence_table
from .quadrature import integrate_pieces
from .zeros import ZeroSet

CDF_TOL = 1e-10


class DomainError(ValueError):
    """Argument lies on a support or branch cut where the object is undefined."""


def distance_to_halfline(x: complex) -> float:
    """Distance from ``x`` to ``[0, inf)``."""
    x = complex(x)
    return abs(x.imag) if x.real >= 0 else abs(x)


def _off_halfline(x: complex) -> complex:
    x = complex(x)
    if x.imag == 0 and x.real >= 0:
        raise DomainError(f"x={x} lies on [0, inf)")
    return x


# ---------------------------------------------------------------------------
# regimes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegimeParams:
    """Asymptotic regime ``n_j = floor(q_j n)``, ``n / N -> t``.

    The regime is "varying" when ``params.last_scaled`` is set.
    """

    t: float
    q: tuple[float, ...]
    params: ParameterSet

    def __post_init__(self):
        q = tuple(float(v) for v in self.q)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "t", float(self.t))
        if not self.t > 0:
            raise ValidationError(f"t must be positive, got {self.t}")
        if len(q) != self.params.r:
            raise ValidationError(f"need {self.params.r} weights q, got {len(q)}")
        if any(not 0 < v < 1 for v in q) and len(q) > 1:
            raise ValidationError(f"weights q must lie in (0, 1), got {q}")
        if abs(sum(q) - 1) > 1e-12:
            raise ValidationError(f"weights q must sum to 1, got {sum(q)}")

    @classmethod
    def uniform(cls, t: float, params: ParameterSet) -> "RegimeParams":
        return cls(t, (1 / params.r,) * params.r, params)

    @property
    def varying(self) -> bool:
        return self.params.last_scaled

    @property
    def a_r(self) -> float:
        return float(self.params.a[-1])

    @property
    def q_r(self) -> float:
        return self.q[-1]

    def multi_index(self, m: int) -> MultiIndex:
        # the offset absorbs rounding in products such as 0.3 * 10
        return MultiIndex(tuple(math.floor(qj * m + 1e-9) for qj in self.q))

    def scaling(self, m: int) -> int:
        return math.ceil(m / self.t - 1e-9)

    @property
    def case(self) -> int:
        """1 when ``a_r >= q_r t`` (split support), 2 otherwise."""
        return 1 if self.a_r >= self.q_r * self.t else 2


# ---------------------------------------------------------------------------
# ratio limits
# ---------------------------------------------------------------------------

def ratio_limit_fixed(x: complex, t: float) -> complex:
    """Limit of ``C_{n+e_k}(N x) / (N C_n(N x))`` for fixed parameters."""
    return _off_halfline(x) - t


def g_r(x: complex, t: float, a_r: float, q_r: float) -> complex:
    """Root of ``g^2 - (x - a_r - t) g + a_r q_r t = 0`` behaving like ``x`` at infinity."""
    x = complex(x)
    w = x - a_r - t
    c = a_r * q_r * t
    s = cmath.sqrt(w * w - 4 * c)
    # principal root, flipped so that s ~ w at infinity; cut on |w| <= 2 sqrt(c)
    if (s * w.conjugate()).real < 0:
        s = -s
    return (w + s) / 2


def ratio_limit_varying(x: complex, regime: RegimeParams, k: int) -> complex:
    """Ratio limit when the last parameter grows like ``N a_r``."""
    r = regime.params.r
    if not 0 <= k < r:
        raise ValidationError(f"direction {k} out of range for r={r}")
    t, a_r, q_r = regime.t, regime.a_r, regime.q_r
    g = g_r(x, t, a_r, q_r)
    if k == r - 1:
        return g
    if g == 0:
        raise ArithmeticError("g_r vanished off the support")
    return complex(x) - t - a_r * q_r * t / g


def empirical_ratio(n, params: ParameterSet, N: int, k: int, x: complex) -> complex:
    """``P_{n+e_k,N}(x) / P_{n,N}(x)`` from the recurrence in complex arithmetic."""
    n = MultiIndex.coerce(n)
    table = recurrence_table(n.plus(k), params, N, complex(x), exact=False)
    return table[n.plus(k).entries] / table[n.entries]


class RatioBound(NamedTuple):
    lhs: float
    rhs: float
    delta: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs * (1 + 1e-8) + 1e-300


def ratio_bound_fixed(n, params: ParameterSet, N: int, k: int, x: complex) -> RatioBound:
    """Finite-n distance of the ratio from its recurrence-predicted value.

    ``lhs = |P_{n+e_k}/P_n - x + (a_k + |n|)/N|`` and
    ``rhs = sum_j n_j a_j / (delta N^2)`` with ``delta`` the distance from
    ``x`` to ``[0, inf)``; the recurrence guarantees ``lhs <= rhs``.
    """
    if params.last_scaled:
        raise ValidationError("the fixed-parameter bound needs unscaled parameters")
    x = _off_halfline(x)
    n, a = _prepare(n, params, N)
    delta = distance_to_halfline(x)
    table = recurrence_table(n.plus(k), params, N, x, exact=False)
    base = table[n.entries]
    if base == 0:
        raise ArithmeticError("P_n vanished off [0, inf)")
    ratio = table[n.plus(k).entries] / base
    lhs = abs(ratio - x + (float(a[k]) + n.size) / N)
    rhs = sum(nj * float(aj) for nj, aj in zip(n, a)) / (delta * N * N)
    return RatioBound(lhs, rhs, delta)


def decay_diagnostic(n, regime: RegimeParams, N: int, k: int, l: int, x: complex) -> float:
    """``|P_n/P_{n+e_k} - P_{n-e_l}/P_{n+e_k-e_l}|`` at scaling ``N``."""
    n = MultiIndex.coerce(n)
    x = _off_halfline(x)
    lower = n.minus(l)
    table = recurrence_table(n.plus(k), regime.params, N, x, exact=False)
    up = n.plus(k)
    cross = lower.plus(k)
    return abs(table[n.entries] / table[up.entries] - table[lower.entries] / table[cross.entries])


# ---------------------------------------------------------------------------
# limiting densities
# ---------------------------------------------------------------------------

def alpha_beta(s: float, t: float, a_r: float, q_r: float) -> tuple[float, float]:
    """Endpoints of the arcsine law contributed at fraction ``s`` of the scaled index."""
    if not 0 <= s <= 1:
        raise ValidationError(f"s must lie in [0, 1], got {s}")
    centre = a_r + (1 - q_r * s) * t
    half = 2 * math.sqrt(a_r * q_r * (1 - s) * t)
    return centre - half, centre + half


def _arccos_density(y: float, t: float, a_r: float, q_r: float) -> float:
    shift = y - (1 - q_r) * t
    num = y + a_r - t
    den = 2 * math.sqrt(a_r * shift) if shift > 0 else 0.0
    if den == 0:
        z = 0.0 if num == 0 else math.copysign(1.0, num)
    else:
        z = min(1.0, max(-1.0, num / den))
    return math.acos(z) / (math.pi * q_r * t)


def v_support(regime: RegimeParams) -> tuple[float, float]:
    """``[alpha_t, beta_t]`` carrying the density ``v``."""
    lo, hi = alpha_beta(0.0, regime.t, regime.a_r, regime.q_r)
    if regime.case == 2:
        lo = (1 - regime.q_r) * regime.t
    return lo, hi


def density_v(y: float, regime: RegimeParams) -> float:
    """Probability density ``v`` of the zeros attached to the growing parameter."""
    t, a_r, q_r = regime.t, regime.a_r, regime.q_r
    alpha0, beta0 = alpha_beta(0.0, t, a_r, q_r)
    lo, hi = v_support(regime)
    if y < lo or y > hi:
        return 0.0
    if regime.case == 2 and y < alpha0:
        return 1.0 / (q_r * t)
    return _arccos_density(y, t, a_r, q_r)


@dataclass(frozen=True)
class LimitLaw:
    """Limiting zero distribution.

    ``kind == "uniform"``: uniform on ``[0, t]``.
    ``kind == "mixture"``: mass ``1 - q_r`` uniform on ``[0, (1-q_r) t]`` plus
    mass ``q_r`` with density ``v`` on ``[alpha_t, beta_t]``.
    """

    kind: str
    regime: RegimeParams
    support: tuple[tuple[float, float], ...]
    breakpoints: tuple[float, ...]
    _v_mass_cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def t(self) -> float:
        return self.regime.t

    def density(self, y: float) -> float:
        t = self.t
        if self.kind == "uniform":
            return 1.0 / t if 0 <= y <= t else 0.0
        q_r = self.regime.q_r
        flat = 1.0 / t if 0 <= y <= (1 - q_r) * t else 0.0
        return flat + q_r * density_v(y, self.regime)

    def v(self, y: float) -> float:
        if self.kind == "uniform":
            return 0.0
        return density_v(y, self.regime)

    def v_integral(self, lo: float, hi: float, tol: float = CDF_TOL) -> float:
        """``int_lo^hi v`` with subdivision at the kink points."""
        a, b = v_support(self.regime)
        lo, hi = max(lo, a), min(hi, b)
        if hi <= lo:
            return 0.0
        points = [lo, hi] + [p for p in self.breakpoints if lo < p < hi]
        return integrate_pieces(lambda y: density_v(y, self.regime), points, tol)

    def cdf(self, y: float) -> float:
        t = self.t
        if self.kind == "uniform":
            return min(1.0, max(0.0, y / t))
        q_r = self.regime.q_r
        uniform_part = min(max(y, 0.0), (1 - q_r) * t) / t
        lo, hi = v_support(self.regime)
        if y <= lo:
            return uniform_part
        if y >= hi:
            return uniform_part + q_r * self.total_v()
        return uniform_part + q_r * self.v_integral(lo, y)

    def total_v(self) -> float:
        if "total" not in self._v_mass_cache:
            self._v_mass_cache["total"] = self.v_integral(*v_support(self.regime))
        return self._v_mass_cache["total"]

    def on_support(self, x: complex) -> bool:
        x = complex(x)
        return x.imag == 0 and any(lo <= x.real <= hi for lo, hi in self.support)

    def stieltjes_quadrature(self, x: complex, tol: float = 1e-12) -> complex:
        """``int dnu(y) / (x - y)`` by adaptive quadrature on every piece."""
        if self.on_support(x):
            raise DomainError(f"x={x} lies on the support")
        x = complex(x)
        points = sorted({p for piece in self.support for p in piece} | set(self.breakpoints))
        return complex(integrate_pieces(lambda y: self.density(y) / (x - y), points, tol))

    def stieltjes(self, x: complex) -> complex:
        if self.kind == "uniform":
            if self.on_support(x):
                raise DomainError(f"x={x} lies on the support")
            x = complex(x)
            return cmath.log(x / (x - self.t)) / self.t
        return self.stieltjes_quadrature(x)


def limit_law(regime: RegimeParams) -> LimitLaw:
    t = regime.t
    if not regime.varying:
        return LimitLaw("uniform", regime, ((0.0, t),), (0.0, t))
    q_r = regime.q_r
    alpha0, beta0 = alpha_beta(0.0, t, regime.a_r, q_r)
    flat_end = (1 - q_r) * t
    lo, hi = v_support(regime)
    if lo > flat_end:
        support = ((0.0, flat_end), (lo, hi))
    else:
        support = ((0.0, hi),)
    breaks = tuple(sorted({0.0, flat_end, alpha0, beta0, lo, hi}))
    return LimitLaw("mixture", regime, support, breaks)


def stieltjes_limit(x: complex, law: LimitLaw) -> complex:
    return law.stieltjes(x)


def stieltjes_empirical(zs: ZeroSet, x: complex) -> complex:
    """``(1/|n|) sum_i 1 / (x - x_i / N)``, the normalized log-derivative of ``P_{n,N}``."""
    x = _off_halfline(x)
    if not zs.zeros:
        raise ValidationError("empty zero set")
    return sum(1 / (x - z / zs.N) for z in zs.zeros) / len(zs.zeros)
