"""Sparse multivariate power series truncated to a box of exponents."""

from __future__ import annotations

from typing import Sequence


class TruncatedSeries:
    """Power series in ``r`` variables keeping only exponents ``<= bound``
    componentwise.

    Only the coefficients inside the box can influence a coefficient inside
    the box under multiplication, so truncation is exact for extraction.
    """

    __slots__ = ("bound", "terms")

    def __init__(self, bound: Sequence[int], terms: dict | None = None):
        self.bound = tuple(bound)
        self.terms = {} if terms is None else terms

    @classmethod
    def constant(cls, bound, value) -> "TruncatedSeries":
        return cls(bound, {(0,) * len(bound): value})

    @classmethod
    def univariate(cls, bound, k: int, coeffs: Sequence) -> "TruncatedSeries":
        r = len(bound)
        terms = {}
        for e, c in enumerate(coeffs[: bound[k] + 1]):
            if c:
                exps = [0] * r
                exps[k] = e
                terms[tuple(exps)] = c
        return cls(bound, terms)

    @classmethod
    def variable_sum(cls, bound) -> "TruncatedSeries":
        """``t_1 + ... + t_r``."""
        r = len(bound)
        terms = {}
        for k in range(r):
            if bound[k] >= 1:
                exps = [0] * r
                exps[k] = 1
                terms[tuple(exps)] = 1
        return cls(bound, terms)

    def _inside(self, exps) -> bool:
        return all(e <= b for e, b in zip(exps, self.bound))

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        terms = dict(self.terms)
        for exps, c in other.terms.items():
            terms[exps] = terms.get(exps, 0) + c
        return TruncatedSeries(self.bound, terms)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        if self.bound != other.bound:
            raise ValueError("series truncated to different boxes")
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(i + j for i, j in zip(e1, e2))
                if self._inside(exps):
                    terms[exps] = terms.get(exps, 0) + c1 * c2
        return TruncatedSeries(self.bound, terms)

    def scale(self, factor) -> "TruncatedSeries":
        return TruncatedSeries(self.bound, {e: c * factor for e, c in self.terms.items()})

    def coefficient(self, exps) -> object:
        return self.terms.get(tuple(exps), 0)

    def __len__(self):
        return len(self.terms)
