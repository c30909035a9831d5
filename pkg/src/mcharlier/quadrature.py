"""Adaptive Simpson quadrature for real- or complex-valued integrands."""

from __future__ import annotations

from typing import Callable, Sequence


def adaptive_simpson(f: Callable[[float], complex], a: float, b: float, tol: float = 1e-10,
                     max_depth: int = 50):
    """Integrate ``f`` over ``[a, b]`` to absolute tolerance ``tol``.

    Uses the classical Richardson-corrected error estimate with an explicit
    stack.  Intervals at ``max_depth`` are accepted as they are, which keeps
    integrable endpoint singularities of square-root type tractable.
    """
    if b < a:
        return -adaptive_simpson(f, b, a, tol, max_depth)
    if a == b:
        return 0.0
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) * (fa + 4 * fm + fb) / 6
    total = 0.0
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    while stack:
        lo, hi, flo, fmid, fhi, est, eps, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = f(lm), f(rm)
        left = (mid - lo) * (flo + 4 * flm + fmid) / 6
        right = (hi - mid) * (fmid + 4 * frm + fhi) / 6
        delta = left + right - est
        if depth >= max_depth or abs(delta) <= 15 * eps:
            total += left + right + delta / 15
        else:
            stack.append((lo, mid, flo, flm, fmid, left, eps / 2, depth + 1))
            stack.append((mid, hi, fmid, frm, fhi, right, eps / 2, depth + 1))
    return total


def integrate_pieces(f: Callable[[float], complex], points: Sequence[float], tol: float = 1e-10):
    """Sum of :func:`adaptive_simpson` over consecutive breakpoints.

    The tolerance is split evenly over the pieces.
    """
    pts = sorted(points)
    pieces = [(lo, hi) for lo, hi in zip(pts, pts[1:]) if hi > lo]
    if not pieces:
        return 0.0
    eps = tol / len(pieces)
    return sum(adaptive_simpson(f, lo, hi, eps) for lo, hi in pieces)
