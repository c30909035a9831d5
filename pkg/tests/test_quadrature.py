import cmath
import math

import pytest
from scipy import integrate

from mcharlier.quadrature import adaptive_simpson, integrate_pieces


def test_polynomial_exact():
    assert adaptive_simpson(lambda x: x**3 - x, 0, 2) == pytest.approx(2.0, abs=1e-13)


def test_reversed_and_empty():
    assert adaptive_simpson(math.sin, math.pi, 0) == pytest.approx(-2.0, abs=1e-10)
    assert adaptive_simpson(math.sin, 1, 1) == 0.0


def test_sqrt_singularity_against_scipy():
    f = lambda y: math.sqrt(max(0.0, 1 - y * y))
    ref, _ = integrate.quad(f, -1, 1)
    assert adaptive_simpson(f, -1, 1, 1e-11) == pytest.approx(ref, abs=1e-8)


def test_complex_integrand():
    x = -1 + 0.5j
    val = adaptive_simpson(lambda y: 1 / (x - y), 0, 1, 1e-12)
    assert val == pytest.approx(cmath.log(x / (x - 1)), abs=1e-10)


def test_pieces_with_kink():
    f = lambda y: abs(y - 0.3)
    assert integrate_pieces(f, [1, 0, 0.3], 1e-12) == pytest.approx(0.045 + 0.245, abs=1e-12)
    assert integrate_pieces(f, [0.5, 0.5]) == 0.0
