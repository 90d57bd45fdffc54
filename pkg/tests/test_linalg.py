import math
from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bethe_ff.linalg import elementary_symmetric, elementary_symmetric_all, log_det, poly_coeffs, vandermonde

from conftest import cofactor_det, cplx, rel


def test_identity():
    d = log_det(np.eye(3))
    assert (d.log_magnitude, d.phase, d.value, d.condition) == (0.0, 1, 1, 1)


def test_diag():
    assert log_det(np.diag([2j, 3])).value == pytest.approx(6j)


def test_singular():
    d = log_det(np.array([[1, 2], [2, 4]], dtype=complex))
    assert d.log_magnitude == -math.inf and d.value == 0


def test_empty_and_errors():
    assert log_det(np.zeros((0, 0))).value == 1
    with pytest.raises(ValueError):
        log_det(np.ones((2, 3)))


@pytest.mark.parametrize("n", [1, 2, 4, 6, 7])
def test_against_cofactor(rng, n):
    m = cplx(rng, (n, n))
    assert rel(log_det(m).value, cofactor_det(m)) < 1e-12


def test_product_rule(rng):
    for _ in range(10):
        a, b = cplx(rng, (5, 5)), cplx(rng, (5, 5))
        da, db, dab = log_det(a), log_det(b), log_det(a @ b)
        assert abs(da.log_magnitude + db.log_magnitude - dab.log_magnitude) < 1e-12
        assert abs(da.phase * db.phase - dab.phase) < 1e-12


def test_large_no_overflow(rng):
    m = 1e3 * cplx(rng, (150, 150))
    d = log_det(m)
    assert d.log_magnitude > 709 and np.isfinite(d.log_magnitude)


def test_esp_examples():
    assert elementary_symmetric([1, 2, 3], 0) == 1
    assert elementary_symmetric([3, 5], 1) == 8
    assert elementary_symmetric([1, 2, 3], 2) == 11
    with pytest.raises(IndexError):
        elementary_symmetric([1, 2], 3)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False), min_size=1, max_size=8))
def test_esp_derivative_definition(xs):
    n = len(xs)
    poly = np.poly(-np.asarray(xs, dtype=complex))  # prod (x + x_m), falling powers
    for k in range(n + 1):
        deriv = np.polyder(poly, n - k) if n - k else poly
        ref = np.polyval(deriv, 0.0) / factorial(n - k)
        assert abs(elementary_symmetric(xs, k) - ref) <= 1e-12 * max(1.0, abs(ref))


def test_esp_product_check(rng):
    xs = cplx(rng, 9)
    e = elementary_symmetric_all(xs)
    for x in cplx(rng, 10):
        direct = np.prod(x + xs)
        rebuilt = sum(e[k] * x ** (9 - k) for k in range(10))
        assert rel(rebuilt, direct) < 1e-12


def test_poly_coeffs_and_vandermonde(rng):
    roots = cplx(rng, 3)
    c = poly_coeffs(roots, 5)
    assert c[0] == 0 and c[1] == 0
    x = 0.3 - 0.2j
    assert rel(np.polyval(c, x), np.prod(x + roots)) < 1e-13
    pts = cplx(rng, 4)
    V = pts[:, None] ** np.arange(4)[None, :]
    assert rel(vandermonde(pts), np.linalg.det(V)) < 1e-12
