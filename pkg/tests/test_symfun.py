import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.extra.numpy import arrays
from hypothesis.strategies import floats, integers
from scipy.special import comb

from hr_rigidity.exceptions import DomainError, ValidationError
from hr_rigidity.symfun import (
    char_poly_sigma,
    derivative_chain_residual,
    elementary_all,
    elementary_rows,
    mean_curvature_ratio,
    mean_curvatures,
    newton_sigma,
    shifted_expansion_residual,
    shifted_sigma_coefficients,
    sigma,
    sigma_grad,
    sigma_hess,
    sigma_hess_or_zero,
)

entries = floats(min_value=-3, max_value=3, allow_nan=False, allow_infinity=False)

def vectors(min_dim=2, max_dim=7):
    return integers(min_value=min_dim, max_value=max_dim).flatmap(lambda n: arrays(np.float64, n, elements=entries))

def brute_sigma(r, x):
    if r == 0:
        return 1.0
    return sum(math.prod(combo) for combo in itertools.combinations(x, r))

@pytest.mark.parametrize("x, expected", [
    ([1, 2, 3], [1, 6, 11, 6]),
    ([1, 1, 1, 1], [1, 4, 6, 4, 1]),
    ([2, -2], [1, 0, -4]),
])
def test_elementary_all_examples(x, expected):
    assert np.allclose(elementary_all(x), expected)

@given(vectors())
def test_elementary_all_matches_subset_sums(x):
    table = elementary_all(x)
    for r in range(len(x) + 1):
        assert table[r] == pytest.approx(brute_sigma(r, x), abs=1e-9 * (1 + 4.0 ** len(x)))

def test_elementary_all_rejects_short_or_nonfinite():
    with pytest.raises(ValidationError):
        elementary_all([1.0])
    with pytest.raises(ValidationError):
        elementary_all([1.0, float("nan")])

def test_sigma_conventions():
    assert sigma(0, [1.0, 2.0]) == 1.0
    assert sigma(3, [1.0, 2.0]) == 0.0
    with pytest.raises(DomainError):
        sigma(-1, [1.0, 2.0])

def test_sigma_grad_example():
    assert np.allclose(sigma_grad(2, [1, 2, 3]), [5, 4, 3])

def test_sigma_hess_example():
    hess = sigma_hess(2, [1, 2, 3])
    assert np.allclose(hess, np.ones((3, 3)) - np.eye(3))

def test_sigma_hess_order_bounds():
    with pytest.raises(DomainError):
        sigma_hess(1, [1, 2, 3])
    with pytest.raises(DomainError):
        sigma_grad(4, [1, 2, 3])
    assert np.allclose(sigma_hess_or_zero(1, [1, 2, 3]), np.zeros((3, 3)))

@given(vectors(), integers(min_value=1, max_value=7))
def test_gradient_is_deleted_entry_sigma(x, r):
    n = len(x)
    r = min(r, n)
    grad = sigma_grad(r, x)
    for j in range(n):
        rest = np.delete(x, j)
        assert grad[j] == pytest.approx(brute_sigma(r - 1, rest), abs=1e-9 * (1 + 4.0 ** n))

@given(vectors(min_dim=2, max_dim=6))
def test_euler_relation(x):
    n = len(x)
    table = elementary_all(x)
    for r in range(1, n + 1):
        assert float(np.dot(x, sigma_grad(r, x))) == pytest.approx(r * table[r], abs=1e-9 * (1 + 4.0 ** n))

def test_mean_curvature_ratio_of_umbilic_vector():
    lam = np.full(4, 0.7)
    for r in range(5):
        assert mean_curvature_ratio(r, lam) == pytest.approx(0.7 ** r)
    assert np.allclose(mean_curvatures(lam), 0.7 ** np.arange(5))

def test_mean_curvature_ratio_order_bounds():
    with pytest.raises(DomainError):
        mean_curvature_ratio(3, [1.0, 2.0])

@settings(max_examples=50)
@given(vectors(min_dim=2, max_dim=6), integers(min_value=0, max_value=2 ** 31 - 1))
def test_char_poly_sigma_is_basis_invariant(x, seed):
    n = len(x)
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    table = char_poly_sigma(q @ np.diag(x) @ q.T)
    expected = elementary_all(x)
    bound = np.array([comb(n, r, exact=True) for r in range(n + 1)]) * (1 + np.max(np.abs(x))) ** np.arange(n + 1)
    assert np.all(np.abs(table - expected) <= 1e-11 * (1 + bound))

def test_char_poly_sigma_non_symmetric_matrix():
    a = np.array([[2.0, 1.0], [0.0, 3.0]])
    assert np.allclose(char_poly_sigma(a), [1.0, 5.0, 6.0])

def test_char_poly_sigma_rejects_non_square():
    with pytest.raises(ValidationError):
        char_poly_sigma(np.ones((2, 3)))

def test_newton_sigma_matches_char_poly():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(5, 5))
    a = a + a.T
    assert np.allclose(np.array(newton_sigma(a), dtype=float), char_poly_sigma(a), atol=1e-9)

@given(vectors(min_dim=2, max_dim=6), floats(min_value=0.25, max_value=4))
def test_homogeneity(x, s):
    n = len(x)
    scaled = elementary_all(s * x)
    expected = s ** np.arange(n + 1) * elementary_all(x)
    assert np.allclose(scaled, expected, rtol=1e-9, atol=1e-9 * (1 + (s * 3) ** n))

def test_shifted_coefficients_leading_binomial():
    coeffs = shifted_sigma_coefficients(2, [1.0, 2.0, 3.0])
    assert coeffs[0] == pytest.approx(3.0)
    assert coeffs[-1] == pytest.approx(11.0)

@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_shifted_expansion_residual_small(n):
    x = np.linspace(-1.0, 1.5, n)
    for r in range(1, n + 1):
        assert shifted_expansion_residual(r, x, [-1.0, -0.3, 0.5, 2.0]) <= 1e-11

@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_derivative_chain_residual(n):
    x = np.random.default_rng(n).normal(size=n)
    for r in range(n + 1):
        assert derivative_chain_residual(r, x) <= 1e-9

def test_elementary_rows_batch_matches_single():
    rows = np.random.default_rng(0).normal(size=(6, 4))
    table = elementary_rows(rows)
    for row, expected in zip(rows, table):
        assert np.allclose(elementary_all(row), expected)
