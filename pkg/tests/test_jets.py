import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis.strategies import floats

from hr_rigidity import jets
from hr_rigidity.exceptions import JetError
from hr_rigidity.jets import JetValue, einsum, jet_basis
from hr_rigidity.oracles import central_gradient, central_hessian

coords = floats(min_value=-1.5, max_value=1.5, allow_nan=False, allow_infinity=False)

def polynomial(u):
    x, y = u[0], u[1]
    return x * x * y + 3.0 * y ** 3 - x * y + 2.0

def test_basis_sizes_are_prefixes():
    small = jet_basis(3, 2)
    large = jet_basis(3, 4)
    assert small.size == math.comb(3 + 2, 2)
    assert large.size == math.comb(3 + 4, 4)
    assert np.array_equal(large.exponents[: small.size], small.exponents)

def test_polynomial_derivatives_are_exact():
    u = np.array([0.7, -0.4])
    f = polynomial(JetValue.variables(u, 4))
    x, y = u
    assert f.value == pytest.approx(x * x * y + 3 * y ** 3 - x * y + 2)
    assert np.allclose(f.gradient(), [2 * x * y - y, x * x + 9 * y * y - x])
    assert np.allclose(f.hessian(), [[2 * y, 2 * x - 1], [2 * x - 1, 18 * y]])
    assert f.partial((0, 3)) == pytest.approx(18.0)
    assert f.partial((2, 1)) == pytest.approx(2.0)
    assert f.partial((1, 3)) == pytest.approx(0.0)

def test_diff_lowers_order():
    f = polynomial(JetValue.variables(np.array([0.2, 0.3]), 3))
    fx = f.diff(0)
    assert fx.order == 2
    assert fx.value == pytest.approx(2 * 0.2 * 0.3 - 0.3)

@given(coords, coords)
def test_elementary_functions_match_finite_differences(a, b):
    def scalar(u):
        return jets.sin(u[0]) * jets.exp(u[1] * 0.5) + jets.cos(u[0] * u[1]) + jets.cosh(u[1]) * 0.1

    u = np.array([a, b])
    jet = scalar(JetValue.variables(u, 2))
    assert jet.value == pytest.approx(float(scalar(u)), abs=1e-12)
    assert np.allclose(jet.gradient(), central_gradient(scalar, u), atol=1e-5)
    assert np.allclose(jet.hessian(), central_hessian(scalar, u), atol=1e-5)

def test_inverse_functions_are_consistent():
    u = np.array([0.3])
    t = JetValue.variables(u, 4)[0]
    assert np.allclose(jets.arccos(jets.cos(t)).coeffs, t.coeffs, atol=1e-12)
    assert np.allclose(jets.log(jets.exp(t)).coeffs, t.coeffs, atol=1e-12)
    s = t + 1.0
    assert np.allclose(jets.arccosh(jets.cosh(s)).coeffs, s.coeffs, atol=1e-10)
    assert np.allclose((jets.sqrt(s) * jets.sqrt(s)).coeffs, s.coeffs, atol=1e-12)

def test_matrix_inverse_and_products():
    u = np.array([0.4, -0.2])
    v = JetValue.variables(u, 3)
    a = JetValue.stack([
        JetValue.stack([v[0] + 2.0, v[1]]),
        JetValue.stack([v[1] * v[0], jets.exp(v[0])]),
    ])
    identity = a @ a.inv()
    assert np.allclose(identity.coeffs[..., 0], np.eye(2))
    assert np.allclose(identity.coeffs[..., 1:], 0.0, atol=1e-10)
    assert np.allclose(a.trace().coeffs, (a[0, 0] + a[1, 1]).coeffs)
    assert np.allclose(einsum("ij,ji->", a, a).coeffs, (a @ a).trace().coeffs)

def test_mixed_orders_truncate_to_lowest():
    u = np.array([0.1, 0.2])
    low = JetValue.variables(u, 2)
    high = JetValue.variables(u, 4)
    assert (low[0] * high[1]).order == 2

def test_domain_errors():
    t = JetValue.variables(np.array([1.0]), 2)[0]
    with pytest.raises(JetError):
        jets.arccos(t)
    with pytest.raises(JetError):
        jets.arccosh(t)
    with pytest.raises(JetError):
        jets.log(t - 1.0)
    with pytest.raises(JetError):
        t.diff(0).diff(0).diff(0)

def test_stack_of_floats_is_array():
    assert isinstance(jets.stack([1.0, 2.0]), np.ndarray)
    assert jets.value_of(3.0) == 3.0
