import math

import numpy as np
import pytest

from hr_rigidity.exceptions import DomainError, ManifoldError, ValidationError
from hr_rigidity.oracles import second_difference
from hr_rigidity.spaceform import (
    alpha_c,
    ambient_dimension,
    check_on_model,
    check_tangent,
    distance,
    distance_gradient,
    distance_hessian,
    exp_map,
    geodesic_point,
    model_inner,
    model_origin,
    project_to_model,
    sphere_curvature,
    tangent_projection,
)

MODELS = [-1.0, 0.0, 1.0]

def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)

def test_model_inner_examples():
    assert model_inner(0.0, [1, 0, 0], [1, 0, 0]) == 1.0
    assert model_inner(-1.0, [1, 0, 0], [1, 0, 0]) == -1.0
    assert model_inner(-1.0, [1, 0, 0], [0, 1, 0]) == 0.0

def test_model_inner_dimension_mismatch():
    with pytest.raises(ValidationError):
        model_inner(0.0, [1, 0], [1, 0, 0])

@pytest.mark.parametrize("c", MODELS)
def test_origin_is_on_model(c):
    assert check_on_model(c, model_origin(c, 3))
    assert len(model_origin(c, 3)) == ambient_dimension(c, 3)

def test_lower_sheet_is_rejected():
    assert not check_on_model(-1.0, [-1.0, 0.0, 0.0])

def test_distance_examples():
    assert distance(1.0, [1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]) == pytest.approx(math.pi)
    q = [math.cosh(1.0), math.sinh(1.0), 0.0]
    assert distance(-1.0, [1.0, 0.0, 0.0], q) == pytest.approx(1.0, abs=1e-12)
    assert distance(0.0, [1.0, 2.0], [1.0, 2.0]) == 0.0

def test_distance_off_model_raises():
    with pytest.raises(ManifoldError):
        distance(1.0, [2.0, 0.0, 0.0], [1.0, 0.0, 0.0])

@pytest.mark.parametrize("c", MODELS)
@pytest.mark.parametrize("t", [0.3, 1.0, 1.4])
def test_geodesic_point_distance_is_t(c, t):
    omega = unit([1.0, -2.0, 0.5])
    p = geodesic_point(c, t, omega)
    assert check_on_model(c, p)
    assert distance(c, model_origin(c, 2), p) == pytest.approx(t, abs=1e-10)

@pytest.mark.parametrize("c, t, expected", [
    (0.0, 2.0, 0.5),
    (1.0, math.pi / 4, 1.0),
    (-1.0, 1.0, 1.0 / math.tanh(1.0)),
])
def test_sphere_curvature_examples(c, t, expected):
    assert sphere_curvature(c, t) == pytest.approx(expected, rel=1e-12)

def test_sphere_curvature_domain():
    with pytest.raises(DomainError):
        sphere_curvature(0.0, 0.0)
    with pytest.raises(DomainError):
        sphere_curvature(1.0, math.pi)

@pytest.mark.parametrize("t", [0.5, 1.0, 1.5, 2.0])
def test_sphere_curvature_flat_limit(t):
    for c in (-1e-6, 1e-6):
        assert abs(sphere_curvature(c, t) - 1.0 / t) <= 1e-5

@pytest.mark.parametrize("c", MODELS)
def test_sphere_curvature_exceeds_alpha(c):
    for t in (0.5, 1.0, 1.5, 3.0 if c <= 0 else 2.0):
        assert sphere_curvature(c, t) > alpha_c(c)

@pytest.mark.parametrize("c, expected", [(0.0, 0.0), (4.0, 0.0), (-4.0, 2.0)])
def test_alpha_c(c, expected):
    assert alpha_c(c) == expected

def test_projection_and_tangency():
    rng = np.random.default_rng(0)
    for c in (1.0, -1.0):
        raw = rng.normal(size=4)
        if c < 0:
            raw[0] = abs(raw[0]) + np.linalg.norm(raw[1:]) + 0.5
        p = project_to_model(c, raw)
        assert check_on_model(c, p)
        v = tangent_projection(c, p, rng.normal(size=4))
        assert check_tangent(c, p, v)

def test_projection_of_spacelike_vector_fails():
    with pytest.raises(ManifoldError):
        project_to_model(-1.0, [0.0, 1.0, 0.0])

def test_distance_hessian_flat_example():
    q0 = np.zeros(3)
    p = np.array([2.0, 0.0, 0.0])
    assert distance_hessian(0.0, q0, p, [0.0, 1.0, 0.0]) == pytest.approx(0.5)

@pytest.mark.parametrize("c", MODELS)
def test_distance_hessian_annihilates_radial_direction(c):
    p = geodesic_point(c, 0.8, unit([0.3, 1.0, -0.4]))
    q0 = model_origin(c, 2)
    grad = distance_gradient(c, q0, p)
    assert distance_hessian(c, q0, p, grad) == pytest.approx(0.0, abs=1e-12)

def test_distance_hessian_at_center_raises():
    with pytest.raises(DomainError):
        distance_gradient(1.0, [1.0, 0.0, 0.0], [1.0, 0.0, 0.0])

@pytest.mark.parametrize("c", MODELS)
def test_distance_hessian_matches_geodesic_second_difference(c):
    rng = np.random.default_rng(3)
    q0 = model_origin(c, 2)
    p = geodesic_point(c, 0.9, unit([0.2, -0.7, 1.0]))
    v = tangent_projection(c, p, rng.normal(size=len(p)))
    closed = distance_hessian(c, q0, p, v)
    numeric = second_difference(lambda s: distance(c, exp_map(c, p, v, s), q0))
    assert abs(closed - numeric) <= 1e-6 * (1 + abs(closed))

@pytest.mark.parametrize("c", MODELS)
def test_triangle_inequality(c):
    rng = np.random.default_rng(8)
    points = [geodesic_point(c, t, unit(rng.normal(size=3))) for t in rng.uniform(0.2, 1.3, size=12)]
    for a in points[:4]:
        for b in points[4:8]:
            for m in points[8:]:
                assert distance(c, a, b) <= distance(c, a, m) + distance(c, m, b) + 1e-9
