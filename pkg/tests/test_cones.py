import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.extra.numpy import arrays
from hypothesis.strategies import floats, integers

from hr_rigidity.cones import (
    concavity_check,
    cone_nesting_check,
    garding_check,
    garding_gap,
    hyperbolicity_check,
    in_garding_cone,
    membership_equivalence_check,
    membership_rows,
    midpoint_convexity_check,
    quadratic_form_bound,
    quadratic_form_check,
    roots_along,
    sample_cone_points,
    wr_hessian,
)
from hr_rigidity.exceptions import ConeError, DomainError
from hr_rigidity.records import Verdict
from hr_rigidity.symfun import elementary_all

positive = floats(min_value=0.05, max_value=3, allow_nan=False, allow_infinity=False)

def all_pass(records):
    return all(record.verdict == Verdict.PASS for record in records)

@pytest.mark.parametrize("n", [2, 3, 5])
def test_direction_a_is_in_every_cone(n):
    for r in range(1, n + 1):
        report = in_garding_cone(r, np.ones(n))
        assert report.in_cone
        assert not report.on_boundary
        assert np.allclose(report.roots.real, -1.0, atol=2e-2)

def test_membership_example_from_signs():
    x = [3.0, 1.0, -1.0]
    assert in_garding_cone(1, x).in_cone
    assert not in_garding_cone(2, x).in_cone

def test_zero_entry_is_on_boundary_of_last_cone():
    report = in_garding_cone(3, [1.0, 2.0, 0.0])
    assert not report.in_cone
    assert report.on_boundary

def test_roots_along_degree_and_values():
    roots = roots_along(2, [1.0, 2.0, 3.0])
    assert roots.shape == (2,)
    # 3s² + 12s + 11
    assert np.allclose(np.sort(roots.real), np.sort(np.roots([3.0, 12.0, 11.0]).real))

def test_roots_along_order_bounds():
    with pytest.raises(DomainError):
        roots_along(4, [1.0, 2.0, 3.0])

@given(integers(min_value=2, max_value=6).flatmap(lambda n: arrays(np.float64, n, elements=positive)))
def test_positive_orthant_is_in_every_cone(x):
    for r in range(1, len(x) + 1):
        assert in_garding_cone(r, x).in_cone

@settings(max_examples=30)
@given(integers(min_value=0, max_value=2 ** 31 - 1))
def test_roots_match_oracle_away_from_boundary(seed):
    rng = np.random.default_rng(seed)
    rows = rng.normal(0.3, 1.0, size=(50, 4))
    for r in range(1, 5):
        inside, _, boundary, _ = membership_rows(r, rows)
        for row, member, edge in zip(rows, inside, boundary):
            if edge:
                continue
            table = elementary_all(row)
            assert member == bool(np.all(table[1: r + 1] > 0))

def test_garding_gap_vanishes_on_rays():
    x = np.array([1.0, 2.0, 0.5, 1.5])
    for r in range(1, 5):
        assert abs(garding_gap(r, x, x)) <= 1e-12 * (1 + elementary_all(x)[r])
        assert abs(garding_gap(r, x, 2.5 * x)) <= 1e-11 * (1 + elementary_all(x)[r])

def test_garding_gap_is_nonnegative_on_samples():
    rng = np.random.default_rng(7)
    for r in (1, 2, 3):
        xs = sample_cone_points(r, 3, 40, rng)
        ys = sample_cone_points(r, 3, 40, rng)
        for x, y in zip(xs, ys):
            assert garding_gap(r, x, y) >= -1e-10 * (1 + abs(elementary_all(y)[r]))

def test_garding_gap_outside_cone_raises():
    with pytest.raises(ConeError):
        garding_gap(2, [3.0, 1.0, -1.0], [1.0, 1.0, 1.0])

def test_wr_hessian_is_negative_semidefinite():
    concavity = wr_hessian(3, [0.5, 1.0, 2.0, 3.0])
    assert concavity.max_eigenvalue <= 1e-9 * concavity.scale
    assert np.allclose(concavity.hessian, concavity.hessian.T)

def test_wr_hessian_first_order_is_zero():
    concavity = wr_hessian(1, [0.5, 1.0, 2.0])
    assert np.allclose(concavity.hessian, 0.0)

def test_quadratic_form_bound_trivial_cases():
    x = [1.0, 2.0, 3.0]
    assert quadratic_form_bound(2, x, [0.0, 0.0, 0.0]) == (0.0, 0.0)
    assert quadratic_form_bound(1, x, [1.0, -2.0, 0.5]) == (0.0, 0.0)

def test_quadratic_form_bound_holds():
    rng = np.random.default_rng(11)
    x = np.array([0.4, 1.1, 2.0, 0.9])
    for _ in range(50):
        lhs, rhs = quadratic_form_bound(3, x, rng.normal(size=4))
        assert lhs <= rhs + 1e-10 * max(1.0, abs(rhs))

def test_sample_cone_points_are_inside():
    rng = np.random.default_rng(5)
    points = sample_cone_points(2, 4, 100, rng)
    assert points.shape == (100, 4)
    inside, _, _, _ = membership_rows(2, points)
    assert inside.all()

def test_drivers_pass_at_small_scale():
    assert all_pass(hyperbolicity_check(200, 5, seed=1))
    assert all_pass(membership_equivalence_check(200, 4, seed=2))
    assert all_pass(cone_nesting_check(300, 5, seed=3))
    assert all_pass(midpoint_convexity_check(100, 4, seed=4))
    assert all_pass(garding_check(100, 4, seed=5))
    assert all_pass(concavity_check(100, 4, seed=6, fd_points=3))
    assert all_pass(quadratic_form_check(100, 4, seed=7))

def test_drivers_are_deterministic():
    first = [record.to_dict() for record in garding_check(50, 3, seed=9)]
    second = [record.to_dict() for record in garding_check(50, 3, seed=9)]
    assert first == second
