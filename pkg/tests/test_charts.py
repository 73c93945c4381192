import math

import numpy as np
import pytest

from hr_rigidity.charts import family_names, hyperspherical, make_chart
from hr_rigidity.exceptions import ValidationError
from hr_rigidity.hypersurface import point_geometry
from hr_rigidity.spaceform import check_on_model, distance, sphere_curvature

def test_family_names():
    assert family_names() == ["bump", "cylinder", "ellipsoid", "sphere", "torus"]

def test_unknown_family_suggests_close_names():
    with pytest.raises(ValidationError, match="sphere"):
        make_chart("spher")

def test_unknown_parameter_is_rejected():
    with pytest.raises(ValidationError, match="Admitidos"):
        make_chart("sphere", {"radius": 1.0})

@pytest.mark.parametrize("family", ["ellipsoid", "torus", "cylinder"])
def test_flat_only_families_reject_curved_models(family):
    with pytest.raises(ValidationError):
        make_chart(family, c=1.0)

def test_dimension_out_of_range():
    with pytest.raises(ValidationError):
        make_chart("torus", n=3)
    with pytest.raises(ValidationError):
        make_chart("sphere", n=5)

def test_sphere_radius_must_fit_in_model():
    with pytest.raises(ValidationError):
        make_chart("sphere", {"t": 4.0}, c=1.0)
    with pytest.raises(ValidationError):
        make_chart("sphere", {"t": -1.0})

def test_torus_radii_order():
    with pytest.raises(ValidationError):
        make_chart("torus", {"R": 1.0, "r": 2.0})

def test_hyperspherical_is_unit():
    for u in ([0.4, 1.0], [1.2, 0.3, 5.0]):
        assert np.linalg.norm(hyperspherical(np.array(u))) == pytest.approx(1.0)

def test_grid_cell_centers_in_lexicographic_order():
    chart = make_chart("cylinder", {"a": 1.0, "L": 1.0})
    points = chart.grid([8])
    assert points.shape == (64, 2)
    assert points[0, 0] == pytest.approx(2 * math.pi / 16)
    assert points[0, 1] == pytest.approx(-1.0 + 1.0 / 8)
    assert points[1, 0] == points[0, 0]
    assert all(chart.contains(u) for u in points)

def test_grid_rejects_wrong_axis_count():
    chart = make_chart("sphere")
    with pytest.raises(ValidationError):
        chart.grid([8, 8, 8])

@pytest.mark.parametrize("c", [-1.0, 0.0, 1.0])
@pytest.mark.parametrize("n", [2, 3])
def test_sphere_chart_lies_on_geodesic_sphere(c, n):
    chart = make_chart("sphere", {"t": 0.8}, c=c, n=n)
    for u in chart.grid([8])[::37]:
        p = chart.evaluate(u)
        assert check_on_model(c, p)
        assert distance(c, chart.center, p) == pytest.approx(0.8, abs=1e-10)

def test_tag_and_params():
    chart = make_chart("bump", {"eps": 0.1}, c=-1.0)
    assert chart.tag == "bump(eps=0.1,kappa=1,t=1)"
    assert chart.param("eps") == 0.1
    assert chart.with_orientation(-1).orientation == -1

def test_ellipsoid_keeps_only_used_axes():
    chart = make_chart("ellipsoid", n=2)
    assert [name for name, _ in chart.params] == ["a", "b", "c"]

def test_cylinder_principal_curvatures():
    chart = make_chart("cylinder", {"a": 2.0, "L": 1.0})
    assert not chart.complete
    pg = point_geometry(chart, chart.base_point(), 3)
    assert np.allclose(pg.eigenvalues, [0.0, 0.5], atol=1e-12)

def test_sphere_principal_curvatures_equal_model_value():
    for c in (-1.0, 0.0, 1.0):
        chart = make_chart("sphere", {"t": 1.0}, c=c)
        pg = point_geometry(chart, [1.0, 2.0], 3)
        assert np.allclose(pg.eigenvalues, sphere_curvature(c, 1.0), atol=1e-10)
