"""
Suites de verificación.

Cada suite recibe la configuración y las tolerancias efectivas y devuelve registros.
Un fallo numérico dentro de una comprobación nunca aborta la corrida: se convierte en
un registro FAIL con el tipo y el mensaje del error. Cada suite siembra su propio
generador con la semilla de la configuración, así el resultado no depende del orden
en que se ejecuten.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Tuple

import numpy as np
from numpy.typing import NDArray
from scipy.special import comb

from hr_rigidity import cones, rigidity
from hr_rigidity.charts import FAMILIES, ImmersionChart, make_chart
from hr_rigidity.config import RunConfig, Tolerances
from hr_rigidity.exceptions import HRBaseError
from hr_rigidity.hypersurface import (
    PointGeometry,
    char_poly_paths_residual,
    codazzi_residual,
    commutation_residual,
    composition_hessian_residual,
    curvature_relation_residual,
    gauss_residual,
    gradient_identity_residual,
    hess_trace_residual,
    laplacian_fd_residual,
    newton_tensor_residual,
    orientation_flip_residual,
    point_geometry,
    scalar_curvature_residual,
    sectional_residual,
    walter_residual,
)
from hr_rigidity.logger import suite_timer
from hr_rigidity.oracles import second_difference
from hr_rigidity.records import VerificationRecord, check_inequality, check_residual, failed, skipped, tally
from hr_rigidity.spaceform import (
    alpha_c,
    ambient_dimension,
    check_on_model,
    check_tangent,
    distance,
    distance_hessian,
    exp_map,
    geodesic_point,
    model_origin,
    project_to_model,
    sphere_curvature,
    tangent_projection,
)
from hr_rigidity.symfun import (
    char_poly_sigma,
    derivative_chain_residual,
    elementary_rows,
    grad_rows,
    hess_rows,
    shifted_rows,
)

logger = logging.getLogger("hr-rigidity")

NUMERIC_ERRORS = (HRBaseError, np.linalg.LinAlgError, FloatingPointError, ValueError, ZeroDivisionError)
SUITE_ORDER = ("symfun", "cones", "spaceform", "walter", "rigidity")
SYMFUN_DIMS = tuple(range(2, 9))
CONE_MAX_DIM = 6
HYPERBOLICITY_MAX_DIM = 8
MODEL_CURVATURES = (-1.0, 0.0, 1.0)
SPHERE_RADII = (0.5, 1.0, 1.5)
SWEEP_POINTS = 16
EXTRA_POINTS = 3
ACCEPTANCE_FAMILIES = (("ellipsoid", 0.0, 2), ("ellipsoid", 0.0, 3), ("bump", 1.0, 2), ("bump", -1.0, 2))
ACCEPTANCE_POINTS = 64
WALTER_BUDGET = 50
COMMUTATION_BUDGET = 30

@dataclass
class SuiteOutcome:
    """Registros de una o varias suites, con detalles y advertencias para el reporte."""
    records: List[VerificationRecord] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)
    caveats: List[str] = field(default_factory=list)

    def merge(self, other: "SuiteOutcome") -> None:
        self.records.extend(other.records)
        self.details.update(other.details)
        for caveat in other.caveats:
            if caveat not in self.caveats:
                self.caveats.append(caveat)

def guarded(check_id: str, location: Any, func: Callable[[], Any]) -> List[VerificationRecord]:
    """Ejecuta una comprobación; un error numérico se convierte en un registro FAIL."""
    try:
        result = func()
    except NUMERIC_ERRORS as e:
        logger.error(f"Fallo en {check_id} ({location}): {type(e).__name__}: {str(e)}")
        return [failed(check_id, location, f"{type(e).__name__}: {str(e)}")]
    if isinstance(result, VerificationRecord):
        return [result]
    return list(result)

# funciones simétricas

def _generating(rows: NDArray[np.float64], t: NDArray[np.float64], tol: float, location: str) -> VerificationRecord:
    """∏(1 + t x_i) = Σ_r σ_r t^r."""
    n = rows.shape[1]
    terms = elementary_rows(rows) * t[:, None] ** np.arange(n + 1)
    direct = np.prod(1.0 + t[:, None] * rows, axis=1)
    scale = 1.0 + np.sum(np.abs(terms), axis=1)
    worst = float(np.max(np.abs(terms.sum(axis=1) - direct) / scale))
    return check_residual("symfun.generating", location, worst, 0.0, tol)

def _sigma_column(rows: NDArray[np.float64], r: int) -> NDArray[np.float64]:
    return elementary_rows(rows)[:, r]

def _gradient(rows: NDArray[np.float64], tol: float, location: str, h: float = 1e-2) -> VerificationRecord:
    """∂σ_r/∂x_j = σ_{r-1}(x̂_j) frente a diferencias centrales (exactas salvo redondeo: σ_r es afín en x_j)."""
    n = rows.shape[1]
    worst = 0.0
    for r in range(1, n + 1):
        closed = grad_rows(r, rows)
        numeric = np.empty_like(closed)
        for j in range(n):
            e = np.zeros(n)
            e[j] = h
            numeric[:, j] = (
                -_sigma_column(rows + 2 * e, r) + 8 * _sigma_column(rows + e, r)
                - 8 * _sigma_column(rows - e, r) + _sigma_column(rows - 2 * e, r)
            ) / (12 * h)
        scale = 1.0 + np.max(np.abs(closed), axis=1)
        worst = max(worst, float(np.max(np.max(np.abs(closed - numeric), axis=1) / scale)))
    return check_residual("symfun.gradient", location, worst, 0.0, tol)

def _hessian(rows: NDArray[np.float64], tol: float, location: str, h: float = 1e-2) -> VerificationRecord:
    """∂²σ_r/∂x_i∂x_j = σ_{r-2}(x̂_i, x̂_j), diagonal nula, frente a diferencias mixtas."""
    n = rows.shape[1]
    worst = 0.0
    for r in range(2, n + 1):
        closed = hess_rows(r, rows)
        base = _sigma_column(rows, r)
        for i in range(n):
            ei = np.zeros(n)
            ei[i] = h
            diagonal = (_sigma_column(rows + ei, r) - 2 * base + _sigma_column(rows - ei, r)) / (h * h)
            scale = 1.0 + np.max(np.abs(closed), axis=(1, 2))
            worst = max(worst, float(np.max(np.abs(diagonal - closed[:, i, i]) / scale)))
            for j in range(i + 1, n):
                ej = np.zeros(n)
                ej[j] = h
                mixed = (
                    _sigma_column(rows + ei + ej, r) - _sigma_column(rows + ei - ej, r)
                    - _sigma_column(rows - ei + ej, r) + _sigma_column(rows - ei - ej, r)
                ) / (4 * h * h)
                worst = max(worst, float(np.max(np.abs(mixed - closed[:, i, j]) / scale)))
    return check_residual("symfun.hessian", location, worst, 0.0, tol)

def _homogeneity(rows: NDArray[np.float64], s: NDArray[np.float64], tol: float, location: str) -> VerificationRecord:
    """σ_r(s·x) = s^r σ_r(x)."""
    n = rows.shape[1]
    powers = s[:, None] ** np.arange(n + 1)
    scaled = elementary_rows(rows * s[:, None])
    expected = powers * elementary_rows(rows)
    bound = np.array([comb(n, r, exact=True) for r in range(n + 1)], dtype=np.float64)
    magnitude = 1.0 + bound * (s[:, None] * np.max(np.abs(rows), axis=1)[:, None]) ** np.arange(n + 1)
    worst = float(np.max(np.abs(scaled - expected) / magnitude))
    return check_residual("symfun.homogeneity", location, worst, 0.0, tol)

def _basis_invariance(rows: NDArray[np.float64], rng: np.random.Generator, tol: float, location: str) -> VerificationRecord:
    """char_poly_sigma(Q diag(x) Qᵀ) = σ(x) para Q ortogonal aleatoria."""
    n = rows.shape[1]
    table = elementary_rows(rows)
    bound = np.array([comb(n, r, exact=True) for r in range(n + 1)], dtype=np.float64)
    worst = 0.0
    for x, sigmas in zip(rows, table):
        q, _ = np.linalg.qr(rng.normal(size=(n, n)))
        rotated = char_poly_sigma(q @ np.diag(x) @ q.T)
        magnitude = 1.0 + bound * (1.0 + np.max(np.abs(x))) ** np.arange(n + 1)
        worst = max(worst, float(np.max(np.abs(rotated - sigmas) / magnitude)))
    return check_residual("symfun.basis_invariance", location, worst, 0.0, tol)

def _shifted(rows: NDArray[np.float64], s: NDArray[np.float64], tol: float, location: str) -> VerificationRecord:
    """σ_r(x + s·a) = Σ_j C(n-j, r-j) σ_j(x) s^{r-j}."""
    n = rows.shape[1]
    direct = elementary_rows(rows + s[:, None])
    worst = 0.0
    for r in range(1, n + 1):
        coeffs = shifted_rows(r, rows)
        powers = s[:, None] ** np.arange(r, -1, -1)
        expanded = np.sum(coeffs * powers, axis=1)
        scale = 1.0 + np.sum(np.abs(coeffs * powers), axis=1)
        worst = max(worst, float(np.max(np.abs(expanded - direct[:, r]) / scale)))
    return check_residual("symfun.shifted_expansion", location, worst, 0.0, tol)

def _derivative_chain(rows: NDArray[np.float64], tol: float, location: str) -> VerificationRecord:
    n = rows.shape[1]
    worst = max(derivative_chain_residual(r, x) for x in rows for r in range(n + 1))
    return check_residual("symfun.derivative_chain", location, worst, 0.0, tol)

def symfun_suite(config: RunConfig, tol: Tolerances) -> SuiteOutcome:
    """Identidades de σ_r sobre instancias aleatorias, n = 2..8."""
    rng = np.random.default_rng(config.seed)
    count = max(1, math.ceil(config.samples / len(SYMFUN_DIMS)))
    chain_count = max(1, min(count, 200))
    records: List[VerificationRecord] = []
    for n in SYMFUN_DIMS:
        location = f"n={n}, muestras={count}"
        rows = rng.normal(0.0, 1.0, size=(count, n))
        t = rng.uniform(-1.0, 1.0, size=count)
        s = rng.uniform(0.5, 2.0, size=count)
        shift = rng.uniform(-2.0, 2.0, size=count)
        records += guarded("symfun.generating", location, lambda: _generating(rows, t, tol.generating, location))
        records += guarded("symfun.gradient", location, lambda: _gradient(rows, tol.fd_gradient, location))
        records += guarded("symfun.hessian", location, lambda: _hessian(rows, tol.fd_hessian, location))
        records += guarded("symfun.homogeneity", location, lambda: _homogeneity(rows, s, tol.homogeneity, location))
        records += guarded("symfun.basis_invariance", location, lambda: _basis_invariance(rows, rng, tol.basis, location))
        records += guarded("symfun.shifted_expansion", location, lambda: _shifted(rows, shift, tol.shifted_expansion, location))
        chain_location = f"n={n}, muestras={chain_count}"
        records += guarded(
            "symfun.derivative_chain", chain_location,
            lambda: _derivative_chain(rows[:chain_count], tol.derivative_chain, chain_location)
        )
    return SuiteOutcome(records)

# conos de Gårding

def cones_suite(config: RunConfig, tol: Tolerances) -> SuiteOutcome:
    """Hiperbolicidad, pertenencia, anidamiento, convexidad, Gårding, concavidad y forma cuadrática."""
    seed = config.seed
    samples = config.samples
    per_dim = max(1, math.ceil(10 * samples / (HYPERBOLICITY_MAX_DIM - 1)))
    records: List[VerificationRecord] = []
    records += guarded("cones.hyperbolicity", "todas", lambda: cones.hyperbolicity_check(per_dim, HYPERBOLICITY_MAX_DIM, seed, tol.hyperbolicity))
    records += guarded("cones.membership_equivalence", "todas", lambda: cones.membership_equivalence_check(samples, CONE_MAX_DIM, seed + 1))
    for n in range(2, CONE_MAX_DIM + 1):
        records += guarded("cones.nesting", f"n={n}", lambda: cones.cone_nesting_check(samples, n, seed + 2 + n))
        records += guarded("cones.midpoint_convexity", f"n={n}", lambda: cones.midpoint_convexity_check(max(1, samples // 10), n, seed + 20 + n))
    records += guarded("cones.garding", "todas", lambda: cones.garding_check(samples, CONE_MAX_DIM, seed + 3, tol.garding, tol.garding_equality))
    records += guarded("cones.concavity", "todas", lambda: cones.concavity_check(samples, CONE_MAX_DIM, seed + 4, tol.concavity, tol.wr_fd))
    records += guarded("cones.quadratic_form", "todas", lambda: cones.quadratic_form_check(samples, CONE_MAX_DIM, seed + 5, tol.quadratic))
    return SuiteOutcome(records)

# formas espaciales

def _directions(rng: np.random.Generator, count: int, dim: int) -> NDArray[np.float64]:
    raw = rng.normal(size=(count, dim))
    return raw / np.linalg.norm(raw, axis=1, keepdims=True)

def _model_points(c: float, n: int, rng: np.random.Generator, count: int) -> List[NDArray[np.float64]]:
    radii = rng.uniform(0.1, 1.4, size=count)
    return [geodesic_point(c, t, omega) for t, omega in zip(radii, _directions(rng, count, n + 1))]

def _membership(c: float, n: int, rng: np.random.Generator, count: int, tol: Tolerances, location: str) -> VerificationRecord:
    dim = ambient_dimension(c, n)
    raw = rng.normal(size=(count, dim))
    if c < 0:
        raw[:, 0] = np.abs(raw[:, 0]) + np.linalg.norm(raw[:, 1:], axis=1) + 0.1
    points = [project_to_model(c, p) for p in raw] + _model_points(c, n, rng, count)
    bad = sum(not check_on_model(c, p, tol.membership) for p in points)
    return check_residual("spaceform.membership", location, float(bad), 0.0, 0.0, note=f"puntos={len(points)}")

def _tangency(c: float, n: int, rng: np.random.Generator, count: int, tol: Tolerances, location: str) -> VerificationRecord:
    dim = ambient_dimension(c, n)
    points = _model_points(c, n, rng, count)
    bad = 0
    for p in points:
        v = tangent_projection(c, p, rng.normal(size=dim))
        if not check_tangent(c, p, v, tol.tangency):
            bad += 1
    return check_residual("spaceform.tangency", location, float(bad), 0.0, 0.0, note=f"vectores={count}")

def _distance_axioms(c: float, n: int, rng: np.random.Generator, count: int, tol: Tolerances, location: str) -> List[VerificationRecord]:
    ps = _model_points(c, n, rng, count)
    qs = _model_points(c, n, rng, count)
    ss = _model_points(c, n, rng, count)
    symmetry = 0.0
    triangle = 0.0
    for p, q, s in zip(ps, qs, ss):
        d_pq = distance(c, p, q)
        symmetry = max(symmetry, abs(d_pq - distance(c, q, p)))
        excess = d_pq - distance(c, p, s) - distance(c, s, q)
        triangle = max(triangle, excess / (1.0 + d_pq))
    origin = model_origin(c, n)
    radii = rng.uniform(0.1, 1.4, size=count)
    radial = max(
        abs(distance(c, origin, geodesic_point(c, t, omega)) - t) / (1.0 + t)
        for t, omega in zip(radii, _directions(rng, count, n + 1))
    )
    return [
        check_residual("spaceform.symmetry", location, symmetry, 0.0, tol.triangle),
        check_inequality("spaceform.triangle", location, triangle, 0.0, tol.triangle),
        check_residual("spaceform.geodesic_distance", location, radial, 0.0, tol.triangle),
    ]

def _distance_hessian_fd(c: float, n: int, rng: np.random.Generator, tol: Tolerances, location: str, probes: int = 10) -> VerificationRecord:
    """Hess r(v, v) cerrada frente a d²/dt² r(γ(t)) a lo largo de la geodésica γ con γ'(0) = v."""
    dim = ambient_dimension(c, n)
    origin = model_origin(c, n)
    worst = 0.0
    for p in _model_points(c, n, rng, probes):
        v = tangent_projection(c, p, rng.normal(size=dim))
        closed = distance_hessian(c, origin, p, v)
        numeric = second_difference(lambda s: distance(c, exp_map(c, p, v, s), origin))
        worst = max(worst, abs(closed - numeric) / (1.0 + abs(closed)))
    return check_residual("spaceform.distance_hessian_fd", location, worst, 0.0, tol.dist_hess_fd)

def _curvature_limits(tol: Tolerances) -> List[VerificationRecord]:
    records = []
    for t in SPHERE_RADII:
        worst = max(abs(sphere_curvature(c, t) - 1.0 / t) for c in (-1e-6, 1e-6))
        records.append(check_residual("spaceform.mu_limit", f"t={t:g}, c=±1e-6", worst, 0.0, tol.mu_limit))
        for c in MODEL_CURVATURES:
            records.append(check_inequality(
                "spaceform.mu_above_alpha", f"t={t:g}, c={c:g}", alpha_c(c), sphere_curvature(c, t), 0.0
            ))
    return records

def _geodesic_spheres(c: float, n: int, tol: Tolerances) -> List[VerificationRecord]:
    """Curvaturas principales de la esfera geodésica de radio t frente a μ_c(t)."""
    records = []
    for t in SPHERE_RADII:
        chart = make_chart("sphere", {"t": t}, c, n)
        points = chart.grid((8,))
        points = points[:: max(1, len(points) // 8)]
        expected = sphere_curvature(c, t)
        worst = max(float(np.max(np.abs(point_geometry(chart, u, 3).eigenvalues - expected))) for u in points)
        records.append(check_residual(
            "spaceform.geodesic_sphere", f"c={c:g}, n={n}, t={t:g}", worst, 0.0, tol.geodesic_sphere,
            note=f"μ_c(t)={expected:.12g}"
        ))
    return records

def spaceform_suite(config: RunConfig, tol: Tolerances) -> SuiteOutcome:
    """Modelos, distancias, hessiana de la distancia y esferas geodésicas en los tres modelos."""
    rng = np.random.default_rng(config.seed)
    count = max(1, min(config.samples, 2000))
    records: List[VerificationRecord] = []
    for c in MODEL_CURVATURES:
        for n in (2, 3):
            location = f"c={c:g}, n={n}"
            records += guarded("spaceform.membership", location, lambda: _membership(c, n, rng, count, tol, location))
            records += guarded("spaceform.tangency", location, lambda: _tangency(c, n, rng, count, tol, location))
            records += guarded("spaceform.triangle", location, lambda: _distance_axioms(c, n, rng, count, tol, location))
            records += guarded("spaceform.distance_hessian_fd", location, lambda: _distance_hessian_fd(c, n, rng, tol, location))
            records += guarded("spaceform.geodesic_sphere", location, lambda: _geodesic_spheres(c, n, tol))
    records += guarded("spaceform.mu_limit", "c→0", lambda: _curvature_limits(tol))
    return SuiteOutcome(records)

# hipersuperficies y fórmula de Walter

def _intrinsic_checks(pg: PointGeometry, tol: Tolerances) -> List[VerificationRecord]:
    """Invariantes de la geometría de un punto que no dependen de la base propia."""
    n = pg.n
    u = pg.u
    mean = float(pg.H[1])
    codazzi_scale = 1.0 + float(np.max(np.abs(pg.nabla_h)))
    return [
        check_residual(
            "hypersurface.curvature_relation", u, curvature_relation_residual(pg), 0.0,
            tol.curvature_relation * n * n * (1.0 + mean * mean)
        ),
        check_residual(
            "hypersurface.scalar_curvature", u, scalar_curvature_residual(pg), 0.0,
            tol.sectional * (1.0 + abs(pg.R_scalar))
        ),
        check_residual("hypersurface.codazzi", u, codazzi_residual(pg), 0.0, tol.codazzi * codazzi_scale),
        check_residual("hypersurface.gauss", u, gauss_residual(pg), 0.0, tol.gauss),
        check_residual(
            "hypersurface.sectional", u, sectional_residual(pg), 0.0,
            tol.sectional * (1.0 + float(np.max(pg.eigenvalues ** 2)))
        ),
        check_residual("hypersurface.char_poly_paths", u, char_poly_paths_residual(pg), 0.0, tol.char_poly_paths),
    ]

def _frame_checks(pg: PointGeometry, tol: Tolerances) -> List[VerificationRecord]:
    """Conmutación, traza de la hessiana, identidad del gradiente y tensor de Newton (peor caso por punto)."""
    n = pg.n
    u = pg.u
    records = []
    scale = 1.0 + float(np.max(np.abs(pg.nabla2_h)))
    records.append(check_residual("hypersurface.commutation", u, commutation_residual(pg), 0.0, tol.commutation * scale))
    records.append(check_residual("hypersurface.hess_trace", u, hess_trace_residual(pg), 0.0, tol.commutation * scale))
    if not pg.frame_reliable:
        records.append(skipped("hypersurface.gradient_identity", u, "skipped-degenerate"))
        records.append(skipped("hypersurface.newton_tensor", u, "skipped-degenerate"))
        return records

    worst_gradient: Tuple[float, float, str] = (0.0, tol.gradient, "")
    worst_newton: Tuple[float, float, str] = (0.0, tol.gradient, "")
    for r in range(1, n + 1):
        rhs = comb(n, r, exact=True) * np.abs(pg.H_gradient[r])
        for k in range(n):
            bound = tol.gradient * (1.0 + float(rhs[k]))
            gap = abs(gradient_identity_residual(pg, r, k))
            if gap / bound > worst_gradient[0] / worst_gradient[1]:
                worst_gradient = (gap, bound, f"r={r}, k={k}")
            gap = newton_tensor_residual(pg, r, k)
            if gap / bound > worst_newton[0] / worst_newton[1]:
                worst_newton = (gap, bound, f"r={r}, k={k}")
    records.append(check_residual(
        "hypersurface.gradient_identity", u, worst_gradient[0], 0.0, worst_gradient[1], note=worst_gradient[2]
    ))
    records.append(check_residual(
        "hypersurface.newton_tensor", u, worst_newton[0], 0.0, worst_newton[1], note=worst_newton[2]
    ))
    return records

def _interior_points(chart: ImmersionChart, rng: np.random.Generator, count: int) -> NDArray[np.float64]:
    lower = np.array(chart.lower)
    upper = np.array(chart.upper)
    return lower + (0.1 + 0.8 * rng.uniform(size=(count, chart.n))) * (upper - lower)

def _extra_checks(chart: ImmersionChart, config: RunConfig, tol: Tolerances) -> List[VerificationRecord]:
    """Oráculo de diferencias finitas del laplaciano, hessiana de la composición y cambio de orientación."""
    rng = np.random.default_rng(config.seed)
    records: List[VerificationRecord] = []

    def coordinate(v: Any) -> Any:
        return chart.mapping(v)[-1]

    for u in _interior_points(chart, rng, EXTRA_POINTS):
        def laplacian() -> VerificationRecord:
            exact, approx, relative = laplacian_fd_residual(chart, u, coordinate)
            return check_residual("hypersurface.laplacian_fd", u, exact, approx, tol.laplacian_fd, residual=relative)

        records += guarded("hypersurface.laplacian_fd", u, laplacian)
        records += guarded(
            "hypersurface.composition_hessian", u,
            lambda: check_residual("hypersurface.composition_hessian", u, composition_hessian_residual(chart, u), 0.0, tol.composition)
        )
        records += guarded(
            "hypersurface.orientation_flip", u,
            lambda: check_residual(
                "hypersurface.orientation_flip", u, orientation_flip_residual(chart, u, config.r), 0.0, tol.walter,
                note=f"r={config.r}"
            )
        )
    return records

def _sweep_charts() -> Iterable[ImmersionChart]:
    for name, family_spec in FAMILIES.items():
        curvatures = (0.0,) if family_spec.flat_only else MODEL_CURVATURES
        for c in curvatures:
            for n in family_spec.dims:
                yield make_chart(name, None, c, n)

def family_sweep(tol: Tolerances) -> List[VerificationRecord]:
    """Invariantes puntuales en todas las familias incorporadas y todos los modelos admitidos."""
    records: List[VerificationRecord] = []
    for chart in _sweep_charts():
        points = chart.grid((8,))
        points = points[:: max(1, len(points) // SWEEP_POINTS)]
        for u in points:
            label = f"{chart.tag} c={chart.c:g} n={chart.n} u={np.array2string(u, precision=4)}"
            try:
                pg = point_geometry(chart, u, 3, tol.eigen_gap)
            except NUMERIC_ERRORS as e:
                logger.error(f"Fallo de geometría en {label}: {str(e)}")
                records.append(failed("hypersurface.sweep", label, f"{type(e).__name__}: {str(e)}"))
                continue
            records += guarded("hypersurface.sweep", label, lambda: _intrinsic_checks(pg, tol))
    return records

def walter_suite(config: RunConfig, tol: Tolerances) -> SuiteOutcome:
    """
    Geometría completa de la familia configurada en cada punto de la malla: fórmula de
    Walter para todo r, identidades de ∇h y ∇²h, y comprobaciones adicionales en
    puntos sembrados. Incluye el barrido de invariantes sobre todas las familias.
    """
    chart = make_chart(config.family, config.params, config.c, config.n)
    records: List[VerificationRecord] = []
    points = chart.grid(config.grid)
    logger.info(f"Suite walter sobre {chart.tag}: {len(points)} puntos, r = 1..{chart.n}")
    for u in points:
        try:
            pg = point_geometry(chart, u, 4, tol.eigen_gap)
        except NUMERIC_ERRORS as e:
            logger.error(f"Fallo de geometría en u={u} ({chart.tag}): {str(e)}")
            records.append(failed("hypersurface.point_geometry", u, f"{type(e).__name__}: {str(e)}"))
            continue
        records += guarded("hypersurface.intrinsic", u, lambda: _intrinsic_checks(pg, tol))
        records += guarded("hypersurface.frame", u, lambda: _frame_checks(pg, tol))
        for r in range(1, chart.n + 1):
            records += guarded("hypersurface.walter", u, lambda: walter_residual(chart, u, r, tol.walter, pg))
        if chart.family == "sphere":
            expected = sphere_curvature(chart.c, chart.param("t"))
            records.append(check_residual(
                "hypersurface.geodesic_sphere", u, float(np.max(np.abs(pg.eigenvalues - expected))), 0.0,
                tol.geodesic_sphere
            ))
    records += _extra_checks(chart, config, tol)
    records += family_sweep(tol)
    caveats = [] if chart.complete else [rigidity.TRUNCATED_CAVEAT]
    return SuiteOutcome(records, caveats=caveats)

def _acceptance_charts() -> List[ImmersionChart]:
    return [make_chart(family, None, c, n) for family, c, n in ACCEPTANCE_FAMILIES]

def acceptance_sweep(
    tol: Tolerances,
    seed: int,
    points: int = ACCEPTANCE_POINTS,
    budget: int = WALTER_BUDGET,
    commutation_budget: int = COMMUTATION_BUDGET,
) -> SuiteOutcome:
    """
    Walter, conmutación e identidad del gradiente en puntos sembrados de las familias
    no umbílicas: elipsoide en R³ y R⁴, bump en S³ y H³.

    Cuenta por familia los puntos con base propia fiable (Walter evaluado para todo r) y
    los puntos con conmutación evaluada; si alguno queda por debajo de su presupuesto se
    añade un registro FAIL de conteo.

    Args:
        tol: Tolerancias efectivas
        seed: Semilla de los puntos
        points: Puntos muestreados por familia
        budget: Mínimo de puntos no degenerados por familia
        commutation_budget: Mínimo de puntos con conmutación evaluada por familia

    Returns:
        SuiteOutcome con los registros y los conteos en details["acceptance"]
    """
    rng = np.random.default_rng(seed)
    outcome = SuiteOutcome()
    counts: Dict[str, Dict[str, int]] = {}
    for chart in _acceptance_charts():
        label = f"{chart.tag} c={chart.c:g} n={chart.n}"
        evaluated = 0
        commuted = 0
        for u in _interior_points(chart, rng, points):
            try:
                pg = point_geometry(chart, u, 4, tol.eigen_gap)
            except NUMERIC_ERRORS as e:
                logger.error(f"Fallo de geometría en u={u} ({label}): {str(e)}")
                outcome.records.append(failed("hypersurface.point_geometry", u, f"{type(e).__name__}: {str(e)}"))
                continue
            frame = guarded("hypersurface.frame", u, lambda: _frame_checks(pg, tol))
            outcome.records += frame
            commuted += any(rec.check_id == "hypersurface.commutation" for rec in frame)
            if not pg.frame_reliable:
                outcome.records.append(skipped("hypersurface.walter", u, "skipped-degenerate"))
                continue
            evaluated += 1
            for r in range(1, chart.n + 1):
                outcome.records += guarded("hypersurface.walter", u, lambda: walter_residual(chart, u, r, tol.walter, pg))
        counts[label] = {"walter": evaluated, "commutation": commuted}
        logger.info(f"Aceptación en {label}: {evaluated} puntos no degenerados, {commuted} con conmutación")
        outcome.records.append(check_inequality(
            "hypersurface.acceptance_count", label, float(budget), float(evaluated), 0.0,
            note=f"puntos no degenerados de {points}"
        ))
        outcome.records.append(check_inequality(
            "hypersurface.acceptance_commutation_count", label, float(commutation_budget), float(commuted), 0.0,
            note=f"puntos con conmutación de {points}"
        ))
    outcome.details["acceptance"] = counts
    return outcome

# rigidez

def rigidity_suite(config: RunConfig, tol: Tolerances) -> SuiteOutcome:
    """Barrido de rigidez de la familia configurada, controles y escalado de la perturbación."""
    cfg = rigidity.ScanConfig.from_run(config)
    outcome = SuiteOutcome()
    try:
        scan = rigidity.scan_grid(cfg)
    except NUMERIC_ERRORS as e:
        logger.error(f"Barrido de rigidez fallido: {str(e)}")
        outcome.records.append(failed("rigidity.scan", config.family, f"{type(e).__name__}: {str(e)}"))
        return outcome
    outcome.records.extend(scan.records)
    details: Dict[str, Any] = {"family": scan.chart.tag, "c": scan.chart.c, "n": scan.chart.n, "r": cfg.r}

    try:
        elliptic = rigidity.elliptic_point_scan(cfg, scan)
        outcome.records.extend(elliptic.records)
        details["elliptic_point_found"] = elliptic.elliptic_point_found
        details["best_point"] = None if elliptic.best_point is None else [float(v) for v in elliptic.best_point]
        details["margin"] = elliptic.margin
        details["aggregates"] = elliptic.aggregates
        outcome.caveats = list(elliptic.caveats)
    except NUMERIC_ERRORS as e:
        outcome.records.append(failed("rigidity.elliptic_point", config.family, f"{type(e).__name__}: {str(e)}"))

    try:
        membership = rigidity.cone_membership_scan(cfg, scan)
        outcome.records.extend(membership.records)
        details["cone_members"] = {f"r{k}": int(v.sum()) for k, v in membership.membership.items()}
    except NUMERIC_ERRORS as e:
        outcome.records.append(failed("rigidity.cone_membership", config.family, f"{type(e).__name__}: {str(e)}"))

    outcome.records += guarded("rigidity.proof_chain", config.family, lambda: rigidity.proof_chain_check(cfg, scan))

    try:
        certificate = rigidity.umbilicity_certificate(cfg, scan)
        outcome.records.extend(certificate.records)
        details["verdict"] = certificate.verdict
    except NUMERIC_ERRORS as e:
        outcome.records.append(failed("rigidity.umbilicity", config.family, f"{type(e).__name__}: {str(e)}"))

    outcome.records += guarded("rigidity.controls", "controles", lambda: rigidity.umbilicity_controls(tol))

    try:
        scaling = rigidity.perturbation_scaling(cfg)
        outcome.records.extend(scaling.records)
        details["scaling"] = {"epsilons": list(scaling.epsilons), "metrics": scaling.metrics, "slopes": scaling.slopes}
    except NUMERIC_ERRORS as e:
        outcome.records.append(failed("rigidity.scaling", "bump", f"{type(e).__name__}: {str(e)}"))

    outcome.details["rigidity"] = details
    return outcome

SUITES: Dict[str, Callable[[RunConfig, Tolerances], SuiteOutcome]] = {
    "symfun": symfun_suite,
    "cones": cones_suite,
    "spaceform": spaceform_suite,
    "walter": walter_suite,
    "rigidity": rigidity_suite,
}

def run_suites(config: RunConfig) -> SuiteOutcome:
    """
    Ejecuta la suite seleccionada (o todas, en orden fijo) y reúne sus registros.

    Args:
        config: Configuración validada

    Returns:
        SuiteOutcome con todos los registros, detalles y advertencias
    """
    tol = config.effective_tolerances()
    selected = SUITE_ORDER if config.suite == "all" else (config.suite,)
    outcome = SuiteOutcome()
    for name in selected:
        counts: Dict[str, int] = {}
        with suite_timer(name, counts):
            part = SUITES[name](config, tol)
            counts.update(tally(part.records))
        outcome.merge(part)
    if config.suite == "all":
        counts = {}
        with suite_timer("acceptance", counts):
            part = acceptance_sweep(tol, config.seed)
            counts.update(tally(part.records))
        outcome.merge(part)
    if ("rigidity" in selected or "walter" in selected) and rigidity.GRID_CAVEAT not in outcome.caveats:
        outcome.caveats.insert(0, rigidity.GRID_CAVEAT)
    return outcome
