"""
Arnés de rigidez: búsqueda de un punto elíptico, pertenencia de λ al cono Γ_r,
desigualdad de concavidad sobre ∇h y certificado de umbilicidad sobre mallas de carta.

El paso de máximo de Omori-Yau se sustituye por una búsqueda exhaustiva sobre la malla
de la carta compacta; cada reporte lo indica en sus advertencias.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray
from scipy.special import comb

from hr_rigidity.charts import ImmersionChart, make_chart
from hr_rigidity.config import RunConfig, Tolerances
from hr_rigidity.cones import ROOT_TOLERANCE, membership_rows
from hr_rigidity.exceptions import HRBaseError, ValidationError
from hr_rigidity.hypersurface import PointGeometry, gradient_identity_residual, point_geometry
from hr_rigidity.records import (
    VerificationRecord,
    check_inequality,
    check_residual,
    failed,
    skipped,
)
from hr_rigidity.spaceform import alpha_c, distance, sphere_curvature
from hr_rigidity.symfun import elementary_rows, sigma_grad, sigma_hess, sigma_hess_or_zero
from hr_rigidity.validation import validate_finite_values, validate_order

logger = logging.getLogger("hr-rigidity")

MIN_GRID = 8
GRID_CAVEAT = (
    "supremo buscado por malla exhaustiva sobre la carta compacta en lugar del principio "
    "del máximo de Omori-Yau; la precisión depende de la resolución"
)
TRUNCATED_CAVEAT = "parche truncado de una superficie no compacta: sin afirmaciones sobre el comportamiento completo"
DEFAULT_EPSILONS = (1e-2, 1e-3, 1e-4)

RIGID = "RIGID"
NOT_RIGID = "NOT_RIGID"

@dataclass(frozen=True)
class ScanConfig:
    """
    Parámetros de un barrido de rigidez.

    Attributes:
        family: Familia de cartas
        params: Parámetros de la familia
        c: Curvatura del espacio ambiente
        n: Dimensión (None para la de la familia)
        r: Orden de la curvatura media objetivo
        grid: Resoluciones por eje (>= 8)
        tolerances: Tolerancias efectivas
        seed: Semilla (reservada para submuestreos)
    """
    family: str = "sphere"
    params: Tuple[Tuple[str, float], ...] = ()
    c: float = 0.0
    n: Optional[int] = None
    r: int = 2
    grid: Tuple[int, ...] = (16,)
    tolerances: Tolerances = field(default_factory=Tolerances)
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.grid or any(res < MIN_GRID for res in self.grid):
            raise ValidationError(f"Resolución de malla inválida {self.grid}; el mínimo por eje es {MIN_GRID}")
        if self.r < 1:
            raise ValidationError(f"r debe ser al menos 1, se recibió {self.r}")

    @classmethod
    def from_run(cls, config: RunConfig) -> "ScanConfig":
        return cls(
            family=config.family,
            params=tuple(sorted(config.params.items())),
            c=config.c,
            n=config.n,
            r=config.r,
            grid=tuple(config.grid),
            tolerances=config.effective_tolerances(),
            seed=config.seed,
        )

    def chart(self) -> ImmersionChart:
        return make_chart(self.family, dict(self.params), self.c, self.n)

@dataclass(frozen=True)
class PointSample:
    """Datos de un punto de malla: curvaturas, H_r y la geometría completa."""
    u: NDArray[np.float64]
    lam: NDArray[np.float64]
    H: NDArray[np.float64]
    deficit: float
    frame_status: str
    radius: float
    geometry: PointGeometry

@dataclass
class GridScan:
    """Resultado de evaluar la geometría en todos los puntos de la malla."""
    chart: ImmersionChart
    samples: List[PointSample]
    records: List[VerificationRecord]

@dataclass
class RigidityReport:
    """
    Reporte de rigidez de una familia.

    Los agregados se recalculan con `aggregates_from` a partir de los puntos, de modo que
    el reporte es autoconsistente.
    """
    family: str
    c: float
    n: int
    r: int
    records: List[VerificationRecord] = field(default_factory=list)
    samples: List[PointSample] = field(default_factory=list)
    aggregates: Dict[str, float] = field(default_factory=dict)
    elliptic_point_found: bool = False
    best_point: Optional[NDArray[np.float64]] = None
    margin: float = float("nan")
    membership: Dict[int, NDArray[np.bool_]] = field(default_factory=dict)
    verdict: Optional[str] = None
    caveats: List[str] = field(default_factory=list)

def aggregates_from(samples: Sequence[PointSample], r: int) -> Dict[str, float]:
    """
    Agregados del reporte: mínimo de λ_1, dispersión y rango de H y de H_r, máximo déficit.
    """
    if not samples:
        return {}
    lam_min = np.array([s.lam[0] for s in samples])
    mean = np.array([s.H[1] for s in samples])
    target = np.array([s.H[r] for s in samples])
    deficits = np.array([s.deficit for s in samples])
    return {
        "min_lambda": float(lam_min.min()),
        "H_std": float(mean.std()),
        "H_range": float(np.ptp(mean)),
        "Hr_std": float(target.std()),
        "Hr_range": float(np.ptp(target)),
        "max_deficit": float(deficits.max()),
        "max_radius": float(max(s.radius for s in samples)),
    }

def scan_grid(cfg: ScanConfig, orders: int = 3) -> GridScan:
    """
    Evalúa la geometría en los centros de celda de la malla de la carta.

    Los fallos numéricos de un punto producen un registro FAIL y el barrido continúa.

    Args:
        cfg: Configuración del barrido
        orders: Orden de jets de la geometría (3 basta para ∇h y e_k(H_r))

    Returns:
        GridScan con los puntos evaluados y los registros de fallos
    """
    chart = cfg.chart()
    validate_order(cfg.r, 1, chart.n)
    center = chart.center
    points = chart.grid(cfg.grid)
    samples: List[PointSample] = []
    records: List[VerificationRecord] = []
    logger.info(f"Barrido de {chart.tag} (c={chart.c}, n={chart.n}): {len(points)} puntos")

    for u in points:
        try:
            pg = point_geometry(chart, u, orders, cfg.tolerances.eigen_gap)
            radius = float(distance(chart.c, pg.position, center))
        except HRBaseError as e:
            logger.warning(f"Punto u={u} de {chart.tag} no evaluable: {str(e)}")
            records.append(failed("rigidity.grid_point", u, f"{type(e).__name__}: {str(e)}"))
            continue
        samples.append(PointSample(
            u=u,
            lam=pg.eigenvalues,
            H=pg.H,
            deficit=pg.umbilicity_deficit,
            frame_status=pg.frame_status,
            radius=radius,
            geometry=pg,
        ))
    return GridScan(chart, samples, records)

def _report(cfg: ScanConfig, scan: GridScan, owned: bool) -> RigidityReport:
    """Reporte base; los fallos del barrido se copian solo si el barrido se calculó aquí."""
    chart = scan.chart
    caveats = [GRID_CAVEAT]
    if not chart.complete:
        caveats.append(TRUNCATED_CAVEAT)
    return RigidityReport(
        family=chart.family,
        c=chart.c,
        n=chart.n,
        r=cfg.r,
        records=list(scan.records) if owned else [],
        samples=scan.samples,
        aggregates=aggregates_from(scan.samples, cfg.r),
        caveats=caveats,
    )

def _ball_record(chart: ImmersionChart, samples: Sequence[PointSample]) -> VerificationRecord:
    """Hipótesis de acotación: imagen finita (c <= 0) o dentro de la bola de radio π/(2√c)."""
    radius = max(s.radius for s in samples)
    if chart.c <= 0:
        if not math.isfinite(radius):
            raise ValidationError(f"La familia {chart.tag} no es acotada en el modelo de curvatura {chart.c}")
        return check_residual(
            "rigidity.bounded", chart.tag, radius, radius, 0.0, residual=0.0, note=f"imagen acotada, radio máximo {radius:.6g}"
        )
    limit = math.pi / (2 * math.sqrt(chart.c))
    if radius >= limit:
        logger.warning(f"{chart.tag} sale de la bola de radio {limit:.6g} (radio máximo {radius:.6g})")
        return skipped("rigidity.bounded", chart.tag, f"fuera de la bola: radio={radius:.6g} >= {limit:.6g}")
    return check_inequality("rigidity.bounded", chart.tag, radius, limit, 0.0, note="dentro de la bola π/(2√c)")

def elliptic_point_scan(cfg: ScanConfig, scan: Optional[GridScan] = None) -> RigidityReport:
    """
    Busca en la malla un punto con λ_1 > α_c y comprueba las positividades que usa la
    conclusión de umbilicidad en el mejor punto.

    Args:
        cfg: Configuración del barrido
        scan: Barrido ya calculado, si se tiene

    Returns:
        RigidityReport con el mejor punto, su margen y los registros

    Raises:
        ValidationError: Si la familia no es acotada para c <= 0
    """
    owned = scan is None
    scan = scan or scan_grid(cfg)
    report = _report(cfg, scan, owned)
    chart = scan.chart
    if not scan.samples:
        report.records.append(failed("rigidity.elliptic_point", chart.tag, "ningún punto evaluable"))
        return report

    tol = cfg.tolerances
    alpha = alpha_c(chart.c)
    report.records.append(_ball_record(chart, scan.samples))

    margins = np.array([s.lam[0] - alpha for s in scan.samples])
    best = int(np.argmax(margins))
    sample = scan.samples[best]
    report.best_point = sample.u
    report.margin = float(margins[best])
    threshold = tol.elliptic_margin * (1.0 + abs(float(sample.lam[0])))
    report.elliptic_point_found = bool(report.margin > threshold)
    logger.info(
        f"Punto elíptico en {chart.tag}: encontrado={report.elliptic_point_found}, margen={report.margin:.6g}"
    )

    note = f"margen={report.margin:.6g}, encontrado={report.elliptic_point_found}"
    if chart.convex:
        report.records.append(check_inequality("rigidity.elliptic_point", sample.u, alpha + threshold, sample.lam[0], 0.0, note=note))
    elif report.elliptic_point_found:
        report.records.append(check_inequality("rigidity.elliptic_point", sample.u, alpha, sample.lam[0], 0.0, note=note))
    else:
        report.records.append(skipped("rigidity.elliptic_point", sample.u, f"sin punto elíptico en la malla; {note}"))

    if chart.family == "sphere":
        expected = sphere_curvature(chart.c, chart.param("t")) - alpha
        report.records.append(check_residual(
            "rigidity.elliptic_margin", sample.u, report.margin, expected, tol.geodesic_sphere,
            note="margen frente a μ_c(t) - α_c"
        ))

    if report.elliptic_point_found:
        pg = sample.geometry
        off = ~np.eye(chart.n, dtype=bool)
        report.records.append(check_inequality(
            "rigidity.sectional_positive", sample.u, chart.c + alpha * alpha, float(pg.K[off].min()), 0.0,
            note="min K_ij frente a c + α_c²"
        ))
        if cfg.r >= 2:
            hess = sigma_hess(cfg.r, sample.lam)
            report.records.append(check_inequality(
                "rigidity.sigma_hess_positive", sample.u, 0.0, float(hess[off].min()), 0.0,
                note=f"min ∂²σ_{cfg.r}/∂x_i∂x_j (i ≠ j)"
            ))
    return report

def cone_membership_scan(cfg: ScanConfig, scan: Optional[GridScan] = None) -> RigidityReport:
    """
    Clasifica λ de cada punto de la malla por pertenencia a Γ_k, k = 1..n.

    Los puntos con todas las curvaturas positivas deben pertenecer a todos los conos;
    el resto se cuenta. La prueba por raíces se contrasta con el criterio σ_1..σ_k > 0.
    """
    owned = scan is None
    scan = scan or scan_grid(cfg)
    report = _report(cfg, scan, owned)
    chart = scan.chart
    if not scan.samples:
        return report

    rows = np.array([s.lam for s in scan.samples])
    sigmas = elementary_rows(rows)
    scale = 1.0 + np.max(np.abs(rows), axis=1)
    tol = cfg.tolerances
    positive = np.all(rows > tol.root_boundary * scale[:, None], axis=1)

    for k in range(1, chart.n + 1):
        in_cone, _, on_boundary, _ = membership_rows(k, rows, tol.root_boundary)
        report.membership[k] = in_cone
        for index in np.flatnonzero(positive & ~in_cone):
            report.records.append(failed(
                "rigidity.cone_membership", scan.samples[index].u,
                f"λ positivo fuera de Γ_{k}: λ={np.array2string(rows[index], precision=6)}"
            ))

        oracle = np.all(sigmas[:, 1: k + 1] > ROOT_TOLERANCE * scale[:, None] ** np.arange(1, k + 1), axis=1)
        decided = ~on_boundary
        mismatches = np.flatnonzero(decided & (oracle != in_cone))
        for index in mismatches:
            report.records.append(failed(
                "rigidity.cone_oracle", scan.samples[index].u,
                f"Γ_{k}: raíces={bool(in_cone[index])}, σ_1..σ_{k} > 0={bool(oracle[index])}"
            ))

        members = int(in_cone.sum())
        report.records.append(check_residual(
            f"rigidity.cone_census.r{k}", chart.tag, members, len(rows), 0.0, residual=0.0,
            note=f"miembros={members}, no miembros={len(rows) - members}, frontera={int(on_boundary.sum())}"
        ))
        if positive.all():
            report.records.append(check_residual(
                "rigidity.cone_membership", chart.tag, members, len(rows), 0.0,
                note=f"todas las curvaturas positivas: Γ_{k} en toda la malla"
            ))
    return report

def proof_chain_check(cfg: ScanConfig, scan: Optional[GridScan] = None) -> List[VerificationRecord]:
    """
    Desigualdad de concavidad sobre y_i = h_iik en cada punto de Γ_r y cada dirección k:

        C(n, r) H_r Σ_{i,j} h_iik h_jjk ∂²σ_r/∂x_i∂x_j(λ) <= ((r - 1)/r)(Σ_j h_jjk ∂σ_r/∂x_j(λ))²

    Se registra la peor dirección de cada punto junto con la identidad del gradiente
    Σ_j h_jjk ∂σ_r/∂x_j = C(n, r) e_k(H_r). Los puntos fuera de Γ_r o con base propia
    degenerada se cuentan en registros SKIPPED.
    """
    scan = scan or scan_grid(cfg)
    chart = scan.chart
    r, n = cfg.r, chart.n
    tol = cfg.tolerances
    records: List[VerificationRecord] = []
    if not scan.samples:
        return [failed("rigidity.proof_chain", chart.tag, "ningún punto evaluable")]

    binomial = float(comb(n, r, exact=True))
    rows = np.array([s.lam for s in scan.samples])
    in_cone = membership_rows(r, rows, tol.root_boundary)[0]
    outside = 0
    degenerate = 0

    for sample, member in zip(scan.samples, in_cone):
        if not member:
            outside += 1
            continue
        pg = sample.geometry
        if not pg.frame_reliable:
            degenerate += 1
            continue
        grad = sigma_grad(r, sample.lam)
        hess = sigma_hess_or_zero(r, sample.lam)
        diagonal = np.einsum("jjk->jk", pg.nabla_h)
        lhs = binomial * float(sample.H[r]) * np.einsum("ik,jk,ij->k", diagonal, diagonal, hess)
        inner = diagonal.T @ grad
        rhs = (r - 1) / r * inner ** 2
        k = int(np.argmax(lhs - rhs))
        slack = tol.proof_chain * (1.0 + abs(float(lhs[k])) + abs(float(rhs[k])))
        records.append(check_inequality("rigidity.proof_chain", sample.u, lhs[k], rhs[k], slack, note=f"k={k}"))

        expected = binomial * pg.H_gradient[r]
        gaps = np.array([gradient_identity_residual(pg, r, j) for j in range(n)])
        bounds = tol.gradient * (1.0 + np.abs(expected))
        j = int(np.argmax(np.abs(gaps) / bounds))
        records.append(check_residual(
            "rigidity.gradient_identity", sample.u, inner[j], expected[j], bounds[j], residual=gaps[j], note=f"k={j}"
        ))

    if outside:
        logger.info(f"Cadena de prueba en {chart.tag}: {outside} puntos fuera de Γ_{r}")
        records.append(skipped("rigidity.proof_chain", chart.tag, f"fuera de Γ_{r}: {outside} puntos"))
    if degenerate:
        records.append(skipped("rigidity.proof_chain", chart.tag, f"skipped-degenerate: {degenerate} puntos"))
    return records

def _expected_rigid(chart: ImmersionChart) -> bool:
    if chart.family == "sphere":
        return True
    return chart.family == "bump" and chart.param("eps") == 0.0

def umbilicity_certificate(cfg: ScanConfig, scan: Optional[GridScan] = None) -> RigidityReport:
    """
    Certificado de umbilicidad: déficit λ_n - λ_1 máximo en la malla, rangos de H y H_r
    y veredicto RIGID si el déficit no supera la tolerancia de umbilicidad.

    Incluye la comprobación de coherencia con el teorema: una familia acotada con H y
    H_r constantes en la malla debe ser umbílica.

    Raises:
        DomainError: Si r está fuera de 2..n
    """
    owned = scan is None
    scan = scan or scan_grid(cfg)
    chart = scan.chart
    validate_order(cfg.r, 2, chart.n)
    report = _report(cfg, scan, owned)
    if not scan.samples:
        report.records.append(failed("rigidity.umbilicity", chart.tag, "ningún punto evaluable"))
        return report

    tol = cfg.tolerances
    agg = report.aggregates
    max_deficit = agg["max_deficit"]
    report.verdict = RIGID if max_deficit <= tol.umbilicity else NOT_RIGID
    logger.info(
        f"Umbilicidad en {chart.tag}: déficit máximo={max_deficit:.3g}, "
        f"rango H={agg['H_range']:.3g}, rango H_{cfg.r}={agg['Hr_range']:.3g}, veredicto={report.verdict}"
    )

    note = f"veredicto={report.verdict}, rango H={agg['H_range']:.3g}, rango H_{cfg.r}={agg['Hr_range']:.3g}"
    if _expected_rigid(chart):
        report.records.append(check_residual("rigidity.umbilicity", chart.tag, max_deficit, 0.0, tol.umbilicity, note=note))
    else:
        # informativo: el déficit se registra sin cota
        report.records.append(check_residual(
            "rigidity.umbilicity", chart.tag, max_deficit, max_deficit, tol.umbilicity, residual=0.0,
            note=f"informativo, déficit={max_deficit:.3g}; {note}"
        ))

    bounded = chart.complete and (chart.c <= 0 or agg["max_radius"] < math.pi / (2 * math.sqrt(chart.c)))
    constant = agg["H_range"] <= tol.constancy and agg["Hr_range"] <= tol.constancy
    if bounded and constant:
        report.records.append(check_inequality(
            "rigidity.theorem_consistency", chart.tag, max_deficit, tol.theorem_deficit, 0.0,
            note=f"H y H_{cfg.r} constantes en la malla"
        ))
    else:
        report.records.append(skipped(
            "rigidity.theorem_consistency", chart.tag,
            f"hipótesis no satisfechas: acotada={bounded}, rango H={agg['H_range']:.3g}, rango H_{cfg.r}={agg['Hr_range']:.3g}"
        ))
    return report

def umbilicity_controls(tolerances: Tolerances, grid: Tuple[int, ...] = (MIN_GRID,), r: int = 2) -> List[VerificationRecord]:
    """
    Controles del certificado: esferas geodésicas en los tres modelos (RIGID, H y H_r
    constantes) y el elipsoide de semiejes (1, 1, 1.2), cuyo H no es constante.
    """
    records: List[VerificationRecord] = []
    for c in (-1.0, 0.0, 1.0):
        cfg = ScanConfig("sphere", (("t", 1.0),), c, None, r, grid, tolerances)
        scan = scan_grid(cfg)
        records.extend(scan.records)
        if not scan.samples:
            records.append(failed("rigidity.positive_control", f"sphere c={c:g}", "ningún punto evaluable"))
            continue
        agg = aggregates_from(scan.samples, r)
        records.append(check_residual(
            "rigidity.positive_control", f"sphere c={c:g}", agg["max_deficit"], 0.0, tolerances.umbilicity,
            note="déficit de umbilicidad"
        ))
        records.append(check_residual(
            "rigidity.positive_control_constancy", f"sphere c={c:g}", max(agg["H_range"], agg["Hr_range"]), 0.0,
            tolerances.constancy, note=f"máximo de rango H y rango H_{r}"
        ))

    cfg = ScanConfig("ellipsoid", (("a", 1.0), ("b", 1.0), ("c", 1.2)), 0.0, 2, r, grid, tolerances)
    scan = scan_grid(cfg)
    records.extend(scan.records)
    if scan.samples:
        agg = aggregates_from(scan.samples, r)
        records.append(check_inequality(
            "rigidity.negative_control", scan.chart.tag, tolerances.negative_control, agg["H_range"], 0.0,
            note="rango H del elipsoide"
        ))
    else:
        records.append(failed("rigidity.negative_control", "ellipsoid", "ningún punto evaluable"))
    return records

@dataclass
class ScalingResult:
    """Déficit, rango de H y rango de H_2 de la familia bump para cada ε, con sus pendientes log-log."""
    epsilons: Tuple[float, ...]
    metrics: Dict[str, List[float]]
    slopes: Dict[str, float]
    records: List[VerificationRecord]

def perturbation_scaling(cfg: ScanConfig, epsilons: Sequence[float] = DEFAULT_EPSILONS) -> ScalingResult:
    """
    Escalado de la familia bump con la amplitud ε: déficit, rango(H) y rango(H_2) deben
    tender a 0 con pendiente log-log cercana a 1.

    Args:
        cfg: Configuración base (c, n, malla, tolerancias; parámetros si la familia es bump)
        epsilons: Amplitudes, al menos dos

    Returns:
        ScalingResult con métricas, pendientes y registros
    """
    validate_finite_values(epsilons, "epsilons")
    if len(epsilons) < 2 or any(eps <= 0 for eps in epsilons):
        raise ValidationError(f"Se necesitan al menos dos amplitudes positivas, se recibió {list(epsilons)}")
    tol = cfg.tolerances
    base = dict(cfg.params) if cfg.family == "bump" else {}
    n = cfg.n if cfg.n in (2, 3) else None
    grid = (min(cfg.grid),)
    metrics: Dict[str, List[float]] = {"deficit": [], "H_range": [], "H2_range": []}
    records: List[VerificationRecord] = []

    for eps in epsilons:
        params = dict(base)
        params["eps"] = float(eps)
        scan_cfg = replace(cfg, family="bump", params=tuple(sorted(params.items())), n=n, r=2, grid=grid)
        scan = scan_grid(scan_cfg)
        records.extend(scan.records)
        agg = aggregates_from(scan.samples, 2)
        if not agg:
            records.append(failed("rigidity.scaling", f"eps={eps:g}", "ningún punto evaluable"))
            return ScalingResult(tuple(epsilons), metrics, {}, records)
        metrics["deficit"].append(agg["max_deficit"])
        metrics["H_range"].append(agg["H_range"])
        metrics["H2_range"].append(agg["Hr_range"])
        records.append(check_inequality(
            "rigidity.perturbation_not_rigid", f"eps={eps:g}", tol.umbilicity, agg["max_deficit"], 0.0,
            note="la perturbación no es umbílica"
        ))

    slopes: Dict[str, float] = {}
    logs = np.log(np.asarray(epsilons, dtype=np.float64))
    for name, values in metrics.items():
        data = np.asarray(values)
        if np.any(data <= 0):
            records.append(failed(f"rigidity.scaling.{name}", "bump", f"valores no positivos: {values}"))
            continue
        slopes[name] = float(np.polyfit(logs, np.log(data), 1)[0])
        records.append(check_residual(
            f"rigidity.scaling.{name}", "bump", slopes[name], 1.0, tol.slope, note="pendiente log-log"
        ))
    return ScalingResult(tuple(epsilons), metrics, slopes, records)
