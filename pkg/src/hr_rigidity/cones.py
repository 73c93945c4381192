"""
Conos de Gårding de σ_r con dirección de hiperbolicidad a = (1, ..., 1).

La pertenencia a Γ_r se decide por el signo de las raíces de s ↦ σ_r(s·a + x): todas
reales y estrictamente negativas. La caracterización σ_1, ..., σ_r > 0 solo se usa como
oráculo de contraste. Los puntos con una raíz a menos de 1e-10·(1 + max|x_i|) de cero
se marcan como frontera y no participan en las desigualdades.
"""

import logging
from dataclasses import dataclass
from typing import Any, List, Tuple

import numpy as np
from numpy.typing import NDArray

from hr_rigidity.exceptions import ConeError
from hr_rigidity.oracles import central_hessian
from hr_rigidity.records import VerificationRecord, check_inequality, check_residual
from hr_rigidity.symfun import (
    elementary_rows,
    grad_rows,
    hess_rows,
    shifted_rows,
    shifted_sigma_coefficients,
)
from hr_rigidity.validation import validate_lambda_vec, validate_order

logger = logging.getLogger("hr-rigidity")

ROOT_TOLERANCE = 1e-10
HYPERBOLICITY_TOLERANCE = 1e-8
EPS = float(np.finfo(np.float64).eps)

@dataclass(frozen=True)
class ConeReport:
    """Resultado de una consulta de pertenencia a Γ_r."""
    r: int
    point: NDArray[np.float64]
    roots: NDArray[np.complex128]
    in_cone: bool
    max_imag: float
    on_boundary: bool

@dataclass(frozen=True)
class ConcavityProbe:
    """Hessiana de W_r = σ_r^{1/r} en un punto de Γ_r."""
    r: int
    point: NDArray[np.float64]
    hessian: NDArray[np.float64]
    max_eigenvalue: float

    @property
    def scale(self) -> float:
        norm = float(np.linalg.norm(self.hessian))
        return norm if norm > 0 else 1.0

def _companion_roots(coeffs: NDArray[np.float64]) -> NDArray[np.complex128]:
    """Raíces de polinomios (N, r + 1) en potencias descendentes por autovalores de la matriz compañera."""
    count, size = coeffs.shape
    degree = size - 1
    monic = coeffs[:, 1:] / coeffs[:, :1]
    companion = np.zeros((count, degree, degree))
    companion[:, 0, :] = -monic
    if degree > 1:
        companion[:, np.arange(1, degree), np.arange(degree - 1)] = 1.0
    return np.linalg.eigvals(companion)

def imag_tolerance(r: int) -> float:
    """
    Cota de parte imaginaria para la pertenencia.

    Una raíz de multiplicidad m solo se resuelve con precisión O(ε^{1/m}) a partir de la
    matriz compañera, y en la dirección a misma la raíz -1 tiene multiplicidad r.
    """
    return max(HYPERBOLICITY_TOLERANCE, 10.0 * EPS ** (1.0 / r))

def membership_rows(
    r: int,
    rows: NDArray[np.float64],
    root_tol: float = ROOT_TOLERANCE
) -> Tuple[NDArray[np.bool_], NDArray[np.float64], NDArray[np.bool_], NDArray[np.complex128]]:
    """
    Pertenencia a Γ_r para un lote de puntos.

    Returns:
        (in_cone, max_imag, on_boundary, roots) por fila
    """
    roots = _companion_roots(shifted_rows(r, rows))
    scale = 1.0 + np.max(np.abs(rows), axis=1)
    max_imag = np.max(np.abs(roots.imag), axis=1)
    real = roots.real
    on_boundary = np.any(np.abs(real) <= root_tol * scale[:, None], axis=1)
    in_cone = (max_imag <= imag_tolerance(r) * scale) & np.all(real < -root_tol * scale[:, None], axis=1)
    return in_cone, max_imag, on_boundary, roots

def roots_along(r: int, x: Any) -> NDArray[np.complex128]:
    """
    Raíces del polinomio de grado r s ↦ σ_r(s·a + x).

    Los coeficientes salen de σ_r(x + s·a) = Σ_j C(n-j, r-j) σ_j(x) s^{r-j} y las raíces
    de los autovalores de la matriz compañera.

    Raises:
        DomainError: Si r está fuera de 1..n
    """
    vec = validate_lambda_vec(x)
    validate_order(r, 1, vec.shape[0])
    return np.roots(shifted_sigma_coefficients(r, vec))

def in_garding_cone(r: int, x: Any, root_tol: float = ROOT_TOLERANCE) -> ConeReport:
    """
    Decide si x ∈ Γ_r por el signo de las raíces de s ↦ σ_r(s·a + x).

    Args:
        r: Orden en 1..n
        x: Punto de R^n
        root_tol: Tolerancia relativa de frontera

    Returns:
        ConeReport con raíces, veredicto, parte imaginaria máxima y marca de frontera
    """
    vec = validate_lambda_vec(x)
    n = vec.shape[0]
    validate_order(r, 1, n)
    roots = roots_along(r, vec)
    scale = 1.0 + float(np.max(np.abs(vec)))
    max_imag = float(np.max(np.abs(roots.imag))) if roots.size else 0.0
    on_boundary = bool(np.any(np.abs(roots.real) <= root_tol * scale))
    in_cone = bool(max_imag <= imag_tolerance(r) * scale and np.all(roots.real < -root_tol * scale))
    logger.debug(f"Γ_{r}: x={vec}, raíces={roots}, pertenece={in_cone}")
    return ConeReport(r=r, point=vec, roots=roots, in_cone=in_cone, max_imag=max_imag, on_boundary=on_boundary)

def _require_in_cone(r: int, x: Any, label: str) -> None:
    report = in_garding_cone(r, x)
    if not report.in_cone or report.on_boundary:
        raise ConeError(f"{label} = {report.point} no pertenece al interior de Γ_{r}")

def garding_gap(r: int, x: Any, y: Any) -> float:
    """
    Holgura de la desigualdad de Gårding para P = σ_r, m = r.

    (1/r) Σ_k y_k ∂σ_r/∂x_k(x) - σ_r(y)^{1/r} σ_r(x)^{1-1/r}

    Raises:
        ConeError: Si x o y no pertenecen a Γ_r
    """
    vec_x = validate_lambda_vec(x)
    vec_y = validate_lambda_vec(y)
    _require_in_cone(r, vec_x, "x")
    _require_in_cone(r, vec_y, "y")
    lhs, rhs = _garding_sides(r, vec_x[None, :], vec_y[None, :])
    return float(lhs[0] - rhs[0])

def _garding_sides(r: int, xs: NDArray[np.float64], ys: NDArray[np.float64]) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    lhs = np.sum(ys * grad_rows(r, xs), axis=1) / r
    sx = elementary_rows(xs)[:, r]
    sy = elementary_rows(ys)[:, r]
    rhs = sy ** (1.0 / r) * sx ** (1.0 - 1.0 / r)
    return lhs, rhs

def _wr_hessian_rows(r: int, rows: NDArray[np.float64]) -> NDArray[np.float64]:
    s = elementary_rows(rows)[:, r]
    grad = grad_rows(r, rows)
    hess = hess_rows(r, rows) if r >= 2 else np.zeros((rows.shape[0], rows.shape[1], rows.shape[1]))
    outer = grad[:, :, None] * grad[:, None, :]
    inner = ((1.0 - r) / r) * outer + s[:, None, None] * hess
    return (s ** (1.0 / r - 2.0) / r)[:, None, None] * inner

def wr_hessian(r: int, x: Any) -> ConcavityProbe:
    """
    Hessiana de W_r = σ_r^{1/r} por la fórmula cerrada.

    ∂²W_r/∂x_i∂x_j = (1/r) σ_r^{1/r-2} (((1-r)/r) ∂_iσ_r ∂_jσ_r + σ_r ∂²_{ij}σ_r)

    Raises:
        ConeError: Si x no pertenece a Γ_r
    """
    vec = validate_lambda_vec(x)
    _require_in_cone(r, vec, "x")
    hessian = _wr_hessian_rows(r, vec[None, :])[0]
    hessian = 0.5 * (hessian + hessian.T)
    max_eig = float(np.max(np.linalg.eigvalsh(hessian)))
    return ConcavityProbe(r=r, point=vec, hessian=hessian, max_eigenvalue=max_eig)

def quadratic_form_bound(r: int, x: Any, y: Any) -> Tuple[float, float]:
    """
    Ambos lados de σ_r(x) Σ y_i y_j ∂²σ_r(x) <= ((r-1)/r)(Σ_j y_j ∂_jσ_r(x))².

    Raises:
        ConeError: Si x no pertenece a Γ_r
    """
    vec_x = validate_lambda_vec(x)
    vec_y = validate_lambda_vec(y)
    _require_in_cone(r, vec_x, "x")
    lhs, rhs = _quadratic_sides(r, vec_x[None, :], vec_y[None, :])
    return float(lhs[0]), float(rhs[0])

def _quadratic_sides(r: int, xs: NDArray[np.float64], ys: NDArray[np.float64]) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    s = elementary_rows(xs)[:, r]
    if r >= 2:
        quad = np.einsum("ni,nij,nj->n", ys, hess_rows(r, xs), ys)
    else:
        quad = np.zeros(xs.shape[0])
    lin = np.sum(ys * grad_rows(r, xs), axis=1)
    return s * quad, ((r - 1.0) / r) * lin * lin

# Conductores de muestreo

def sample_cone_points(r: int, n: int, count: int, rng: np.random.Generator) -> NDArray[np.float64]:
    """
    Muestra puntos interiores de Γ_r.

    La mitad del presupuesto son vectores positivos (Γ_n ⊂ Γ_r); la otra mitad son
    gaussianas filtradas por la prueba de raíces, para cubrir Γ_r fuera del ortante.
    """
    positive_count = count // 2
    positive = rng.uniform(0.05, 2.0, size=(positive_count, n))
    needed = count - positive_count
    accepted: List[NDArray[np.float64]] = []
    total = 0
    attempts = 0
    while total < needed and attempts < 200:
        batch = rng.normal(0.3, 1.0, size=(max(4 * needed, 64), n))
        inside, _, boundary, _ = membership_rows(r, batch)
        chosen = batch[inside & ~boundary]
        accepted.append(chosen)
        total += chosen.shape[0]
        attempts += 1
    if total < needed:
        logger.warning(f"Muestreo gaussiano de Γ_{r} (n={n}) insuficiente; se completa con el ortante positivo")
        accepted.append(rng.uniform(0.05, 2.0, size=(needed - total, n)))
    general = np.concatenate(accepted, axis=0)[:needed]
    return np.concatenate([positive, general], axis=0)

def hyperbolicity_check(samples: int, n_max: int, seed: int, tol: float = HYPERBOLICITY_TOLERANCE) -> List[VerificationRecord]:
    """Parte imaginaria máxima (escalada) de las raíces sobre puntos aleatorios de R^n, todo r."""
    rng = np.random.default_rng(seed)
    records = []
    for n in range(2, n_max + 1):
        rows = rng.normal(0.0, 2.0, size=(samples, n))
        scale = 1.0 + np.max(np.abs(rows), axis=1)
        worst = 0.0
        for r in range(1, n + 1):
            _, max_imag, _, _ = membership_rows(r, rows)
            worst = max(worst, float(np.max(max_imag / scale)))
        records.append(check_inequality("cones.hyperbolicity", f"n={n}, muestras={samples}", worst, 0.0, tol))
    return records

def membership_equivalence_check(samples: int, n_max: int, seed: int) -> List[VerificationRecord]:
    """
    Contrasta la prueba de raíces con el oráculo σ_1, ..., σ_r > 0.

    Las discrepancias se informan como FAIL; los puntos de frontera se excluyen.
    """
    rng = np.random.default_rng(seed)
    records = []
    for n in range(2, n_max + 1):
        rows = rng.normal(0.3, 1.0, size=(samples, n))
        table = elementary_rows(rows)
        for r in range(1, n + 1):
            inside, _, boundary, _ = membership_rows(r, rows)
            oracle = np.all(table[:, 1: r + 1] > 0, axis=1)
            mismatch = (inside != oracle) & ~boundary
            records.append(check_residual(
                "cones.membership_equivalence", f"n={n}, r={r}, muestras={samples}",
                float(np.count_nonzero(mismatch)), 0.0, 0.0,
                note=f"frontera={int(np.count_nonzero(boundary))}"
            ))
    return records

def cone_nesting_check(samples: int, n: int, seed: int) -> List[VerificationRecord]:
    """Comprueba Γ_1 ⊃ Γ_2 ⊃ ... ⊃ Γ_n: todo punto de Γ_{r+1} está en Γ_k para k <= r."""
    rng = np.random.default_rng(seed)
    half = samples // 2
    rows = np.concatenate([
        rng.normal(0.8, 1.0, size=(half, n)),
        rng.normal(0.0, 1.0, size=(samples - half, n)),
    ])
    member = np.zeros((samples, n), dtype=bool)
    boundary = np.zeros(samples, dtype=bool)
    for r in range(1, n + 1):
        inside, _, on_boundary, _ = membership_rows(r, rows)
        member[:, r - 1] = inside
        boundary |= on_boundary
    violations = 0
    for r in range(2, n + 1):
        deeper = member[:, r - 1] & ~boundary
        violations += int(np.count_nonzero(deeper & ~np.all(member[:, : r - 1], axis=1)))
    return [check_residual(
        "cones.nesting", f"n={n}, muestras={samples}", float(violations), 0.0, 0.0,
        note=f"en Γ_n={int(np.count_nonzero(member[:, n - 1]))}"
    )]

def midpoint_convexity_check(samples: int, n: int, seed: int) -> List[VerificationRecord]:
    """Para x, y ∈ Γ_r el punto medio está en Γ_r (cono convexo)."""
    rng = np.random.default_rng(seed)
    records = []
    for r in range(1, n + 1):
        xs = sample_cone_points(r, n, samples, rng)
        ys = sample_cone_points(r, n, samples, rng)
        ys = ys[rng.permutation(samples)]
        inside, _, boundary, _ = membership_rows(r, 0.5 * (xs + ys))
        violations = int(np.count_nonzero(~inside & ~boundary))
        records.append(check_residual(
            "cones.midpoint_convexity", f"n={n}, r={r}, pares={samples}", float(violations), 0.0, 0.0
        ))
    return records

def garding_check(samples: int, n_max: int, seed: int, tol: float = 1e-10, equality_tol: float = 1e-12) -> List[VerificationRecord]:
    """Desigualdad de Gårding sobre pares de Γ_r e igualdad en y = x, para cada (n, r)."""
    rng = np.random.default_rng(seed)
    records = []
    for n in range(2, n_max + 1):
        for r in range(1, n + 1):
            xs = sample_cone_points(r, n, samples, rng)
            ys = sample_cone_points(r, n, samples, rng)[rng.permutation(samples)]
            lhs, rhs = _garding_sides(r, xs, ys)
            scaled = np.max((rhs - lhs) / np.maximum(1.0, np.abs(rhs)))
            location = f"n={n}, r={r}, pares={samples}"
            records.append(check_inequality("cones.garding", location, float(scaled), 0.0, tol))
            lhs_eq, rhs_eq = _garding_sides(r, xs, xs)
            equality = np.max(np.abs(lhs_eq - rhs_eq) / np.maximum(1.0, np.abs(rhs_eq)))
            records.append(check_residual("cones.garding_equality", location, float(equality), 0.0, equality_tol))
    return records

def concavity_check(
    samples: int,
    n_max: int,
    seed: int,
    tol: float = 1e-9,
    fd_tol: float = 1e-6,
    fd_points: int = 10
) -> List[VerificationRecord]:
    """
    Concavidad de σ_r^{1/r} en Γ_r y contraste de la hessiana cerrada con diferencias finitas.
    """
    rng = np.random.default_rng(seed)
    records = []
    for n in range(2, n_max + 1):
        for r in range(1, n + 1):
            xs = sample_cone_points(r, n, samples, rng)
            hess = _wr_hessian_rows(r, xs)
            hess = 0.5 * (hess + np.transpose(hess, (0, 2, 1)))
            max_eig = np.max(np.linalg.eigvalsh(hess), axis=1)
            norms = np.linalg.norm(hess, axis=(1, 2))
            scale = np.where(norms > 0, norms, 1.0)
            location = f"n={n}, r={r}, puntos={samples}"
            records.append(check_inequality("cones.concavity", location, float(np.max(max_eig / scale)), 0.0, tol))

            probes = [np.ones(n)] + [rng.uniform(0.5, 2.0, size=n) for _ in range(fd_points - 1)]
            worst = 0.0
            for point in probes:
                closed = _wr_hessian_rows(r, point[None, :])[0]
                numeric = central_hessian(lambda v: elementary_rows(v[None, :])[0, r] ** (1.0 / r), point)
                worst = max(worst, float(np.max(np.abs(closed - numeric)) / max(1.0, float(np.max(np.abs(closed))))))
            records.append(check_residual("cones.wr_hessian_fd", f"n={n}, r={r}, puntos={len(probes)}", worst, 0.0, fd_tol))
    return records

def quadratic_form_check(samples: int, n_max: int, seed: int, tol: float = 1e-10) -> List[VerificationRecord]:
    """Cota de la forma cuadrática de σ_r sobre x ∈ Γ_r y direcciones y aleatorias."""
    rng = np.random.default_rng(seed)
    records = []
    for n in range(2, n_max + 1):
        for r in range(1, n + 1):
            xs = sample_cone_points(r, n, samples, rng)
            ys = rng.normal(0.0, 1.0, size=(samples, n))
            lhs, rhs = _quadratic_sides(r, xs, ys)
            scaled = np.max((lhs - rhs) / np.maximum(1.0, np.abs(rhs)))
            records.append(check_inequality(
                "cones.quadratic_form", f"n={n}, r={r}, pruebas={samples}", float(scaled), 0.0, tol
            ))
    return records
