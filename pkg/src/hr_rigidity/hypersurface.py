"""
Motor de curvatura para inmersiones f: U ⊂ R^n → Q^{n+1}_c.

Todas las derivadas salen de aritmética de jets sobre la carta: f se desarrolla hasta
orden 4, y a partir de ahí la métrica, la normal, la segunda forma fundamental, los
símbolos de Christoffel, las derivadas covariantes de h y el tensor de Riemann se
obtienen derivando jets, no por diferencias finitas. H_r se deriva a través de los
coeficientes del polinomio característico de A = g⁻¹h, nunca a través de autovalores.

Convenciones:
    R(X, Y)Z = ∇_X∇_Y Z - ∇_Y∇_X Z,  Rm[a, b, c, d] = ⟨R(∂_a, ∂_b)∂_c, ∂_d⟩
    K_ij = Rm[i, j, j, i] en la base propia ortonormal
    h_ijk = (∇_k h)_ij,  h_ijkl = (∇_l ∇h)_ijk
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Any, Callable, List, Optional, Tuple

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import eigh
from scipy.special import comb

from hr_rigidity.charts import ImmersionChart
from hr_rigidity.exceptions import DegenerateFrameError, GeometryError, HRBaseError, JetError, ValidationError
from hr_rigidity.jets import JetValue, einsum, is_jet
from hr_rigidity.oracles import chart_laplacian
from hr_rigidity.records import VerificationRecord, check_residual, skipped
from hr_rigidity.spaceform import (
    ambient_dimension,
    distance,
    distance_gradient,
    distance_hessian_form,
    metric_signature,
    model_inner,
    model_origin,
)
from hr_rigidity.symfun import char_poly_sigma, elementary_all, newton_sigma, sigma_grad, sigma_hess_or_zero
from hr_rigidity.validation import validate_order

logger = logging.getLogger("hr-rigidity")

JET_ORDERS = (3, 4)
EIGEN_GAP = 1e-5

# Estados de la base propia
DISTINCT = "distinct"
UMBILIC = "umbilic"
DEGENERATE = "degenerate"

@dataclass(frozen=True, eq=False)
class PointGeometry:
    """
    Geometría completa de la inmersión en un punto de carta.

    Los tensores con sufijo de base propia (nabla_h, nabla2_h, riemann, riemann_gauss,
    H_hessian) están expresados en la base g-ortonormal de vectores propios e_1..e_n,
    ordenada por curvaturas principales crecientes. g, h, christoffel y shape_operator
    están en la base de carta.
    """
    u: NDArray[np.float64]
    c: float
    n: int
    position: NDArray[np.float64]
    tangents: NDArray[np.float64]
    normal: NDArray[np.float64]
    normal_sign: int
    g: NDArray[np.float64]
    g_inv: NDArray[np.float64]
    christoffel: NDArray[np.float64]
    h: NDArray[np.float64]
    shape_operator: NDArray[np.float64]
    eigenvalues: NDArray[np.float64]
    eigenframe: NDArray[np.float64]
    frame_status: str
    min_gap: float
    H: NDArray[np.float64]
    sigma: NDArray[np.float64]
    sigma_char: NDArray[np.float64]
    sigma_newton: NDArray[np.float64]
    R_scalar: float
    intrinsic_scalar: float
    nabla_h: NDArray[np.float64]
    nabla2_h: Optional[NDArray[np.float64]]
    riemann: NDArray[np.float64]
    riemann_gauss: NDArray[np.float64]
    K: NDArray[np.float64]
    H_gradient: NDArray[np.float64]
    H_hessian: Optional[NDArray[np.float64]]
    H_laplacian: Optional[NDArray[np.float64]]
    orders: int

    @property
    def lam(self) -> NDArray[np.float64]:
        return self.eigenvalues

    @property
    def umbilicity_deficit(self) -> float:
        return float(self.eigenvalues[-1] - self.eigenvalues[0])

    @property
    def frame_reliable(self) -> bool:
        return self.frame_status != DEGENERATE

@dataclass(frozen=True)
class _Frame:
    """Jets de la inmersión, la métrica y la normal orientada en un punto."""
    position: JetValue
    tangents: JetValue
    g: JetValue
    g_inv: JetValue
    normal: JetValue
    h: JetValue
    sign: int

def _check_point(chart: ImmersionChart, u: Any) -> NDArray[np.float64]:
    point = np.asarray(u, dtype=np.float64)
    if point.shape != (chart.n,) or not np.all(np.isfinite(point)):
        raise ValidationError(f"Punto de carta inválido {u!r} para una carta de dimensión {chart.n}")
    if not chart.contains(point):
        raise ValidationError(f"El punto {point} está fuera del dominio de la carta {chart.tag}")
    return point

def _second_derivatives(tangents: JetValue, n: int) -> JetValue:
    rows = [JetValue.stack([tangents[i].diff(j) for j in range(n)], axis=0) for i in range(n)]
    return JetValue.stack(rows, axis=0)

def _raw_frame(chart: ImmersionChart, u: NDArray[np.float64], order: int) -> Tuple[_Frame, int]:
    """
    Métrica, normal sin orientar y h con esa normal.

    La normal se obtiene proyectando el eje coordenado E de mayor componente normal:
    ν = E - Σ F_i g^{ij}⟨F_j, E⟩ - c⟨F, E⟩F, y ξ = ν/|ν|.

    Returns:
        (frame con sign = +1, signo del determinante [F, F_1..F_n, ξ])
    """
    n, c = chart.n, chart.c
    position = chart.jet(u, order)
    dim = ambient_dimension(c, n)
    if position.shape != (dim,):
        raise GeometryError(f"La carta {chart.tag} devuelve puntos de forma {position.shape}, se esperaba ({dim},)")
    eta = metric_signature(c, dim)

    tangents = JetValue.stack([position.diff(i) for i in range(n)], axis=0)
    g = einsum("ia,ja->ij", tangents * eta, tangents)
    g_value = 0.5 * (g.value + g.value.T)
    metric_eigs = np.linalg.eigvalsh(g_value)
    if metric_eigs[0] <= 1e-12 * max(1.0, metric_eigs[-1]):
        raise GeometryError(f"Primera forma fundamental degenerada en u={u} ({chart.tag}): autovalores {metric_eigs}")
    g_inv = g.inv()

    p_value = position.value
    t_value = tangents.value
    best_axis, best_norm = 0, -1.0
    for a in range(dim):
        coef = t_value[:, a] * eta[a]
        nu = -t_value.T @ np.linalg.solve(g_value, coef)
        nu[a] += 1.0
        if c != 0:
            nu -= c * eta[a] * p_value[a] * p_value
        norm2 = float(np.sum(eta * nu * nu))
        if norm2 > best_norm:
            best_axis, best_norm = a, norm2
    if best_norm <= 1e-20:
        raise GeometryError(f"Candidato a normal nulo en u={u} ({chart.tag})")

    a = best_axis
    weights = einsum("ij,j->i", g_inv, tangents[:, a] * eta[a])
    nu_jet = -einsum("i,ia->a", weights, tangents)
    axis = np.zeros(dim)
    axis[a] = 1.0
    nu_jet = nu_jet + axis
    if c != 0:
        nu_jet = nu_jet - position * (position[a] * (c * eta[a]))
    normal = nu_jet * ((nu_jet * nu_jet * eta).sum() ** -0.5)

    columns = ([p_value] if c != 0 else []) + [t_value[i] for i in range(n)] + [normal.value]
    det_sign = 1 if np.linalg.det(np.column_stack(columns)) >= 0 else -1

    h = einsum("ija,a->ij", _second_derivatives(tangents, n) * eta, normal)
    return _Frame(position, tangents, g, g_inv, normal, h, 1), det_sign

@lru_cache(maxsize=128)
def _reference_sign(chart: ImmersionChart) -> int:
    """Orientación de referencia: signo del determinante del marco con h_11 >= 0 en el punto base."""
    frame, det_sign = _raw_frame(chart, chart.base_point(), 2)
    h11 = float(frame.h.value[0, 0])
    return det_sign if h11 >= 0 else -det_sign

def _oriented_frame(chart: ImmersionChart, u: NDArray[np.float64], order: int) -> _Frame:
    frame, det_sign = _raw_frame(chart, u, order)
    sign = _reference_sign(chart) * det_sign * chart.orientation
    if sign > 0:
        return frame
    return _Frame(frame.position, frame.tangents, frame.g, frame.g_inv, -frame.normal, -frame.h, -1)

def fundamental_forms(chart: ImmersionChart, u: Any) -> Tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]:
    """
    Primera y segunda forma fundamental y normal unitaria en u.

    Args:
        chart: Carta de la inmersión
        u: Punto de la carta

    Returns:
        (g, h, ξ) como arrays

    Raises:
        GeometryError: Si la métrica degenera o el candidato a normal se anula
    """
    point = _check_point(chart, u)
    try:
        frame = _oriented_frame(chart, point, 2)
    except HRBaseError:
        raise
    except (np.linalg.LinAlgError, FloatingPointError, ValueError) as e:
        logger.error(f"Error numérico en formas fundamentales de {chart.tag} en u={point}: {str(e)}")
        raise GeometryError(f"Error numérico en formas fundamentales: {str(e)}")
    return frame.g.value, frame.h.value, frame.normal.value

def _christoffel(g: JetValue, g_inv: JetValue, n: int) -> JetValue:
    """Γ^m_ij = g^{mk}·½(∂_i g_jk + ∂_j g_ik - ∂_k g_ij) como jet."""
    dg = JetValue.stack([g.diff(k) for k in range(n)], axis=2)
    lowered = (dg.transpose(1, 2, 0) + dg.transpose(1, 0, 2) - dg.transpose(2, 0, 1)) * 0.5
    return einsum("mk,kij->mij", g_inv, lowered)

def _covariant_h(h: JetValue, gamma: JetValue, n: int) -> JetValue:
    """h_ij;k = ∂_k h_ij - Γ^m_ki h_mj - Γ^m_kj h_im."""
    dh = JetValue.stack([h.diff(k) for k in range(n)], axis=2)
    return dh - einsum("mki,mj->ijk", gamma, h) - einsum("mkj,im->ijk", gamma, h)

def _second_covariant_h(nabla: JetValue, gamma: NDArray[np.float64], n: int) -> NDArray[np.float64]:
    """h_ijk;l = ∂_l h_ijk - Γ^m_li h_mjk - Γ^m_lj h_imk - Γ^m_lk h_ijm, en valores."""
    dt = JetValue.stack([nabla.diff(l) for l in range(n)], axis=3).value
    t = nabla.value
    return (
        dt
        - np.einsum("mli,mjk->ijkl", gamma, t)
        - np.einsum("mlj,imk->ijkl", gamma, t)
        - np.einsum("mlk,ijm->ijkl", gamma, t)
    )

def _intrinsic_riemann(gamma: JetValue, g: NDArray[np.float64], n: int) -> NDArray[np.float64]:
    """Rm[a, b, c, d] = g_de R^e_cab con R^d_cab = ∂_aΓ^d_bc - ∂_bΓ^d_ac + Γ^d_ae Γ^e_bc - Γ^d_be Γ^e_ac."""
    dgamma = JetValue.stack([gamma.diff(a) for a in range(n)], axis=3).value
    gam = gamma.value
    upper = (
        np.einsum("dbca->dcab", dgamma)
        - np.einsum("dacb->dcab", dgamma)
        + np.einsum("dae,ebc->dcab", gam, gam)
        - np.einsum("dbe,eac->dcab", gam, gam)
    )
    return np.einsum("de,ecab->abcd", g, upper)

def gauss_riemann(c: float, g: NDArray[np.float64], h: NDArray[np.float64]) -> NDArray[np.float64]:
    """Rm por la ecuación de Gauss: c(g_bc g_ad - g_ac g_bd) + h_bc h_ad - h_ac h_bd."""
    return (
        c * (np.einsum("bc,ad->abcd", g, g) - np.einsum("ac,bd->abcd", g, g))
        + np.einsum("bc,ad->abcd", h, h)
        - np.einsum("ac,bd->abcd", h, h)
    )

def _rotate(tensor: NDArray[np.float64], frame: NDArray[np.float64]) -> NDArray[np.float64]:
    """Componentes de un tensor covariante en la base dada por las columnas de `frame`."""
    result = tensor
    for axis in range(tensor.ndim):
        result = np.moveaxis(np.tensordot(result, frame, axes=([axis], [0])), -1, axis)
    return result

def divergence_laplacian(g: JetValue, scalar: JetValue) -> float:
    """
    Δs = (1/√det g) ∂_i(√det g · g^{ij} ∂_j s) a partir de jets de g (orden >= 1) y s (orden >= 2).

    Raises:
        JetError: Si el orden de los jets no alcanza
    """
    if g.order < 1 or scalar.order < 2:
        raise JetError(f"Orden de jet insuficiente para el laplaciano: g={g.order}, s={scalar.order}")
    n = g.shape[0]
    sqrt_det = newton_sigma(g)[n] ** 0.5
    grad = JetValue.stack([scalar.diff(j) for j in range(n)], axis=0)
    flux = einsum("ij,j->i", g.inv(), grad) * sqrt_det
    divergence = sum(flux[i].diff(i).value for i in range(n))
    return float(divergence / sqrt_det.value)

def _frame_status(lam: NDArray[np.float64], gap_tol: float) -> Tuple[str, float]:
    gaps = np.diff(lam)
    min_gap = float(gaps.min()) if gaps.size else float("inf")
    threshold = gap_tol * (1.0 + float(np.max(np.abs(lam))))
    # umbílico solo si todo el espectro cabe en el umbral
    if lam.size == 0 or float(lam[-1] - lam[0]) < threshold:
        return UMBILIC, min_gap
    if np.any(gaps < threshold):
        return DEGENERATE, min_gap
    return DISTINCT, min_gap

def point_geometry(chart: ImmersionChart, u: Any, orders: int = 4, gap_tol: float = EIGEN_GAP) -> PointGeometry:
    """
    Reúne toda la geometría de la inmersión en u.

    Args:
        chart: Carta de la inmersión
        u: Punto de la carta
        orders: Orden de los jets de f; con 3 no hay h_ijkl, laplaciano ni hessiana de H_r
        gap_tol: Umbral relativo de separación de autovalores para la base propia

    Returns:
        PointGeometry con curvaturas principales ordenadas de menor a mayor

    Raises:
        JetError: Si orders no es 3 ni 4
        GeometryError: Si la inmersión degenera en u o falla el álgebra lineal
    """
    if orders not in JET_ORDERS:
        raise JetError(f"Orden de jets {orders} no soportado; use uno de {JET_ORDERS}")
    point = _check_point(chart, u)
    try:
        return _assemble(chart, point, orders, gap_tol)
    except HRBaseError:
        raise
    except (np.linalg.LinAlgError, FloatingPointError, ValueError) as e:
        logger.error(f"Error numérico en la geometría de {chart.tag} en u={point}: {str(e)}")
        raise GeometryError(f"Error numérico en u={point}: {str(e)}")

def _assemble(chart: ImmersionChart, u: NDArray[np.float64], orders: int, gap_tol: float) -> PointGeometry:
    n, c = chart.n, chart.c
    frame = _oriented_frame(chart, u, orders)
    g_value = frame.g.value
    h_value = 0.5 * (frame.h.value + frame.h.value.T)

    gamma = _christoffel(frame.g, frame.g_inv, n)
    gamma_value = gamma.value
    shape_jet = frame.g_inv @ frame.h
    sigma_jets = newton_sigma(shape_jet)
    binomials = np.array([comb(n, r, exact=True) for r in range(n + 1)], dtype=np.float64)
    H_jets = [sigma_jets[r] / binomials[r] for r in range(n + 1)]

    lam, frame_vectors = eigh(h_value, 0.5 * (g_value + g_value.T))
    status, min_gap = _frame_status(lam, gap_tol)
    if status == DEGENERATE:
        logger.debug(f"Base propia degenerada en u={u} ({chart.tag}): separación mínima {min_gap:.3g}")

    sigma_eig = elementary_all(lam)
    shape_value = frame.g_inv.value @ h_value
    sigma_char = char_poly_sigma(shape_value)
    sigma_newton = np.array([float(s) if not is_jet(s) else s.value for s in sigma_jets])

    nabla = _covariant_h(frame.h, gamma, n)
    nabla2 = _second_covariant_h(nabla, gamma_value, n) if orders == 4 else None

    riemann = _intrinsic_riemann(gamma, g_value, n)
    riemann_gauss = gauss_riemann(c, g_value, h_value)
    riemann_e = _rotate(riemann, frame_vectors)
    sectional = np.einsum("ijji->ij", riemann_e).copy()
    np.fill_diagonal(sectional, 0.0)
    pairs = comb(n, 2, exact=True)
    intrinsic_scalar = float(np.sum(np.triu(sectional, 1)) / pairs)

    H_values = sigma_eig / binomials
    H_gradient = np.zeros((n + 1, n))
    for r in range(1, n + 1):
        H_gradient[r] = frame_vectors.T @ H_jets[r].gradient()

    H_hessian = None
    H_laplacian = None
    if orders == 4:
        H_hessian = np.zeros((n + 1, n, n))
        H_laplacian = np.zeros(n + 1)
        for r in range(1, n + 1):
            chart_hess = H_jets[r].hessian() - np.einsum("mij,m->ij", gamma_value, H_jets[r].gradient())
            H_hessian[r] = frame_vectors.T @ chart_hess @ frame_vectors
            H_laplacian[r] = divergence_laplacian(frame.g, H_jets[r])

    return PointGeometry(
        u=u.copy(),
        c=c,
        n=n,
        position=frame.position.value,
        tangents=frame.tangents.value,
        normal=frame.normal.value,
        normal_sign=frame.sign,
        g=g_value,
        g_inv=frame.g_inv.value,
        christoffel=gamma_value,
        h=h_value,
        shape_operator=shape_value,
        eigenvalues=lam,
        eigenframe=frame_vectors,
        frame_status=status,
        min_gap=min_gap,
        H=H_values,
        sigma=sigma_eig,
        sigma_char=sigma_char,
        sigma_newton=sigma_newton,
        R_scalar=c + float(H_values[2]),
        intrinsic_scalar=intrinsic_scalar,
        nabla_h=_rotate(nabla.value, frame_vectors),
        nabla2_h=_rotate(nabla2, frame_vectors) if nabla2 is not None else None,
        riemann=riemann_e,
        riemann_gauss=_rotate(riemann_gauss, frame_vectors),
        K=sectional,
        H_gradient=H_gradient,
        H_hessian=H_hessian,
        H_laplacian=H_laplacian,
        orders=orders,
    )

def curvature_relation_residual(pg: PointGeometry) -> float:
    """n²H² - |A|² - n(n-1)(R - c), con R = c + H_2."""
    n = pg.n
    mean = float(pg.H[1])
    norm2 = float(np.sum(pg.eigenvalues ** 2))
    return n * n * mean * mean - norm2 - n * (n - 1) * (pg.R_scalar - pg.c)

def scalar_curvature_residual(pg: PointGeometry) -> float:
    """Curvatura escalar normalizada intrínseca (media de K_ij) frente a c + H_2."""
    return pg.intrinsic_scalar - pg.R_scalar

def sectional_residual(pg: PointGeometry) -> float:
    lam = pg.eigenvalues
    expected = pg.c + np.outer(lam, lam)
    off = ~np.eye(pg.n, dtype=bool)
    return float(np.max(np.abs(pg.K - expected)[off]))

def codazzi_residual(pg: PointGeometry) -> float:
    """Máxima asimetría de h_ijk bajo permutaciones de sus índices (sin escalar)."""
    t = pg.nabla_h
    return float(max(np.max(np.abs(t - t.transpose(perm))) for perm in permutations(range(3))))

def gauss_residual(pg: PointGeometry) -> float:
    """Diferencia relativa entre el Riemann intrínseco y el de la ecuación de Gauss."""
    scale = 1.0 + float(np.max(np.abs(pg.riemann_gauss)))
    return float(np.max(np.abs(pg.riemann - pg.riemann_gauss))) / scale

def char_poly_paths_residual(pg: PointGeometry) -> float:
    """Acuerdo entre σ_r por autovalores, por Hessenberg y por identidades de Newton."""
    scale = 1.0 + np.abs(pg.sigma)
    char_gap = np.abs(pg.sigma_char - pg.sigma) / scale
    newton_gap = np.abs(pg.sigma_newton - pg.sigma) / scale
    return float(max(char_gap.max(), newton_gap.max()))

def commutation_residual(pg: PointGeometry) -> float:
    """
    max |h_ijkl - h_ijlk - Σ_m Rm[k,l,i,m] h_mj - Σ_m Rm[k,l,j,m] h_im| en la base propia.

    Raises:
        JetError: Si la geometría se calculó sin h_ijkl
    """
    if pg.nabla2_h is None:
        raise JetError("commutation_residual necesita jets de orden 4")
    h = np.diag(pg.eigenvalues)
    rm = pg.riemann
    lhs = pg.nabla2_h - pg.nabla2_h.transpose(0, 1, 3, 2)
    rhs = np.einsum("klim,mj->ijkl", rm, h) + np.einsum("kljm,im->ijkl", rm, h)
    return float(np.max(np.abs(lhs - rhs)))

def hess_trace_residual(pg: PointGeometry) -> float:
    """max_j |n·Hess H(e_j, e_j) - Σ_k h_kkjj|."""
    if pg.nabla2_h is None or pg.H_hessian is None:
        raise JetError("hess_trace_residual necesita jets de orden 4")
    traced = np.einsum("kkjj->j", pg.nabla2_h)
    return float(np.max(np.abs(pg.n * np.diag(pg.H_hessian[1]) - traced)))

def _require_frame(pg: PointGeometry, label: str) -> None:
    if not pg.frame_reliable:
        raise DegenerateFrameError(
            f"{label}: base propia no fiable en u={pg.u} (separación mínima {pg.min_gap:.3g})"
        )

def _check_index(k: int, n: int) -> int:
    if not 0 <= int(k) < n:
        raise ValidationError(f"Índice de dirección k = {k} fuera de 0..{n - 1}")
    return int(k)

def gradient_identity_residual(pg: PointGeometry, r: int, k: int) -> float:
    """
    Σ_j h_jjk ∂σ_r/∂x_j(λ) - C(n, r)·e_k(H_r).

    Args:
        pg: Geometría del punto (contiene los jets ya evaluados)
        r: Orden en 1..n
        k: Dirección propia, índice base 0

    Raises:
        DegenerateFrameError: Si la base propia no es fiable
    """
    n = pg.n
    validate_order(r, 1, n)
    k = _check_index(k, n)
    _require_frame(pg, "gradient_identity_residual")
    grad = sigma_grad(r, pg.eigenvalues)
    diagonal = np.einsum("jjk->jk", pg.nabla_h)
    lhs = float(np.dot(diagonal[:, k], grad))
    return lhs - comb(n, r, exact=True) * float(pg.H_gradient[r][k])

def newton_tensor(pg: PointGeometry, r: int) -> NDArray[np.float64]:
    """P_{r-1} = Σ_j (-1)^j σ_{r-1-j}(λ) A^j en la base propia."""
    n = pg.n
    validate_order(r, 1, n)
    shape = pg.shape_operator
    result = np.zeros((n, n))
    power = np.eye(n)
    for j in range(r):
        result += ((-1.0) ** j) * pg.sigma[r - 1 - j] * power
        power = power @ shape
    frame = pg.eigenframe
    return frame.T @ pg.g @ result @ frame

def newton_tensor_residual(pg: PointGeometry, r: int, k: int) -> float:
    """
    Comprueba que P_{r-1} sea diagonal con entradas ∂σ_r/∂x_i y que
    tr(P_{r-1}∇_{e_k}A) = C(n, r)·e_k(H_r).
    """
    n = pg.n
    k = _check_index(k, n)
    _require_frame(pg, "newton_tensor_residual")
    tensor = newton_tensor(pg, r)
    diagonal_gap = float(np.max(np.abs(tensor - np.diag(sigma_grad(r, pg.eigenvalues)))))
    trace = float(np.trace(tensor @ pg.nabla_h[:, :, k]))
    trace_gap = abs(trace - comb(n, r, exact=True) * float(pg.H_gradient[r][k]))
    return max(diagonal_gap, trace_gap)

def walter_sides(pg: PointGeometry, r: int) -> Tuple[float, float]:
    """
    Los dos lados de la fórmula de Walter en el punto.

    LHS = C(n, r)·ΔH_r;
    RHS = n Σ_j ∂_jσ_r Hess H(e_j, e_j) - Σ_{i<j} ∂²_ijσ_r (λ_i - λ_j)² K_ij
          + Σ_{i,j,k} ∂²_ijσ_r (h_iik h_jjk - h_ijk²)
    """
    n = pg.n
    validate_order(r, 1, n)
    if pg.H_laplacian is None or pg.H_hessian is None:
        raise JetError("La fórmula de Walter necesita jets de orden 4")
    lam = pg.eigenvalues
    grad = sigma_grad(r, lam)
    hess = sigma_hess_or_zero(r, lam)

    lhs = comb(n, r, exact=True) * float(pg.H_laplacian[r])
    hessian_term = n * float(np.dot(grad, np.diag(pg.H_hessian[1])))
    spread = (lam[:, None] - lam[None, :]) ** 2
    curvature_term = -0.5 * float(np.sum(hess * spread * pg.K))
    t = pg.nabla_h
    diagonal = np.einsum("iik->ik", t)
    gradient_term = float(
        np.einsum("ij,ik,jk->", hess, diagonal, diagonal) - np.einsum("ij,ijk->", hess, t * t)
    )
    return lhs, hessian_term + curvature_term + gradient_term

def walter_residual(
    chart: ImmersionChart,
    u: Any,
    r: int,
    tolerance: float = 1e-5,
    pg: Optional[PointGeometry] = None
) -> VerificationRecord:
    """
    Evalúa la fórmula de Walter para ΔH_r en u por los dos caminos independientes.

    Args:
        chart: Carta de la inmersión
        u: Punto de la carta
        r: Orden en 1..n
        tolerance: Cota del residuo relativo |LHS - RHS|/(1 + |LHS|)
        pg: Geometría ya calculada en u (orden 4), si se tiene

    Returns:
        Registro walter; SKIPPED con nota "skipped-degenerate" si la base propia es ambigua

    Raises:
        DomainError: Si r está fuera de 1..n
    """
    validate_order(r, 1, chart.n)
    if pg is None:
        pg = point_geometry(chart, u, 4)
    if not pg.frame_reliable:
        logger.warning(f"Walter omitido en u={pg.u} ({chart.tag}): separación mínima {pg.min_gap:.3g}")
        return skipped("hypersurface.walter", pg.u, "skipped-degenerate")
    lhs, rhs = walter_sides(pg, r)
    relative = abs(lhs - rhs) / (1.0 + abs(lhs))
    return check_residual(
        "hypersurface.walter", pg.u, lhs, rhs, tolerance, residual=relative,
        note=f"r={r}, base={pg.frame_status}, residuo_abs={abs(lhs - rhs):.3g}"
    )

def laplace_beltrami(chart: ImmersionChart, u: Any, scalar: Callable[[Any], Any]) -> float:
    """
    Laplaciano de Laplace-Beltrami de un escalar de carta, por jets.

    Args:
        chart: Carta de la inmersión
        u: Punto de la carta
        scalar: Función de carta evaluable con jets (las constantes dan 0)

    Returns:
        Δ scalar en u
    """
    point = _check_point(chart, u)
    variables = JetValue.variables(point, 2)
    value = scalar(variables)
    if not is_jet(value):
        return 0.0
    position = chart.mapping(variables)
    eta = metric_signature(chart.c, position.shape[0])
    tangents = JetValue.stack([position.diff(i) for i in range(chart.n)], axis=0)
    g = einsum("ia,ja->ij", tangents * eta, tangents)
    return divergence_laplacian(g, value)

def laplacian_fd_residual(chart: ImmersionChart, u: Any, scalar: Callable[[Any], Any]) -> Tuple[float, float, float]:
    """
    Laplaciano por jets frente al oráculo de diferencias finitas anidadas.

    Returns:
        (jet, diferencias finitas, residuo relativo |jet - fd|/(1 + |jet|))
    """
    point = _check_point(chart, u)
    exact = laplace_beltrami(chart, point, scalar)
    eta = metric_signature(chart.c, ambient_dimension(chart.c, chart.n))
    approx = chart_laplacian(chart.evaluate, eta, point, lambda v: float(scalar(v)))
    return exact, approx, abs(exact - approx) / (1.0 + abs(exact))

def composition_hessian_residual(chart: ImmersionChart, u: Any, q0: Any = None) -> float:
    """
    Hess(r∘f)(e_i, e_j) frente a Hess r(f_*e_i, f_*e_j) + h_ij⟨∇r, ξ⟩ con r = d(·, q0).

    Returns:
        Máxima diferencia relativa sobre la base de carta
    """
    point = _check_point(chart, u)
    c = chart.c
    q0 = model_origin(c, chart.n) if q0 is None else np.asarray(q0, dtype=np.float64)
    pg = point_geometry(chart, point, 3)

    radial = distance(c, chart.jet(point, 2), q0)
    lhs = radial.hessian() - np.einsum("mij,m->ij", pg.christoffel, radial.gradient())

    grad = distance_gradient(c, q0, pg.position)
    normal_part = model_inner(c, grad, pg.normal)
    n = chart.n
    rhs = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            rhs[i, j] = distance_hessian_form(c, q0, pg.position, pg.tangents[i], pg.tangents[j])
    rhs += pg.h * normal_part
    return float(np.max(np.abs(lhs - rhs))) / (1.0 + float(np.max(np.abs(lhs))))

def orientation_flip_residual(chart: ImmersionChart, u: Any, r: int) -> float:
    """
    Paridad bajo ξ → -ξ: λ → -λ invertido, H_r → (-1)^r H_r y ambos lados de Walter
    cambian por el mismo signo (si la base propia es fiable).

    Returns:
        Máxima discrepancia relativa
    """
    validate_order(r, 1, chart.n)
    plus = point_geometry(chart, u, 4)
    minus = point_geometry(chart.with_orientation(-chart.orientation), u, 4)
    parity = (-1.0) ** r

    scale = 1.0 + float(np.max(np.abs(plus.eigenvalues)))
    gaps: List[float] = [
        float(np.max(np.abs(minus.eigenvalues + plus.eigenvalues[::-1]))) / scale,
        abs(float(minus.H[r]) - parity * float(plus.H[r])) / (1.0 + abs(float(plus.H[r]))),
    ]
    if plus.frame_reliable and minus.frame_reliable:
        lhs_p, rhs_p = walter_sides(plus, r)
        lhs_m, rhs_m = walter_sides(minus, r)
        walter_scale = 1.0 + abs(lhs_p) + abs(rhs_p)
        gaps.append(abs(lhs_m - parity * lhs_p) / walter_scale)
        gaps.append(abs(rhs_m - parity * rhs_p) / walter_scale)
    return max(gaps)
