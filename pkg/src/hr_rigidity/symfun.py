"""
Módulo de funciones simétricas elementales σ_r y curvaturas medias normalizadas H_r.

Todas las evaluaciones usan la recurrencia del producto ∏(t + x_s): los coeficientes se
acumulan multiplicando un factor a la vez, nunca enumerando los C(n, r) subconjuntos.
Las funciones con entradas eliminadas (σ_r(x̂_i), σ_{r-2}(x̂_i, x̂_j)) reconstruyen el
producto sobre las entradas restantes en lugar de dividir por un factor.
"""

import logging
from typing import Any, List, Sequence

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import hessenberg
from scipy.special import comb, factorial

from hr_rigidity.exceptions import DomainError
from hr_rigidity.validation import validate_lambda_vec, validate_order, validate_square_matrix

logger = logging.getLogger("hr-rigidity")

LambdaVec = NDArray[np.float64]
SigmaTable = NDArray[np.float64]

def _product_coefficients(rows: NDArray[np.float64]) -> NDArray[np.float64]:
    """
    Coeficientes de ∏_s (t + x_s) para cada fila de una matriz (N, m).

    Devuelve un array (N, m + 1) con σ_0, ..., σ_m de cada fila; una fila vacía
    (m = 0) produce solo σ_0 = 1.
    """
    count, m = rows.shape
    coeffs = np.zeros((count, m + 1))
    coeffs[:, 0] = 1.0
    for k in range(m):
        xs = rows[:, k:k + 1]
        coeffs[:, 1:k + 2] = coeffs[:, 1:k + 2] + xs * coeffs[:, 0:k + 1]
    return coeffs

def elementary_rows(rows: Any) -> NDArray[np.float64]:
    """
    Tabla σ_0..σ_n para un lote de vectores, una fila por vector.

    Args:
        rows: Array (N, n) de reales finitos

    Returns:
        Array (N, n + 1)
    """
    return _product_coefficients(np.atleast_2d(np.asarray(rows, dtype=np.float64)))

def elementary_all(x: Any) -> SigmaTable:
    """
    Calcula σ_0(x), ..., σ_n(x) como coeficientes de ∏(t + x_s) en potencias descendentes de t.

    Args:
        x: Vector de R^n con n >= 2

    Returns:
        Tabla con σ_0 = 1 y σ_r(x) para r = 1..n

    Raises:
        ValidationError: Si n < 2 o hay entradas no finitas
    """
    vec = validate_lambda_vec(x)
    return _product_coefficients(vec[None, :])[0]

def sigma(r: int, x: Any) -> float:
    """
    σ_r(x) con las convenciones σ_0 = 1 y σ_r = 0 para r > n.

    Raises:
        DomainError: Si r es negativo
    """
    vec = validate_lambda_vec(x)
    if isinstance(r, bool) or not isinstance(r, (int, np.integer)) or r < 0:
        raise DomainError(f"r debe ser un entero no negativo, se recibió {r!r}")
    if r > vec.shape[0]:
        return 0.0
    return float(_product_coefficients(vec[None, :])[0, r])

def grad_rows(r: int, rows: NDArray[np.float64]) -> NDArray[np.float64]:
    """
    Gradiente de σ_r para un lote: componente j = σ_{r-1} de la fila sin la entrada j.
    """
    count, n = rows.shape
    grad = np.empty((count, n))
    for j in range(n):
        grad[:, j] = _product_coefficients(np.delete(rows, j, axis=1))[:, r - 1]
    return grad

def hess_rows(r: int, rows: NDArray[np.float64]) -> NDArray[np.float64]:
    """
    Hessiana de σ_r para un lote: entrada (i, j) = σ_{r-2} sin las entradas i y j, diagonal cero.
    """
    count, n = rows.shape
    hess = np.zeros((count, n, n))
    for i in range(n):
        for j in range(i + 1, n):
            rest = np.delete(rows, [i, j], axis=1)
            value = _product_coefficients(rest)[:, r - 2]
            hess[:, i, j] = value
            hess[:, j, i] = value
    return hess

def sigma_grad(r: int, x: Any) -> LambdaVec:
    """
    Gradiente de σ_r: ∂σ_r/∂x_j = σ_{r-1}(x̂_j).

    Args:
        r: Orden en 1..n
        x: Vector de R^n

    Returns:
        Vector de derivadas parciales

    Raises:
        DomainError: Si r está fuera de 1..n
    """
    vec = validate_lambda_vec(x)
    validate_order(r, 1, vec.shape[0])
    return grad_rows(r, vec[None, :])[0]

def sigma_hess(r: int, x: Any) -> NDArray[np.float64]:
    """
    Hessiana de σ_r: ∂²σ_r/∂x_i∂x_j = σ_{r-2}(x̂_i, x̂_j) para i ≠ j y 0 en la diagonal.

    Args:
        r: Orden en 2..n
        x: Vector de R^n

    Returns:
        Matriz simétrica n×n

    Raises:
        DomainError: Si r está fuera de 2..n
    """
    vec = validate_lambda_vec(x)
    validate_order(r, 2, vec.shape[0])
    return hess_rows(r, vec[None, :])[0]

def sigma_hess_or_zero(r: int, x: Any) -> NDArray[np.float64]:
    """Hessiana de σ_r, con la matriz nula para r = 1 (σ_1 es lineal)."""
    vec = validate_lambda_vec(x)
    if r == 1:
        return np.zeros((vec.shape[0], vec.shape[0]))
    return sigma_hess(r, vec)

def mean_curvature_ratio(r: int, lam: Any) -> float:
    """
    Curvatura media normalizada H_r = σ_r(λ)/C(n, r); H_0 = 1.

    Args:
        r: Orden en 0..n
        lam: Curvaturas principales

    Returns:
        H_r
    """
    vec = validate_lambda_vec(lam)
    n = vec.shape[0]
    validate_order(r, 0, n)
    if r == 0:
        return 1.0
    return float(elementary_all(vec)[r] / comb(n, r, exact=True))

def mean_curvatures(lam: Any) -> NDArray[np.float64]:
    """Devuelve H_0, ..., H_n de un vector de curvaturas principales."""
    vec = validate_lambda_vec(lam)
    n = vec.shape[0]
    table = elementary_all(vec)
    binomials = np.array([comb(n, r, exact=True) for r in range(n + 1)], dtype=np.float64)
    return table / binomials

def char_poly_sigma(a: Any) -> SigmaTable:
    """
    Calcula σ_r de los autovalores de A a partir de det(A + tI), sin autodescomposición.

    A se lleva a forma de Hessenberg por una transformación ortogonal y el determinante
    de (H + tI) se desarrolla con la recurrencia de Hessenberg sobre coeficientes de
    polinomios en t. El resultado es polinómico en las entradas de A.

    Args:
        a: Matriz n×n de un operador autoadjunto en alguna base

    Returns:
        Tabla σ_0..σ_n

    Raises:
        ValidationError: Si la matriz no es cuadrada
    """
    mat = validate_square_matrix(a)
    n = mat.shape[0]
    hess = hessenberg(mat)

    # dets[k] guarda det de la submatriz principal k×k de H + tI, coeficientes en potencias ascendentes de t
    dets: List[NDArray[np.float64]] = [np.array([1.0])]
    for k in range(1, n + 1):
        kk = k - 1
        current = np.zeros(k + 1)
        current[: k] += hess[kk, kk] * dets[k - 1]
        current[1: k + 1] += dets[k - 1]
        product = 1.0
        for i in range(kk - 1, -1, -1):
            product *= hess[i + 1, i]
            if product == 0.0:
                break
            term = ((-1.0) ** (kk - i)) * hess[i, kk] * product * dets[i]
            current[: i + 1] += term
        dets.append(current)

    # det(H + tI) = Σ σ_r t^{n-r}: el coeficiente de t^{n-r} en orden ascendente es σ_r
    return dets[n][::-1].copy()

def newton_sigma(a: Any) -> List[Any]:
    """
    σ_0..σ_n de los autovalores de A por las identidades de Newton sobre p_k = tr(A^k).

    Solo usa @, trace, suma, producto y división por escalares, así que funciona
    igual con matrices de floats y con matrices de jets (camino diferenciable de H_r).

    Args:
        a: Matriz n×n (numpy o JetValue)

    Returns:
        Lista [σ_0, ..., σ_n]
    """
    n = a.shape[0]
    powers = []
    current = a
    for k in range(1, n + 1):
        if k > 1:
            current = current @ a
        powers.append(current.trace())

    sigmas: List[Any] = [1.0]
    for r in range(1, n + 1):
        total = 0.0
        for i in range(1, r + 1):
            sign = 1.0 if i % 2 == 1 else -1.0
            total = total + sign * (sigmas[r - i] * powers[i - 1])
        sigmas.append(total / r)
    return sigmas

def shifted_sigma_coefficients(r: int, x: Any) -> NDArray[np.float64]:
    """
    Coeficientes de s ↦ σ_r(x + s·a), a = (1, ..., 1), en potencias descendentes de s.

    Usa σ_r(x + s·a) = Σ_{j=0}^{r} C(n-j, r-j) σ_j(x) s^{r-j}.

    Args:
        r: Grado en 1..n
        x: Vector de R^n

    Returns:
        Array de r + 1 coeficientes, el primero es C(n, r)
    """
    vec = validate_lambda_vec(x)
    n = vec.shape[0]
    validate_order(r, 1, n)
    return shifted_rows(r, vec[None, :])[0]

def shifted_rows(r: int, rows: NDArray[np.float64]) -> NDArray[np.float64]:
    """Versión por lotes de shifted_sigma_coefficients: array (N, r + 1)."""
    n = rows.shape[1]
    table = _product_coefficients(rows)
    weights = np.array([comb(n - j, r - j, exact=True) for j in range(r + 1)], dtype=np.float64)
    return table[:, : r + 1] * weights

def shifted_expansion_residual(r: int, x: Any, s_values: Sequence[float]) -> float:
    """
    Error relativo máximo entre la expansión desplazada y la evaluación directa de σ_r(x + s·a).
    """
    vec = validate_lambda_vec(x)
    coeffs = shifted_sigma_coefficients(r, vec)
    worst = 0.0
    for s in s_values:
        direct = elementary_all(vec + s)[r]
        expanded = float(np.polyval(coeffs, s))
        worst = max(worst, abs(direct - expanded) / max(1.0, abs(direct)))
    return worst

def derivative_chain_residual(r: int, x: Any) -> float:
    """
    Comprueba σ_r(x) = (1/(n-r)!) d^{n-r}/ds^{n-r} σ_n(s·a + x) en s = 0.

    σ_n(s·a + x) = ∏(s + x_i) se evalúa directamente en n + 1 nodos de Chebyshev y se
    interpola; la derivada sale del polinomio interpolante, no de la tabla σ_j.
    Devuelve el error relativo a la cota C(n, r)·(1 + max|x_i|)^r del coeficiente.
    """
    vec = validate_lambda_vec(x)
    n = vec.shape[0]
    validate_order(r, 0, n)
    scale = 1.0 + float(np.max(np.abs(vec)))
    nodes = scale * np.cos(np.pi * (np.arange(n + 1) + 0.5) / (n + 1))
    values = np.prod(nodes[:, None] + vec[None, :], axis=1)
    poly = np.polynomial.Polynomial.fit(nodes, values, n, domain=[-scale, scale], window=[-scale, scale])
    derived = float(poly.deriv(n - r)(0.0)) if n > r else float(poly(0.0))
    value = derived / float(factorial(n - r))
    expected = elementary_all(vec)[r]
    return abs(value - expected) / (comb(n, r, exact=True) * scale ** r)
