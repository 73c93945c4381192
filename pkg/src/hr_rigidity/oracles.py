"""
Oráculos de diferencias finitas usados solo para contrastar los caminos exactos.
"""

import logging
from typing import Any, Callable

import numpy as np
from numpy.typing import NDArray

logger = logging.getLogger("hr-rigidity")

def central_gradient(f: Callable[[NDArray[np.float64]], Any], x: Any, h: float = 1e-3) -> NDArray[np.float64]:
    """
    Gradiente (o jacobiano) por diferencias centrales de cuarto orden.

    Args:
        f: Función de R^n en escalares o arrays
        x: Punto de evaluación
        h: Paso

    Returns:
        Array con el eje de derivación al final
    """
    x = np.asarray(x, dtype=np.float64)
    columns = []
    for i in range(x.shape[0]):
        e = np.zeros_like(x)
        e[i] = h
        plus2 = np.asarray(f(x + 2 * e), dtype=np.float64)
        plus1 = np.asarray(f(x + e), dtype=np.float64)
        minus1 = np.asarray(f(x - e), dtype=np.float64)
        minus2 = np.asarray(f(x - 2 * e), dtype=np.float64)
        columns.append((-plus2 + 8 * plus1 - 8 * minus1 + minus2) / (12 * h))
    return np.stack(columns, axis=-1)

def central_hessian(f: Callable[[NDArray[np.float64]], float], x: Any, h: float = 1e-4) -> NDArray[np.float64]:
    """Hessiana de una función escalar por diferencias centrales de segundo orden."""
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[0]
    hess = np.zeros((n, n))
    f0 = float(f(x))
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = h
        hess[i, i] = (float(f(x + ei)) - 2 * f0 + float(f(x - ei))) / (h * h)
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = h
            value = (
                float(f(x + ei + ej)) - float(f(x + ei - ej))
                - float(f(x - ei + ej)) + float(f(x - ei - ej))
            ) / (4 * h * h)
            hess[i, j] = value
            hess[j, i] = value
    return hess

def second_difference(f: Callable[[float], float], t: float = 0.0, h: float = 1e-3) -> float:
    """Segunda derivada de una función de una variable, estencil de cinco puntos."""
    return (
        -f(t + 2 * h) + 16 * f(t + h) - 30 * f(t) + 16 * f(t - h) - f(t - 2 * h)
    ) / (12 * h * h)

def chart_laplacian(
    mapping: Callable[[NDArray[np.float64]], NDArray[np.float64]],
    eta: NDArray[np.float64],
    u: Any,
    scalar: Callable[[NDArray[np.float64]], float],
    h_outer: float = 1e-2,
    h_inner: float = 1e-3
) -> float:
    """
    Laplaciano de Laplace-Beltrami en una carta por diferencias finitas anidadas.

    La métrica g = Jᵀ diag(η) J y el gradiente del escalar salen de diferencias de cuarto
    orden con paso h_inner; la divergencia de √det g · g⁻¹ ∇s usa el paso h_outer.

    Args:
        mapping: Parametrización de la carta (floats)
        eta: Signatura del espacio ambiente lineal
        u: Punto de la carta
        scalar: Función escalar de la carta
        h_outer: Paso de la divergencia
        h_inner: Paso de la métrica y del gradiente

    Returns:
        Δ scalar en u
    """
    u = np.asarray(u, dtype=np.float64)
    n = u.shape[0]

    def metric(v: NDArray[np.float64]) -> NDArray[np.float64]:
        jac = central_gradient(mapping, v, h_inner)
        return jac.T @ (eta[:, None] * jac)

    def flux(v: NDArray[np.float64]) -> NDArray[np.float64]:
        g = metric(v)
        grad = central_gradient(scalar, v, h_inner)
        return np.sqrt(np.linalg.det(g)) * np.linalg.solve(g, grad)

    divergence = 0.0
    for i in range(n):
        e = np.zeros(n)
        e[i] = h_outer
        divergence += (
            -flux(u + 2 * e)[i] + 8 * flux(u + e)[i] - 8 * flux(u - e)[i] + flux(u - 2 * e)[i]
        ) / (12 * h_outer)
    return float(divergence / np.sqrt(np.linalg.det(metric(u))))
