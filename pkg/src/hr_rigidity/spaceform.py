"""
Modelos de las formas espaciales Q^{n+1}_c, distancias y curvatura de esferas geodésicas.

Modelos:
    c = 0: R^{n+1} con el producto euclídeo
    c > 0: esfera de radio 1/√c en R^{n+2}
    c < 0: hoja superior del hiperboloide ⟨p, p⟩_L = 1/c en Minkowski R^{n+1,1},
           primera coordenada temporal y positiva

Las funciones que construyen puntos aceptan floats o jets indistintamente.
"""

import logging
import math
from typing import Any

import numpy as np
from numpy.typing import NDArray

from hr_rigidity import jets
from hr_rigidity.exceptions import DomainError, ManifoldError, ValidationError

logger = logging.getLogger("hr-rigidity")

# Margen de redondeo admitido en los argumentos de arccos/arccosh
CLAMP_MARGIN = 1e-12

def ambient_dimension(c: float, n: int) -> int:
    """Número de coordenadas del modelo para hipersuperficies de dimensión n."""
    return n + 1 if c == 0 else n + 2

def metric_signature(c: float, dim: int) -> NDArray[np.float64]:
    """Diagonal de la métrica del espacio ambiente lineal (-,+,...,+ si c < 0)."""
    eta = np.ones(dim)
    if c < 0:
        eta[0] = -1.0
    return eta

def model_origin(c: float, n: int) -> NDArray[np.float64]:
    """Punto base del modelo: el origen de R^{n+1} o el polo (1/√|c|, 0, ..., 0)."""
    origin = np.zeros(ambient_dimension(c, n))
    if c != 0:
        origin[0] = 1.0 / math.sqrt(abs(c))
    return origin

def model_inner(c: float, u: Any, v: Any) -> Any:
    """
    Producto interno del modelo: euclídeo para c >= 0, de Minkowski para c < 0.

    Args:
        c: Curvatura seccional
        u: Primer vector (array o jet)
        v: Segundo vector (array o jet)

    Returns:
        Producto interno (float o jet escalar)

    Raises:
        ValidationError: Si las dimensiones no coinciden
    """
    if len(u) != len(v):
        raise ValidationError(f"Dimensiones distintas en el producto interno: {len(u)} y {len(v)}")
    eta = metric_signature(c, len(u))
    if jets.is_jet(u) or jets.is_jet(v):
        if not jets.is_jet(u):
            u, v = v, u
        return (u * v * eta).sum()
    return float(np.sum(eta * np.asarray(u, dtype=np.float64) * np.asarray(v, dtype=np.float64)))

def check_on_model(c: float, p: Any, tol: float = 1e-12) -> bool:
    """Comprueba que p pertenezca al modelo (y a la hoja superior si c < 0)."""
    p = np.asarray(jets.value_of(p), dtype=np.float64)
    if c == 0:
        return bool(np.all(np.isfinite(p)))
    radius2 = 1.0 / c
    if abs(model_inner(c, p, p) - radius2) > tol * max(1.0, abs(radius2)):
        return False
    if c < 0 and p[0] <= 0:
        return False
    return True

def _require_on_model(c: float, p: Any, tol: float = 1e-10) -> None:
    if not check_on_model(c, p, tol):
        raise ManifoldError(f"El punto {np.asarray(jets.value_of(p))} no pertenece al modelo de curvatura {c}")

def project_to_model(c: float, p: Any) -> NDArray[np.float64]:
    """
    Normaliza un vector del espacio ambiente lineal sobre el modelo.

    Raises:
        ManifoldError: Si p no se puede normalizar (nulo, o no temporal para c < 0)
    """
    p = np.asarray(p, dtype=np.float64)
    if c == 0:
        return p.copy()
    norm2 = model_inner(c, p, p)
    if c * norm2 <= 0:
        raise ManifoldError(f"No se puede normalizar {p} sobre el modelo de curvatura {c}")
    q = p / math.sqrt(c * norm2)
    if c < 0 and q[0] < 0:
        q = -q
    return q

def tangent_projection(c: float, p: Any, v: Any) -> NDArray[np.float64]:
    """Componente de v tangente al modelo en p."""
    v = np.asarray(v, dtype=np.float64)
    if c == 0:
        return v.copy()
    p = np.asarray(p, dtype=np.float64)
    return v - c * model_inner(c, v, p) * p

def check_tangent(c: float, p: Any, v: Any, tol: float = 1e-10) -> bool:
    """Comprueba ⟨p, v⟩ = 0 (relativo a |p||v|) para c ≠ 0."""
    if c == 0:
        return True
    p = np.asarray(p, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    scale = 1.0 + float(np.linalg.norm(p) * np.linalg.norm(v))
    return abs(model_inner(c, p, v)) <= tol * scale

def distance(c: float, p: Any, q: Any) -> Any:
    """
    Distancia geodésica en el modelo.

    Los argumentos de arccos/arccosh se recortan al intervalo válido solo si se salen
    como mucho 1e-12; desviaciones mayores son errores.

    Args:
        c: Curvatura seccional
        p: Punto del modelo (array o jet)
        q: Punto del modelo

    Returns:
        d(p, q) >= 0

    Raises:
        ManifoldError: Si algún punto no pertenece al modelo
    """
    _require_on_model(c, p)
    _require_on_model(c, q)
    if c == 0:
        diff = p - q if jets.is_jet(p) else np.asarray(p, dtype=np.float64) - np.asarray(q, dtype=np.float64)
        if jets.is_jet(diff):
            return jets.sqrt((diff * diff).sum())
        return float(np.linalg.norm(diff))

    arg = c * model_inner(c, p, q)
    if jets.is_jet(arg):
        if c > 0:
            return jets.arccos(arg) / math.sqrt(c)
        return jets.arccosh(arg) / math.sqrt(-c)

    if c > 0:
        if abs(arg) > 1.0 + CLAMP_MARGIN:
            raise ManifoldError(f"Argumento de arccos fuera de rango: {arg}")
        return float(np.arccos(np.clip(arg, -1.0, 1.0)) / math.sqrt(c))
    if arg < 1.0 - CLAMP_MARGIN:
        raise ManifoldError(f"Argumento de arccosh fuera de rango: {arg}")
    return float(np.arccosh(max(arg, 1.0)) / math.sqrt(-c))

def sphere_curvature(c: float, t: float) -> float:
    """
    Curvatura μ_c(t) de la esfera geodésica de radio t.

    μ_c(t) = √c cot(√c t) si c > 0, 1/t si c = 0, √-c coth(√-c t) si c < 0.

    Raises:
        DomainError: Si t <= 0 o t >= π/√c para c > 0
    """
    if t <= 0:
        raise DomainError(f"El radio t debe ser positivo, se recibió {t}")
    if c > 0:
        k = math.sqrt(c)
        if t >= math.pi / k:
            raise DomainError(f"t = {t} fuera del dominio (0, π/√c) para c = {c}")
        return k / math.tan(k * t)
    if c == 0:
        return 1.0 / t
    k = math.sqrt(-c)
    return k / math.tanh(k * t)

def alpha_c(c: float) -> float:
    """Cota de elipticidad: 0 si c >= 0 y √-c si c < 0."""
    return 0.0 if c >= 0 else math.sqrt(-c)

def distance_gradient(c: float, q0: Any, p: Any) -> NDArray[np.float64]:
    """
    Gradiente unitario de r = d(·, q0) en p, como vector tangente al modelo.

    Raises:
        DomainError: Si p = q0
    """
    q0 = np.asarray(q0, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    if c == 0:
        w = p - q0
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            raise DomainError("La distancia no es diferenciable en p = q0")
        return w / norm
    w = q0 - c * model_inner(c, q0, p) * p
    norm2 = model_inner(c, w, w)
    if norm2 <= 0.0 or distance(c, p, q0) == 0.0:
        raise DomainError("La distancia no es diferenciable en p = q0")
    return -w / math.sqrt(norm2)

def distance_hessian_form(c: float, q0: Any, p: Any, x: Any, y: Any) -> float:
    """Hess r en p polarizada: μ_c(r)·(⟨X, Y⟩ - ⟨X, ∇r⟩⟨Y, ∇r⟩)."""
    grad = distance_gradient(c, q0, p)
    mu = sphere_curvature(c, distance(c, q0, p))
    return mu * (model_inner(c, x, y) - model_inner(c, x, grad) * model_inner(c, y, grad))

def distance_hessian(c: float, q0: Any, p: Any, v: Any) -> float:
    """
    Hessiana de r = d(·, q0) en p aplicada a (v, v).

    v se separa en la parte radial, paralela a ∇r, y la parte v_2 tangente a la esfera
    geodésica; el resultado es μ_c(d(q0, p))·|v_2|².

    Raises:
        DomainError: Si p = q0
        ManifoldError: Si v no es tangente al modelo en p
    """
    if not check_tangent(c, p, v):
        raise ManifoldError(f"El vector {v} no es tangente al modelo en {p}")
    grad = distance_gradient(c, q0, p)
    radial = model_inner(c, v, grad)
    tangential2 = max(model_inner(c, v, v) - radial * radial, 0.0)
    return sphere_curvature(c, distance(c, q0, p)) * tangential2

def exp_map(c: float, p: Any, v: Any, t: float = 1.0) -> NDArray[np.float64]:
    """Punto γ(t) de la geodésica con γ(0) = p y γ'(0) = v."""
    p = np.asarray(p, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if c == 0:
        return p + t * v
    speed2 = model_inner(c, v, v)
    if speed2 <= 0.0:
        return p.copy()
    speed = math.sqrt(speed2)
    k = math.sqrt(abs(c))
    if c > 0:
        return math.cos(k * speed * t) * p + math.sin(k * speed * t) / (k * speed) * v
    return math.cosh(k * speed * t) * p + math.sinh(k * speed * t) / (k * speed) * v

def geodesic_point(c: float, t: Any, omega: Any) -> Any:
    """
    Punto a distancia geodésica t del origen del modelo en la dirección unitaria ω ∈ S^n.

    Args:
        c: Curvatura seccional
        t: Distancia (float o jet escalar)
        omega: Dirección en R^{n+1} (array o jet vectorial)

    Returns:
        Punto del modelo (array o jet)
    """
    if c == 0:
        return omega * t
    k = math.sqrt(abs(c))
    if c > 0:
        head = jets.cos(t * k) / k
        radial = jets.sin(t * k) / k
    else:
        head = jets.cosh(t * k) / k
        radial = jets.sinh(t * k) / k
    tail = omega * radial
    return jets.stack([head] + [tail[i] for i in range(len(omega))])
