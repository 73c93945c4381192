"""
Cartas de inmersión f: U ⊂ R^n → Q^{n+1}_c para las familias incorporadas.

Cada parametrización se escribe una sola vez con las funciones de `jets`, de modo que la
misma carta se evalúa con floats o con jets hasta orden 4.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from itertools import product as cartesian
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

from hr_rigidity import jets
from hr_rigidity.exceptions import ValidationError
from hr_rigidity.spaceform import geodesic_point, model_origin
from hr_rigidity.validation import suggest_names

logger = logging.getLogger("hr-rigidity")

# Márgenes de los ángulos polares para evitar los polos de la carta
POLAR_MARGIN = 0.2

@dataclass(frozen=True)
class ImmersionChart:
    """
    Inmersión parametrizada de una caja U en un modelo de Q^{n+1}_c.

    Attributes:
        family: Nombre de la familia incorporada
        c: Curvatura del espacio ambiente
        n: Dimensión de la hipersuperficie
        params: Parámetros efectivos de la familia
        lower: Esquina inferior de U
        upper: Esquina superior de U
        mapping: u ↦ f(u), evaluable con floats o jets
        orientation: +1 o -1 sobre la normal de referencia
        complete: False para parches truncados de superficies no compactas
        convex: True si la familia debe tener un punto elíptico
    """
    family: str
    c: float
    n: int
    params: Tuple[Tuple[str, float], ...]
    lower: Tuple[float, ...]
    upper: Tuple[float, ...]
    mapping: Callable[[Any], Any] = field(compare=False)
    orientation: int = 1
    complete: bool = True
    convex: bool = True

    @property
    def tag(self) -> str:
        values = ",".join(f"{key}={value:g}" for key, value in self.params)
        return f"{self.family}({values})"

    @property
    def center(self) -> NDArray[np.float64]:
        """Centro respecto al que se mide la acotación de la imagen."""
        return model_origin(self.c, self.n)

    def param(self, name: str) -> float:
        return dict(self.params)[name]

    def evaluate(self, u: Any) -> NDArray[np.float64]:
        return np.asarray(self.mapping(np.asarray(u, dtype=np.float64)), dtype=np.float64)

    def jet(self, u: Any, order: int) -> jets.JetValue:
        """f alrededor de u como jet de orden `order`."""
        return self.mapping(jets.JetValue.variables(u, order))

    def base_point(self) -> NDArray[np.float64]:
        return 0.5 * (np.array(self.lower) + np.array(self.upper))

    def contains(self, u: Any) -> bool:
        u = np.asarray(u, dtype=np.float64)
        return bool(np.all(u >= np.array(self.lower)) and np.all(u <= np.array(self.upper)))

    def grid(self, resolution: Sequence[int]) -> NDArray[np.float64]:
        """
        Centros de celda de una malla regular sobre U, en orden lexicográfico.

        Args:
            resolution: Número de celdas por eje (una por eje, o un único valor para todos)
        """
        if len(resolution) == 1:
            resolution = list(resolution) * self.n
        if len(resolution) != self.n:
            raise ValidationError(f"Se esperaban {self.n} resoluciones de malla, se recibieron {len(resolution)}")
        axes = [
            lo + (np.arange(res) + 0.5) / res * (hi - lo)
            for lo, hi, res in zip(self.lower, self.upper, resolution)
        ]
        return np.array(list(cartesian(*axes)), dtype=np.float64)

    def with_orientation(self, sign: int) -> "ImmersionChart":
        return replace(self, orientation=int(sign))

def hyperspherical(u: Any) -> Any:
    """
    Dirección ω ∈ S^n a partir de n - 1 ángulos polares y un ángulo azimutal.

    ω = (cos θ_1, sin θ_1 cos θ_2, ..., sin θ_1...sin θ_{n-1} cos φ, sin θ_1...sin θ_{n-1} sin φ)
    """
    n = len(u)
    parts = []
    running: Any = 1.0
    for k in range(n - 1):
        parts.append(running * jets.cos(u[k]))
        running = running * jets.sin(u[k])
    parts.append(running * jets.cos(u[n - 1]))
    parts.append(running * jets.sin(u[n - 1]))
    return jets.stack(parts)

def _sphere_box(n: int) -> Tuple[Tuple[float, ...], Tuple[float, ...]]:
    lower = (POLAR_MARGIN,) * (n - 1) + (0.0,)
    upper = (math.pi - POLAR_MARGIN,) * (n - 1) + (2 * math.pi,)
    return lower, upper

def _check_radius(c: float, radius: float, label: str) -> None:
    if radius <= 0:
        raise ValidationError(f"{label} debe ser positivo, se recibió {radius}")
    if c > 0 and radius >= math.pi / math.sqrt(c):
        raise ValidationError(f"{label} = {radius} no cabe en la esfera de curvatura {c} (máximo π/√c)")

def _sphere(c: float, n: int, p: Dict[str, float]) -> ImmersionChart:
    t = p["t"]
    _check_radius(c, t, "t")
    lower, upper = _sphere_box(n)

    def mapping(u: Any) -> Any:
        return geodesic_point(c, t, hyperspherical(u))

    return ImmersionChart("sphere", c, n, tuple(sorted(p.items())), lower, upper, mapping)

def _bump(c: float, n: int, p: Dict[str, float]) -> ImmersionChart:
    t, eps, kappa = p["t"], p["eps"], p["kappa"]
    _check_radius(c, t + abs(eps), "t + eps")
    lower, upper = _sphere_box(n)
    # pesos distintos por eje: el bulto no es de revolución y las curvaturas principales se separan
    weights = (np.arange(n + 1) + 1.0) / (n + 1)
    peak = hyperspherical(0.5 * (np.array(lower) + np.array(upper)))

    def mapping(u: Any) -> Any:
        omega = hyperspherical(u)
        offset = omega - peak
        radius = t + eps * jets.exp((offset * offset * weights).sum() * (-kappa))
        return geodesic_point(c, radius, omega)

    return ImmersionChart("bump", c, n, tuple(sorted(p.items())), lower, upper, mapping)

def _ellipsoid(c: float, n: int, p: Dict[str, float]) -> ImmersionChart:
    names = ["a", "b", "c", "d"][: n + 1]
    axes = np.array([p[name] for name in names])
    if np.any(axes <= 0):
        raise ValidationError(f"Los semiejes del elipsoide deben ser positivos: {axes}")
    lower, upper = _sphere_box(n)
    used = {name: p[name] for name in names}

    def mapping(u: Any) -> Any:
        return hyperspherical(u) * axes

    return ImmersionChart("ellipsoid", c, n, tuple(sorted(used.items())), lower, upper, mapping)

def _torus(c: float, n: int, p: Dict[str, float]) -> ImmersionChart:
    big, small = p["R"], p["r"]
    if not 0 < small < big:
        raise ValidationError(f"El toro requiere 0 < r < R, se recibió R={big}, r={small}")

    def mapping(u: Any) -> Any:
        v, phi = u[0], u[1]
        ring = jets.cos(v) * small + big
        return jets.stack([ring * jets.cos(phi), ring * jets.sin(phi), jets.sin(v) * small])

    return ImmersionChart(
        "torus", c, n, tuple(sorted(p.items())), (0.0, 0.0), (2 * math.pi, 2 * math.pi), mapping,
        convex=False
    )

def _cylinder(c: float, n: int, p: Dict[str, float]) -> ImmersionChart:
    radius, half = p["a"], p["L"]
    if radius <= 0 or half <= 0:
        raise ValidationError(f"El cilindro requiere a > 0 y L > 0, se recibió a={radius}, L={half}")

    def mapping(u: Any) -> Any:
        parts = [jets.cos(u[0]) * radius, jets.sin(u[0]) * radius]
        parts.extend(u[k] for k in range(1, n))
        return jets.stack(parts)

    return ImmersionChart(
        "cylinder", c, n, tuple(sorted(p.items())), (0.0,) + (-half,) * (n - 1),
        (2 * math.pi,) + (half,) * (n - 1), mapping, complete=False, convex=False
    )

@dataclass(frozen=True)
class FamilySpec:
    """Descripción de una familia incorporada: constructor, parámetros y dominio admitido."""
    builder: Callable[[float, int, Dict[str, float]], ImmersionChart]
    defaults: Dict[str, float]
    dims: Tuple[int, ...]
    flat_only: bool
    default_n: int = 2

FAMILIES: Dict[str, FamilySpec] = {
    "sphere": FamilySpec(_sphere, {"t": 1.0}, (2, 3, 4), False),
    "bump": FamilySpec(_bump, {"t": 1.0, "eps": 0.05, "kappa": 1.0}, (2, 3), False),
    "ellipsoid": FamilySpec(_ellipsoid, {"a": 1.0, "b": 1.1, "c": 1.25, "d": 1.4}, (2, 3), True),
    "torus": FamilySpec(_torus, {"R": 2.0, "r": 1.0}, (2,), True),
    "cylinder": FamilySpec(_cylinder, {"a": 1.0, "L": 1.0}, (2, 3), True),
}

def check_family(family: str, params: Optional[Dict[str, float]] = None, c: float = 0.0, n: Optional[int] = None) -> int:
    """
    Valida familia, parámetros, curvatura y dimensión sin construir la carta.

    Returns:
        La dimensión n efectiva

    Raises:
        ValidationError: Con sugerencias si la familia no existe
    """
    if family not in FAMILIES:
        options = ", ".join(suggest_names(family, FAMILIES))
        raise ValidationError(f"Familia desconocida '{family}'. Opciones: {options}")
    family_spec = FAMILIES[family]
    unknown = sorted(set(params or {}) - set(family_spec.defaults))
    if unknown:
        raise ValidationError(
            f"Parámetros desconocidos para '{family}': {', '.join(unknown)}. "
            f"Admitidos: {', '.join(sorted(family_spec.defaults))}"
        )
    if family_spec.flat_only and c != 0:
        raise ValidationError(f"La familia '{family}' solo está definida en R^(n+1) (c = 0), se recibió c = {c}")
    dim = family_spec.default_n if n is None else int(n)
    if dim not in family_spec.dims:
        raise ValidationError(f"La familia '{family}' admite n en {family_spec.dims}, se recibió n = {dim}")
    return dim

def make_chart(family: str, params: Optional[Dict[str, float]] = None, c: float = 0.0, n: Optional[int] = None) -> ImmersionChart:
    """
    Construye la carta de una familia incorporada.

    Args:
        family: sphere, bump, ellipsoid, torus o cylinder
        params: Parámetros que sustituyen a los de por defecto
        c: Curvatura del espacio ambiente
        n: Dimensión de la hipersuperficie (None para la de la familia)

    Returns:
        ImmersionChart lista para evaluar

    Raises:
        ValidationError: Si la familia, los parámetros, c o n no son válidos
    """
    dim = check_family(family, params, c, n)
    family_spec = FAMILIES[family]
    merged = dict(family_spec.defaults)
    merged.update({key: float(value) for key, value in (params or {}).items()})
    chart = family_spec.builder(float(c), dim, merged)
    logger.debug(f"Carta construida: {chart.tag}, c={c}, n={dim}")
    return chart

def family_names() -> List[str]:
    return sorted(FAMILIES)
