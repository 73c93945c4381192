"""
Aritmética de jets: series de Taylor multivariadas truncadas a un orden total fijo.

Un JetValue guarda, para un valor escalar, vectorial o matricial que depende de las
coordenadas de carta u_1..u_n, los coeficientes de Taylor c[α] = ∂^α f / α! para
|α| <= orden. El eje de coeficientes es siempre el último del array. Los monomios se
ordenan por grado total y, dentro de cada grado, en orden lexicográfico inverso, de modo
que la base de un orden menor es un prefijo de la base completa y truncar es recortar.

Las funciones elementales de este módulo aceptan floats, arrays o jets, así que cada
parametrización se escribe una sola vez.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import product as cartesian
from typing import Any, Callable, Dict, Iterator, List, Sequence, Tuple, Union

import numpy as np
from numpy.typing import NDArray
from scipy.special import binom, factorial

from hr_rigidity.exceptions import JetError

logger = logging.getLogger("hr-rigidity")

@dataclass(frozen=True, eq=False)
class JetBasis:
    """Tablas precalculadas de una base de monomios (nvars, orden)."""
    nvars: int
    order: int
    exponents: NDArray[np.int64]
    factorials: NDArray[np.float64]
    lookup: Dict[Tuple[int, ...], int]
    pair_left: NDArray[np.int64]
    pair_right: NDArray[np.int64]
    scatter: NDArray[np.float64]
    diff_source: NDArray[np.int64]
    diff_factor: NDArray[np.float64]

    @property
    def size(self) -> int:
        return self.exponents.shape[0]

def _monomials(degree: int, nvars: int) -> Iterator[Tuple[int, ...]]:
    if nvars == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in _monomials(degree - first, nvars - 1):
            yield (first,) + rest

@lru_cache(maxsize=None)
def jet_basis(nvars: int, order: int) -> JetBasis:
    """
    Construye (y cachea) la base de monomios de grado total <= order en nvars variables.

    Args:
        nvars: Número de coordenadas de carta
        order: Orden total de truncamiento

    Returns:
        JetBasis con la tabla de pares para el producto truncado y las tablas de derivación
    """
    if nvars < 1 or order < 0:
        raise JetError(f"Base de jets inválida: nvars={nvars}, orden={order}")

    exponents = [m for d in range(order + 1) for m in _monomials(d, nvars)]
    lookup = {m: k for k, m in enumerate(exponents)}
    exps = np.array(exponents, dtype=np.int64).reshape(len(exponents), nvars)
    facts = np.prod(factorial(exps), axis=1).astype(np.float64)

    left, right, target = [], [], []
    for i, a in enumerate(exponents):
        for j, b in enumerate(exponents):
            total = tuple(x + y for x, y in zip(a, b))
            if sum(total) <= order:
                left.append(i)
                right.append(j)
                target.append(lookup[total])
    scatter = np.zeros((len(target), len(exponents)))
    scatter[np.arange(len(target)), target] = 1.0

    lower = [m for m in exponents if sum(m) <= order - 1]
    source = np.zeros((nvars, len(lower)), dtype=np.int64)
    factor = np.zeros((nvars, len(lower)))
    for i in range(nvars):
        for k, m in enumerate(lower):
            raised = tuple(v + (1 if axis == i else 0) for axis, v in enumerate(m))
            source[i, k] = lookup[raised]
            factor[i, k] = m[i] + 1

    return JetBasis(
        nvars=nvars,
        order=order,
        exponents=exps,
        factorials=facts,
        lookup=lookup,
        pair_left=np.array(left, dtype=np.int64),
        pair_right=np.array(right, dtype=np.int64),
        scatter=scatter,
        diff_source=source,
        diff_factor=factor,
    )

class JetValue:
    """
    Valor (escalar, vector o matriz) junto con sus derivadas parciales hasta un orden total.

    Los operadores +, -, *, /, ** y @ siguen las reglas de numpy sobre las dimensiones de
    valor; al combinar jets de órdenes distintos el resultado tiene el orden menor.
    """

    __array_ufunc__ = None

    def __init__(self, coeffs: Any, basis: JetBasis):
        self.coeffs = np.asarray(coeffs, dtype=np.float64)
        self.basis = basis
        if self.coeffs.shape[-1:] != (basis.size,):
            raise JetError(
                f"Coeficientes de forma {self.coeffs.shape} incompatibles con una base de tamaño {basis.size}"
            )

    @classmethod
    def variables(cls, point: Any, order: int) -> "JetValue":
        """Jet vectorial de las coordenadas u_i alrededor de `point`."""
        point = np.asarray(point, dtype=np.float64)
        nvars = point.shape[0]
        basis = jet_basis(nvars, order)
        coeffs = np.zeros((nvars, basis.size))
        coeffs[:, 0] = point
        if order >= 1:
            coeffs[np.arange(nvars), 1 + np.arange(nvars)] = 1.0
        return cls(coeffs, basis)

    @classmethod
    def constant(cls, value: Any, nvars: int, order: int) -> "JetValue":
        value = np.asarray(value, dtype=np.float64)
        basis = jet_basis(nvars, order)
        coeffs = np.zeros(value.shape + (basis.size,))
        coeffs[..., 0] = value
        return cls(coeffs, basis)

    @classmethod
    def stack(cls, items: Sequence[Any], axis: int = 0) -> "JetValue":
        """Apila jets (y constantes) a lo largo de un eje de valor nuevo."""
        jets = [item for item in items if isinstance(item, JetValue)]
        if not jets:
            raise JetError("stack necesita al menos un JetValue")
        nvars = jets[0].nvars
        order = min(jet.order for jet in jets)
        lifted = [
            item.truncate(order) if isinstance(item, JetValue) else cls.constant(item, nvars, order)
            for item in items
        ]
        if axis < 0:
            raise JetError("stack solo admite ejes no negativos")
        return cls(np.stack([jet.coeffs for jet in lifted], axis=axis), jet_basis(nvars, order))

    @property
    def order(self) -> int:
        return self.basis.order

    @property
    def nvars(self) -> int:
        return self.basis.nvars

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.coeffs.shape[:-1]

    @property
    def ndim(self) -> int:
        return self.coeffs.ndim - 1

    @property
    def value(self) -> Any:
        v = self.coeffs[..., 0]
        return float(v) if v.ndim == 0 else v.copy()

    def __repr__(self) -> str:
        return f"JetValue(shape={self.shape}, nvars={self.nvars}, order={self.order})"

    def __len__(self) -> int:
        if not self.shape:
            raise TypeError("len() de un jet escalar")
        return self.shape[0]

    def __getitem__(self, index: Any) -> "JetValue":
        if not isinstance(index, tuple):
            index = (index,)
        if len(index) > self.ndim or any(item is Ellipsis for item in index):
            raise JetError(f"Índice {index!r} inválido para un jet de forma {self.shape}")
        return JetValue(self.coeffs[index], self.basis)

    # derivadas

    def truncate(self, order: int) -> "JetValue":
        if order > self.order:
            raise JetError(f"No se puede elevar un jet de orden {self.order} a orden {order}")
        if order == self.order:
            return self
        basis = jet_basis(self.nvars, order)
        return JetValue(self.coeffs[..., : basis.size], basis)

    def diff(self, i: int) -> "JetValue":
        """Derivada parcial ∂/∂u_i; el resultado tiene un orden menos."""
        if self.order < 1:
            raise JetError("Orden de jet insuficiente para derivar")
        basis = jet_basis(self.nvars, self.order - 1)
        coeffs = self.coeffs[..., self.basis.diff_source[i]] * self.basis.diff_factor[i]
        return JetValue(coeffs, basis)

    def partial(self, alpha: Sequence[int]) -> Any:
        key = tuple(int(a) for a in alpha)
        if sum(key) > self.order:
            raise JetError(f"Derivada {key} por encima del orden {self.order}")
        k = self.basis.lookup[key]
        v = self.coeffs[..., k] * self.basis.factorials[k]
        return float(v) if v.ndim == 0 else v

    def gradient(self) -> NDArray[np.float64]:
        """Primeras derivadas; el eje de coordenadas queda al final."""
        if self.order < 1:
            raise JetError("Orden de jet insuficiente para el gradiente")
        return self.coeffs[..., 1: 1 + self.nvars].copy()

    def hessian(self) -> NDArray[np.float64]:
        """Segundas derivadas; los dos ejes de coordenadas quedan al final."""
        if self.order < 2:
            raise JetError("Orden de jet insuficiente para la hessiana")
        n = self.nvars
        index = np.zeros((n, n), dtype=np.int64)
        scale = np.ones((n, n))
        for i, j in cartesian(range(n), range(n)):
            exps = [0] * n
            exps[i] += 1
            exps[j] += 1
            index[i, j] = self.basis.lookup[tuple(exps)]
            if i == j:
                scale[i, j] = 2.0
        return self.coeffs[..., index] * scale

    # aritmética

    def _align(self, other: "JetValue") -> Tuple["JetValue", "JetValue"]:
        if other.nvars != self.nvars:
            raise JetError(f"Jets con distinto número de variables: {self.nvars} y {other.nvars}")
        order = min(self.order, other.order)
        return self.truncate(order), other.truncate(order)

    def _lift(self, value: Any) -> "JetValue":
        return JetValue.constant(value, self.nvars, self.order)

    def __add__(self, other: Any) -> "JetValue":
        if isinstance(other, JetValue):
            a, b = self._align(other)
            return JetValue(a.coeffs + b.coeffs, a.basis)
        const = np.asarray(other, dtype=np.float64)
        shape = np.broadcast_shapes(self.shape, const.shape) + (self.basis.size,)
        coeffs = np.broadcast_to(self.coeffs, shape).copy()
        coeffs[..., 0] += const
        return JetValue(coeffs, self.basis)

    __radd__ = __add__

    def __neg__(self) -> "JetValue":
        return JetValue(-self.coeffs, self.basis)

    def __sub__(self, other: Any) -> "JetValue":
        return self + (-other)

    def __rsub__(self, other: Any) -> "JetValue":
        return (-self) + other

    def __mul__(self, other: Any) -> "JetValue":
        if isinstance(other, JetValue):
            a, b = self._align(other)
            basis = a.basis
            coeffs = (a.coeffs[..., basis.pair_left] * b.coeffs[..., basis.pair_right]) @ basis.scatter
            return JetValue(coeffs, basis)
        const = np.asarray(other, dtype=np.float64)
        return JetValue(self.coeffs * const[..., None], self.basis)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "JetValue":
        if isinstance(other, JetValue):
            return self * other.reciprocal()
        return self * (1.0 / np.asarray(other, dtype=np.float64))

    def __rtruediv__(self, other: Any) -> "JetValue":
        return self.reciprocal() * other

    def __pow__(self, exponent: Any) -> "JetValue":
        p = float(exponent)
        if p.is_integer() and 0 <= p <= 2 * max(self.order, 1):
            result = self._lift(np.ones(self.shape))
            for _ in range(int(p)):
                result = result * self
            return result
        if p.is_integer() and p < 0:
            return self.reciprocal() ** (-p)
        return self._compose(_power_series(self.value, p, self.order))

    def __matmul__(self, other: Any) -> "JetValue":
        return einsum(_matmul_spec(self.ndim, np.ndim(other) if not isinstance(other, JetValue) else other.ndim), self, other)

    def __rmatmul__(self, other: Any) -> "JetValue":
        return einsum(_matmul_spec(np.ndim(other), self.ndim), other, self)

    def reciprocal(self) -> "JetValue":
        return self._compose(_power_series(self.value, -1.0, self.order))

    # reducciones y forma

    def sum(self, axis: Union[int, None] = None) -> "JetValue":
        if axis is None:
            return JetValue(self.coeffs.reshape(-1, self.basis.size).sum(axis=0), self.basis)
        if axis < 0 or axis >= self.ndim:
            raise JetError(f"Eje {axis} inválido para un jet de forma {self.shape}")
        return JetValue(self.coeffs.sum(axis=axis), self.basis)

    def trace(self) -> "JetValue":
        if self.ndim != 2:
            raise JetError("trace requiere un jet matricial")
        return JetValue(np.trace(self.coeffs, axis1=0, axis2=1), self.basis)

    def transpose(self, *axes: int) -> "JetValue":
        if not axes:
            axes = tuple(range(self.ndim))[::-1]
        return JetValue(self.coeffs.transpose(*axes, self.ndim), self.basis)

    @property
    def T(self) -> "JetValue":
        return self.transpose()

    def inv(self) -> "JetValue":
        """
        Inversa de un jet matricial por la serie de Neumann Σ_k (-A0⁻¹N)^k A0⁻¹.

        N no tiene término constante, así que la serie termina en k = orden.
        """
        if self.ndim != 2 or self.shape[0] != self.shape[1]:
            raise JetError(f"inv requiere un jet matricial cuadrado, forma {self.shape}")
        base = self.value
        try:
            base_inv = np.linalg.inv(base)
        except np.linalg.LinAlgError as e:
            raise JetError(f"Matriz singular en el valor del jet: {str(e)}")
        nilpotent = self - base
        step = -(base_inv @ nilpotent)
        term = self._lift(base_inv)
        result = term
        for _ in range(self.order):
            term = step @ term
            result = result + term
        return result

    def _compose(self, series: Sequence[Any]) -> "JetValue":
        """
        Evalúa Σ_k series[k]·h^k con h = self - valor, donde series[k] = f^(k)(valor)/k!.
        """
        shift = self - self.value
        if self.order == 0:
            return self._lift(np.broadcast_to(series[0], self.shape))
        result = shift * series[self.order] + series[self.order - 1]
        for k in range(self.order - 2, -1, -1):
            result = result * shift + series[k]
        return result

def _matmul_spec(left_ndim: int, right_ndim: int) -> str:
    specs = {
        (2, 2): "ij,jk->ik",
        (2, 1): "ij,j->i",
        (1, 2): "i,ij->j",
        (1, 1): "i,i->",
    }
    if (left_ndim, right_ndim) not in specs:
        raise JetError(f"Producto matricial no soportado entre dimensiones {left_ndim} y {right_ndim}")
    return specs[(left_ndim, right_ndim)]

def einsum(spec: str, a: Any, b: Any) -> JetValue:
    """
    Contracción de Einstein entre dos operandos, al menos uno de ellos jet.

    `spec` debe ser explícito ("ij,jk->ik") y no puede usar la letra z, reservada para
    el eje de coeficientes.
    """
    if "->" not in spec or "z" in spec:
        raise JetError(f"Especificación einsum no soportada: {spec!r}")
    inputs, output = spec.split("->")
    left, right = inputs.split(",")

    if isinstance(a, JetValue) and isinstance(b, JetValue):
        a, b = a._align(b)
        basis = a.basis
        terms = np.einsum(
            f"{left}z,{right}z->{output}z",
            a.coeffs[..., basis.pair_left],
            b.coeffs[..., basis.pair_right],
        )
        return JetValue(terms @ basis.scatter, basis)
    if isinstance(a, JetValue):
        return JetValue(np.einsum(f"{left}z,{right}->{output}z", a.coeffs, np.asarray(b, dtype=np.float64)), a.basis)
    if isinstance(b, JetValue):
        return JetValue(np.einsum(f"{left},{right}z->{output}z", np.asarray(a, dtype=np.float64), b.coeffs), b.basis)
    raise JetError("einsum necesita al menos un JetValue")

def _factorials(order: int) -> NDArray[np.float64]:
    return factorial(np.arange(order + 1)).astype(np.float64)

def _power_series(a: Any, p: float, order: int) -> List[Any]:
    a = np.asarray(a, dtype=np.float64)
    if not float(p).is_integer() and np.any(a <= 0):
        raise JetError(f"Potencia {p} de un jet con valor no positivo")
    if p < 0 and np.any(a == 0):
        raise JetError(f"Potencia {p} de un jet con valor nulo")
    return [binom(p, k) * a ** (p - k) for k in range(order + 1)]

def _sin_series(a: Any, order: int) -> List[Any]:
    facts = _factorials(order)
    return [np.sin(a + k * np.pi / 2) / facts[k] for k in range(order + 1)]

def _cos_series(a: Any, order: int) -> List[Any]:
    facts = _factorials(order)
    return [np.cos(a + k * np.pi / 2) / facts[k] for k in range(order + 1)]

def _exp_series(a: Any, order: int) -> List[Any]:
    facts = _factorials(order)
    return [np.exp(a) / facts[k] for k in range(order + 1)]

def _log_series(a: Any, order: int) -> List[Any]:
    a = np.asarray(a, dtype=np.float64)
    if np.any(a <= 0):
        raise JetError("log de un jet con valor no positivo")
    return [np.log(a)] + [((-1.0) ** (k + 1)) / (k * a ** k) for k in range(1, order + 1)]

def _sinh_series(a: Any, order: int) -> List[Any]:
    facts = _factorials(order)
    return [(np.sinh(a) if k % 2 == 0 else np.cosh(a)) / facts[k] for k in range(order + 1)]

def _cosh_series(a: Any, order: int) -> List[Any]:
    facts = _factorials(order)
    return [(np.cosh(a) if k % 2 == 0 else np.sinh(a)) / facts[k] for k in range(order + 1)]

def _integrated_series(a: Any, head: Any, integrand: Callable[[JetValue], JetValue], order: int) -> List[Any]:
    """
    Serie de una función cuya derivada es `integrand`: se desarrolla la derivada en un jet
    univariado de orden order - 1 y se integra término a término.
    """
    a = np.asarray(a, dtype=np.float64)
    if order == 0:
        return [head]
    s = JetValue.variables(np.zeros(1), order - 1)[0]
    derivative = integrand(s + a)
    coeffs = np.broadcast_to(derivative.coeffs, a.shape + (order,))
    return [head] + [coeffs[..., k - 1] / k for k in range(1, order + 1)]

def _arccos_series(a: Any, order: int) -> List[Any]:
    a = np.asarray(a, dtype=np.float64)
    if np.any(np.abs(a) >= 1.0):
        raise JetError("arccos de un jet con valor fuera de (-1, 1)")
    return _integrated_series(a, np.arccos(a), lambda y: -((1.0 - y * y) ** -0.5), order)

def _arccosh_series(a: Any, order: int) -> List[Any]:
    a = np.asarray(a, dtype=np.float64)
    if np.any(a <= 1.0):
        raise JetError("arccosh de un jet con valor <= 1")
    return _integrated_series(a, np.arccosh(a), lambda y: (y * y - 1.0) ** -0.5, order)

def is_jet(x: Any) -> bool:
    return isinstance(x, JetValue)

def sin(x: Any) -> Any:
    return x._compose(_sin_series(x.value, x.order)) if is_jet(x) else np.sin(x)

def cos(x: Any) -> Any:
    return x._compose(_cos_series(x.value, x.order)) if is_jet(x) else np.cos(x)

def exp(x: Any) -> Any:
    return x._compose(_exp_series(x.value, x.order)) if is_jet(x) else np.exp(x)

def log(x: Any) -> Any:
    return x._compose(_log_series(x.value, x.order)) if is_jet(x) else np.log(x)

def sqrt(x: Any) -> Any:
    return x ** 0.5 if is_jet(x) else np.sqrt(x)

def sinh(x: Any) -> Any:
    return x._compose(_sinh_series(x.value, x.order)) if is_jet(x) else np.sinh(x)

def cosh(x: Any) -> Any:
    return x._compose(_cosh_series(x.value, x.order)) if is_jet(x) else np.cosh(x)

def arccos(x: Any) -> Any:
    return x._compose(_arccos_series(x.value, x.order)) if is_jet(x) else np.arccos(x)

def arccosh(x: Any) -> Any:
    return x._compose(_arccosh_series(x.value, x.order)) if is_jet(x) else np.arccosh(x)

def stack(items: Sequence[Any]) -> Any:
    """Apila componentes en un vector; el resultado es jet si alguna componente lo es."""
    if any(is_jet(item) for item in items):
        return JetValue.stack(items)
    return np.array([float(item) for item in items])

def value_of(x: Any) -> Any:
    """Valor de un jet, o el propio argumento si no lo es."""
    return x.value if is_jet(x) else x
