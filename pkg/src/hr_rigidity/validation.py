"""
Módulo para validación de datos de entrada en hr-rigidity.

Este módulo proporciona funciones de validación para los tipos usados por las
verificaciones: vectores de curvaturas principales, órdenes r, matrices de
operadores, rutas de salida y listas clave=valor de la línea de comandos.
"""

import difflib
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

import numpy as np
from numpy.typing import NDArray

from hr_rigidity.exceptions import DomainError, ValidationError

def validate_lambda_vec(x: Any, min_dim: int = 2) -> NDArray[np.float64]:
    """
    Valida un vector de R^n (curvaturas principales o argumento de σ_r).

    Args:
        x: Secuencia o array unidimensional de reales
        min_dim: Dimensión mínima permitida (n >= 2 por defecto)

    Returns:
        Copia del vector como array float64

    Raises:
        ValidationError: Si el vector no es unidimensional, es demasiado corto
            o contiene valores no finitos
    """
    try:
        vec = np.array(x, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise ValidationError(f"Vector inválido: {str(e)}")

    if vec.ndim != 1:
        raise ValidationError(f"Se esperaba un vector unidimensional, forma recibida {vec.shape}")

    if vec.shape[0] < min_dim:
        raise ValidationError(f"La dimensión n debe ser al menos {min_dim}, se recibió n = {vec.shape[0]}")

    if not np.all(np.isfinite(vec)):
        raise ValidationError("El vector contiene valores no finitos (NaN o Inf)")

    return vec

def validate_order(r: int, low: int, high: int, name: str = "r") -> int:
    """
    Valida que un orden entero esté en el intervalo cerrado [low, high].

    Args:
        r: Orden a validar
        low: Cota inferior
        high: Cota superior
        name: Nombre del parámetro para el mensaje de error

    Returns:
        El orden como int

    Raises:
        DomainError: Si el orden no es entero o está fuera de rango
    """
    if isinstance(r, bool) or not isinstance(r, (int, np.integer)):
        raise DomainError(f"{name} debe ser un entero, se recibió {r!r}")

    if r < low or r > high:
        raise DomainError(f"{name} = {r} fuera de rango [{low}, {high}]")

    return int(r)

def validate_square_matrix(a: Any) -> NDArray[np.float64]:
    """
    Valida que una entrada sea una matriz cuadrada finita.

    Args:
        a: Matriz a validar

    Returns:
        Matriz como array float64

    Raises:
        ValidationError: Si la matriz no es cuadrada o contiene valores no finitos
    """
    mat = np.array(a, dtype=np.float64)

    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValidationError(f"Se esperaba una matriz cuadrada, forma recibida {mat.shape}")

    if not np.all(np.isfinite(mat)):
        raise ValidationError("La matriz contiene valores no finitos")

    return mat

def validate_file_path(
    filepath: Union[str, Path],
    must_exist: bool = True,
    file_extensions: Optional[List[str]] = None
) -> Path:
    """
    Valida que una ruta de archivo sea válida y cumpla con los requisitos.

    Args:
        filepath: Ruta a validar
        must_exist: Si es True, verifica que el archivo exista
        file_extensions: Lista de extensiones permitidas (ej. ['.json'])

    Returns:
        Objeto Path con la ruta validada

    Raises:
        ValidationError: Si la validación falla
    """
    try:
        path = Path(filepath)

        if must_exist and not path.exists():
            raise ValidationError(f"El archivo {path} no existe")

        if file_extensions:
            if not any(path.name.lower().endswith(ext.lower()) for ext in file_extensions):
                valid_exts = ", ".join(file_extensions)
                raise ValidationError(
                    f"El archivo {path.name} no tiene una extensión válida. "
                    f"Extensiones permitidas: {valid_exts}"
                )

        return path
    except Exception as e:
        if isinstance(e, ValidationError):
            raise
        raise ValidationError(f"Ruta de archivo inválida: {str(e)}")

def parse_key_values(text: Optional[str]) -> Dict[str, float]:
    """
    Analiza una lista "k=v,k2=v2" de la línea de comandos.

    Args:
        text: Texto a analizar (None o vacío produce un diccionario vacío)

    Returns:
        Diccionario clave -> valor real

    Raises:
        ValidationError: Si algún elemento no tiene la forma clave=número
    """
    result: Dict[str, float] = {}
    if not text:
        return result

    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise ValidationError(f"Elemento '{item}' no tiene la forma clave=valor")
        key, value = item.split("=", 1)
        key = key.strip()
        if not key:
            raise ValidationError(f"Elemento '{item}' tiene una clave vacía")
        try:
            result[key] = float(value)
        except ValueError:
            raise ValidationError(f"Valor no numérico para '{key}': {value!r}")

    return result

def parse_grid(text: Optional[str]) -> List[int]:
    """
    Analiza una lista de resoluciones por eje, por ejemplo "16,16".

    Args:
        text: Texto con enteros separados por comas

    Returns:
        Lista de resoluciones

    Raises:
        ValidationError: Si algún elemento no es entero
    """
    if not text:
        return []
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ValidationError(f"Resolución de malla inválida: {text!r}")

def suggest_names(name: str, choices: Iterable[str]) -> List[str]:
    """
    Devuelve nombres parecidos a uno desconocido, o la lista completa si no hay parecidos.
    """
    options = sorted(choices)
    close = difflib.get_close_matches(name, options, n=3, cutoff=0.5)
    return close or options

def validate_finite_values(values: Sequence[float], label: str) -> None:
    """Rechaza valores no finitos en un resultado numérico."""
    if not np.all(np.isfinite(np.asarray(values, dtype=np.float64))):
        raise ValidationError(f"{label} contiene valores no finitos")
