"""
Configuración de ejecución de hr-rigidity.

Tolerances es el bloque central de tolerancias: cada comprobación lee de aquí su cota,
y el reporte reproduce los valores efectivos junto con las sustituciones recibidas.
RunConfig describe una corrida completa y se valida en modo estricto (claves
desconocidas son un error), tanto desde la línea de comandos como desde un archivo JSON.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from hr_rigidity.charts import FAMILIES, check_family
from hr_rigidity.exceptions import ConfigError, HRBaseError
from hr_rigidity.validation import suggest_names, validate_file_path

logger = logging.getLogger("hr-rigidity")

SUITES = ("symfun", "cones", "spaceform", "walter", "rigidity", "all")
DEFAULT_GRID = 16
MIN_GRID = 8

class Tolerances(BaseModel):
    """Tolerancias con nombre. Las relativas se escalan en cada comprobación."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    # funciones simétricas
    generating: float = Field(1e-12, gt=0)
    fd_gradient: float = Field(1e-8, gt=0)
    fd_hessian: float = Field(1e-7, gt=0)
    homogeneity: float = Field(1e-12, gt=0)
    basis: float = Field(1e-11, gt=0)
    shifted_expansion: float = Field(1e-12, gt=0)
    derivative_chain: float = Field(1e-9, gt=0)

    # conos de Gårding
    hyperbolicity: float = Field(1e-8, gt=0)
    root_boundary: float = Field(1e-10, gt=0)
    garding: float = Field(1e-10, gt=0)
    garding_equality: float = Field(1e-12, gt=0)
    concavity: float = Field(1e-9, gt=0)
    wr_fd: float = Field(1e-6, gt=0)
    quadratic: float = Field(1e-10, gt=0)

    # formas espaciales
    membership: float = Field(1e-12, gt=0)
    tangency: float = Field(1e-10, gt=0)
    triangle: float = Field(1e-9, gt=0)
    mu_limit: float = Field(1e-5, gt=0)
    dist_hess_fd: float = Field(1e-6, gt=0)
    geodesic_sphere: float = Field(1e-6, gt=0)

    # hipersuperficies
    eigen_gap: float = Field(1e-5, gt=0)
    curvature_relation: float = Field(1e-9, gt=0)
    walter: float = Field(1e-5, gt=0)
    gradient: float = Field(1e-6, gt=0)
    commutation: float = Field(1e-6, gt=0)
    codazzi: float = Field(1e-7, gt=0)
    gauss: float = Field(1e-7, gt=0)
    sectional: float = Field(1e-8, gt=0)
    char_poly_paths: float = Field(1e-10, gt=0)
    laplacian_fd: float = Field(1e-5, gt=0)
    composition: float = Field(1e-8, gt=0)

    # rigidez
    elliptic_margin: float = Field(1e-9, gt=0)
    proof_chain: float = Field(1e-9, gt=0)
    umbilicity: float = Field(1e-8, gt=0)
    constancy: float = Field(1e-9, gt=0)
    theorem_deficit: float = Field(1e-6, gt=0)
    negative_control: float = Field(1e-2, gt=0)
    slope: float = Field(0.2, gt=0)

def tolerance_names() -> List[str]:
    return list(Tolerances.model_fields)

class RunConfig(BaseModel):
    """
    Configuración de una corrida.

    Attributes:
        suite: Suite a ejecutar (symfun, cones, spaceform, walter, rigidity o all)
        family: Familia de cartas para walter y rigidity
        params: Parámetros de la familia
        c: Curvatura del espacio ambiente
        r: Orden de la curvatura media
        n: Dimensión de la carta (None para la de la familia)
        grid: Resoluciones por eje (un único valor vale para todos los ejes)
        seed: Semilla de los muestreos aleatorios
        samples: Presupuesto de muestras de las suites aleatorias
        tolerances: Sustituciones de tolerancias por nombre
        output: Ruta del reporte JSON
        format: json, json+csv o json+xlsx
    """
    model_config = ConfigDict(extra="forbid")

    suite: str = "all"
    family: str = "sphere"
    params: Dict[str, float] = Field(default_factory=dict)
    c: float = Field(0.0, allow_inf_nan=False)
    r: int = Field(2, ge=1)
    n: Optional[int] = Field(None, ge=2)
    grid: List[int] = Field(default_factory=lambda: [DEFAULT_GRID])
    seed: int = Field(0, ge=0)
    samples: int = Field(10000, ge=1)
    tolerances: Dict[str, float] = Field(default_factory=dict)
    output: str = "hr-rigidity-report.json"
    format: Literal["json", "json+csv", "json+xlsx"] = "json"

    @field_validator("suite")
    @classmethod
    def _known_suite(cls, value: str) -> str:
        if value not in SUITES:
            raise ValueError(f"suite desconocida '{value}'; opciones: {', '.join(suggest_names(value, SUITES))}")
        return value

    @field_validator("family")
    @classmethod
    def _known_family(cls, value: str) -> str:
        if value not in FAMILIES:
            raise ValueError(f"familia desconocida '{value}'; opciones: {', '.join(suggest_names(value, FAMILIES))}")
        return value

    @field_validator("grid")
    @classmethod
    def _grid_resolution(cls, value: List[int]) -> List[int]:
        if not value:
            raise ValueError("la malla necesita al menos una resolución")
        for res in value:
            if res < MIN_GRID:
                raise ValueError(f"resolución de malla {res} inválida; el mínimo por eje es {MIN_GRID}")
        return value

    @field_validator("tolerances")
    @classmethod
    def _known_tolerances(cls, value: Dict[str, float]) -> Dict[str, float]:
        names = tolerance_names()
        for name, tol in value.items():
            if name not in names:
                raise ValueError(f"tolerancia desconocida '{name}'; opciones: {', '.join(suggest_names(name, names))}")
            if not tol > 0 or tol == float("inf"):
                raise ValueError(f"la tolerancia '{name}' debe ser positiva y finita, se recibió {tol}")
        return value

    @model_validator(mode="after")
    def _family_consistency(self) -> "RunConfig":
        try:
            dim = check_family(self.family, self.params, self.c, self.n)
        except HRBaseError as e:
            raise ValueError(str(e))
        if self.r > dim:
            raise ValueError(f"r = {self.r} supera la dimensión n = {dim} de la familia '{self.family}'")
        if self.suite in ("rigidity", "all") and self.r < 2:
            raise ValueError(f"la suite '{self.suite}' necesita 2 <= r <= n, se recibió r = {self.r}")
        if len(self.grid) not in (1, dim):
            raise ValueError(f"la malla debe tener 1 o {dim} resoluciones, se recibieron {len(self.grid)}")
        return self

    @property
    def dimension(self) -> int:
        return check_family(self.family, self.params, self.c, self.n)

    def effective_tolerances(self) -> Tolerances:
        return Tolerances.model_validate(self.tolerances)

def _describe(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        path = ".".join(str(p) for p in item["loc"]) or "<raíz>"
        parts.append(f"{path}: {item['msg']}")
    return "; ".join(parts)

def validate_config(raw: Union[str, Mapping[str, Any], None]) -> RunConfig:
    """
    Valida una configuración en texto JSON o como diccionario.

    Args:
        raw: Texto JSON, mapeo de claves o None; un texto vacío equivale a los valores por defecto

    Returns:
        RunConfig validada

    Raises:
        ConfigError: Con línea y columna si el JSON es inválido, o con la ruta de la clave
            que no pasa la validación
    """
    if raw is None:
        data: Any = {}
    elif isinstance(raw, str):
        if not raw.strip():
            data = {}
        else:
            try:
                data = json.loads(raw)
            except json.JSONDecodeError as e:
                raise ConfigError(f"JSON inválido en línea {e.lineno}, columna {e.colno}: {e.msg}")
    else:
        data = dict(raw)

    if not isinstance(data, dict):
        raise ConfigError(f"La configuración debe ser un objeto JSON, se recibió {type(data).__name__}")

    try:
        config = RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"Configuración inválida: {_describe(e)}")
    logger.debug(f"Configuración validada: suite={config.suite}, familia={config.family}, c={config.c}, r={config.r}")
    return config

def load_config(path: Union[str, Path]) -> RunConfig:
    """
    Lee y valida un archivo de configuración JSON.

    Raises:
        ConfigError: Si el archivo no existe, no se puede leer o no es válido
    """
    try:
        file_path = validate_file_path(path, must_exist=True, file_extensions=[".json"])
        text = file_path.read_text(encoding="utf-8")
    except HRBaseError as e:
        raise ConfigError(str(e))
    except OSError as e:
        raise ConfigError(f"No se pudo leer la configuración {path}: {str(e)}")
    return validate_config(text)

def merge_overrides(config: RunConfig, overrides: Mapping[str, Any]) -> RunConfig:
    """Aplica sustituciones (por ejemplo, opciones de línea de comandos) sobre una configuración."""
    data = config.model_dump()
    data.update({key: value for key, value in overrides.items() if value is not None})
    return validate_config(data)
