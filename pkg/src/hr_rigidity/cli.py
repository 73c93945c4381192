"""
Corrida por lotes: configuración desde argumentos, ejecución de suites y reporte.

Códigos de salida: 0 sin registros FAIL, 1 con al menos un FAIL, 2 si la configuración
o la escritura del reporte fallan.
"""

import argparse
import logging
from typing import Any, Dict, Optional

from hr_rigidity.config import RunConfig, load_config, merge_overrides, validate_config
from hr_rigidity.exceptions import ConfigError, HRBaseError, ReportError
from hr_rigidity.records import Verdict, failed
from hr_rigidity.report import write_report
from hr_rigidity.suites import SuiteOutcome, run_suites
from hr_rigidity.validation import parse_grid, parse_key_values

logger = logging.getLogger("hr-rigidity")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2

def config_from_arguments(args: argparse.Namespace) -> RunConfig:
    """
    Combina el archivo de configuración (si lo hay) con las opciones de línea de comandos.

    Las opciones explícitas sustituyen a las del archivo; las tolerancias se fusionan
    clave a clave.

    Raises:
        ConfigError: Si el archivo o alguna opción no es válida
    """
    base = load_config(args.config) if getattr(args, "config", None) else validate_config(None)
    try:
        params = parse_key_values(args.params) if args.params is not None else None
        tolerances = parse_key_values(args.tol) if args.tol is not None else None
        grid = parse_grid(args.grid) if args.grid is not None else None
    except HRBaseError as e:
        raise ConfigError(str(e))

    overrides: Dict[str, Any] = {
        "suite": args.suite,
        "family": args.family,
        "params": params,
        "c": args.c,
        "r": args.r,
        "n": args.n,
        "grid": grid,
        "seed": args.seed,
        "samples": args.samples,
        "output": args.out,
        "format": args.format,
    }
    if tolerances:
        merged = dict(base.tolerances)
        merged.update(tolerances)
        overrides["tolerances"] = merged
    return merge_overrides(base, overrides)

def run(config: RunConfig, timestamp: Optional[str] = None) -> int:
    """
    Ejecuta la suite configurada y escribe el reporte.

    Args:
        config: Configuración validada
        timestamp: Marca de tiempo del reporte (por defecto, ahora)

    Returns:
        0 si no hay registros FAIL, 1 en caso contrario

    Raises:
        ReportError: Si el reporte no se puede escribir
    """
    logger.info(f"Corrida: suite={config.suite}, familia={config.family}, c={config.c}, r={config.r}, semilla={config.seed}")
    try:
        outcome = run_suites(config)
    except HRBaseError as e:
        logger.error(f"Fallo durante la suite {config.suite}: {str(e)}")
        outcome = SuiteOutcome([failed(f"{config.suite}.run", config.family, f"{type(e).__name__}: {str(e)}")])

    write_report(outcome.records, config, outcome.details, outcome.caveats, timestamp)
    failures = sum(1 for record in outcome.records if record.verdict == Verdict.FAIL)
    if failures:
        logger.warning(f"Corrida terminada con {failures} registros FAIL")
        return EXIT_FAIL
    logger.info(f"Corrida terminada sin fallos ({len(outcome.records)} registros)")
    return EXIT_OK

def run_command(args: argparse.Namespace) -> int:
    """Subcomando `run`: errores de configuración o de escritura dan código 2."""
    try:
        config = config_from_arguments(args)
    except ConfigError as e:
        logger.error(f"Configuración inválida: {str(e)}")
        return EXIT_CONFIG
    try:
        return run(config)
    except ReportError as e:
        logger.error(str(e))
        return EXIT_CONFIG

def validate_command(args: argparse.Namespace) -> int:
    """Subcomando `validate`: solo comprueba el archivo de configuración."""
    try:
        config = load_config(args.config)
    except ConfigError as e:
        logger.error(f"Configuración inválida: {str(e)}")
        return EXIT_CONFIG
    logger.info(f"Configuración válida: suite={config.suite}, familia={config.family}, n={config.dimension}")
    return EXIT_OK
