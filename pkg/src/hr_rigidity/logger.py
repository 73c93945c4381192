"""
Módulo para configurar el sistema de logging de hr-rigidity.

Configura un logger con rotación de archivos y salida opcional a stderr. Los
tiempos de ejecución de cada suite se registran aquí y nunca en los reportes,
para que los registros de verificación sean deterministas.
"""

import os
import sys
import time
import logging
from contextlib import contextmanager
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Union

LOGGER_NAME = "hr-rigidity"
LOG_DIR_ENV = "HR_RIGIDITY_LOG_DIR"

# Niveles de log disponibles
LOG_LEVELS = {
    "debug": logging.DEBUG,
    "info": logging.INFO,
    "warning": logging.WARNING,
    "error": logging.ERROR,
    "critical": logging.CRITICAL
}

def get_log_directory() -> Path:
    """
    Directorio de los archivos de log, creado si no existe.

    Orden: variable HR_RIGIDITY_LOG_DIR, %APPDATA%/hr-rigidity/logs en Windows,
    $XDG_STATE_HOME/hr-rigidity (o ~/.local/state/hr-rigidity) en el resto.

    Returns:
        Path al directorio de logs
    """
    override = os.environ.get(LOG_DIR_ENV)
    if override:
        log_dir = Path(override).expanduser()
    elif sys.platform.startswith('win'):
        log_dir = Path(os.environ.get('APPDATA', '.')) / LOGGER_NAME / 'logs'
    else:
        state_home = os.environ.get('XDG_STATE_HOME') or str(Path.home() / '.local' / 'state')
        log_dir = Path(state_home) / LOGGER_NAME

    log_dir.mkdir(parents=True, exist_ok=True)
    return log_dir

def setup_logging(
    log_level: str = "info",
    log_file: Optional[Union[str, Path]] = None,
    max_size_mb: int = 10,
    backup_count: int = 5,
    console_output: bool = True
) -> logging.Logger:
    """
    Configura el sistema de logging de las verificaciones.

    Args:
        log_level: Nivel de log (debug, info, warning, error, critical)
        log_file: Ruta al archivo de log (si es None, se usa una ruta por defecto)
        max_size_mb: Tamaño máximo del archivo de log en MB antes de rotar
        backup_count: Número de archivos de respaldo a mantener
        console_output: Si es True, también muestra logs en stderr

    Returns:
        Logger configurado
    """
    level = LOG_LEVELS.get(log_level.lower(), logging.INFO)

    if log_file is None:
        log_file = get_log_directory() / 'hr-rigidity.log'
    else:
        log_file = Path(log_file)
        log_file.parent.mkdir(parents=True, exist_ok=True)

    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(level)

    # Eliminar handlers de una configuración anterior
    for handler in logger.handlers[:]:
        logger.removeHandler(handler)

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    handlers: List[logging.Handler] = [
        RotatingFileHandler(log_file, maxBytes=max_size_mb * 1024 * 1024, backupCount=backup_count, encoding='utf-8')
    ]
    if console_output:
        handlers.append(logging.StreamHandler(sys.stderr))
    for handler in handlers:
        handler.setFormatter(formatter)
        logger.addHandler(handler)

    logger.propagate = False

    logger.debug(f"Logging de {LOGGER_NAME} listo: nivel {log_level}, archivo {log_file}")

    return logger

def get_logger() -> logging.Logger:
    """
    Logger de hr-rigidity; si aún no tiene handlers se configura con los valores por defecto.

    Returns:
        Logger configurado
    """
    logger = logging.getLogger(LOGGER_NAME)
    if not logger.handlers:
        return setup_logging()
    return logger

@contextmanager
def suite_timer(suite: str, counts: Optional[Dict[str, int]] = None) -> Iterator[None]:
    """
    Registra inicio, fin y duración de una suite de verificación.

    Args:
        suite: Nombre de la suite
        counts: Diccionario que la suite rellena con conteos (pass/fail/skipped)
            para incluirlos en el mensaje final
    """
    logger = logging.getLogger(LOGGER_NAME)
    logger.info(f"Suite '{suite}' iniciada")
    start = time.perf_counter()
    try:
        yield
    finally:
        elapsed = time.perf_counter() - start
        detail = ""
        if counts:
            detail = ", ".join(f"{key}={value}" for key, value in sorted(counts.items()))
        logger.info(f"Suite '{suite}' finalizada en {elapsed:.2f} s {detail}".rstrip())
