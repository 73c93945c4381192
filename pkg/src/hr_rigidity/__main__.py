import sys
import argparse
from typing import List, Optional

from .cli import EXIT_CONFIG, EXIT_FAIL, run_command, validate_command
from .config import SUITES
from .logger import LOG_LEVELS, get_logger, setup_logging

def parse_arguments(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """
    Analiza los argumentos de línea de comandos.

    Returns:
        Objeto con los argumentos parseados
    """
    parser = argparse.ArgumentParser(
        description="Verificación numérica de la rigidez de hipersuperficies con H y H_r constantes"
    )

    parser.add_argument(
        "--log-level",
        choices=list(LOG_LEVELS),
        default="info",
        help="Nivel de detalle para el log (default: info)"
    )
    parser.add_argument(
        "--log-file",
        help="Ruta al archivo de log (por defecto se usa una ubicación estándar)"
    )
    parser.add_argument(
        "--no-console-log",
        action="store_true",
        help="Deshabilita la salida de logs a la consola"
    )

    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Ejecuta una suite y escribe el reporte")
    run.add_argument("--config", help="Archivo JSON de configuración (las opciones lo sustituyen)")
    # choices se validan en RunConfig para dar sugerencias
    run.add_argument("--suite", help=f"Suite: {', '.join(SUITES)}")
    run.add_argument("--family", help="Familia de cartas: sphere, bump, ellipsoid, torus, cylinder")
    run.add_argument("--params", help="Parámetros de la familia, k=v,...")
    run.add_argument("--c", type=float, help="Curvatura del espacio ambiente")
    run.add_argument("--r", type=int, help="Orden de la curvatura media")
    run.add_argument("--n", type=int, help="Dimensión de la hipersuperficie")
    run.add_argument("--grid", help="Resoluciones por eje, por ejemplo 16,16")
    run.add_argument("--seed", type=int, help="Semilla de los muestreos")
    run.add_argument("--samples", type=int, help="Muestras de las suites aleatorias")
    run.add_argument("--tol", help="Sustituciones de tolerancias, nombre=valor,...")
    run.add_argument("--out", help="Ruta del reporte JSON")
    run.add_argument("--format", help="json, json+csv o json+xlsx")
    run.set_defaults(handler=run_command)

    validate = commands.add_parser("validate", help="Valida un archivo de configuración")
    validate.add_argument("--config", required=True, help="Archivo JSON de configuración")
    validate.set_defaults(handler=validate_command)

    return parser.parse_args(argv)

def main(argv: Optional[List[str]] = None) -> None:
    """
    Punto de entrada de hr-rigidity: configura el logging y despacha el subcomando.
    """
    args = parse_arguments(argv)
    try:
        setup_logging(
            log_level=args.log_level,
            log_file=args.log_file,
            console_output=not args.no_console_log
        )
    except OSError as e:
        print(f"No se pudo configurar el log: {e}", file=sys.stderr)
        sys.exit(EXIT_CONFIG)

    try:
        code = args.handler(args)
    except Exception as e:
        get_logger().exception(f"Error inesperado: {e}")
        code = EXIT_FAIL
    sys.exit(code)

if __name__ == "__main__":
    main()
