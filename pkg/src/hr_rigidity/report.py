"""
Escritura del reporte de verificación: JSON principal y exportaciones CSV y XLSX.

En JSON los floats usan la representación más corta que recupera el double exacto (a lo
sumo 17 cifras significativas); el CSV usa siempre 17 cifras. Los valores no finitos se
guardan como cadenas ("nan", "inf", "-inf") para que el JSON no contenga literales NaN.
"""

import csv
import json
import logging
import math
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from openpyxl import Workbook
from openpyxl.styles import Font, PatternFill
from openpyxl.utils import get_column_letter

from hr_rigidity import __version__
from hr_rigidity.config import RunConfig
from hr_rigidity.exceptions import ReportError
from hr_rigidity.records import Verdict, VerificationRecord, tally

logger = logging.getLogger("hr-rigidity")

CSV_COLUMNS = ("check_id", "location", "lhs", "rhs", "residual", "tolerance", "verdict")
XLSX_COLUMNS = CSV_COLUMNS + ("note",)

HEADER_FILL = PatternFill(start_color="FFD9D9D9", end_color="FFD9D9D9", fill_type="solid")
FAIL_FILL = PatternFill(start_color="FFF4CCCC", end_color="FFF4CCCC", fill_type="solid")

def number(value: float) -> Union[float, str]:
    """Número serializable: float exacto si es finito, cadena si no lo es."""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value

def _plain(value: Any) -> Any:
    """Convierte detalles (arrays, tuplas, floats numpy) en estructuras JSON."""
    if isinstance(value, dict):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if hasattr(value, "tolist"):
        return _plain(value.tolist())
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        return number(value)
    return str(value)

def record_entry(record: VerificationRecord) -> Dict[str, Any]:
    entry = record.to_dict()
    for key in ("lhs", "rhs", "residual", "tolerance"):
        entry[key] = number(entry[key])
    return entry

def summarize(records: Sequence[VerificationRecord]) -> Dict[str, Any]:
    """
    Conteos por veredicto y máximo residuo absoluto por comprobación.

    Los registros SKIPPED no contribuyen al máximo; un residuo no finito sí, como cadena.
    """
    counts = tally(records)
    worst: Dict[str, float] = {}
    for record in records:
        if record.verdict == Verdict.SKIPPED:
            continue
        value = abs(record.residual)
        current = worst.get(record.check_id)
        if current is None or math.isnan(value) or (not math.isnan(current) and value > current):
            worst[record.check_id] = value
    return {
        "pass": counts["pass"],
        "fail": counts["fail"],
        "skipped": counts["skipped"],
        "max_abs_residual_per_check": {key: number(worst[key]) for key in sorted(worst)},
    }

def build_report(
    records: Sequence[VerificationRecord],
    config: RunConfig,
    details: Optional[Dict[str, Any]] = None,
    caveats: Optional[Sequence[str]] = None,
    timestamp: Optional[str] = None
) -> Dict[str, Any]:
    """
    Documento del reporte: meta, summary y records.

    Args:
        records: Registros finalizados, en el orden de ejecución
        config: Configuración de la corrida
        details: Resultados agregados de las suites (veredicto de rigidez, escalados, ...)
        caveats: Advertencias del reporte
        timestamp: Marca de tiempo ISO 8601 (por defecto, ahora en UTC)
    """
    tolerances = config.effective_tolerances()
    meta = {
        "version": __version__,
        "seed": config.seed,
        "config": _plain(config.model_dump()),
        "tolerances": {key: number(value) for key, value in tolerances.model_dump().items()},
        "tolerance_overrides": {key: number(value) for key, value in config.tolerances.items()},
        "timestamp": timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "caveats": list(caveats or []),
    }
    if details:
        meta["details"] = _plain(details)
    return {
        "meta": meta,
        "summary": summarize(records),
        "records": [record_entry(record) for record in records],
    }

def write_csv(records: Sequence[VerificationRecord], path: Path) -> Path:
    """Exportación plana de los registros con las columnas de CSV_COLUMNS."""
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_COLUMNS)
        for record in records:
            entry = record_entry(record)
            writer.writerow([
                format(entry[key], ".17g") if isinstance(entry[key], float) else entry[key] for key in CSV_COLUMNS
            ])
    return path

def write_xlsx(report: Dict[str, Any], records: Sequence[VerificationRecord], path: Path) -> Path:
    """
    Libro con una hoja `summary` y una hoja `records`.

    La cabecera de `records` va en negrita sobre fondo gris y las filas FAIL en rojo.
    """
    wb = Workbook()
    summary = wb.active
    summary.title = "summary"
    summary.append(["clave", "valor"])
    for key in ("pass", "fail", "skipped"):
        summary.append([key, report["summary"][key]])
    summary.append([])
    summary.append(["check_id", "max_abs_residual"])
    for key, value in report["summary"]["max_abs_residual_per_check"].items():
        summary.append([key, float(value) if not isinstance(value, str) else value])
    for cell in summary[1]:
        cell.font = Font(bold=True)
        cell.fill = HEADER_FILL

    sheet = wb.create_sheet("records")
    sheet.append(list(XLSX_COLUMNS))
    for cell in sheet[1]:
        cell.font = Font(bold=True)
        cell.fill = HEADER_FILL
    for record in records:
        entry = record_entry(record)
        row = [float(entry[key]) if isinstance(entry[key], float) else entry[key] for key in XLSX_COLUMNS]
        sheet.append(row)
        if record.verdict == Verdict.FAIL:
            for cell in sheet[sheet.max_row]:
                cell.fill = FAIL_FILL
    for index, width in enumerate((36, 28, 22, 22, 22, 14, 10, 48), start=1):
        sheet.column_dimensions[get_column_letter(index)].width = width
    sheet.freeze_panes = "A2"

    wb.save(str(path))
    return path

def write_report(
    records: Sequence[VerificationRecord],
    config: RunConfig,
    details: Optional[Dict[str, Any]] = None,
    caveats: Optional[Sequence[str]] = None,
    timestamp: Optional[str] = None
) -> List[Path]:
    """
    Escribe el reporte JSON en `config.output` y las exportaciones que pida `config.format`.

    Returns:
        Rutas escritas, el JSON primero

    Raises:
        ReportError: Si alguna ruta no se puede escribir
    """
    path = Path(config.output)
    report = build_report(records, config, details, caveats, timestamp)
    written: List[Path] = []
    try:
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(report, indent=2, ensure_ascii=False, allow_nan=False) + "\n", encoding="utf-8")
        written.append(path)
        if config.format == "json+csv":
            written.append(write_csv(records, path.with_suffix(".csv")))
        elif config.format == "json+xlsx":
            written.append(write_xlsx(report, records, path.with_suffix(".xlsx")))
    except (OSError, ValueError) as e:
        logger.error(f"No se pudo escribir el reporte en {path}: {str(e)}")
        raise ReportError(f"No se pudo escribir el reporte en {path}: {str(e)}")
    logger.info(f"Reporte escrito: {', '.join(str(p) for p in written)}")
    return written
