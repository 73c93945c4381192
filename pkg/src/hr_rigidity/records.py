"""
Registros de verificación: una comprobación de residuo o desigualdad con su veredicto.
"""

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Dict, Iterable, List, Sequence

class Verdict(str, Enum):
    """Veredicto de una comprobación."""
    PASS = "PASS"
    FAIL = "FAIL"
    SKIPPED = "SKIPPED"

@dataclass(frozen=True)
class VerificationRecord:
    """
    Resultado de una comprobación numérica.

    El residuo de una igualdad es |lhs - rhs| (o el error que calcule la comprobación);
    el de una desigualdad lhs <= rhs es max(0, lhs - rhs). La tolerancia ya viene escalada.
    """
    check_id: str
    location: str
    lhs: float
    rhs: float
    residual: float
    tolerance: float
    verdict: Verdict
    note: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "check_id": self.check_id,
            "location": self.location,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "verdict": self.verdict.value,
            "note": self.note,
        }

def format_location(point: Any) -> str:
    """Representación estable de un punto de carta o índice de muestra."""
    if isinstance(point, str):
        return point
    try:
        values = [float(v) for v in point]
    except TypeError:
        return str(point)
    return "(" + ", ".join(f"{v:.6g}" for v in values) + ")"

def _all_finite(*values: float) -> bool:
    return all(math.isfinite(float(v)) for v in values)

def check_residual(
    check_id: str,
    location: Any,
    lhs: float,
    rhs: float,
    tolerance: float,
    residual: Any = None,
    note: str = ""
) -> VerificationRecord:
    """
    Construye el registro de una igualdad lhs = rhs.

    Args:
        check_id: Identificador de la comprobación
        location: Punto de carta, índice o descripción de la muestra
        lhs: Lado izquierdo
        rhs: Lado derecho
        tolerance: Tolerancia absoluta ya escalada
        residual: Residuo propio de la comprobación (por defecto |lhs - rhs|)
        note: Comentario libre

    Returns:
        Registro con veredicto PASS si |residuo| <= tolerancia
    """
    lhs = float(lhs)
    rhs = float(rhs)
    value = abs(lhs - rhs) if residual is None else abs(float(residual))
    if not _all_finite(lhs, rhs, value):
        return VerificationRecord(
            check_id, format_location(location), lhs, rhs, value, float(tolerance),
            Verdict.FAIL, (note + "; " if note else "") + "valor no finito"
        )
    verdict = Verdict.PASS if value <= tolerance else Verdict.FAIL
    return VerificationRecord(
        check_id, format_location(location), lhs, rhs, value, float(tolerance), verdict, note
    )

def check_inequality(
    check_id: str,
    location: Any,
    lhs: float,
    rhs: float,
    tolerance: float,
    note: str = ""
) -> VerificationRecord:
    """Registro de la desigualdad lhs <= rhs con holgura `tolerance`."""
    lhs = float(lhs)
    rhs = float(rhs)
    if not _all_finite(lhs, rhs):
        return VerificationRecord(
            check_id, format_location(location), lhs, rhs, float("nan"), float(tolerance),
            Verdict.FAIL, (note + "; " if note else "") + "valor no finito"
        )
    return check_residual(check_id, location, lhs, rhs, tolerance, residual=max(0.0, lhs - rhs), note=note)

def skipped(check_id: str, location: Any, note: str) -> VerificationRecord:
    """Registro de una comprobación omitida; siempre lleva nota."""
    return VerificationRecord(
        check_id, format_location(location), 0.0, 0.0, 0.0, 0.0, Verdict.SKIPPED, note
    )

def failed(check_id: str, location: Any, note: str) -> VerificationRecord:
    """Registro FAIL por un fallo numérico en tiempo de ejecución."""
    nan = float("nan")
    return VerificationRecord(check_id, format_location(location), nan, nan, nan, 0.0, Verdict.FAIL, note)

def aggregate(records: Sequence[VerificationRecord]) -> List[VerificationRecord]:
    """
    Resume registros por check_id conservando el peor caso.

    El registro resumen es FAIL si alguno falla, PASS si alguno pasa y SKIPPED si todos
    se omitieron. Se conserva el primer FAIL o, si no hay, el de mayor residuo relativo
    a su tolerancia. El orden de salida es el de primera aparición de cada check_id.
    """
    groups: Dict[str, List[VerificationRecord]] = {}
    for record in records:
        groups.setdefault(record.check_id, []).append(record)

    result = []
    for check_id, group in groups.items():
        fails = [rec for rec in group if rec.verdict is Verdict.FAIL]
        passes = [rec for rec in group if rec.verdict is Verdict.PASS]
        omitted = len(group) - len(fails) - len(passes)
        if fails:
            worst = fails[0]
        elif passes:
            worst = max(passes, key=lambda rec: rec.residual / rec.tolerance if rec.tolerance > 0 else rec.residual)
        else:
            worst = group[0]
        summary = f"evaluados={len(fails) + len(passes)}, fallidos={len(fails)}, omitidos={omitted}"
        note = summary if not worst.note else f"{summary}; {worst.note}"
        result.append(replace(worst, note=note))
    return result

def tally(records: Iterable[VerificationRecord]) -> Dict[str, int]:
    """Cuenta registros por veredicto."""
    counts = {"pass": 0, "fail": 0, "skipped": 0}
    for record in records:
        counts[record.verdict.value.lower()] += 1
    return counts
