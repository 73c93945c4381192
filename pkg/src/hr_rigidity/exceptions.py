"""
Módulo para definir excepciones personalizadas de hr-rigidity.
"""

class HRBaseError(Exception):
    """Clase base para todas las excepciones de hr-rigidity."""
    pass

class ValidationError(HRBaseError):
    """Excepción lanzada cuando falla la validación de una entrada."""
    pass

class DomainError(HRBaseError):
    """Excepción lanzada cuando un parámetro está fuera de su dominio (r, t, p = q0)."""
    pass

class ConeError(HRBaseError):
    """Excepción lanzada cuando un punto que debe estar en el cono de Gårding no lo está."""
    pass

class ManifoldError(HRBaseError):
    """Excepción lanzada cuando un punto o vector no pertenece al modelo de la forma espacial."""
    pass

class JetError(HRBaseError):
    """Excepción lanzada cuando el orden de un jet es insuficiente o una función sale de su dominio."""
    pass

class GeometryError(HRBaseError):
    """Excepción lanzada cuando la inmersión degenera (métrica singular, normal nula)."""
    pass

class DegenerateFrameError(HRBaseError):
    """Excepción lanzada cuando la base propia no es fiable por autovalores casi repetidos."""
    pass

class ConfigError(HRBaseError):
    """Excepción lanzada cuando la configuración de ejecución no es válida."""
    pass

class ReportError(HRBaseError):
    """Excepción lanzada cuando no se puede escribir un reporte."""
    pass
