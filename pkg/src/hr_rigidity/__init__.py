"""
Verificación numérica de la rigidez de hipersuperficies en formas espaciales

Este paquete evalúa las funciones simétricas elementales y sus conos de Gårding, la
geometría de hipersuperficies inmersas en R^{n+1}, S^{n+1} y H^{n+1}, la fórmula de
Walter para ΔH_r y la cadena de la prueba de rigidez (punto elíptico, pertenencia al
cono, desigualdad de concavidad, umbilicidad). Cada comprobación produce un registro
con residuo y tolerancia, y la CLI reúne los registros en un reporte.
"""

__version__ = "0.1.0"

# Exportar elementos de módulos
from .symfun import (
    elementary_all,
    sigma,
    sigma_grad,
    sigma_hess,
    mean_curvature_ratio,
    mean_curvatures,
    char_poly_sigma
)

from .cones import (
    roots_along,
    in_garding_cone,
    garding_gap,
    wr_hessian,
    quadratic_form_bound
)

from .spaceform import (
    model_inner,
    distance,
    sphere_curvature,
    alpha_c,
    distance_hessian
)

from .charts import (
    ImmersionChart,
    make_chart
)

from .hypersurface import (
    PointGeometry,
    point_geometry,
    walter_residual,
    gradient_identity_residual,
    curvature_relation_residual
)

from .rigidity import (
    ScanConfig,
    RigidityReport,
    elliptic_point_scan,
    cone_membership_scan,
    proof_chain_check,
    umbilicity_certificate
)

from .config import (
    RunConfig,
    Tolerances,
    validate_config
)

from .records import (
    Verdict,
    VerificationRecord
)

from .report import write_report
from .cli import run

# Exportar excepciones
from .exceptions import (
    HRBaseError,
    ValidationError,
    DomainError,
    ConeError,
    ManifoldError,
    JetError,
    GeometryError,
    DegenerateFrameError,
    ConfigError,
    ReportError
)
