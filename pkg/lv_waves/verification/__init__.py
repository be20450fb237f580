from .comparison import ComparisonReport, UniquenessReport, sliding_comparison, uniqueness_check
from .monotonicity import MonotonicityReport, derivative_residual, monotonicity_certificate
from .subcritical import SubcriticalDiagnostic, characteristic_roots, subcritical_diagnostic

__all__ = [
    "ComparisonReport",
    "MonotonicityReport",
    "SubcriticalDiagnostic",
    "UniquenessReport",
    "characteristic_roots",
    "derivative_residual",
    "monotonicity_certificate",
    "sliding_comparison",
    "subcritical_diagnostic",
    "uniqueness_check",
]
