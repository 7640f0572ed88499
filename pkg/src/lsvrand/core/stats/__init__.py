from .annealed import (
    AnnealedCorrelations,
    AnnealedVariance,
    annealed_correlation,
    annealed_correlations,
    annealed_variance,
    variance_from_correlations,
)
from .curves import DecayCurve, Estimate, ExponentFit, fit_exponent
from .limits import CltReport, MomentReport, clt_diagnostic, kolmogorov_distance, moment_growth
from .martingale import (
    MartingaleParts,
    martingale_orthogonality_check,
    martingale_parts,
    telescoping_residual,
)
from .observables import BASE_FUNCTIONS, Coboundary, Observable, linear_weight, make_observable
from .quenched import (
    METHODS,
    correlation,
    dominance_margin,
    memory_loss_curve,
    memory_loss_curves,
    operator_sigma2,
    variance_curve,
)
from .sampling import birkhoff_samples, correlation_samples, fiber_offsets, sample_from_density
from .theory import Prediction, predictions

__all__ = [
    "Observable",
    "Coboundary",
    "BASE_FUNCTIONS",
    "linear_weight",
    "make_observable",
    "Estimate",
    "DecayCurve",
    "ExponentFit",
    "fit_exponent",
    "sample_from_density",
    "fiber_offsets",
    "birkhoff_samples",
    "correlation_samples",
    "METHODS",
    "memory_loss_curve",
    "memory_loss_curves",
    "dominance_margin",
    "correlation",
    "variance_curve",
    "operator_sigma2",
    "kolmogorov_distance",
    "CltReport",
    "clt_diagnostic",
    "MomentReport",
    "moment_growth",
    "MartingaleParts",
    "martingale_parts",
    "martingale_orthogonality_check",
    "telescoping_residual",
    "AnnealedCorrelations",
    "AnnealedVariance",
    "annealed_correlations",
    "annealed_correlation",
    "annealed_variance",
    "variance_from_correlations",
    "Prediction",
    "predictions",
]
