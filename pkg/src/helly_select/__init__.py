"""Selecting few halfspaces whose intersection approximates a polytope."""
from .centers import CENTER_METHODS, asymmetry_lambda, compute_center, mvee
from .estimator import HellySelector
from .exceptions import (CertificateError, DegenerateInputError, EnumerationOverflowError,
                         HellyError, NumericalFailure, OriginNotInteriorError,
                         PreconditionError, SpanDeficientError, UnboundedError)
from .grunbaum import audit_selection, max_volume_simplex, select_2d, select_2d_plus_1
from .hull import centroid_of_hull, diameter, gauge, volume
from .lower_bound import (StripFamily, conjecture2_probe, diameter_gap_experiment,
                          sphere_family, witness)
from .pipeline import SelectionResult, homothetic_factor, polarize, prepare, run_pipeline
from .polytope import HPolytope, Halfspace, VPolytope, enumerate_vertices
from .tolerance import DEFAULT_TOLERANCE, Tolerance

__all__ = [
    "CENTER_METHODS", "CertificateError", "DEFAULT_TOLERANCE", "DegenerateInputError",
    "EnumerationOverflowError", "HPolytope", "Halfspace", "HellyError", "HellySelector",
    "NumericalFailure", "OriginNotInteriorError", "PreconditionError", "SelectionResult",
    "SpanDeficientError", "StripFamily", "Tolerance", "UnboundedError", "VPolytope",
    "asymmetry_lambda", "audit_selection", "centroid_of_hull", "compute_center",
    "conjecture2_probe", "diameter", "diameter_gap_experiment", "enumerate_vertices", "gauge",
    "homothetic_factor", "max_volume_simplex", "mvee", "polarize", "prepare", "run_pipeline",
    "select_2d", "select_2d_plus_1", "sphere_family", "volume", "witness",
]
__version__ = "0.1.0"
