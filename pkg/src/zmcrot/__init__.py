"""Zero-mean-curvature rotational surfaces M1(b), M2(b) in pseudo-Euclidean E^4_2."""
from .catalog import CATALOG, get_example
from .ode_integrate import branch_first_order, integrate_profile, unit_start
from .profiles import (
    Arcsine,
    Explicit,
    Hyperbolic,
    Power,
    Quadratic,
    arclength_reparametrize,
    make_profile,
    regularity_scan,
    sampled_curve,
)
from .surface_geom import SurfaceFamily, eval_frame, eval_point, fundamental_data, mean_curvature
from .zmc_analysis import classify_causal, closed_form_membership, verify_surface

__version__ = "0.1.0"

__all__ = [
    "CATALOG",
    "Arcsine",
    "Explicit",
    "Hyperbolic",
    "Power",
    "Quadratic",
    "SurfaceFamily",
    "arclength_reparametrize",
    "branch_first_order",
    "classify_causal",
    "closed_form_membership",
    "eval_frame",
    "eval_point",
    "fundamental_data",
    "get_example",
    "integrate_profile",
    "make_profile",
    "mean_curvature",
    "regularity_scan",
    "sampled_curve",
    "unit_start",
    "verify_surface",
]
