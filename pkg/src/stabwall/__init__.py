"""Exact wall-and-chamber computations for one-dimensional classes on P^3."""

from .charge import StabParams, charge, heart_generator_charges, in_quiver_region, slope, support_margin
from .errors import (
    ChargeVanishes,
    CoincidentWalls,
    DegenerateError,
    InputError,
    InvariantViolation,
    NotRepresentable,
    StabwallError,
    SupportFailure,
)
from .kclass import KClass, dual_class, euler_pairing, hilbert_poly, line_bundle, twist
from .kronecker import FormMatrix, MPoly, classify_stratum, expected_dim, theta_stable_23
from .quiverheart import DimVector, class_of, dimvec_of, reverse, scan_walls, stable_range
from .ratpoly import Interval, RatPoly, RealRoot, real_roots
from .wallmap import WallCurve, general_wall, intersect_walls, wall_at_u0, wall_between

__version__ = "0.1.0"

__all__ = [
    "ChargeVanishes", "CoincidentWalls", "DegenerateError", "DimVector", "FormMatrix", "InputError",
    "Interval", "InvariantViolation", "KClass", "MPoly", "NotRepresentable", "RatPoly", "RealRoot",
    "StabParams", "StabwallError", "SupportFailure", "WallCurve", "charge", "class_of", "classify_stratum",
    "dimvec_of", "dual_class", "euler_pairing", "expected_dim", "general_wall", "heart_generator_charges",
    "hilbert_poly", "in_quiver_region", "intersect_walls", "line_bundle", "real_roots", "reverse",
    "scan_walls", "slope", "stable_range", "support_margin", "theta_stable_23", "twist", "wall_at_u0",
    "wall_between",
]
