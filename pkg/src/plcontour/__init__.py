"""
plcontour
=========

Exact radial contour factorization, bridging and inverse-system rewiring for
piecewise-linear maps of [-1, 1].
"""

__version__ = "1.0.0"

from .bridging import BridgedFactor, build_bridged_s, stay_right, verify_bridged
from .contour import (
    contour_points,
    departures,
    lift_through,
    meandering_lift,
    radial_contour_factor,
    radial_departure_exists,
    reach,
)
from .plmap import Orientation, PLMap, PointedPLMap, Side, compose, evaluate
from .simplicial import (
    SimplicialSystem,
    Verdict,
    check_simplicial,
    find_schedule,
    markov_refine,
    normalize_point,
    pipeline,
)
from .systems import (
    SystemPrefix,
    check_same_contour_chain,
    check_zigzag_free,
    compose_schedule,
    coordinate_map_h,
    drop_prefix,
    rewire,
)

__all__ = [
    "__version__",
    "BridgedFactor",
    "Orientation",
    "PLMap",
    "PointedPLMap",
    "Side",
    "SimplicialSystem",
    "SystemPrefix",
    "Verdict",
    "build_bridged_s",
    "check_same_contour_chain",
    "check_simplicial",
    "check_zigzag_free",
    "compose",
    "compose_schedule",
    "contour_points",
    "coordinate_map_h",
    "departures",
    "drop_prefix",
    "evaluate",
    "find_schedule",
    "lift_through",
    "markov_refine",
    "meandering_lift",
    "normalize_point",
    "pipeline",
    "radial_contour_factor",
    "radial_departure_exists",
    "reach",
    "rewire",
    "stay_right",
    "verify_bridged",
]
