"""
Sphere geometry, lazy path combinators and the optimal sphere planners.
"""
from .geometry import (
    SpherePoint,
    as_coords,
    basis_vector,
    nu_field,
    random_sphere_point,
    stereo_p,
    stereo_q,
    v_field,
)
from .paths import Path, Reparametrized, Segment, concat, constant, reparametrize, reverse, scaled
from .planner import (
    Parity,
    PlanResult,
    geodesic_section,
    parity_of,
    plan_even,
    plan_odd,
    plan_sphere,
    region_count,
    region_cover,
    region_margin,
    region_member,
)

__all__ = [
    "Parity",
    "Path",
    "PlanResult",
    "Reparametrized",
    "Segment",
    "SpherePoint",
    "as_coords",
    "basis_vector",
    "concat",
    "constant",
    "geodesic_section",
    "nu_field",
    "parity_of",
    "plan_even",
    "plan_odd",
    "plan_sphere",
    "random_sphere_point",
    "region_count",
    "region_cover",
    "region_margin",
    "region_member",
    "reparametrize",
    "reverse",
    "scaled",
    "stereo_p",
    "stereo_q",
    "v_field",
]
