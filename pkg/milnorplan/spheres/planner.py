"""
Optimal motion planners on spheres.

Odd m: two regions, U1 = {theta1 != -theta2} with the normalized chord s1 and
U2 = {theta1 != theta2} with s2, which first runs s1 to -theta2 and then
detours from -theta2 to theta2 through the tangent field v.

Even m: three regions. V1 and kappa1 as U1 and s1; V2 additionally excludes
theta2 = +-e1 so the detour can use the normalized field nu; V3 is the square
of the stereographic chart domain, planned along a chart line.
"""
from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple

import numpy as np
import structlog

from ..config import settings
from ..exceptions import SphereDomainError
from .geometry import as_coords, nu_field, stereo_p, stereo_q, v_field
from .paths import Constant, Path, Segment, concat

logger = structlog.get_logger(__name__)


class Parity(str, Enum):
    ODD = "odd"
    EVEN = "even"


def parity_of(m: int) -> Parity:
    return Parity.ODD if m % 2 else Parity.EVEN


def region_count(style: Parity) -> int:
    """Number of regions of the planner, i.e. TC(S^m)."""
    return 2 if style == Parity.ODD else 3


@dataclass(frozen=True)
class PlanResult:
    """Region index (1-based), the planned path on S^m and the region margin."""
    region: int
    path: Path
    margin: float


def _pair(theta1, theta2) -> Tuple[np.ndarray, np.ndarray]:
    theta1, theta2 = as_coords(theta1), as_coords(theta2)
    if theta1.shape != theta2.shape:
        raise SphereDomainError("Both sphere points must lie on the same sphere.")
    return theta1, theta2


def region_margin(style: Parity, i: int, theta1, theta2) -> float:
    """
    Distance-like margin of (theta1, theta2) from the boundary of region i;
    positive inside.
    """
    theta1, theta2 = _pair(theta1, theta2)
    dot = float(theta1 @ theta2)
    if i == 1:
        return 1.0 + dot
    if style == Parity.ODD and i == 2:
        return 1.0 - dot
    if style == Parity.EVEN and i == 2:
        return min(1.0 - dot, 1.0 - abs(float(theta2[0])))
    if style == Parity.EVEN and i == 3:
        return min(1.0 - float(theta1[-1]), 1.0 - float(theta2[-1]))
    raise SphereDomainError(f"Region {i} does not exist for the {style.value} planner.")


def region_member(m: int, style: Parity, i: int, theta1, theta2) -> Tuple[bool, float]:
    """Membership of (theta1, theta2) in region i, with its margin."""
    if parity_of(m) != style:
        raise SphereDomainError(f"S^{m} needs the {parity_of(m).value} planner, not {style.value}.")
    theta1, theta2 = _pair(theta1, theta2)
    if theta1.size != m + 1:
        raise SphereDomainError(f"Points do not lie on S^{m}.")
    margin = region_margin(style, i, theta1, theta2)
    return margin > settings.REGION_ETA, margin


def region_cover(theta1, theta2) -> List[int]:
    """All regions containing the pair."""
    theta1, theta2 = _pair(theta1, theta2)
    m = theta1.size - 1
    style = parity_of(m)
    return [
        i for i in range(1, region_count(style) + 1)
        if region_member(m, style, i, theta1, theta2)[0]
    ]


def geodesic_section(theta1, theta2) -> Path:
    """s1 = kappa1: the normalized chord ((1-t) theta1 + t theta2) / ||...||."""
    theta1, theta2 = _pair(theta1, theta2)
    if not float(theta1 @ theta2) > -1.0 + settings.REGION_ETA:
        raise SphereDomainError("The chord section is undefined for antipodal points.")
    if np.array_equal(theta1, theta2):
        return Constant(theta1)

    def chord(t: float) -> np.ndarray:
        w = (1.0 - t) * theta1 + t * theta2
        return w / np.linalg.norm(w)

    def chords(ts: np.ndarray) -> np.ndarray:
        w = np.outer(1.0 - ts, theta1) + np.outer(ts, theta2)
        return w / np.linalg.norm(w, axis=1, keepdims=True)

    return Segment(chord, theta1, theta2, batch=chords)


def _detour(a: np.ndarray, b: np.ndarray, tangent: np.ndarray) -> Path:
    """Two chord sections a -> tangent -> b for an antipodal pair (a, b = -a)."""
    return concat(geodesic_section(a, tangent), geodesic_section(tangent, b))


def _choose(style: Parity, theta1: np.ndarray, theta2: np.ndarray) -> Tuple[int, float]:
    # lowest index wins
    for i in range(1, region_count(style) + 1):
        margin = region_margin(style, i, theta1, theta2)
        if margin > settings.REGION_ETA:
            return i, margin
    raise SphereDomainError("No planner region contains the pair.")


def plan_odd(m: int, theta1, theta2) -> PlanResult:
    """The two-region planner s on an odd sphere S^m."""
    if m % 2 == 0:
        raise SphereDomainError(f"plan_odd needs an odd sphere, got S^{m}.")
    theta1, theta2 = _pair(theta1, theta2)
    region, margin = _choose(Parity.ODD, theta1, theta2)
    if region == 1:
        return PlanResult(region=1, path=geodesic_section(theta1, theta2), margin=margin)

    # s2: s1(theta1, -theta2), then alpha(-theta2, theta2) via v(-theta2)
    antipode = -theta2
    path = concat(geodesic_section(theta1, antipode), _detour(antipode, theta2, v_field(antipode)))
    return PlanResult(region=2, path=path, margin=margin)


def plan_even(m: int, theta1, theta2) -> PlanResult:
    """The three-region planner kappa on an even sphere S^m."""
    if m % 2:
        raise SphereDomainError(f"plan_even needs an even sphere, got S^{m}.")
    theta1, theta2 = _pair(theta1, theta2)
    region, margin = _choose(Parity.EVEN, theta1, theta2)
    if region == 1:
        return PlanResult(region=1, path=geodesic_section(theta1, theta2), margin=margin)

    if region == 2:
        antipode = -theta2
        nu = nu_field(antipode)
        path = concat(
            geodesic_section(theta1, antipode),
            _detour(antipode, theta2, nu / np.linalg.norm(nu)),
        )
        return PlanResult(region=2, path=path, margin=margin)

    y1, y2 = stereo_p(theta1), stereo_p(theta2)
    path = Segment(
        lambda t: stereo_q((1.0 - t) * y1 + t * y2),
        theta1,
        theta2,
        batch=lambda ts: stereo_q(np.outer(1.0 - ts, y1) + np.outer(ts, y2)),
    )
    return PlanResult(region=3, path=path, margin=margin)


def plan_sphere(theta1, theta2) -> PlanResult:
    """Dispatches on the parity of the sphere the points live on."""
    theta1, theta2 = _pair(theta1, theta2)
    m = theta1.size - 1
    return plan_odd(m, theta1, theta2) if m % 2 else plan_even(m, theta1, theta2)
