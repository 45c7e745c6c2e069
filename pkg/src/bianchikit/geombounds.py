"""Closed-form genus/area/systole inequalities for hyperbolic 3-manifolds.

All lengths and areas are in curvature -1 units.  Double precision with a
1e-12 comparison tolerance on thresholds; strictness at the genus-2
exclusion boundary is preserved (the threshold itself is excluded).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

EPS = 1e-12


def ball_area_bound(r: float) -> float:
    """Least area a stable minimal surface cuts out of a radius-r ball."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    return 2.0 * math.pi * (math.cosh(r) - 1.0)


def min_genus_from_area(area: float) -> int:
    """Smallest integer g with g >= area/(4*pi) + 1."""
    if area < 0:
        raise ValueError("area must be non-negative")
    return math.ceil(area / (4.0 * math.pi) + 1.0 - EPS)


def min_area_from_systole(sys: float) -> float:
    """Area forced on a closed stable minimal surface by the systole."""
    if sys <= 0:
        raise ValueError("systole must be positive")
    return 2.0 * math.pi * (math.cosh(sys / 2.0) - 1.0)


def genus2_exclusion_threshold() -> float:
    """The systole threshold above which genus-2 surface subgroups die.

    Evaluates max(2*arccosh 3, min(2*arccosh(9/2), 4*arccosh 3)) and checks
    it collapses to 2*arccosh(9/2) within 1e-12.
    """
    value = max(
        2.0 * math.acosh(3.0),
        min(2.0 * math.acosh(4.5), 4.0 * math.acosh(3.0)),
    )
    expected = 2.0 * math.acosh(4.5)
    assert abs(value - expected) <= EPS
    return value


def excludes_genus2(sys: float) -> bool:
    """Strictly exceeding the threshold rules out genus-2 subgroups."""
    if sys <= 0:
        raise ValueError("systole must be positive")
    return sys > genus2_exclusion_threshold()


@dataclass(frozen=True)
class GeomQuery:
    """One of sys / area / r, with every bound derivable from it."""

    sys: Optional[float] = None
    area: Optional[float] = None
    r: Optional[float] = None

    def derive(self) -> dict:
        out: dict = {"threshold": genus2_exclusion_threshold()}
        if self.r is not None:
            out["ball_area_bound"] = ball_area_bound(self.r)
        area = self.area
        if self.sys is not None:
            out["min_area_from_systole"] = min_area_from_systole(self.sys)
            out["excludes_genus2"] = excludes_genus2(self.sys)
            if area is None:
                area = out["min_area_from_systole"]
        if area is not None:
            out["min_genus_from_area"] = min_genus_from_area(area)
        return out
