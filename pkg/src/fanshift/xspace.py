"""The base compactum: a ray of unit intervals plus a point at infinity.

Points live on ``[0,1] u [2,3] u [4,5] u ...`` together with one extra point
``infinity``.  The metric is pulled back through an increasing chart that
sends the k-th interval (k = 1, 2, ...) affinely onto
``[1 - 2^(2-2k), 1 - 2^(1-2k)]`` and infinity to 1, so interval k has
diameter exactly ``2^(1-2k)`` and the intervals accumulate at infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

DEFAULT_EPS = 1e-12


def cbrt(u: float) -> float:
    """Cube root on [0, 1] with one Newton polish (exact on exact cubes)."""
    if u == 0.0:
        return 0.0
    r = u ** (1.0 / 3.0)
    return r - (r * r * r - u) / (3.0 * r * r)


@dataclass(frozen=True)
class Tolerance:
    """Absolute comparison tolerance for float coordinates."""

    eps_eq: float = DEFAULT_EPS

    def __post_init__(self):
        if self.eps_eq <= 0:
            raise ValueError("eps_eq must be positive")


TOL = Tolerance()


@dataclass(frozen=True)
class XPoint:
    """A point of the compactum.

    ``k`` is the 1-based interval index and ``u`` the local coordinate in
    [0, 1]; the ambient position is ``2(k-1) + u``.  ``k is None`` encodes
    the point at infinity.  A local coordinate within ``DEFAULT_EPS`` outside
    [0, 1] is clamped; anything farther out is rejected.
    """

    k: int | None
    u: float = 0.0

    def __post_init__(self):
        if self.k is None:
            object.__setattr__(self, "u", 0.0)
            return
        if self.k < 1:
            raise ValueError(f"interval index must be >= 1, got {self.k}")
        u = self.u
        if not (0.0 <= u <= 1.0):
            if u < -DEFAULT_EPS or u > 1.0 + DEFAULT_EPS:
                raise ValueError(f"local coordinate {u!r} outside [0, 1]")
            u = min(1.0, max(0.0, u))
            object.__setattr__(self, "u", u)

    @property
    def is_infinity(self) -> bool:
        return self.k is None

    @property
    def ambient(self) -> float:
        """Position on the real line; infinity maps to math.inf."""
        if self.k is None:
            return math.inf
        return 2.0 * (self.k - 1) + self.u


INFINITY = XPoint(None)


def finite(k: int, u: float) -> XPoint:
    return XPoint(k, u)


def embed(x: XPoint) -> float:
    """Increasing chart into [0, 1]; the metric is the pullback of |.|.

    Interval k lands on [1 - 2^(2-2k), 1 - 2^(1-2k)]; infinity on 1.  All
    endpoint images are dyadic, so diameters and gaps are exact in floats
    for k up to the double-precision mantissa range.
    """
    if x.k is None:
        return 1.0
    k = x.k
    return (1.0 - 2.0 ** (2 - 2 * k)) + x.u * 2.0 ** (1 - 2 * k)


def dist(x: XPoint, y: XPoint) -> float:
    """Chart metric; bounded by 1, zero only at equal points."""
    return abs(embed(y) - embed(x))


def interval_diameter(k: int) -> float:
    """Diameter of interval k in the chart metric: 2^(1-2k)."""
    if k < 1:
        raise ValueError("interval index must be >= 1")
    return 2.0 ** (1 - 2 * k)


def points_equal(x: XPoint, y: XPoint, tol: Tolerance = TOL) -> bool:
    """Equality up to tolerance in the local coordinate.

    Intervals are pairwise disjoint with gaps, so indices must match
    exactly; only the local coordinate is compared approximately.
    """
    if x.k is None or y.k is None:
        return x.k is None and y.k is None
    return x.k == y.k and abs(x.u - y.u) <= tol.eps_eq
