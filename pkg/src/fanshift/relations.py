"""The coupling relation on the compactum and its decomposition.

The relation consists of six families of pairs (x, y):

  * a cube-root graph over interval 1,
  * a squaring graph over interval 2,
  * translation up (k -> k+1) over every interval,
  * translation down (k -> k-1) over intervals k >= 2,
  * the identity over intervals k >= 3,
  * the fixed pair at infinity.

Three total bijections F1, F2, F3 cover the relation with graphs; the same
holds for their inverses.  ``decomposition_check`` verifies both covers by
sampling.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .errors import DomainError
from .xspace import INFINITY, TOL, Tolerance, XPoint, cbrt

CUBE_ROOT = "cuberoot"
SQUARE = "square"
UP = "up"
DOWN = "down"
IDENT = "ident"
INF_FIX = "inf"


@dataclass(frozen=True)
class PieceMap:
    """One monotone building block of the relation.

    Each piece is an increasing bijection from its domain interval onto its
    range interval; ``k`` is the domain index for up/down/ident and is fixed
    to 1 and 2 for the cube-root and squaring pieces.
    """

    kind: str
    k: int = 0

    def __post_init__(self):
        if self.kind == CUBE_ROOT:
            object.__setattr__(self, "k", 1)
        elif self.kind == SQUARE:
            object.__setattr__(self, "k", 2)
        elif self.kind == UP:
            if self.k < 1:
                raise ValueError("up piece needs domain index >= 1")
        elif self.kind == DOWN:
            if self.k < 2:
                raise ValueError("down piece needs domain index >= 2")
        elif self.kind == IDENT:
            if self.k < 3:
                raise ValueError("identity piece needs domain index >= 3")
        elif self.kind == INF_FIX:
            object.__setattr__(self, "k", 0)
        else:
            raise ValueError(f"unknown piece kind {self.kind!r}")

    @classmethod
    def cube_root(cls) -> "PieceMap":
        return cls(CUBE_ROOT)

    @classmethod
    def square(cls) -> "PieceMap":
        return cls(SQUARE)

    @classmethod
    def up(cls, k: int) -> "PieceMap":
        return cls(UP, k)

    @classmethod
    def down(cls, k: int) -> "PieceMap":
        return cls(DOWN, k)

    @classmethod
    def ident(cls, k: int) -> "PieceMap":
        return cls(IDENT, k)

    @classmethod
    def inf_fix(cls) -> "PieceMap":
        return cls(INF_FIX)

    @property
    def domain_index(self) -> int | None:
        return None if self.kind == INF_FIX else self.k

    @property
    def range_index(self) -> int | None:
        if self.kind == INF_FIX:
            return None
        if self.kind == UP:
            return self.k + 1
        if self.kind == DOWN:
            return self.k - 1
        return self.k

    def apply_u(self, u: float) -> float:
        """Action on the local coordinate (all pieces preserve [0, 1])."""
        if self.kind == CUBE_ROOT:
            return cbrt(u)
        if self.kind == SQUARE:
            return u * u
        return u

    def invert_u(self, u: float) -> float:
        if self.kind == CUBE_ROOT:
            return u * u * u
        if self.kind == SQUARE:
            return math.sqrt(u)
        return u

    def apply(self, x: XPoint) -> XPoint:
        if self.kind == INF_FIX:
            if not x.is_infinity:
                raise DomainError("infinity piece applied to a finite point")
            return INFINITY
        if x.is_infinity or x.k != self.k:
            raise DomainError(f"{x} outside domain interval {self.k} of {self.kind}")
        return XPoint(self.range_index, self.apply_u(x.u))

    def invert(self, y: XPoint) -> XPoint:
        """Exact piecewise inverse; domain is the piece's range interval."""
        if self.kind == INF_FIX:
            if not y.is_infinity:
                raise DomainError("infinity piece inverted at a finite point")
            return INFINITY
        if y.is_infinity or y.k != self.range_index:
            raise DomainError(f"{y} outside range interval of {self.kind}")
        return XPoint(self.k, self.invert_u(y.u))


GLOBAL_MAPS = ("F1", "F2", "F3")


def global_apply(name: str, x: XPoint) -> XPoint:
    """Evaluate one of the three covering bijections.

    F1 bends interval 1 by the cube root and interval 2 by the square,
    fixing everything else.  F2 swaps intervals in adjacent pairs
    (1,2), (3,4), ...  F3 cube-roots interval 1 and swaps the pairs
    (2,3), (4,5), ...  All three fix infinity.
    """
    if name not in GLOBAL_MAPS:
        raise ValueError(f"unknown global map {name!r}")
    if x.is_infinity:
        return INFINITY
    k, u = x.k, x.u
    if name == "F1":
        if k == 1:
            return XPoint(1, cbrt(u))
        if k == 2:
            return XPoint(2, u * u)
        return x
    if name == "F2":
        return XPoint(k + 1, u) if k % 2 == 1 else XPoint(k - 1, u)
    # F3
    if k == 1:
        return XPoint(1, cbrt(u))
    return XPoint(k + 1, u) if k % 2 == 0 else XPoint(k - 1, u)


def global_inverse(name: str, y: XPoint) -> XPoint:
    if name not in GLOBAL_MAPS:
        raise ValueError(f"unknown global map {name!r}")
    if y.is_infinity:
        return INFINITY
    k, u = y.k, y.u
    if name == "F1":
        if k == 1:
            return XPoint(1, u * u * u)
        if k == 2:
            return XPoint(2, math.sqrt(u))
        return y
    if name == "F2":
        # F2 is an involution.
        return global_apply("F2", y)
    # F3 sends even intervals up and odd intervals >= 3 down.
    if k == 1:
        return XPoint(1, u * u * u)
    return XPoint(k - 1, u) if k % 2 == 1 else XPoint(k + 1, u)


def in_H(x: XPoint, y: XPoint, tol: Tolerance = TOL) -> bool:
    """Membership of (x, y) in the relation, up to tolerance in u."""
    if x.is_infinity or y.is_infinity:
        return x.is_infinity and y.is_infinity
    eps = tol.eps_eq
    if y.k == x.k + 1 and abs(y.u - x.u) <= eps:
        return True
    if x.k >= 2 and y.k == x.k - 1 and abs(y.u - x.u) <= eps:
        return True
    if x.k == 1 and y.k == 1 and abs(y.u - cbrt(x.u)) <= eps:
        return True
    if x.k == 2 and y.k == 2 and abs(y.u - x.u * x.u) <= eps:
        return True
    if x.k >= 3 and y.k == x.k and abs(y.u - x.u) <= eps:
        return True
    return False


def h_image(x: XPoint) -> tuple[XPoint, ...]:
    """The section {y : (x, y) in the relation}, ordered by interval index.

    Cardinality is 2 on interval 1, 3 on intervals k >= 2, and 1 at
    infinity.
    """
    if x.is_infinity:
        return (INFINITY,)
    k, u = x.k, x.u
    if k == 1:
        return (XPoint(1, cbrt(u)), XPoint(2, u))
    if k == 2:
        return (XPoint(1, u), XPoint(2, u * u), XPoint(3, u))
    return (XPoint(k - 1, u), XPoint(k, u), XPoint(k + 1, u))


def h_preimage(y: XPoint) -> tuple[XPoint, ...]:
    """The inverse section {x : (x, y) in the relation}."""
    if y.is_infinity:
        return (INFINITY,)
    k, u = y.k, y.u
    if k == 1:
        return (XPoint(1, u * u * u), XPoint(2, u))
    if k == 2:
        return (XPoint(1, u), XPoint(2, math.sqrt(u)), XPoint(3, u))
    return (XPoint(k - 1, u), XPoint(k, u), XPoint(k + 1, u))


def _as_key_set(points, eps):
    """Canonical sorted tuple for set comparison up to tolerance."""
    out = []
    for p in sorted(points, key=lambda q: (q.k is None, q.k or 0, q.u)):
        if out and _same(out[-1], p, eps):
            continue
        out.append(p)
    return tuple(out)


def _same(a, b, eps):
    if a.is_infinity or b.is_infinity:
        return a.is_infinity and b.is_infinity
    return a.k == b.k and abs(a.u - b.u) <= eps


@dataclass
class DecompositionReport:
    """Outcome of the graph-cover check, serializable for CLI reports."""

    passed: bool
    samples_checked: int
    kmax: int
    first_counterexample: dict | None = None
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "samples_checked": self.samples_checked,
            "kmax": self.kmax,
            "first_counterexample": self.first_counterexample,
            "notes": list(self.notes),
        }


def decomposition_check(
    kmax: int,
    samples_per_interval: int,
    seed: int = 0,
    tol: Tolerance = TOL,
) -> DecompositionReport:
    """Verify that the relation equals the union of the three graphs.

    For sampled x with interval index <= kmax (plus infinity), the section
    of the relation must equal {F1(x), F2(x), F3(x)} as a set, and the
    inverse section must equal the set of the three inverse images.
    Duplicates collapse on interval 1, where F1 and F3 agree.
    """
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    rng = random.Random(seed)
    eps = tol.eps_eq
    checked = 0

    def sample_points():
        yield INFINITY
        for k in range(1, kmax + 1):
            yield XPoint(k, 0.0)
            yield XPoint(k, 1.0)
            for _ in range(max(0, samples_per_interval - 2)):
                yield XPoint(k, rng.random())

    for x in sample_points():
        forward = _as_key_set(h_image(x), eps)
        cover = _as_key_set((global_apply(n, x) for n in GLOBAL_MAPS), eps)
        if len(forward) != len(cover) or any(
            not _same(a, b, eps) for a, b in zip(forward, cover)
        ):
            return DecompositionReport(
                False,
                checked,
                kmax,
                first_counterexample={
                    "point": {"k": x.k, "u": x.u},
                    "side": "forward",
                },
            )
        backward = _as_key_set(h_preimage(x), eps)
        inv_cover = _as_key_set((global_inverse(n, x) for n in GLOBAL_MAPS), eps)
        if len(backward) != len(inv_cover) or any(
            not _same(a, b, eps) for a, b in zip(backward, inv_cover)
        ):
            return DecompositionReport(
                False,
                checked,
                kmax,
                first_counterexample={
                    "point": {"k": x.k, "u": x.u},
                    "side": "inverse",
                },
            )
        checked += 1

    return DecompositionReport(True, checked, kmax)
