"""Counting invariant on fan models, with a brute-force metric oracle.

Endpoints of a fan model are the tips of legs that are not glued into a
host.  On the arc from the top to an endpoint, the points where endpoint
sequences accumulate are, in the Cantor-bundle models built here, exactly
the tip heights of the arcs laid onto that leg (the leg itself plus its
glued guests): every tip is the limit of its bundle-neighbors' tips.  The
multiset of those accumulation counts over all endpoints is preserved by
homeomorphisms, so differing profiles certify non-homeomorphic fans.

The combinatorial count is cheap; ``juma_metric_oracle`` recomputes it by
direct limit-point detection in a planar embedding and anchors the rule.
"""

from __future__ import annotations

import bisect
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

from .errors import NotDistinguished
from .itinerary import address_value
from .mahavier import cantor_chunk_start
from .quotients import AParam, FanModel, build_fan, host_bundle


def endpoints(fan: FanModel) -> tuple[int, ...]:
    """Indices of legs whose tips are endpoints: everything not a guest."""
    guests = fan.guest_indices
    return tuple(i for i in range(len(fan.legs)) if i not in guests)


def juma_heights(fan: FanModel, leg_index: int) -> tuple[float, ...]:
    """Heights on a leg where endpoint sequences accumulate.

    One height per arc laid onto the leg: its own length plus the length
    of every glued guest.  The top (height zero) never appears.
    """
    if not 0 <= leg_index < len(fan.legs):
        raise ValueError("leg index out of range")
    heights = {fan.legs[leg_index].length}
    for gi in fan.guests_of(leg_index):
        heights.add(fan.legs[gi].length)
    return tuple(sorted(heights, reverse=True))


def juma_count(fan: FanModel, leg_index: int) -> int:
    return len(juma_heights(fan, leg_index))


@dataclass(frozen=True)
class JumaProfile:
    """Sorted multiset of accumulation counts, one per endpoint."""

    counts: tuple[int, ...]

    @property
    def distinct_values(self) -> frozenset[int]:
        return frozenset(self.counts)

    def multiset(self) -> Counter:
        return Counter(self.counts)

    def to_dict(self) -> dict:
        return {"counts": sorted(Counter(self.counts).items())}


def profile(fan: FanModel) -> JumaProfile:
    return JumaProfile(tuple(sorted(juma_count(fan, e) for e in endpoints(fan))))


@dataclass
class DistinguishCertificate:
    """Witness that two gluing parameters give non-homeomorphic fans."""

    k: int
    first_value: int
    second_value: int
    first_counts: dict
    second_counts: dict

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "first_value": self.first_value,
            "second_value": self.second_value,
            "first_counts": dict(self.first_counts),
            "second_counts": dict(self.second_counts),
        }


@lru_cache(maxsize=512)
def _cached_profile(coords: tuple[int, ...], kmax_bundle: int, depth: int) -> JumaProfile:
    return profile(build_fan(AParam(coords), kmax_bundle, depth))


def distinguish(
    a: AParam, b: AParam, kmax: int, depth: int
) -> DistinguishCertificate:
    """Certificate that the fans of two parameters differ, or an error.

    The first coordinate where the truncated parameters differ contributes
    an accumulation count to one profile that the other cannot realize:
    block k counts land in {2k, 2k+1}, so blocks never collide.
    """
    ta, tb = a.truncate(kmax), b.truncate(kmax)
    if ta.coords == tb.coords:
        raise NotDistinguished(
            "parameters agree on every modeled coordinate; raise kmax"
        )
    k = next(
        pos
        for pos in range(1, min(len(ta), len(tb)) + 1)
        if ta[pos] != tb[pos]
    )
    kmax_bundle = host_bundle(kmax) + 2 * kmax
    pa = _cached_profile(ta.coords, kmax_bundle, depth)
    pb = _cached_profile(tb.coords, kmax_bundle, depth)
    va, vb = ta[k] + 1, tb[k] + 1
    if va not in pa.distinct_values or va in pb.distinct_values:
        raise NotDistinguished(
            f"count {va} did not separate the profiles; raise kmax"
        )
    return DistinguishCertificate(
        k, va, vb, dict(pa.multiset()), dict(pb.multiset())
    )


def hausdorff_dist(points_a, points_b, metric=None) -> float:
    """Hausdorff distance between two finite nonempty point sets."""
    a = list(points_a)
    b = list(points_b)
    if not a or not b:
        raise ValueError("point sets must be nonempty")
    if metric is None:
        metric = lambda p, q: math.dist(p, q)
    forward = max(min(metric(p, q) for q in b) for p in a)
    backward = max(min(metric(p, q) for q in a) for p in b)
    return max(forward, backward)


# ---------------------------------------------------------------------------
# Planar embedding and the metric oracle
# ---------------------------------------------------------------------------


def leg_x(fan: FanModel, leg_index: int) -> float:
    """Horizontal position of a leg: its address embedded in its chunk."""
    leg = fan.legs[leg_index]
    try:
        k = int(leg.bundle)
    except ValueError as exc:
        raise ValueError(
            f"bundle {leg.bundle!r} has no planar chunk position"
        ) from exc
    return cantor_chunk_start(k) + 3.0 ** (-k) * address_value(leg.address)


def arc_sample(fan: FanModel, leg_index: int, tau: float, cells: int = 64):
    """Sample points of the arc from the top to height tau on a leg."""
    x = leg_x(fan, leg_index)
    return [(x, tau * i / cells) for i in range(cells + 1)]


def fan_point_dist(p: tuple[float, float], q: tuple[float, float]) -> float:
    """Planar distance in the glued picture: direct, or through the top."""
    return min(math.dist(p, q), p[1] + q[1])


@dataclass
class OracleResult:
    """Detected accumulation points per maximal leg.

    ``clusters`` maps a leg index to merged detection intervals
    (lo, hi); ``points`` holds the raw detected grid heights.
    """

    clusters: dict
    points: dict

    def cluster_count(self, leg_index: int) -> int:
        return len(self.clusters.get(leg_index, ()))


def juma_metric_oracle(fan: FanModel, grid: float = 2.0**-10) -> OracleResult:
    """Brute-force limit-point detection in the planar embedding.

    Legs hang as vertical segments over their chunk positions; glued
    guests are laid onto their hosts, so a host point at height tau also
    represents the guest columns up to each guest's length.  A grid point
    is detected when an endpoint of another leg lies within 1.5 times the
    distance from the point's column to the nearest endpoint column of
    the same bundle: the scale at which every column sees its bundle
    neighbors but no foreign structure.
    """
    guests = fan.guest_indices
    maximal = [i for i in range(len(fan.legs)) if i not in guests]

    # endpoints by bundle, sorted by x, for windowed lookups
    tips: dict[str, list[tuple[float, int, float]]] = {}
    for i in maximal:
        leg = fan.legs[i]
        tips.setdefault(leg.bundle, []).append((leg_x(fan, i), i, leg.length))
    for entries in tips.values():
        entries.sort()

    def nearest_tip_dist(bundle: str, x: float, exclude: int) -> float:
        best = math.inf
        entries = tips.get(bundle, ())
        xs = [e[0] for e in entries]
        i = bisect.bisect_left(xs, x)
        for j in range(max(0, i - 3), min(len(entries), i + 3)):
            ex, ei, _ = entries[j]
            if ei != exclude:
                best = min(best, abs(ex - x))
        return best

    cells = round(1.0 / grid)
    clusters: dict[int, list[tuple[float, float]]] = {}
    points: dict[int, list[float]] = {}

    for li in maximal:
        leg = fan.legs[li]
        # representatives of this leg's points: its own column plus each
        # glued guest's column, valid up to the guest's length
        reps = [(leg_x(fan, li), leg.length, leg.bundle)]
        for gi in fan.guests_of(li):
            g = fan.legs[gi]
            reps.append((leg_x(fan, gi), g.length, g.bundle))
        # exclude the top: nothing below half the finest grid step counts
        floor = 0.5 * grid * min(cap for _, cap, _ in reps)

        intervals: list[tuple[float, float]] = []
        for rx, cap, bundle in reps:
            delta = 1.5 * nearest_tip_dist(bundle, rx, li)
            if not math.isfinite(delta) or delta <= 0.0:
                continue
            entries = tips.get(bundle, ())
            xs = [e[0] for e in entries]
            lo_i = bisect.bisect_left(xs, rx - delta)
            hi_i = bisect.bisect_right(xs, rx + delta)
            for ex, ei, eh in entries[lo_i:hi_i]:
                if ei == li:
                    continue
                dx = ex - rx
                if abs(dx) > delta:
                    continue
                s = math.sqrt(delta * delta - dx * dx)
                lo_h = max(eh - s, floor)
                hi_h = min(eh + s, cap)
                if lo_h <= hi_h:
                    intervals.append((lo_h, hi_h))

        if not intervals:
            continue
        intervals.sort()
        merged = [intervals[0]]
        for lo_h, hi_h in intervals[1:]:
            if lo_h <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], hi_h))
            else:
                merged.append((lo_h, hi_h))

        # grid heights: relative subdivisions of every arc laid on this leg
        arcs = [leg.length] + [fan.legs[gi].length for gi in fan.guests_of(li)]
        detected = set()
        kept = []
        for lo_h, hi_h in merged:
            hit = False
            for arc_len in arcs:
                step = arc_len * grid
                first = max(1, math.ceil(lo_h / step - 1e-9))
                last = math.floor(hi_h / step + 1e-9)
                for idx in range(first, min(last, cells) + 1):
                    h = idx * step
                    if lo_h - 1e-15 <= h <= hi_h + 1e-15:
                        detected.add(h)
                        hit = True
            if hit:
                kept.append((lo_h, hi_h))
        if kept:
            clusters[li] = kept
            points[li] = sorted(detected)

    return OracleResult(clusters, points)


def oracle_agreement(fan: FanModel, grid: float = 2.0**-10) -> dict:
    """Compare the combinatorial heights with the metric oracle per leg."""
    result = juma_metric_oracle(fan, grid)
    mismatches = []
    for li in endpoints(fan):
        expected = juma_heights(fan, li)
        got = result.clusters.get(li, [])
        ok = len(got) == len(expected) and all(
            any(lo <= h <= hi for lo, hi in got) for h in expected
        )
        if not ok:
            mismatches.append(
                {
                    "leg": li,
                    "expected": list(expected),
                    "clusters": [list(c) for c in got],
                }
            )
    return {"passed": not mismatches, "mismatches": mismatches}
