"""Reachability, the symbolic dense family, and empirical orbit density.

Starting from an interior point of interval 1 with local coordinate t, the
relation reaches every point of the form t^(2^m / 3^n) translated into any
interval: cube-root steps divide the exponent by 3, squaring steps double
it, and up/down steps move between intervals.  This module builds those
witnesses explicitly, certifies epsilon-density of reachable sets at a
finite resolution, and assembles single shift orbits whose finite windows
pass near every cell of a window-space net.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import PathNotFound, ResourceCapExceeded
from .itinerary import Letter, Word, iter_words
from .mahavier import (
    ALL_INFINITY,
    MPoint,
    WindowConfig,
    coord_range,
    dist_window,
    dist_window_forward,
    fiber_length,
)
from .xspace import INFINITY, TOL, Tolerance, XPoint, cbrt, dist, embed

BFS_CAP = 10**6
INTERIOR_GUARD = 1e-14


def in_seed_set(x: XPoint) -> bool:
    """Membership in the dense open seed set: interval interiors only."""
    return x.k is not None and 0.0 < x.u < 1.0


def forward_reachable(s: XPoint, depth: int, *, cap: int = BFS_CAP) -> set[XPoint]:
    """All points reachable from s along at most ``depth`` relation steps.

    Interior seeds are tracked by exact exponent keys (interval, doublings,
    third-roots), so no float comparison is needed for deduplication.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if s.is_infinity:
        return {INFINITY}

    u0 = s.u
    interior = 0.0 < u0 < 1.0

    def value(m: int, n: int) -> float:
        if not interior:
            return u0
        return u0 ** (2.0**m / 3.0**n)

    # key: (interval, m, n); endpoint seeds keep a constant coordinate, so
    # their exponent components stay pinned at zero.
    start = (s.k, 0, 0)
    seen = {start}
    frontier = [start]
    for _ in range(depth):
        nxt = []
        for k, m, n in frontier:
            if interior:
                if k == 1:
                    steps = ((1, m, n + 1), (2, m, n))
                elif k == 2:
                    steps = ((1, m, n), (2, m + 1, n), (3, m, n))
                else:
                    steps = ((k - 1, m, n), (k + 1, m, n))
            else:
                if k == 1:
                    steps = ((1, 0, 0), (2, 0, 0))
                elif k == 2:
                    steps = ((1, 0, 0), (3, 0, 0))
                else:
                    steps = ((k - 1, 0, 0), (k + 1, 0, 0))
            for st in steps:
                if st not in seen:
                    seen.add(st)
                    if len(seen) > cap:
                        raise ResourceCapExceeded(
                            f"reachability from {s} exceeded cap {cap}"
                        )
                    nxt.append(st)
        frontier = nxt
        if not frontier:
            break
    return {XPoint(k, value(m, n)) for k, m, n in seen}


@dataclass(frozen=True)
class SymbolicPoint:
    """The point of interval k at local coordinate t_base^(2^m / 3^n).

    The triple (m, n, k) identifies the point exactly; ``path`` is an
    admissible witness chain of letters realizing it from the seed
    (interval 1, coordinate t_base).
    """

    t_base: Fraction
    m: int
    n: int
    k: int
    path: tuple[Letter, ...] = ()

    @property
    def value(self) -> float:
        return float(self.t_base) ** (2.0**self.m / 3.0**self.n)

    def xpoint(self) -> XPoint:
        return XPoint(self.k, self.value)


def _navigate(a: int, b: int) -> list[Letter]:
    """Up/down letters moving the interval index from a to b."""
    if b > a:
        return [Letter(i, 3) for i in range(a, b)]
    return [Letter(i, 1) for i in range(a, b, -1)]


def witness_path(m: int, n: int, k: int) -> tuple[Letter, ...]:
    """Letters from (interval 1, t) to (interval k, t^(2^m / 3^n)).

    Third-roots first, then one climb to interval 2 followed by m squarings
    when m > 0, then translation to the target interval.
    """
    path = [Letter(1, 2)] * n
    if m > 0:
        path.append(Letter(1, 3))
        path.extend([Letter(2, 2)] * m)
        path.extend(_navigate(2, k))
    else:
        path.extend(_navigate(1, k))
    return tuple(path)


def apply_path(x: XPoint, path) -> XPoint:
    for lt in path:
        x = lt.piece().apply(x)
    return x


def symbolic_family(
    t_base: Fraction | float, m_max: int, n_max: int, k_max: int
) -> list[SymbolicPoint]:
    """Every reachable exponent point in the (m, n, k) box, with witnesses."""
    t = Fraction(t_base).limit_denominator(10**12) if not isinstance(
        t_base, Fraction
    ) else t_base
    if not 0 < t < 1:
        raise ValueError("seed coordinate must lie strictly between 0 and 1")
    out = []
    for k in range(1, k_max + 1):
        for m in range(m_max + 1):
            for n in range(n_max + 1):
                out.append(SymbolicPoint(t, m, n, k, witness_path(m, n, k)))
    return out


def default_k_cut(eps: float) -> int:
    """Interval cutoff so one net point at infinity covers the deep tail."""
    return max(8, math.ceil(-math.log(eps, 4.0)) + 1)


@dataclass
class DensityReport:
    passed: bool
    eps: float
    k_cut: int
    net_size: int
    uncovered: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "eps": self.eps,
            "k_cut": self.k_cut,
            "net_size": self.net_size,
            "uncovered": list(self.uncovered),
        }


def eps_dense_check(points, eps: float, k_cut: int) -> DensityReport:
    """Report net points of the base space not eps-approximated by ``points``.

    The net is an eps/2 grid of the embedded picture of every interval up
    to k_cut, plus the point at infinity; intervals beyond k_cut lie within
    4^-k_cut of infinity, so k_cut only needs to match eps.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    embeds = sorted(embed(p) for p in points)
    if not embeds:
        raise ValueError("need a nonempty sample set")

    def min_dist(e: float) -> float:
        import bisect

        i = bisect.bisect_left(embeds, e)
        best = math.inf
        if i < len(embeds):
            best = embeds[i] - e
        if i > 0:
            best = min(best, e - embeds[i - 1])
        return best

    uncovered = []
    net_size = 0
    for k in range(1, k_cut + 1):
        lo = 1.0 - 2.0 ** (2 - 2 * k)
        diam = 2.0 ** (1 - 2 * k)
        cells = max(1, math.ceil(diam / (eps / 2.0)))
        for i in range(cells + 1):
            e = lo + diam * i / cells
            net_size += 1
            d = min_dist(e)
            if d > eps:
                uncovered.append({"k": k, "embed": e, "min_dist": d})
    net_size += 1
    d = min_dist(1.0)
    if d > eps:
        uncovered.append({"k": None, "embed": 1.0, "min_dist": d})
    return DensityReport(not uncovered, eps, k_cut, net_size, uncovered)


# ---------------------------------------------------------------------------
# Orbit construction
# ---------------------------------------------------------------------------


@dataclass
class Visit:
    net_index: int
    time: int
    dist: float
    forward_dist: float


@dataclass
class OrbitResult:
    point: MPoint
    net: list[MPoint]
    visits: list[Visit]
    eps: float
    cfg: WindowConfig
    k_cut: int
    passed: bool

    def to_dict(self) -> dict:
        return {
            "eps": self.eps,
            "half_width": self.cfg.half_width,
            "k_cut": self.k_cut,
            "net_size": len(self.net),
            "orbit_letters": len(self.point.word.letters),
            "passed": self.passed,
            "max_dist": max((v.dist for v in self.visits), default=0.0),
            "visits": len(self.visits),
        }


def orbit_k_cut(eps: float, half_width: int) -> int:
    """Smallest interval cutoff covered by the all-infinity net point."""
    k = 2
    while 2.0 ** (2 - 2 * (k + 1) + half_width) > eps:
        k += 1
    return k


def build_net(
    eps: float, cfg: WindowConfig, *, k_cut: int | None = None, u_cells: int = 12
) -> list[MPoint]:
    """Window-space net: every admissible window word up to the interval
    cutoff, crossed with a height grid, plus the all-infinity point."""
    n = cfg.half_width
    if k_cut is None:
        k_cut = orbit_k_cut(eps, n)
    net: list[MPoint] = []
    for k in range(1, k_cut + 1):
        for word in iter_words(k, 2 * n, start=-n):
            for i in range(u_cells + 1):
                net.append(MPoint(word, XPoint(k, i / u_cells)))
    net.append(ALL_INFINITY)
    return net


def _pull_back(u: float, word: Word, upto: int) -> float:
    """Pull a position-0 coordinate back to the word's position ``upto``."""
    for pos in range(-1, upto - 1, -1):
        u = word.letter(pos).piece().invert_u(u)
    return u


def _push(u: float, letters) -> float:
    for lt in letters:
        u = lt.piece().apply_u(u)
    return u


# exponents up to 2^60 so even a value one ulp below 1 can be pulled back
# toward the middle of the fiber in a single connector
_EXPONENTS: list[tuple[float, int, int]] = sorted(
    (2.0**m / 3.0**n, m, n) for m in range(61) for n in range(61)
)


def _steer_candidates(u_cur: float, v_target: float, tries: int):
    """Exponent pairs (m, n) ranked by |u_cur^(2^m/3^n) - v_target|.

    Degenerate powers that round to 0 or 1 are discarded so the orbit stays
    strictly inside the fiber and later connectors can keep steering.
    """
    ranked = []
    for e, m, n in _EXPONENTS:
        v = u_cur**e
        if v <= INTERIOR_GUARD or v >= 1.0 - INTERIOR_GUARD:
            continue
        ranked.append((abs(v - v_target), m + n, m, n))
    ranked.sort()
    return [(m, n) for _, _, m, n in ranked[:tries]]


def transitive_orbit_builder(
    eps: float,
    cfg: WindowConfig,
    *,
    k_cut: int | None = None,
    u_cells: int = 12,
    net: list[MPoint] | None = None,
    tries: int = 600,
    tol: Tolerance = TOL,
) -> OrbitResult:
    """Assemble one finite orbit whose windows pass near every net element.

    The orbit is one long admissible itinerary built element by element:
    a connector descends to interval 1, adjusts the local coordinate with
    third-root and squaring steps chosen from an exponent lattice, climbs
    to the element's window, then copies the element's letters.  Every
    claimed visit is checked against the window metric before it is
    recorded; if no lattice candidate lands within eps the construction
    aborts instead of guessing.
    """
    n = cfg.half_width
    if net is None:
        net = build_net(eps, cfg, k_cut=k_cut, u_cells=u_cells)
    if not net:
        raise ValueError("net must be nonempty")
    used_k_cut = k_cut if k_cut is not None else orbit_k_cut(eps, n)
    target = eps * 0.995

    # Position bookkeeping: letters occupy transitions -n, -n+1, ...; the
    # value trace holds the coordinate at every position from -n onward.
    letters: list[Letter] = []
    values: list[float] = []
    kinds: list[int] = []

    def append(lt: Letter) -> None:
        letters.append(lt)
        values.append(lt.piece().apply_u(values[-1]))
        kinds.append(lt.range_index)

    def right_end() -> tuple[int, float]:
        return kinds[-1], values[-1]

    visits: list[Visit] = []

    # the orbit must start from a finite element; infinity elements are
    # visited by climbing, so push them to the back of the schedule
    order = sorted(range(len(net)), key=lambda i: net[i].is_all_infinity)
    if net[order[0]].is_all_infinity:
        raise ValueError("net needs at least one finite element")

    seed_elem = net[order[0]]
    u_seed = min(1.0 - 2.0**-20, max(2.0**-20, seed_elem.t0.u))
    u_left = _pull_back(u_seed, seed_elem.word, -n)
    values.append(u_left)
    kinds.append(seed_elem.word.domain_at(-n))
    for pos in range(-n, n):
        append(seed_elem.word.letter(pos))

    def window_point(time: int) -> MPoint:
        lo = time - n
        hi = time + n - 1
        sl = Word(tuple(letters[lo + n : hi + n + 1]), -n)
        return MPoint(sl, XPoint(kinds[time + n], values[time + n]))

    d0 = dist_window(window_point(0), seed_elem, cfg)
    f0 = dist_window_forward(window_point(0), seed_elem, cfg)
    if d0 > target:
        raise PathNotFound("seed element not matched; refine the height grid")
    visits.append(Visit(order[0], 0, d0, f0))

    for oi in order[1:]:
        elem = net[oi]
        k_cur, u_cur = right_end()

        if elem.is_all_infinity:
            # A window sitting wholly inside a deep interval is close to the
            # all-infinity point; pick the shallowest deep enough interval.
            k_vis = 3
            while 2.0 ** (2 - 2 * k_vis) > target:
                k_vis += 1
            for lt in _navigate(k_cur, k_vis):
                append(lt)
            block = len(letters)
            for _ in range(2 * n):
                append(Letter(k_vis, 2))
            # the identity block covers orbit transitions block-n..block+n-1,
            # so the visited window is centered at orbit time ``block``
            vis_time = block
            p_vis = window_point(vis_time)
            d = dist_window(p_vis, elem, cfg)
            f = dist_window_forward(p_vis, elem, cfg)
            if d > target:
                raise PathNotFound("infinity element not matched; raise k_vis")
            visits.append(Visit(oi, vis_time, d, f))
            continue

        word = elem.word
        u_q = elem.t0.u
        d_left = word.domain_at(-n)
        v_target = _pull_back(u_q, word, -n)

        found = False
        for m, n_steps in _steer_candidates(u_cur, v_target, tries):
            conn: list[Letter] = []
            conn.extend(_navigate(k_cur, 1))
            conn.extend([Letter(1, 2)] * n_steps)
            if m > 0:
                conn.append(Letter(1, 3))
                conn.extend([Letter(2, 2)] * m)
                conn.extend(_navigate(2, d_left))
            else:
                conn.extend(_navigate(1, d_left))
            v = u_cur
            for lt in conn:
                v = lt.piece().apply_u(v)
            u0_vis = _push(v, (word.letter(pos) for pos in range(-n, 0)))
            u_end = _push(u0_vis, (word.letter(pos) for pos in range(0, n)))
            if not 0.0 < u_end < 1.0:
                # an exact endpoint would pin every later coordinate there
                continue
            p_vis = MPoint(word, XPoint(word.domain_at(0), u0_vis))
            d = dist_window(p_vis, elem, cfg)
            if d <= target:
                for lt in conn:
                    append(lt)
                base = len(letters)
                for pos in range(-n, n):
                    append(word.letter(pos))
                # the element's letters cover orbit transitions
                # base-n..base+n-1, centering the visit at time ``base``
                vis_time = base
                d_check = dist_window(window_point(vis_time), elem, cfg)
                f = dist_window_forward(window_point(vis_time), elem, cfg)
                if d_check > target:
                    raise PathNotFound("window mismatch after append")
                visits.append(Visit(oi, vis_time, d_check, f))
                found = True
                break
        if not found:
            raise PathNotFound(
                f"no connector reached net element {oi} within eps; "
                "raise tries or the exponent lattice"
            )

    point = MPoint(Word(tuple(letters), -n), XPoint(kinds[n], values[n]))
    passed = all(v.dist <= eps for v in visits) and len(visits) == len(net)
    return OrbitResult(point, net, visits, eps, cfg, used_k_cut, passed)


def verify_orbit(result: OrbitResult, *, eps: float | None = None) -> dict:
    """Re-check every recorded visit against the returned point alone.

    Recomputes the coordinate trace of the orbit point from scratch and
    re-evaluates both window metrics at each visit time, trusting nothing
    from the stored distances.
    """
    eps = result.eps if eps is None else eps
    cfg = result.cfg
    n = cfg.half_width
    p = result.point
    lo, hi = p.lo, p.hi
    trace = coord_range(p, lo, hi + 1)

    def window(time: int) -> MPoint:
        sl = p.word.slice(time - n, time + n - 1)
        x = trace[time - lo]
        return MPoint(Word(sl.letters, -n), x)

    worst = 0.0
    worst_fwd = 0.0
    seen = set()
    for v in result.visits:
        q = window(v.time)
        d = dist_window(q, result.net[v.net_index], cfg)
        f = dist_window_forward(q, result.net[v.net_index], cfg)
        worst = max(worst, d)
        worst_fwd = max(worst_fwd, f)
        if d <= eps:
            seen.add(v.net_index)
    covered = len(seen)
    return {
        "covered": covered,
        "net_size": len(result.net),
        "coverage": covered / len(result.net),
        "max_dist": worst,
        "max_forward_dist": worst_fwd,
        "passed": covered == len(result.net),
    }
