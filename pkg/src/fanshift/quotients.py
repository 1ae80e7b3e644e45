"""Quotient machinery: the compressed wedge, lifts, gluing relations, fans.

Two constructions live here.  First, maps of the Cantor-set-times-interval
product descend through the vertical compression ``(c, t) -> (c, c*t)`` to
maps of the wedge below the diagonal; surjectivity, injectivity, vertex
continuity and density transfer survive the descent, which is how a
transitive homeomorphism of the wedge quotient (a star of Cantor fans) is
obtained.  Second, the window points of the coupled product are identified
by a parameterized family of equivalences: all height-zero points collapse
to one top, and for each parameter coordinate a run of diagonal arcs is
glued isometrically onto a host arc.  The resulting combinatorial fans are
the objects whose counting invariant is computed in ``invariants``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iter_product
from typing import Callable

from .errors import (
    HypothesisViolated,
    TruncationError,
    WellDefinednessError,
)
from .itinerary import Letter, Word, address_value, cantor_address, iter_words
from .mahavier import (
    MPoint,
    diagonal_point,
    fiber_length,
    height,
    m_index,
)
from .xspace import TOL, Tolerance, XPoint

# ---------------------------------------------------------------------------
# The product, the wedge, and lifting through the vertical compression
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CPoint:
    """A point of the product: middle-thirds address times a height in [0,1].

    Addresses are finite words over {0, 2}; trailing zeros are stripped so
    each point of the Cantor set has one representation.
    """

    address: str
    t: float

    def __post_init__(self):
        if any(d not in "02" for d in self.address):
            raise ValueError(f"address digits must be 0 or 2: {self.address!r}")
        object.__setattr__(self, "address", self.address.rstrip("0"))
        if not (0.0 <= self.t <= 1.0):
            if self.t < -TOL.eps_eq or self.t > 1.0 + TOL.eps_eq:
                raise ValueError(f"height {self.t!r} outside [0, 1]")
            object.__setattr__(self, "t", min(1.0, max(0.0, self.t)))

    @property
    def c(self) -> float:
        return address_value(self.address)


PMap = Callable[[CPoint], CPoint]


def phi(p: CPoint) -> CPoint:
    """Vertical compression onto the wedge: height scales by the address."""
    return CPoint(p.address, p.c * p.t)


def phi_inverse(p: CPoint) -> CPoint:
    """Inverse compression off the vertex column (address value > 0)."""
    c = p.c
    if c == 0.0:
        raise ValueError("compression is not invertible over address zero")
    return CPoint(p.address, min(1.0, p.t / c))


def cpoint_dist(p: CPoint, q: CPoint) -> float:
    """Product max-metric."""
    return max(abs(p.c - q.c), abs(p.t - q.t))


def identity_map(p: CPoint) -> CPoint:
    return p


def swap_digit_map(p: CPoint) -> CPoint:
    """Transpose the first two address digits: a product homeomorphism
    of the Cantor factor that fixes address zero."""
    a = (p.address + "00")[:2]
    return CPoint(a[1] + a[0] + p.address[2:], p.t)


def vertex_crush_map(p: CPoint) -> CPoint:
    """Deliberately invalid sample: sends every column to address zero."""
    return CPoint("", p.t)


def _sample_points(depth: int, t_cells: int) -> list[CPoint]:
    """Deterministic product sample: all depth-d addresses times a t-grid."""
    pts = []
    for digits in iter_product("02", repeat=depth):
        addr = "".join(digits)
        for i in range(t_cells + 1):
            pts.append(CPoint(addr, i / t_cells))
    return pts


def check_invariance(f: PMap, *, depth: int = 6, t_cells: int = 8) -> None:
    """Require f to preserve both the vertex column and its complement.

    Raises HypothesisViolated with the offending sample otherwise.
    """
    for i in range(t_cells + 1):
        p = CPoint("", i / t_cells)
        q = f(p)
        if q.c != 0.0:
            raise HypothesisViolated(
                "map moves the vertex column off address zero", witness=p
            )
    for p in _sample_points(depth, 2):
        if p.c == 0.0:
            continue
        q = f(p)
        if q.c == 0.0:
            raise HypothesisViolated(
                "map sends a nonzero column to address zero", witness=p
            )


def lift_f_R(f: PMap, *, depth: int = 6, t_cells: int = 8) -> PMap:
    """Descend f through the compression to a map of the wedge.

    The invariance hypotheses are sampled first; the lifted map evaluates
    by decompressing, applying f, and recompressing, with the vertex pinned.
    """
    check_invariance(f, depth=depth, t_cells=t_cells)

    def f_R(p: CPoint) -> CPoint:
        if p.c == 0.0:
            return CPoint("", 0.0)
        return phi(f(phi_inverse(p)))

    return f_R


@dataclass
class HlavnaReport:
    """Sampled evidence that a lifted map keeps homeomorphism properties."""

    map_name: str
    hypothesis_ok: bool
    surjectivity_gap: float
    surjectivity_ok: bool
    injectivity_ok: bool
    vertex_tail: float
    vertex_ok: bool
    witness: dict | None = None

    @property
    def passed(self) -> bool:
        return (
            self.hypothesis_ok
            and self.surjectivity_ok
            and self.injectivity_ok
            and self.vertex_ok
        )

    def to_dict(self) -> dict:
        return {
            "map": self.map_name,
            "hypothesis_ok": self.hypothesis_ok,
            "surjectivity_gap": self.surjectivity_gap,
            "surjectivity_ok": self.surjectivity_ok,
            "injectivity_ok": self.injectivity_ok,
            "vertex_tail": self.vertex_tail,
            "vertex_ok": self.vertex_ok,
            "passed": self.passed,
            "witness": self.witness,
        }


def check_hlavna(
    f: PMap,
    *,
    name: str = "map",
    depth: int = 6,
    t_cells: int = 16,
    surj_eps: float = 0.05,
    collision_eps: float = 1e-9,
    separation_eps: float = 1e-6,
    vertex_depth: int = 12,
    vertex_eps: float = 1e-3,
) -> HlavnaReport:
    """Sampled surjectivity, injectivity and vertex continuity of the lift.

    Surjectivity is a cover check: wedge samples must lie within surj_eps
    of the image of the sampled product.  Injectivity fails on a collision
    between images of samples separated by at least separation_eps.  Vertex
    continuity follows a sequence of columns shrinking to the vertex and
    requires the image norms to shrink below vertex_eps.
    """
    try:
        f_R = lift_f_R(f, depth=depth, t_cells=8)
    except HypothesisViolated as exc:
        w = exc.witness
        return HlavnaReport(
            name, False, math.inf, False, False, math.inf, False,
            witness={"address": w.address, "t": w.t} if w is not None else None,
        )

    samples = _sample_points(depth, t_cells)
    wedge_targets = [phi(p) for p in samples]
    images = [f_R(q) for q in wedge_targets]

    gap = 0.0
    for tgt in wedge_targets:
        best = min(cpoint_dist(tgt, img) for img in images)
        if best > gap:
            gap = best
    surj_ok = gap <= surj_eps

    inj_ok = True
    witness = None
    indexed = sorted(zip(images, wedge_targets), key=lambda it: (it[0].c, it[0].t))
    for i, (img_a, src_a) in enumerate(indexed):
        for img_b, src_b in indexed[i + 1 : i + 40]:
            if cpoint_dist(img_a, img_b) < collision_eps:
                if cpoint_dist(src_a, src_b) > separation_eps:
                    inj_ok = False
                    witness = {
                        "a": {"address": src_a.address, "t": src_a.t},
                        "b": {"address": src_b.address, "t": src_b.t},
                    }
                    break
        if not inj_ok:
            break

    tail = 0.0
    prev = math.inf
    vertex_ok = True
    for i in range(1, vertex_depth + 1):
        addr = "0" * i + "2"
        col = CPoint(addr, 0.0).c
        worst = 0.0
        for s in (0.0, 0.5, 1.0):
            q = f_R(CPoint(addr, col * s))
            worst = max(worst, q.c, q.t)
        if worst > prev * 4.0:
            vertex_ok = False
        prev = max(worst, 1e-300)
        tail = worst
    if tail > vertex_eps:
        vertex_ok = False

    return HlavnaReport(name, True, gap, surj_ok, inj_ok, tail, vertex_ok, witness)


def phi_pair(point: tuple[float, float]) -> tuple[float, float]:
    """Vertical compression on bare model coordinates."""
    c, t = point
    return (c, c * t)


def density_transfer_report(
    orbit_points: list[tuple[float, float]],
    net_points: list[tuple[float, float]],
    eps: float,
) -> dict:
    """Check that compression carries an eps-dense visit log to a 2*eps one.

    The compression is 2-Lipschitz in the product max-metric, so density
    degrades by at most that factor; both sides are measured explicitly.
    """

    def pair_dist(a, b):
        return max(abs(a[0] - b[0]), abs(a[1] - b[1]))

    def cover_gap(targets, cloud):
        return max(min(pair_dist(t, p) for p in cloud) for t in targets)

    gap_before = cover_gap(net_points, orbit_points)
    image_cloud = [phi_pair(p) for p in orbit_points]
    image_targets = [phi_pair(p) for p in net_points]
    gap_after = cover_gap(image_targets, image_cloud)
    return {
        "gap_before": gap_before,
        "gap_after": gap_after,
        "eps": eps,
        "passed": gap_before <= eps and gap_after <= 2.0 * eps,
    }


def check_conjugated_shift(
    samples: list[MPoint],
    *,
    depth: int = 4,
    collision_eps: float = 1e-9,
    tol: Tolerance = TOL,
) -> dict:
    """Sampled homeomorphism evidence for the shift seen in model coordinates.

    Injectivity: model images of shifted samples must not collide when the
    samples' model points differ.  Surjectivity: every sample exhibits an
    explicit preimage via the inverse shift.  Continuity at the
    compactification point: shifted diagonal points of deep intervals must
    have model coordinates tending to (1, 0).
    """
    from .mahavier import model_map, shift, unshift

    imgs = []
    srcs = []
    for p in samples:
        srcs.append(model_map(p, depth))
        imgs.append(model_map(shift(p), depth))
    inj_ok = True
    for i in range(len(imgs)):
        for j in range(i + 1, len(imgs)):
            di = max(abs(imgs[i][0] - imgs[j][0]), abs(imgs[i][1] - imgs[j][1]))
            ds = max(abs(srcs[i][0] - srcs[j][0]), abs(srcs[i][1] - srcs[j][1]))
            if di < collision_eps and ds > 10 * collision_eps:
                inj_ok = False

    surj_gap = 0.0
    for p in samples:
        back = model_map(shift(unshift(p)), depth)
        src = model_map(p, depth)
        surj_gap = max(
            surj_gap, abs(back[0] - src[0]), abs(back[1] - src[1])
        )
    surj_ok = surj_gap <= tol.eps_eq * 10

    tail = 1.0
    cont_ok = True
    prev = math.inf
    for j in range(3, 14):
        c, t = model_map(shift(diagonal_point(j, 0.5, 4)), depth)
        gap = max(abs(1.0 - c), abs(t))
        if gap > prev * 4.0:
            cont_ok = False
        prev = gap
        tail = gap
    if tail > 1e-3:
        cont_ok = False

    return {
        "injectivity_ok": inj_ok,
        "surjectivity_gap": surj_gap,
        "surjectivity_ok": surj_ok,
        "vertex_tail": tail,
        "continuity_ok": cont_ok,
        "passed": inj_ok and surj_ok and cont_ok,
    }


# ---------------------------------------------------------------------------
# Gluing parameters and the equivalence on window points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AParam:
    """Gluing parameter: coordinate k picks 2k-1 or 2k guest arcs."""

    coords: tuple[int, ...]

    def __post_init__(self):
        for pos, a in enumerate(self.coords, start=1):
            if a not in (2 * pos - 1, 2 * pos):
                raise ValueError(
                    f"coordinate {pos} must be {2 * pos - 1} or {2 * pos}, got {a}"
                )

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, pos: int) -> int:
        """1-based coordinate access."""
        return self.coords[pos - 1]

    def truncate(self, kmax: int) -> "AParam":
        return AParam(self.coords[:kmax])

    @classmethod
    def parse(cls, text: str) -> "AParam":
        return cls(tuple(int(tok) for tok in text.split(",") if tok.strip()))

    @classmethod
    def all_params(cls, kmax: int) -> list["AParam"]:
        choices = [(2 * k - 1, 2 * k) for k in range(1, kmax + 1)]
        return [cls(tuple(cs)) for cs in iter_product(*choices)]


def host_bundle(k: int) -> int:
    """Index of the host diagonal arc for parameter coordinate k."""
    return k * k + 2


def m_group(j: int) -> tuple[int, int]:
    """Decompose a diagonal index j >= 3 as host_bundle(k) + i, i in 0..2k.

    Every j >= 3 lands in exactly one such block, so the pair (k, i) is
    well defined: i == 0 marks the host itself, i >= 1 a potential guest.
    """
    if j < 3:
        raise ValueError("diagonal arcs start at interval 3")
    k = math.isqrt(j - 2)
    i = j - k * k - 2
    return k, i


def in_top_class(p: MPoint, tol: Tolerance = TOL) -> bool:
    """Height-zero points and the all-infinity point form the top class."""
    if p.is_all_infinity:
        return True
    return p.t0.u <= tol.eps_eq


def sim_a(x: MPoint, y: MPoint, a: AParam, tol: Tolerance = TOL) -> bool:
    """The gluing equivalence for parameter a, on window points.

    Points are related when they are equal, both in the top class, or both
    on diagonal arcs of the same parameter block at equal heights with
    every non-host arc among the block's active guests.  Blocks beyond the
    parameter's truncation cannot be decided and raise TruncationError.
    """
    top_x, top_y = in_top_class(x, tol), in_top_class(y, tol)
    if top_x or top_y:
        return top_x and top_y
    if x.is_all_infinity or y.is_all_infinity:
        return False

    jx, jy = m_index(x), m_index(y)
    if jx is not None and jx == jy:
        return abs(height(x) - height(y)) <= tol.eps_eq

    if jx is None or jy is None:
        return x.word == y.word and x.t0.k == y.t0.k and abs(
            x.t0.u - y.t0.u
        ) <= tol.eps_eq

    kx, ix = m_group(jx)
    ky, iy = m_group(jy)
    if kx != ky:
        return False
    if kx > len(a):
        raise TruncationError(
            f"gluing block {kx} lies beyond the modeled {len(a)} coordinates"
        )
    active = a[kx]
    if (ix == 0 or ix <= active) and (iy == 0 or iy <= active):
        return abs(height(x) - height(y)) <= tol.eps_eq
    return False


@dataclass
class ClassMap:
    """A map descended to equivalence classes, applied via representatives."""

    func: Callable[[MPoint], MPoint]
    a: AParam
    tol: Tolerance = TOL

    def apply(self, x: MPoint) -> MPoint:
        return self.func(x)

    def same_class(self, x: MPoint, y: MPoint) -> bool:
        return sim_a(x, y, self.a, self.tol)


def glued_pair(k: int, i: int, guest_u: float, half_width: int = 8) -> tuple[MPoint, MPoint]:
    """Host/guest diagonal points at equal model heights (exact rescale)."""
    jh = host_bundle(k)
    jg = jh + i
    tau = guest_u * fiber_length(jg)
    host_u = tau / fiber_length(jh)
    return (
        diagonal_point(jh, host_u, half_width),
        diagonal_point(jg, guest_u, half_width),
    )


def descend(
    f: Callable[[MPoint], MPoint],
    a: AParam,
    *,
    rng,
    pairs: int = 200,
    half_width: int = 8,
    tol: Tolerance = TOL,
) -> ClassMap:
    """Descend f to classes after sampling well-definedness both ways.

    Equivalent sample pairs must stay equivalent under f and inequivalent
    ones must stay inequivalent; any failure raises WellDefinednessError
    with the witness pair.
    """
    from .mahavier import random_window_point

    sample_pairs: list[tuple[MPoint, MPoint]] = []
    for k in range(1, len(a) + 1):
        for i in range(1, a[k] + 1):
            for _ in range(3):
                sample_pairs.append(glued_pair(k, i, rng.random(), half_width))
    for _ in range(pairs):
        k = rng.randint(1, 4)
        p = random_window_point(rng, k, half_width)
        zero = MPoint(p.word, XPoint(p.t0.k, 0.0))
        sample_pairs.append((zero, MPoint.all_infinity()))
        q = random_window_point(rng, rng.randint(1, 4), half_width)
        sample_pairs.append((p, p))
        sample_pairs.append((p, q))

    for x, y in sample_pairs:
        try:
            before = sim_a(x, y, a, tol)
            after = sim_a(f(x), f(y), a, tol)
        except TruncationError:
            continue
        if before != after:
            raise WellDefinednessError(
                "map does not respect the gluing equivalence",
                witness=(x, y),
            )
    return ClassMap(f, a, tol)


# ---------------------------------------------------------------------------
# Combinatorial fan models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Leg:
    bundle: str
    address: str
    length: float


@dataclass(frozen=True)
class Gluing:
    host: int
    guest: int


@dataclass(frozen=True)
class FanModel:
    """Truncated fan: legs hanging from one top, plus isometric gluings.

    Each gluing lays the guest leg onto the host's lower segment of the
    guest's length; a leg may host many guests but can be a guest only
    once, and guests never host.
    """

    legs: tuple[Leg, ...]
    gluings: tuple[Gluing, ...] = ()
    top: str = "o"

    def __post_init__(self):
        guests = set()
        hosts = set()
        for g in self.gluings:
            if not (0 <= g.host < len(self.legs)) or not (
                0 <= g.guest < len(self.legs)
            ):
                raise ValueError("gluing references a missing leg")
            if g.host == g.guest:
                raise ValueError("leg cannot be glued to itself")
            if self.legs[g.guest].length > self.legs[g.host].length:
                raise ValueError("guest must not be longer than its host")
            if g.guest in guests:
                raise ValueError("leg glued as guest twice")
            guests.add(g.guest)
            hosts.add(g.host)
        if guests & hosts:
            raise ValueError("a guest leg cannot also host")

    @property
    def guest_indices(self) -> frozenset[int]:
        return frozenset(g.guest for g in self.gluings)

    def guests_of(self, leg_index: int) -> tuple[int, ...]:
        return tuple(g.guest for g in self.gluings if g.host == leg_index)

    def to_dict(self) -> dict:
        return {
            "top": self.top,
            "legs": [
                {"bundle": leg.bundle, "address": leg.address, "length": leg.length}
                for leg in self.legs
            ],
            "gluings": [{"host": g.host, "guest": g.guest} for g in self.gluings],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FanModel":
        legs = tuple(
            Leg(d["bundle"], d["address"], d["length"]) for d in data["legs"]
        )
        gluings = tuple(Gluing(d["host"], d["guest"]) for d in data["gluings"])
        return cls(legs, gluings, data.get("top", "o"))


@lru_cache(maxsize=256)
def _bundle_addresses(k: int, depth: int) -> tuple[str, ...]:
    return tuple(
        sorted(cantor_address(w) for w in iter_words(k, depth))
    )


def identity_address(j: int, depth: int) -> str:
    """Address of the diagonal itinerary in bundle j >= 3."""
    return cantor_address(Word((Letter(j, 2),) * depth))


def build_fan(a: AParam, kmax_bundle: int, depth: int) -> FanModel:
    """Assemble the depth-truncated fan for a gluing parameter.

    Bundle k contributes one leg of length 2^(1-2k) per admissible word of
    the given depth; for each parameter coordinate k the diagonal legs of
    the blocks host_bundle(k)+1 .. host_bundle(k)+a_k are glued onto the
    diagonal leg of host_bundle(k).
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    for k in range(1, len(a) + 1):
        need = host_bundle(k) + a[k]
        if need > kmax_bundle:
            raise ValueError(
                f"parameter coordinate {k} needs bundle {need}, "
                f"model stops at {kmax_bundle}"
            )
    legs: list[Leg] = []
    index: dict[tuple[str, str], int] = {}
    for k in range(1, kmax_bundle + 1):
        length = fiber_length(k)
        for addr in _bundle_addresses(k, depth):
            index[(str(k), addr)] = len(legs)
            legs.append(Leg(str(k), addr, length))
    gluings: list[Gluing] = []
    for k in range(1, len(a) + 1):
        jh = host_bundle(k)
        host = index[(str(jh), identity_address(jh, depth))]
        for i in range(1, a[k] + 1):
            jg = jh + i
            guest = index[(str(jg), identity_address(jg, depth))]
            gluings.append(Gluing(host, guest))
    return FanModel(tuple(legs), tuple(gluings))


def star_of(base: FanModel, n_copies: int, scale: float = 1.0) -> FanModel:
    """Join shrinking copies of a fan at the top: copy n scales by 2^-n."""
    if n_copies < 1:
        raise ValueError("need at least one copy")
    legs: list[Leg] = []
    gluings: list[Gluing] = []
    for i in range(1, n_copies + 1):
        factor = scale * 2.0**-i
        offset = len(legs)
        for leg in base.legs:
            legs.append(Leg(f"s{i}.{leg.bundle}", leg.address, leg.length * factor))
        for g in base.gluings:
            gluings.append(Gluing(g.host + offset, g.guest + offset))
    return FanModel(tuple(legs), tuple(gluings))
