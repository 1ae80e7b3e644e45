"""Finite-window points of the two-sided coupled product and the shift.

A point is stored as an admissible word over a window of transitions
together with the base coordinate at position 0; every other coordinate is
derived by pushing the base through the word's monotone pieces.  This makes
the coupling constraint intrinsic and the shift exact.  The special point
whose coordinates are all infinity is represented separately.

The product metric weights coordinate j by 2^(-|j|) and is evaluated over a
finite window of half-width N; the truncation error of that evaluation is
at most 2^-(N+1).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import RangeError, WindowExhausted
from .itinerary import Letter, Word, address_value, cantor_address
from .xspace import INFINITY, TOL, Tolerance, XPoint, dist


@dataclass(frozen=True)
class WindowConfig:
    """Half-width N of the coordinate window used by the product metric."""

    half_width: int = 8

    def __post_init__(self):
        if self.half_width < 1:
            raise ValueError("window half-width must be >= 1")


@dataclass(frozen=True)
class MPoint:
    """Window point: word plus base coordinate, or the all-infinity point.

    The word must contain transition 0 and the base coordinate's interval
    index must equal the domain of the letter there.
    """

    word: Word | None
    t0: XPoint

    def __post_init__(self):
        if self.word is None:
            if not self.t0.is_infinity:
                raise ValueError("wordless point must sit at infinity")
            return
        if self.t0.is_infinity:
            raise ValueError("finite-window point needs a finite base coordinate")
        if not (self.word.start <= 0 < self.word.stop):
            raise ValueError("word must contain transition 0")
        if self.word.domain_at(0) != self.t0.k:
            raise ValueError(
                f"base coordinate lies in interval {self.t0.k}, "
                f"word expects {self.word.domain_at(0)}"
            )

    @classmethod
    def all_infinity(cls) -> "MPoint":
        return cls(None, INFINITY)

    @property
    def is_all_infinity(self) -> bool:
        return self.word is None

    @property
    def lo(self) -> int:
        """First known transition (coordinates run lo..hi+1)."""
        if self.word is None:
            raise ValueError("all-infinity point has no window")
        return self.word.start

    @property
    def hi(self) -> int:
        """Last known transition."""
        if self.word is None:
            raise ValueError("all-infinity point has no window")
        return self.word.stop - 1


ALL_INFINITY = MPoint.all_infinity()


def coords(p: MPoint, j: int) -> XPoint:
    """Coordinate at index j; consecutive coordinates are relation pairs."""
    if p.is_all_infinity:
        return INFINITY
    if not (p.lo <= j <= p.hi + 1):
        raise IndexError(f"coordinate {j} outside window [{p.lo}, {p.hi + 1}]")
    x = p.t0
    if j >= 0:
        for pos in range(0, j):
            x = p.word.letter(pos).piece().apply(x)
    else:
        for pos in range(-1, j - 1, -1):
            x = p.word.letter(pos).piece().invert(x)
    return x


def coord_range(p: MPoint, lo: int, hi: int) -> list[XPoint]:
    """Coordinates lo..hi inclusive, each stepped outward from the base.

    Walking outward keeps every coordinate at the minimal number of piece
    applications; reconstructing forward from the far left would push deep
    cube chains through float underflow and corrupt the near coordinates.
    """
    if p.is_all_infinity:
        return [INFINITY] * (hi - lo + 1)
    if lo < p.lo or hi > p.hi + 1 or lo > hi:
        raise IndexError("requested coordinates outside window")
    vals = {0: p.t0} if lo <= 0 <= hi else {}
    cur = p.t0
    for pos in range(0, hi):
        cur = p.word.letter(pos).piece().apply(cur)
        if pos + 1 >= lo:
            vals[pos + 1] = cur
    cur = p.t0
    for pos in range(-1, lo - 1, -1):
        cur = p.word.letter(pos).piece().invert(cur)
        if pos <= hi:
            vals[pos] = cur
    return [vals[j] for j in range(lo, hi + 1)]


def shift(p: MPoint) -> MPoint:
    """Move the origin one step forward along the itinerary.

    The base coordinate advances through the letter at transition 0; the
    known window loses one transition on the right and gains one on the
    left (relative to the new origin).
    """
    if p.is_all_infinity:
        return p
    if p.hi < 1:
        raise WindowExhausted("no transition remains to the right of the origin")
    new_t0 = p.word.letter(0).piece().apply(p.t0)
    return MPoint(Word(p.word.letters, p.word.start - 1), new_t0)


def unshift(p: MPoint) -> MPoint:
    """Inverse of shift within the known window."""
    if p.is_all_infinity:
        return p
    if p.lo > -1:
        raise WindowExhausted("no transition remains to the left of the origin")
    new_t0 = p.word.letter(-1).piece().invert(p.t0)
    return MPoint(Word(p.word.letters, p.word.start + 1), new_t0)


def extend(p: MPoint, letter: Letter, side: str) -> MPoint:
    """Grow the known window by one explicit transition."""
    if p.is_all_infinity:
        raise ValueError("cannot extend the all-infinity point")
    if side == "right":
        if letter.domain_index != p.word.domain_at(p.hi + 1):
            raise ValueError("letter does not chain on the right")
        return MPoint(Word(p.word.letters + (letter,), p.word.start), p.t0)
    if side == "left":
        if letter.range_index != p.word.domain_at(p.lo):
            raise ValueError("letter does not chain on the left")
        return MPoint(Word((letter,) + p.word.letters, p.word.start - 1), p.t0)
    raise ValueError("side must be 'left' or 'right'")


def dist_window(p: MPoint, q: MPoint, cfg: WindowConfig = WindowConfig()) -> float:
    """Product metric evaluated over coordinates |j| <= N.

    Requires both windows to cover [-N, N]; the all-infinity point covers
    everything.  The discarded tail contributes at most 2^-(N+1).
    """
    n = cfg.half_width
    ps = coord_range(p, -n, n)
    qs = coord_range(q, -n, n)
    best = 0.0
    for idx, (a, b) in enumerate(zip(ps, qs)):
        j = idx - n
        d = dist(a, b) / 2.0 ** abs(j)
        if d > best:
            best = d
    return best


def dist_window_forward(p: MPoint, q: MPoint, cfg: WindowConfig = WindowConfig()) -> float:
    """One-sided variant of the product metric: coordinates 0..N only."""
    n = cfg.half_width
    ps = coord_range(p, 0, n)
    qs = coord_range(q, 0, n)
    best = 0.0
    for j, (a, b) in enumerate(zip(ps, qs)):
        d = dist(a, b) / 2.0**j
        if d > best:
            best = d
    return best


def fiber_length(k: int) -> float:
    """Height of the slice through interval k: 2^(1-2k)."""
    return 2.0 ** (1 - 2 * k)


def pack(word: Word, t: float, tol: Tolerance = TOL) -> MPoint:
    """Build the point of the k-slice at height t over the given itinerary.

    The slice through interval k is a product of the itinerary Cantor set
    with [0, 2^(1-2k)]; the base coordinate is u0 = t * 2^(2k-1), an exact
    power-of-two rescale.
    """
    k = word.domain_at(0)
    top = fiber_length(k)
    if t < -tol.eps_eq or t > top + tol.eps_eq:
        raise RangeError(f"height {t} outside [0, {top}]")
    u0 = min(1.0, max(0.0, t * 2.0 ** (2 * k - 1)))
    return MPoint(word, XPoint(k, u0))


def unpack(p: MPoint) -> tuple[Word, float]:
    """Inverse of pack: recover (word, height); exact round-trip."""
    if p.is_all_infinity:
        raise ValueError("all-infinity point carries no slice coordinates")
    k = p.t0.k
    return p.word, p.t0.u * 2.0 ** (1 - 2 * k)


def height(p: MPoint) -> float:
    """Model height of a finite-window point (second model coordinate)."""
    return unpack(p)[1]


def cantor_chunk_start(k: int) -> float:
    """Left end of the k-th middle-third chunk: 1 - 3^(1-k)."""
    return 1.0 - 3.0 ** (1 - k)


def model_map(p: MPoint, depth: int | None = None) -> tuple[float, float]:
    """Planar model coordinates (c, tau) of a window point.

    The itinerary address is embedded into the k-th middle-third chunk
    [1 - 3^(1-k), 1 - 3^(1-k) + 3^-k] and the height is the slice
    coordinate; the all-infinity point maps to (1, 0).  Words that agree on
    the truncated window and share a base coordinate map to the same pair,
    and distinct such data map to distinct pairs.
    """
    if p.is_all_infinity:
        return (1.0, 0.0)
    word = p.word
    if depth is not None:
        lo = max(p.lo, -depth)
        hi = min(p.hi, depth - 1)
        word = word.slice(lo, hi)
    k = p.t0.k
    digits = cantor_address(word)
    c = cantor_chunk_start(k) + 3.0 ** (-k) * address_value(digits)
    return (c, height(p))


def m_index(p: MPoint) -> int | None:
    """Index j when p lies on the diagonal arc of interval j, else None.

    Diagonal arcs (all coordinates equal) exist exactly over intervals
    j >= 3, where the stay-letter is the identity.
    """
    if p.is_all_infinity:
        return None
    j = p.t0.k
    if j < 3:
        return None
    stay = Letter(j, 2)
    if all(lt == stay for lt in p.word.letters):
        return j
    return None


def diagonal_point(j: int, u: float, half_width: int = 8) -> MPoint:
    """The point of the diagonal arc over interval j at local coordinate u."""
    if j < 3:
        raise ValueError("diagonal arcs exist only over intervals >= 3")
    word = Word((Letter(j, 2),) * (2 * half_width), -half_width)
    return MPoint(word, XPoint(j, u))


def random_window_point(rng, k: int, half_width: int = 8) -> MPoint:
    """Random point with a window of the given half-width through interval k."""
    from .itinerary import random_word

    word = random_word(rng, k, left=half_width, right=half_width)
    return MPoint(word, XPoint(k, rng.random()))


def to_record(p: MPoint) -> dict:
    """JSON-ready record: letters, offset of the position-0 letter, base."""
    if p.is_all_infinity:
        return {"word": None, "offset": 0, "t0": {"k": None, "u": 0.0}}
    return {
        "word": [[lt.ell, lt.j] for lt in p.word.letters],
        "offset": -p.word.start,
        "t0": {"k": p.t0.k, "u": p.t0.u},
    }


def from_record(rec: dict) -> MPoint:
    if rec["word"] is None:
        return ALL_INFINITY
    letters = tuple(Letter(ell, j) for ell, j in rec["word"])
    word = Word(letters, -rec["offset"])
    return MPoint(word, XPoint(rec["t0"]["k"], rec["t0"]["u"]))
