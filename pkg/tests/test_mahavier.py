import math

import pytest

from fanshift.errors import RangeError, WindowExhausted
from fanshift.itinerary import Letter, Word, letters_with_domain, random_word
from fanshift.mahavier import (
    ALL_INFINITY,
    MPoint,
    WindowConfig,
    coords,
    diagonal_point,
    dist_window,
    dist_window_forward,
    extend,
    fiber_length,
    from_record,
    height,
    m_index,
    model_map,
    pack,
    random_window_point,
    shift,
    to_record,
    unpack,
    unshift,
)
from fanshift.relations import in_H
from fanshift.xspace import INFINITY, XPoint, dist

from _util import rng


def test_diagonal_point_coords_constant():
    p = diagonal_point(3, 0.4, 4)
    for j in range(-4, 5):
        assert coords(p, j) == XPoint(3, 0.4)


def test_cube_root_window_coords():
    w = Word((Letter(1, 2), Letter(1, 2)))
    p = MPoint(w, XPoint(1, 0.5**27))
    assert coords(p, 1) == XPoint(1, 0.5**9)
    assert coords(p, 2) == XPoint(1, 0.5**3)


def test_all_infinity_coords():
    for j in (-5, 0, 17):
        assert coords(ALL_INFINITY, j) == INFINITY


def test_coords_window_bounds():
    p = diagonal_point(4, 0.1, 3)
    with pytest.raises(IndexError):
        coords(p, 5)
    with pytest.raises(IndexError):
        coords(p, -4)


def test_consecutive_pairs_lie_in_relation():
    r = rng(0)
    for _ in range(10_000 // 17):
        p = random_window_point(r, r.randint(1, 5), 8)
        for j in range(-8, 8):
            assert in_H(coords(p, j), coords(p, j + 1))


def test_point_validation():
    w = Word((Letter(2, 1),))
    with pytest.raises(ValueError):
        MPoint(w, XPoint(3, 0.5))  # wrong base interval
    with pytest.raises(ValueError):
        MPoint(Word((Letter(2, 1),), start=1), XPoint(2, 0.5))  # no origin
    with pytest.raises(ValueError):
        MPoint(None, XPoint(1, 0.5))


def test_shift_conjugates_coordinates():
    # equality up to tolerance: backward coordinates re-derive the base
    # through cube/cube-root round trips that cost a few ulps
    r = rng(1)
    for _ in range(300):
        p = random_window_point(r, r.randint(1, 4), 6)
        s = shift(p)
        for j in range(-6, 6):
            a, b = coords(s, j), coords(p, j + 1)
            assert a.k == b.k and math.isclose(a.u, b.u, rel_tol=1e-9, abs_tol=1e-12)


def test_shift_unshift_round_trip():
    r = rng(2)
    for _ in range(300):
        p = random_window_point(r, r.randint(1, 4), 5)
        for q in (unshift(shift(p)), shift(unshift(p))):
            assert q.word == p.word
            assert q.t0.k == p.t0.k
            assert math.isclose(q.t0.u, p.t0.u, rel_tol=1e-12, abs_tol=1e-12)


def test_shift_window_exhaustion():
    w = Word((Letter(3, 2),))  # single transition at the origin
    p = MPoint(w, XPoint(3, 0.2))
    with pytest.raises(WindowExhausted):
        shift(p)
    with pytest.raises(WindowExhausted):
        unshift(p)
    assert shift(ALL_INFINITY) == ALL_INFINITY


def test_shift_fixes_diagonal_coordinates():
    p = diagonal_point(5, 0.7, 6)
    s = shift(p)
    for j in range(-5, 6):
        assert coords(s, j) == coords(p, j)


def test_extend_grows_window():
    p = diagonal_point(3, 0.5, 2)
    q = extend(p, Letter(3, 3), "right")
    assert q.hi == p.hi + 1
    q2 = extend(p, Letter(4, 1), "left")
    assert q2.lo == p.lo - 1
    with pytest.raises(ValueError):
        extend(p, Letter(5, 1), "right")


def test_dist_window_zero_on_equal_points():
    p = diagonal_point(3, 0.123, 8)
    assert dist_window(p, p, WindowConfig(8)) == 0.0


def test_dist_window_base_coordinate_split():
    # same up-ladder itinerary, bases at the two ends of the first interval;
    # the origin coordinate dominates all weighted neighbors
    letters = tuple([Letter(3, 1), Letter(2, 1)] + [Letter(1, 3), Letter(2, 3)])
    w = Word(letters, -2)
    p = MPoint(w, XPoint(1, 0.0))
    q = MPoint(w, XPoint(1, 1.0))
    assert dist_window(p, q, WindowConfig(2)) == 0.5


def test_dist_window_requires_coverage():
    p = diagonal_point(3, 0.5, 2)
    with pytest.raises(IndexError):
        dist_window(p, p, WindowConfig(4))
    assert dist_window(ALL_INFINITY, ALL_INFINITY, WindowConfig(8)) == 0.0


def test_base_coordinate_distance_within_interval_diameter():
    r = rng(3)
    for k in range(1, 7):
        for _ in range(200):
            p = random_window_point(r, k, 8)
            q = random_window_point(r, k, 8)
            assert dist(coords(p, 0), coords(q, 0)) <= fiber_length(k)


def test_window_distance_within_attained_rate():
    """The provable slice bound: one step toward lower intervals doubles
    the weighted coordinate distance, so the supremum over a slice through
    interval k is 2^(1-k), attained by down-ladders."""
    r = rng(4)
    cfg = WindowConfig(8)
    for k in range(1, 7):
        top = 0.0
        for _ in range(500):
            p = random_window_point(r, k, 8)
            q = random_window_point(r, k, 8)
            top = max(top, dist_window(p, q, cfg))
        assert top <= 2.0 ** (1 - k) + 1e-12


def test_stated_slice_bound_is_exceeded_by_down_ladders():
    """Regression pin for the geometry: the base-coordinate rate 2^(1-2k)
    does not bound whole windows once the itinerary descends."""
    letters = tuple([Letter(2, 2)] * 2 + [Letter(2, 1)] + [Letter(1, 2)])
    w = Word(letters, -2)
    p = MPoint(w, XPoint(2, 0.0))
    q = MPoint(w, XPoint(2, 1.0))
    assert dist_window(p, q, WindowConfig(2)) == 0.25 > fiber_length(2)


def test_dist_window_truncation_error_bound():
    r = rng(5)
    for _ in range(200):
        k = r.randint(1, 4)
        p = random_window_point(r, k, 12)
        q = random_window_point(r, k, 12)
        d8 = dist_window(p, q, WindowConfig(8))
        d12 = dist_window(p, q, WindowConfig(12))
        assert abs(d12 - d8) <= 2.0**-9


def test_forward_distance_below_two_sided():
    r = rng(6)
    for _ in range(200):
        p = random_window_point(r, 2, 8)
        q = random_window_point(r, 2, 8)
        assert dist_window_forward(p, q) <= dist_window(p, q) + 1e-15


def test_pack_unpack_round_trip_exact():
    r = rng(7)
    for _ in range(10_000 // 5):
        k = r.randint(1, 6)
        word = random_word(r, k, left=3, right=3)
        t = r.random() * fiber_length(k)
        p = pack(word, t)
        w2, t2 = unpack(p)
        assert w2 == word and t2 == t


def test_pack_examples():
    word = random_word(rng(8), 1, left=2, right=2)
    assert pack(word, 0.25).t0.u == 0.5
    assert pack(word, 0.0).t0.u == 0.0
    assert pack(word, fiber_length(1)).t0.u == 1.0
    with pytest.raises(RangeError):
        pack(word, fiber_length(1) * 1.5)


def test_zero_height_points_have_even_coordinates():
    r = rng(9)
    for _ in range(300):
        k = r.randint(1, 5)
        word = random_word(r, k, left=6, right=6)
        p = pack(word, 0.0)
        for j in range(-6, 7):
            assert coords(p, j).u == 0.0
            assert coords(p, j).ambient % 2 == 0


def test_full_height_points_have_odd_coordinates():
    r = rng(10)
    for _ in range(300):
        k = r.randint(1, 5)
        word = random_word(r, k, left=6, right=6)
        p = pack(word, fiber_length(k))
        for j in range(-6, 7):
            assert coords(p, j).u == 1.0
            assert coords(p, j).ambient % 2 == 1


def test_distinct_words_give_disjoint_arcs():
    r = rng(11)
    words = {w.letters: w for w in (random_word(r, 2, left=4, right=4) for _ in range(40))}
    words = list(words.values())
    for i, w1 in enumerate(words):
        for w2 in words[i + 1 :]:
            for t, s in ((0.0, 0.0), (0.03, 0.07), (0.1, 0.1)):
                p = pack(w1, t * fiber_length(2))
                q = pack(w2, s * fiber_length(2))
                assert any(
                    coords(p, j) != coords(q, j) for j in range(-4, 5)
                )


def test_model_map_examples():
    assert model_map(ALL_INFINITY) == (1.0, 0.0)
    r = rng(12)
    for k in (1, 2, 3):
        word = random_word(r, k, left=4, right=4)
        c, tau = model_map(pack(word, 0.0), 4)
        assert tau == 0.0
        lo = 1.0 - 3.0 ** (1 - k)
        assert lo <= c <= lo + 3.0**-k


def test_model_map_injective_on_distinct_words():
    from fanshift.itinerary import enumerate_words

    words = enumerate_words(3, 4, start=-2)
    cs = {model_map(pack(w, 0.001), 2)[0] for w in words}
    assert len(cs) == len(words)


def test_m_index_detection():
    assert m_index(diagonal_point(4, 0.2)) == 4
    assert m_index(ALL_INFINITY) is None
    r = rng(13)
    w = random_word(r, 1, left=2, right=2)
    assert m_index(MPoint(w, XPoint(1, 0.5))) is None
    with pytest.raises(ValueError):
        diagonal_point(2, 0.5)


def test_height_is_model_second_coordinate():
    p = diagonal_point(3, 0.5)
    assert height(p) == 0.5 * fiber_length(3)
    assert model_map(p, 3)[1] == height(p)


def test_record_round_trip():
    r = rng(14)
    for _ in range(100):
        p = random_window_point(r, r.randint(1, 4), 3)
        assert from_record(to_record(p)) == p
    assert from_record(to_record(ALL_INFINITY)) == ALL_INFINITY
    rec = to_record(diagonal_point(3, 0.25, 2))
    assert rec["offset"] == 2
    assert rec["t0"] == {"k": 3, "u": 0.25}


def test_window_config_validation():
    with pytest.raises(ValueError):
        WindowConfig(0)
