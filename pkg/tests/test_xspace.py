import math

import pytest
from hypothesis import given, strategies as st

from fanshift.xspace import (
    INFINITY,
    Tolerance,
    XPoint,
    cbrt,
    dist,
    embed,
    interval_diameter,
    points_equal,
)

from _util import random_xpoint, rng


def brute_q(k):
    # anchor sequence computed from first principles
    return 1.0 - 1.0 / 2.0**k


def test_embed_anchor_values():
    assert embed(XPoint(1, 0.0)) == 0.0
    assert embed(XPoint(1, 1.0)) == brute_q(1) == 0.5
    assert embed(INFINITY) == 1.0


def test_embed_interval_endpoints_hit_anchor_sequence():
    for k in range(1, 21):
        assert embed(XPoint(k, 0.0)) == brute_q(2 * k - 2)
        assert embed(XPoint(k, 1.0)) == brute_q(2 * k - 1)


def test_interval_diameter_exact_up_to_k20():
    for k in range(1, 21):
        d = dist(XPoint(k, 0.0), XPoint(k, 1.0))
        assert d == interval_diameter(k) == 2.0 ** (1 - 2 * k)


def test_distance_to_infinity():
    assert dist(XPoint(1, 0.0), INFINITY) == 1.0
    for k in range(1, 21):
        assert 1.0 - embed(XPoint(k, 0.0)) == 2.0 ** (2 - 2 * k)


def test_self_distance_zero():
    r = rng(1)
    for _ in range(100):
        x = random_xpoint(r)
        assert dist(x, x) == 0.0


def test_metric_axioms_on_random_triples():
    r = rng(2)
    for _ in range(10_000):
        x, y, z = (random_xpoint(r) for _ in range(3))
        assert dist(x, y) == dist(y, x)
        assert dist(x, z) <= dist(x, y) + dist(y, z) + 1e-15
        assert dist(x, y) <= 1.0


@given(
    st.integers(min_value=1, max_value=20),
    st.integers(min_value=0, max_value=1024),
    st.integers(min_value=1, max_value=20),
    st.integers(min_value=0, max_value=1024),
)
def test_embed_strictly_monotone_in_ambient_order(k1, i1, k2, i2):
    """Strict on a 2^-10 coordinate grid up to k = 20; finer increments fall
    below the float lattice near 1 and saturate."""
    a, b = XPoint(k1, i1 / 1024.0), XPoint(k2, i2 / 1024.0)
    if a.ambient < b.ambient:
        assert embed(a) < embed(b)
    elif a.ambient == b.ambient:
        assert embed(a) == embed(b)


def test_infinity_is_supremum():
    r = rng(3)
    for _ in range(200):
        x = random_xpoint(r, kmax=25, p_inf=0.0)
        assert embed(x) < 1.0


def test_construction_clamps_tiny_excess():
    x = XPoint(2, 1.0 + 1e-13)
    assert x.u == 1.0
    y = XPoint(2, -1e-13)
    assert y.u == 0.0


def test_construction_rejects_large_excess():
    with pytest.raises(ValueError):
        XPoint(2, 1.01)
    with pytest.raises(ValueError):
        XPoint(0, 0.5)


def test_tolerance_validation():
    with pytest.raises(ValueError):
        Tolerance(0.0)


def test_points_equal_requires_same_interval():
    assert points_equal(XPoint(3, 0.5), XPoint(3, 0.5 + 1e-14))
    assert not points_equal(XPoint(3, 0.0), XPoint(4, 0.0))
    assert points_equal(INFINITY, INFINITY)
    assert not points_equal(INFINITY, XPoint(30, 1.0))


def test_cbrt_exact_on_exact_cubes():
    for m in range(0, 40, 3):
        assert cbrt(2.0**-m) == 2.0 ** (-m // 3)
    assert cbrt(0.0) == 0.0
    assert cbrt(1.0) == 1.0


def test_cbrt_inverts_cubing():
    r = rng(4)
    for _ in range(1000):
        u = r.random()
        assert math.isclose(cbrt(u) ** 3, u, rel_tol=1e-14, abs_tol=1e-300)
