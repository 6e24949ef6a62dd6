import random

import pytest
from hypothesis import given, strategies as st

from treewedge.sorgenfrey import (
    HalfOpenInterval,
    SeparationError,
    TaggedPoint,
    dense_injection,
    find_between,
    format_interval,
    format_point,
    isolating_box,
    lex_cmp,
    neg,
    parse_interval,
    parse_point,
    point_above,
    point_below,
    point_cmp,
    trim,
    uncovered_left_endpoints,
)


def seqs():
    return st.lists(st.integers(0, 5), min_size=0, max_size=5).map(
        lambda xs: trim(xs + [1])
    )


def points():
    return st.builds(TaggedPoint, st.sampled_from(["L", "R"]), seqs())


def L(*digits):
    return TaggedPoint("L", trim(digits))


def R(*digits):
    return TaggedPoint("R", trim(digits))


def rand_point(rng):
    seq = trim([rng.randrange(0, 5) for _ in range(rng.randrange(0, 4))] + [rng.randrange(1, 5)])
    return TaggedPoint(rng.choice("LR"), seq)


# --- order -----------------------------------------------------------------------

def test_lex_prefix_rule():
    assert lex_cmp((1,), (1, 1)) == -1
    assert point_cmp(L(1), L(1, 1)) == -1


def test_blocks():
    assert L(5, 5) < R(1)


@given(points(), points(), points())
def test_total_transitive(a, b, c):
    assert (a < b) + (b < a) + (point_cmp(a, b) == 0) == 1
    if a < b and b < c:
        assert a < c


def test_neg_involution():
    p = L(1, 0, 2)
    assert neg(neg(p)) == p


@given(points(), points())
def test_neg_order_reversing(p, q):
    if p < q:
        assert neg(q) < neg(p)


@given(points())
def test_no_endpoints(p):
    assert point_below(p) < p
    assert p < point_above(p)


# --- density -----------------------------------------------------------------------

def test_find_between_gap_rule():
    assert find_between(L(1), L(3)) == L(2)


def test_find_between_fresh_position():
    assert find_between(L(1), L(2)) == L(1, 1)


def test_find_between_random():
    rng = random.Random(50)
    for _ in range(10**4):
        a, b = rand_point(rng), rand_point(rng)
        if point_cmp(a, b) == 0:
            continue
        if b < a:
            a, b = b, a
        z = find_between(a, b)
        assert a < z and z < b


def test_find_between_cross_side():
    a, b = L(2), R(1)
    z = find_between(a, b)
    assert a < z and z < b


# --- isolation ------------------------------------------------------------------------

def test_box_contains_its_diagonal_point():
    rng = random.Random(51)
    for _ in range(100):
        x = rand_point(rng)
        u, v, box = isolating_box(x)
        assert u < x and x < v
        assert box.contains((x, neg(x)))


def test_box_excludes_other_diagonal_points():
    rng = random.Random(52)
    for _ in range(100):
        x = rand_point(rng)
        _, _, box = isolating_box(x)
        for _ in range(200):
            y = rand_point(rng)
            if point_cmp(y, x) != 0:
                assert not box.contains((y, neg(y)))


# --- endpoint scan ------------------------------------------------------------------------

def test_uncovered_single_interval():
    a, b = L(1), L(3)
    assert uncovered_left_endpoints([HalfOpenInterval(a, b)]) == {a}


def test_uncovered_abutting():
    a, b, c = L(1), L(2), L(3)
    ivs = [HalfOpenInterval(a, b), HalfOpenInterval(b, c)]
    assert uncovered_left_endpoints(ivs) == {a, b}


def test_uncovered_interior_endpoint():
    a, b, c = L(1), L(2), L(3)
    ivs = [HalfOpenInterval(a, c), HalfOpenInterval(b, c)]
    assert uncovered_left_endpoints(ivs) == {a}


def test_uncovered_matches_bruteforce():
    rng = random.Random(53)
    for _ in range(200):
        pts = sorted({rand_point(rng) for _ in range(8)})
        if len(pts) < 4:
            continue
        ivs = []
        for _ in range(4):
            i = rng.randrange(len(pts) - 1)
            j = rng.randrange(i + 1, len(pts))
            ivs.append(HalfOpenInterval(pts[i], pts[j]))
        got = uncovered_left_endpoints(ivs)
        # brute force: every left endpoint, scanned against every interior
        expect = set()
        for iv in ivs:
            if all(not (o.lo < iv.lo and iv.lo < o.hi) for o in ivs):
                expect.add(iv.lo)
        assert got == expect


# --- injection ---------------------------------------------------------------------------

def test_injection_monotone():
    xs = [L(1), L(2), L(3)]
    bounds = {L(1): L(1, 5), L(2): L(2, 5), L(3): L(3, 5)}
    out = dense_injection(xs, bounds)
    assert out[L(1)] < out[L(2)] and out[L(2)] < out[L(3)]
    for x in xs:
        assert x < out[x] and out[x] < bounds[x]


def test_injection_singleton():
    out = dense_injection([L(7)], {L(7): L(8)})
    assert L(7) < out[L(7)] and out[L(7)] < L(8)


def test_injection_rejects_overrun():
    with pytest.raises(SeparationError):
        dense_injection([L(1), L(2)], {L(1): L(3), L(2): L(4)})


# --- literals ----------------------------------------------------------------------------

def test_point_literals():
    assert parse_point("L:1.0.2") == L(1, 0, 2)
    assert parse_point("R:3") == R(3)
    assert parse_point(format_point(L(4, 1))) == L(4, 1)


def test_interval_literal_round_trip():
    iv = HalfOpenInterval(L(1), R(2))
    assert parse_interval(format_interval(iv)) == iv
