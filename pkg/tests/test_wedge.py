import random

import pytest

from treewedge.coherent import CoherentSystem
from treewedge.families import BitFamily, DigitFamily
from treewedge.gen import rand_below, rand_digit_node
from treewedge.ordinal import OMEGA, ZERO, add_ord, from_nat, parse_cnf
from treewedge.trees import ExplicitFamily, ExplicitTree
from treewedge.wedge import (
    BinaryInsideDigits,
    CoverUndecided,
    ExplicitSubtree,
    ExplosionGuard,
    PatchedCover,
    SubtreeCover,
    TableCover,
    TruncatedSubtree,
    Wedge,
    cover_space_size,
    covers_within,
    eval_cover,
    find_safe_point,
    is_safe,
    lindelof_oracle,
    safe_subtree,
    wedge_contains,
)

LIMITS = [parse_cnf(s) for s in ("w", "w*2", "w^2", "w^2+w", "w^3")]


@pytest.fixture(scope="module")
def digits():
    return DigitFamily(BitFamily(CoherentSystem()))


@pytest.fixture(scope="module")
def tinu(digits):
    return SubtreeCover(BinaryInsideDigits(digits))


@pytest.fixture
def table_fixture():
    tree = ExplicitTree.complete(2, 3)
    fam = ExplicitFamily(tree)
    return fam, TableCover(fam, {"r": {"0"}})


# --- wedges ------------------------------------------------------------------

def test_wedge_contains(digits):
    x = digits.node([("d", 1)])
    z = digits.node([("d", 1), ("d", 0)])
    other = digits.node([("d", 1), ("d", 2)])
    assert wedge_contains(digits, Wedge(x, ()), x)
    assert not wedge_contains(digits, Wedge(x, (z,)), digits.node([("d", 1), ("d", 0), ("d", 5)]))
    assert wedge_contains(digits, Wedge(x, (z,)), x)
    assert wedge_contains(digits, Wedge(x, (z,)), other)


# --- eval_cover -----------------------------------------------------------------

def test_subtree_cover_bit_children(digits, tinu):
    u = digits.embed_bits(digits.bits.canonical_extension(digits.bits.root(), OMEGA))
    kids = eval_cover(tinu, u)
    assert len(kids) == 2
    assert sorted(k.trail[-1] for k in kids) == [0, 1]


def test_subtree_cover_outside_empty(digits, tinu):
    u = digits.node([("d", 7)])
    assert eval_cover(tinu, u) == []


def test_patched_cover_override(digits, tinu):
    u = digits.node([("d", 0)])
    override = (digits.node([("d", 0), ("d", 3)]),)
    f = PatchedCover(tinu, {u: override})
    assert tuple(eval_cover(f, u)) == override
    other = digits.node([("d", 1)])
    assert eval_cover(f, other) == eval_cover(tinu, other)


# --- safety ---------------------------------------------------------------------

def test_root_safe_for_every_cover(digits, tinu, table_fixture):
    fam, table = table_fixture
    assert is_safe(tinu, digits.root())
    assert is_safe(table, fam.root())


def test_nonbinary_digit_unsafe(digits, tinu):
    u = digits.node([("d", 7), ("d", 0)])
    assert not is_safe(tinu, u)
    assert tinu.first_violation(u) == ZERO


def test_embedded_node_safe(digits, tinu):
    u = digits.embed_bits(digits.bits.canonical_extension(digits.bits.root(), OMEGA))
    assert is_safe(tinu, u)


def test_find_safe_point_canonical(digits, tinu):
    w = find_safe_point(tinu, OMEGA)
    assert w == digits.embed_bits(digits.bits.canonical_extension(digits.bits.root(), OMEGA))
    assert is_safe(tinu, w)


def test_find_safe_point_zero(digits, tinu, table_fixture):
    fam, table = table_fixture
    assert find_safe_point(tinu, ZERO) == digits.root()
    assert find_safe_point(table, ZERO) == "r"


def test_table_fixture_safe_set(table_fixture):
    fam, table = table_fixture
    safe = [x for x in fam.tree.parent if is_safe(table, x)]
    assert sorted(safe) == ["0", "r"]
    assert find_safe_point(table, from_nat(2)) is None
    assert covers_within(table, from_nat(2))
    assert not covers_within(table, from_nat(1))


def test_covers_within_tinu_false_at_limits(digits, tinu):
    for alpha in LIMITS:
        assert not covers_within(tinu, alpha)
        assert find_safe_point(tinu, alpha) is not None


def test_truncated_subtree(digits, tinu):
    trunc = SubtreeCover(TruncatedSubtree(tinu.handle, OMEGA))
    # above the cut everything is covered from below
    for alpha in [parse_cnf("w*2"), parse_cnf("w^2"), add_ord(OMEGA, from_nat(1))]:
        assert covers_within(trunc, alpha)
        assert find_safe_point(trunc, alpha) is None
    # at and below the (limit) cut there are still safe points
    assert not covers_within(trunc, OMEGA)
    assert not covers_within(trunc, from_nat(3))


def test_truncated_finite_height(digits, tinu):
    trunc = SubtreeCover(TruncatedSubtree(tinu.handle, from_nat(3)))
    assert not covers_within(trunc, from_nat(2))
    assert covers_within(trunc, from_nat(3))
    assert covers_within(trunc, OMEGA)


def test_patched_symbolic_reroute(digits, tinu):
    root = digits.root()
    d1 = digits.node([("d", 1)])
    f = PatchedCover(tinu, {root: (d1,)})
    # the canonical all-zeros witness is now rerouted at the root
    w = find_safe_point(f, OMEGA)
    assert w is not None
    assert is_safe(f, w)
    assert digits.query(w, ZERO) == 1
    assert not covers_within(f, OMEGA)


def test_patched_blocking_raises(digits, tinu):
    root = digits.root()
    d7 = digits.node([("d", 7)])
    f = PatchedCover(tinu, {root: (d7,)})
    # every safe point must start with digit 7, leaving the binary subtree:
    # no witness can be found, and the engine refuses to guess
    assert find_safe_point(f, OMEGA) is None
    with pytest.raises(CoverUndecided):
        covers_within(f, OMEGA)


# --- safe subtree ------------------------------------------------------------------

def test_safe_subtree_membership(digits, tinu):
    S = safe_subtree(tinu)
    u = digits.embed_bits(digits.bits.canonical_extension(digits.bits.root(), OMEGA))
    assert S.contains(u)
    assert not S.contains(digits.node([("d", 5)]))


def test_safe_subtree_table(table_fixture):
    fam, table = table_fixture
    S = safe_subtree(table)
    assert {x for x in fam.tree.parent if S.contains(x)} == {"r", "0"}
    assert S.filter_successors("r") == ["0"]
    assert S.filter_successors("1") == []


def test_safe_subtree_downward_closed(digits, tinu):
    rng = random.Random(41)
    S = safe_subtree(tinu)
    for _ in range(100):
        alpha = rng.choice(LIMITS)
        u = rand_digit_node(rng, digits, alpha)
        if S.contains(u):
            beta = rand_below(rng, alpha)
            assert S.contains(digits.restrict(u, beta))


def test_safe_child_iff_promised(digits, tinu):
    # the hereditary rule: a child of a safe node is safe exactly when the
    # rule promises it
    rng = random.Random(43)
    for _ in range(50):
        alpha = rng.choice(LIMITS)
        u = rand_digit_node(rng, digits, alpha)
        if not is_safe(tinu, u):
            continue
        promised = set(eval_cover(tinu, u))
        import itertools

        for child in itertools.islice(digits.successors(u), 6):
            assert is_safe(tinu, child) == (child in promised)


def test_safe_subtree_round_trip(digits, tinu):
    # safety for the derived rule equals safety for the base rule
    derived = SubtreeCover(safe_subtree(tinu))
    rng = random.Random(42)
    for _ in range(50):
        alpha = rng.choice(LIMITS)
        u = rand_digit_node(rng, digits, alpha)
        assert is_safe(derived, u) == is_safe(tinu, u)
    for alpha in LIMITS:
        assert not covers_within(derived, alpha)


# --- finite oracle ---------------------------------------------------------------------

def test_explicit_subtree_cover(table_fixture):
    fam, _ = table_fixture
    cover = SubtreeCover(ExplicitSubtree(fam, {"r", "0"}))
    assert eval_cover(cover, "r") == ["0"]
    assert eval_cover(cover, "0") == []
    assert [x for x in fam.tree.parent if is_safe(cover, x)] == ["r", "0"]
    assert covers_within(cover, from_nat(2))
    assert not covers_within(cover, from_nat(1))
    with pytest.raises(ValueError):
        ExplicitSubtree(fam, {"0"})  # not downward closed


def test_oracle_singleton():
    tree = ExplicitTree().add("r", None)
    report = lindelof_oracle(tree, 1)
    assert report["counterexamples"] == []
    assert report["covers_checked"] == 1


def test_oracle_binary_h3_exhaustive():
    tree = ExplicitTree.complete(2, 3)
    report = lindelof_oracle(tree, 3)
    assert report["counterexamples"] == []
    assert report["covers_checked"] == report["space"] == 4**3


def test_oracle_matches_symbolic_fixture(table_fixture):
    fam, table = table_fixture
    # cross-check the symbolic safe set against the oracle's DP on one cover
    from treewedge.wedge import _safe_sets

    fmap = {"r": frozenset({"0"})}
    safe = _safe_sets(fam.tree, fmap)
    for x in fam.tree.parent:
        assert safe[x] == is_safe(table, x)


def test_oracle_explosion_guard():
    tree = ExplicitTree.complete(3, 4)
    assert cover_space_size(tree, 2) == 7**13
    with pytest.raises(ExplosionGuard):
        lindelof_oracle(tree, 4, max_covers=10**6)
    report = lindelof_oracle(tree, 4, max_covers=10**6, sample=200, rng=random.Random(1))
    assert report["sampled"]
    assert report["counterexamples"] == []
