import random

import pytest

from treewedge.coherent import CoherentSystem
from treewedge.ordinal import OMEGA, ZERO, from_nat, parse_cnf

from test_ordinal import rand_below

ANCHORS = [parse_cnf(s) for s in ("w", "w*2", "w^2", "w^2+w", "w^3")]


@pytest.fixture(scope="module")
def coh():
    return CoherentSystem()


def test_eval_base_values(coh):
    assert coh.eval_e(from_nat(3), from_nat(1)) == 5
    assert coh.eval_e(from_nat(1), ZERO) == 1


def test_eval_domain_guard(coh):
    with pytest.raises(ValueError):
        coh.eval_e(from_nat(3), from_nat(3))


def test_omega_block_is_plain(coh):
    for n in range(10):
        assert coh.eval_e(OMEGA, from_nat(n)) == 4 * n + 1
    assert coh.correction_table(OMEGA, 10) == {}


def test_delta_reflexive_and_nat_vs_omega(coh):
    assert coh.delta_e(OMEGA, OMEGA) == frozenset()
    for n in range(12):
        assert coh.delta_e(from_nat(n), OMEGA) == frozenset()


def test_delta_exactness_pointwise(coh):
    rng = random.Random(20)
    pairs = [(a, b) for a in ANCHORS for b in ANCHORS if a < b]
    for alpha, beta in pairs:
        delta = coh.delta_e(alpha, beta)
        for xi in delta:
            assert coh.eval_e(alpha, xi) != coh.eval_e(beta, xi)
        for _ in range(50):
            xi = rand_below(rng, alpha)
            if xi not in delta:
                assert coh.eval_e(alpha, xi) == coh.eval_e(beta, xi)


def test_delta_known_witness(coh):
    # the w*2 anchor keeps the successor-birth value at position w, while
    # every anchor whose ladder passes through w re-keys it
    d = coh.delta_e(parse_cnf("w*2"), parse_cnf("w^2"))
    assert d == frozenset([OMEGA])


def test_value_parity(coh):
    rng = random.Random(21)
    for alpha in ANCHORS:
        for _ in range(200):
            v = coh.eval_e(alpha, rand_below(rng, alpha))
            assert v % 2 == 1
            assert v % 4 in (1, 3)


def test_injectivity_sampled(coh):
    rng = random.Random(22)
    for alpha in ANCHORS:
        seen = {}
        for _ in range(1000):
            xi = rand_below(rng, alpha)
            v = coh.eval_e(alpha, xi)
            assert seen.setdefault(v, xi) == xi
        for xi, eta in [(rand_below(rng, alpha), rand_below(rng, alpha)) for _ in range(200)]:
            if xi != eta:
                assert coh.eval_e(alpha, xi) != coh.eval_e(alpha, eta)


def test_determinism_fresh_system(coh):
    other = CoherentSystem()
    rng = random.Random(23)
    for alpha in ANCHORS:
        for _ in range(100):
            xi = rand_below(rng, alpha)
            assert coh.eval_e(alpha, xi) == other.eval_e(alpha, xi)
        for beta in ANCHORS:
            if alpha <= beta:
                assert coh.delta_e(alpha, beta) == other.delta_e(alpha, beta)


def test_triangle_bound(coh):
    for a in ANCHORS:
        for b in ANCHORS:
            for c in ANCHORS:
                if a < b and b < c:
                    lhs = coh.delta_e(a, c)
                    rhs = set(coh.delta_e(a, b)) | {x for x in coh.delta_e(b, c) if x < a}
                    assert lhs <= rhs


def test_range_test_examples(coh):
    assert coh.range_test_e(OMEGA, 2) == "out"
    assert coh.range_test_e(from_nat(3), 5) == "in"
    assert coh.range_test_e(from_nat(3), 9999, budget=3) in ("out", "undecided")
    assert coh.range_test_e(from_nat(3), 9999) == "out"


def test_range_test_round_trip(coh):
    rng = random.Random(24)
    for alpha in ANCHORS:
        for _ in range(100):
            xi = rand_below(rng, alpha)
            v = coh.eval_e(alpha, xi)
            assert coh.range_test_e(alpha, v) == "in"
            assert coh.position_of_value(alpha, v) == xi


def test_correction_table_matches_eval(coh):
    w2 = parse_cnf("w^2")
    table = coh.correction_table(w2, 5)
    assert table, "w^2 must re-key its composite ladder points"
    for p, v in table.items():
        assert coh.eval_e(w2, p) == v
