import pytest

from treewedge.ordinal import from_nat
from treewedge.trees import (
    EnumResult,
    ExplicitFamily,
    ExplicitTree,
    branch_to_antichain,
    is_immediate_successor,
    list_level,
    list_successors,
    node_query,
    tree_le,
)


@pytest.fixture
def binary3():
    return ExplicitTree.complete(2, 4)  # levels 0..3, 15 nodes


def test_complete_tree_shape(binary3):
    assert len(binary3.nodes) == 15
    assert binary3.tree_height() == 4
    assert sorted(binary3.level_nodes(2)) == ["00", "01", "10", "11"]


def test_text_round_trip(binary3):
    text = binary3.to_text()
    again = ExplicitTree.from_text(text)
    assert again.parent == binary3.parent
    assert again.children == binary3.children


def test_explicit_family_order(binary3):
    fam = ExplicitFamily(binary3)
    assert tree_le(fam, "0", "01") == "below"
    assert tree_le(fam, "01", "0") == "above"
    assert tree_le(fam, "0", "0") == "equal"
    assert tree_le(fam, "0", "10") == "incomparable"
    assert fam.restrict("010", from_nat(1)) == "0"


def test_explicit_family_streams(binary3):
    fam = ExplicitFamily(binary3)
    assert list_successors(fam, "r", 10) == EnumResult(["0", "1"], False)
    assert list_successors(fam, "r", 1) == EnumResult(["0"], True)
    assert list_level(fam, from_nat(0), 5) == EnumResult(["r"], False)


def test_immediate_successor(binary3):
    fam = ExplicitFamily(binary3)
    assert is_immediate_successor(fam, "0", "01")
    assert not is_immediate_successor(fam, "0", "011")
    assert not is_immediate_successor(fam, "0", "10")


def test_canonical_extension_first_children(binary3):
    fam = ExplicitFamily(binary3)
    assert fam.canonical_extension("r", from_nat(2)) == "00"
    assert fam.canonical_extension("1", from_nat(3)) == "100"


def test_branch_to_antichain_example(binary3):
    picks = branch_to_antichain(binary3, ["r", "0", "00"])
    assert picks == {"1", "01", "000"}


def test_branch_to_antichain_root_only(binary3):
    assert branch_to_antichain(binary3, ["r"]) == {"0"}


def test_branch_to_antichain_rejects_non_chain(binary3):
    with pytest.raises(ValueError):
        branch_to_antichain(binary3, ["0", "1"])


def test_branch_to_antichain_rejects_leaf(binary3):
    with pytest.raises(ValueError):
        branch_to_antichain(binary3, ["r", "0", "00", "000"])


def test_branch_to_antichain_random_chains():
    import random

    rng = random.Random(9)
    for _ in range(50):
        arity = rng.choice([2, 3])
        height = rng.choice([3, 4])
        tree = ExplicitTree.complete(arity, height)
        # random chain from the root, stopping above the leaves
        chain = ["r"]
        while True:
            kids = tree.children[chain[-1]]
            if not kids or not tree.children[kids[0]]:
                break
            chain.append(rng.choice(kids))
            if rng.random() < 0.3:
                break
        picks = branch_to_antichain(tree, chain)
        assert len(picks) == len(chain)
        picks = sorted(picks)
        for i, a in enumerate(picks):
            for b in picks[i + 1 :]:
                assert not tree.le(a, b) and not tree.le(b, a)


def test_query_not_supported_on_explicit(binary3):
    fam = ExplicitFamily(binary3)
    with pytest.raises(TypeError):
        node_query(fam, "0", from_nat(0))
