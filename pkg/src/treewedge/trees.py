"""Generic tree interface over symbolic families and explicit finite trees.

Symbolic nodes are immutable values interpreted by a family object; explicit
trees are small in-memory structures used as brute-force oracles.  All
streams are single-consumer generators and every potentially infinite
enumeration goes through a budget that reports truncation explicitly.
"""

from __future__ import annotations

from itertools import islice
from typing import Iterator, NamedTuple

from .ordinal import Ordinal, add_ord, cmp_ord, from_nat


class FamilyMismatch(TypeError):
    pass


class TreeFamily:
    """Interface shared by the symbolic families and the explicit adapter."""

    def root(self):
        raise NotImplementedError

    def height(self, x) -> Ordinal:
        raise NotImplementedError

    def query(self, x, xi: Ordinal):
        raise NotImplementedError

    def restrict(self, x, beta: Ordinal):
        raise NotImplementedError

    def contains(self, x) -> bool:
        raise NotImplementedError

    def successors(self, x) -> Iterator:
        raise NotImplementedError

    def level(self, alpha: Ordinal) -> Iterator:
        raise NotImplementedError

    def canonical_extension(self, x, alpha: Ordinal):
        raise NotImplementedError

    def owns(self, x) -> bool:
        raise NotImplementedError

    def _check(self, *nodes):
        for x in nodes:
            if not self.owns(x):
                raise FamilyMismatch(f"{x!r} is not a node of {type(self).__name__}")


def node_query(family: TreeFamily, x, xi: Ordinal):
    """Value of the sequence denoted by x at coordinate xi < height(x)."""
    family._check(x)
    if not xi < family.height(x):
        raise ValueError(f"coordinate {xi} not below height {family.height(x)}")
    return family.query(x, xi)


def restrict(family: TreeFamily, x, beta: Ordinal):
    family._check(x)
    if family.height(x) < beta:
        raise ValueError(f"cannot restrict height {family.height(x)} node to {beta}")
    return family.restrict(x, beta)


def tree_le(family: TreeFamily, x, y) -> str:
    """'below', 'equal', 'above' or 'incomparable' in the tree order."""
    family._check(x, y)
    c = cmp_ord(family.height(x), family.height(y))
    if c == 0:
        return "equal" if x == y else "incomparable"
    if c < 0:
        return "below" if family.restrict(y, family.height(x)) == x else "incomparable"
    return "above" if family.restrict(x, family.height(y)) == y else "incomparable"


def is_below(family: TreeFamily, x, y) -> bool:
    return tree_le(family, x, y) == "below"


def is_immediate_successor(family: TreeFamily, parent, child) -> bool:
    return (
        family.height(child) == add_ord(family.height(parent), from_nat(1))
        and family.restrict(child, family.height(parent)) == parent
    )


def first_successor(family: TreeFamily, x):
    return next(iter(family.successors(x)))


def canonical_extension(family: TreeFamily, x, alpha: Ordinal):
    """The family's deterministic node above x at height alpha."""
    family._check(x)
    if alpha < family.height(x):
        raise ValueError(f"target height {alpha} below node height {family.height(x)}")
    return family.canonical_extension(x, alpha)


class EnumResult(NamedTuple):
    nodes: list
    truncated: bool


def list_successors(family: TreeFamily, x, budget: int) -> EnumResult:
    """First ``budget`` immediate successors in canonical order, with an
    explicit flag when the stream was cut short."""
    family._check(x)
    got = list(islice(family.successors(x), budget + 1))
    if len(got) > budget:
        return EnumResult(got[:budget], True)
    return EnumResult(got, False)


def list_level(family: TreeFamily, alpha: Ordinal, budget: int) -> EnumResult:
    got = list(islice(family.level(alpha), budget + 1))
    if len(got) > budget:
        return EnumResult(got[:budget], True)
    return EnumResult(got, False)


# --- explicit finite trees ----------------------------------------------------

class ExplicitTree:
    """Finite tree with string node ids, ordered child lists and int depths.

    Text format: one node per line, ``id parent_id``; roots use ``-``.
    """

    def __init__(self):
        self.parent: dict[str, str | None] = {}
        self.children: dict[str, list[str]] = {}
        self.depth: dict[str, int] = {}

    def add(self, node: str, parent: str | None):
        if node in self.parent:
            raise ValueError(f"duplicate node {node!r}")
        if parent is not None and parent not in self.parent:
            raise ValueError(f"unknown parent {parent!r} for {node!r}")
        self.parent[node] = parent
        self.children[node] = []
        if parent is None:
            self.depth[node] = 0
        else:
            self.children[parent].append(node)
            self.depth[node] = self.depth[parent] + 1
        return self

    @property
    def nodes(self):
        return list(self.parent)

    def roots(self):
        return [x for x, p in self.parent.items() if p is None]

    def tree_height(self) -> int:
        return 1 + max(self.depth.values()) if self.depth else 0

    def level_nodes(self, d: int) -> list[str]:
        return [x for x in self.parent if self.depth[x] == d]

    def ancestor_at(self, x: str, d: int) -> str:
        if d > self.depth[x]:
            raise ValueError(f"{x!r} has depth {self.depth[x]} < {d}")
        while self.depth[x] > d:
            x = self.parent[x]
        return x

    def le(self, x: str, y: str) -> bool:
        """x <= y in the tree order."""
        return self.depth[x] <= self.depth[y] and self.ancestor_at(y, self.depth[x]) == x

    @classmethod
    def from_text(cls, text: str) -> "ExplicitTree":
        tree = cls()
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            if len(fields) != 2:
                raise ValueError(f"expected 'id parent_id', got {line!r}")
            node, parent = fields
            tree.add(node, None if parent == "-" else parent)
        return tree

    def to_text(self) -> str:
        return "\n".join(f"{x} {self.parent[x] or '-'}" for x in self.parent)

    @classmethod
    def complete(cls, arity: int, height: int) -> "ExplicitTree":
        """Complete ``arity``-splitting tree with levels 0..height-1; ids are
        the digit strings, root is 'r'."""
        tree = cls().add("r", None)
        frontier = ["r"]
        for _ in range(height - 1):
            nxt = []
            for x in frontier:
                for d in range(arity):
                    child = (x if x != "r" else "") + str(d)
                    tree.add(child, x)
                    nxt.append(child)
            frontier = nxt
        return tree


class ExplicitFamily(TreeFamily):
    """Adapter exposing an ExplicitTree through the family interface.

    Requires a single root so that levels are genuine tree levels.
    """

    def __init__(self, tree: ExplicitTree):
        roots = tree.roots()
        if len(roots) != 1:
            raise ValueError("family adapter needs a single-rooted tree")
        self.tree = tree
        self._root = roots[0]

    def owns(self, x) -> bool:
        return isinstance(x, str) and x in self.tree.parent

    def root(self):
        return self._root

    def height(self, x) -> Ordinal:
        return from_nat(self.tree.depth[x])

    def query(self, x, xi):
        raise TypeError("explicit nodes do not denote sequences")

    def restrict(self, x, beta: Ordinal):
        return self.tree.ancestor_at(x, beta.to_nat())

    def contains(self, x) -> bool:
        return self.owns(x)

    def successors(self, x) -> Iterator:
        return iter(self.tree.children[x])

    def level(self, alpha: Ordinal) -> Iterator:
        return iter(self.tree.level_nodes(alpha.to_nat()))

    def canonical_extension(self, x, alpha: Ordinal):
        d = alpha.to_nat()
        if d < self.tree.depth[x]:
            raise ValueError("target height below node")
        while self.tree.depth[x] < d:
            kids = self.tree.children[x]
            if not kids:
                raise ValueError(f"no extension of {x!r} reaches depth {d}")
            x = kids[0]
        return x


def branch_to_antichain(tree: ExplicitTree, chain: list[str]) -> set[str]:
    """For each node of the chain pick its first child outside the chain.

    The results are pairwise incomparable and there is one per chain node.
    Fails when some chain node has every child inside the chain.
    """
    members = set(chain)
    for x in chain:
        for y in chain:
            if not (tree.le(x, y) or tree.le(y, x)):
                raise ValueError(f"not a chain: {x!r} and {y!r} are incomparable")
    picks = set()
    for x in chain:
        candidates = [c for c in tree.children[x] if c not in members]
        if not candidates:
            raise ValueError(f"every child of {x!r} lies in the chain")
        picks.add(candidates[0])
    return picks
