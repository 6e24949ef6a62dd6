"""Half-open-interval combinatorics on a doubled lexicographic sequence order.

The carrier is the set of eventually-zero sequences of naturals (minus the
zero sequence), doubled into a Left copy and an order-reversed Right copy so
that ``neg`` (side swap) is an order-reversing involution.  The order is
dense without endpoints, so between any two points a third is constructible;
that single algorithm powers the discreteness boxes on the antidiagonal and
the endpoint-injection argument for half-open covers.
"""

from __future__ import annotations

from dataclasses import dataclass


class SeparationError(ValueError):
    """The injection preconditions (x < bound(x) <= next point) fail."""


def trim(seq) -> tuple[int, ...]:
    out = list(seq)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def lex_cmp(a, b) -> int:
    """Lexicographic comparison of eventually-zero sequences."""
    n = max(len(a), len(b))
    for i in range(n):
        x = a[i] if i < len(a) else 0
        y = b[i] if i < len(b) else 0
        if x != y:
            return -1 if x < y else 1
    return 0


@dataclass(frozen=True, order=False)
class TaggedPoint:
    side: str  # "L" or "R"
    seq: tuple

    def __post_init__(self):
        if self.side not in ("L", "R"):
            raise ValueError("side must be 'L' or 'R'")
        if trim(self.seq) != tuple(self.seq) or not self.seq:
            raise ValueError("sequence must be nonzero and trimmed")

    def __lt__(self, other):
        return point_cmp(self, other) < 0

    def __le__(self, other):
        return point_cmp(self, other) <= 0


def point_cmp(p: TaggedPoint, q: TaggedPoint) -> int:
    if p.side != q.side:
        return -1 if p.side == "L" else 1
    c = lex_cmp(p.seq, q.seq)
    return c if p.side == "L" else -c


def neg(p: TaggedPoint) -> TaggedPoint:
    """Order-reversing involution: swap the copy, keep the sequence."""
    return TaggedPoint("R" if p.side == "L" else "L", p.seq)


def _lex_between(s, t) -> tuple:
    """Sequence strictly between s <lex t: bump the divergence digit when the
    gap allows, otherwise set a fresh position past both supports."""
    n = max(len(s), len(t))
    k = 0
    while k < n:
        a = s[k] if k < len(s) else 0
        b = t[k] if k < len(t) else 0
        if a != b:
            break
        k += 1
    else:
        raise ValueError("sequences are equal")
    a = s[k] if k < len(s) else 0
    b = t[k] if k < len(t) else 0
    prefix = tuple(s[i] if i < len(s) else 0 for i in range(k))
    if b - a >= 2:
        return trim(prefix + (a + 1,))
    padded = tuple(s) + (0,) * (n - len(s))
    return trim(padded + (1,))


def find_between(x: TaggedPoint, y: TaggedPoint) -> TaggedPoint:
    """A point strictly between x < y; the order is dense without endpoints."""
    if not x < y:
        raise ValueError(f"{x} is not below {y}")
    if x.side != y.side:
        # block boundary: step up inside the Left copy
        return TaggedPoint("L", tuple(x.seq) + (1,))
    if x.side == "L":
        return TaggedPoint("L", _lex_between(x.seq, y.seq))
    return TaggedPoint("R", _lex_between(y.seq, x.seq))


def _seq_below(s) -> tuple:
    """Canonical lex-smaller neighbor: decrement the last digit, or shift a
    zero in front when that would empty the sequence."""
    if s[-1] >= 2:
        return tuple(s[:-1]) + (s[-1] - 1,)
    shorter = trim(s[:-1])
    if shorter:
        return shorter
    return (0,) * len(s) + (1,)


def _seq_above(s) -> tuple:
    return (s[0] + 1,)


def point_below(p: TaggedPoint) -> TaggedPoint:
    seq = _seq_below(p.seq) if p.side == "L" else _seq_above(p.seq)
    return TaggedPoint(p.side, seq)


def point_above(p: TaggedPoint) -> TaggedPoint:
    seq = _seq_above(p.seq) if p.side == "L" else _seq_below(p.seq)
    return TaggedPoint(p.side, seq)


@dataclass(frozen=True)
class HalfOpenInterval:
    lo: TaggedPoint
    hi: TaggedPoint

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("interval needs lo < hi")

    def contains(self, p: TaggedPoint) -> bool:
        return self.lo <= p and p < self.hi

    def interior(self, p: TaggedPoint) -> bool:
        return self.lo < p and p < self.hi


@dataclass(frozen=True)
class Box:
    first: HalfOpenInterval
    second: HalfOpenInterval

    def contains(self, pair) -> bool:
        return self.first.contains(pair[0]) and self.second.contains(pair[1])


def isolating_box(x: TaggedPoint):
    """u < x < v with the box [x,v) x [-x,-u) meeting the antidiagonal only
    at (x, -x)."""
    u = find_between(point_below(x), x)
    v = find_between(x, point_above(x))
    box = Box(HalfOpenInterval(x, v), HalfOpenInterval(neg(x), neg(u)))
    return u, v, box


def uncovered_left_endpoints(intervals) -> set[TaggedPoint]:
    """Left endpoints not interior to any member: the part of the union that
    open interiors miss, which is how half-open covers thin out."""
    return {
        iv.lo
        for iv in intervals
        if not any(other.interior(iv.lo) for other in intervals)
    }


def dense_injection(points, bounds) -> dict:
    """Strictly increasing choice of witnesses d_x in (x, bounds[x]).

    Requires x < bounds[x] for each x and bounds[x] <= y for consecutive
    x < y, which forces the witnesses apart.
    """
    ordered = sorted(points)
    for x in ordered:
        if not x < bounds[x]:
            raise SeparationError(f"bound of {x} is not above it")
    for x, y in zip(ordered, ordered[1:]):
        if y < bounds[x]:
            raise SeparationError(f"bound of {x} overruns the next point {y}")
    out = {}
    prev = None
    for x in ordered:
        d = find_between(x, bounds[x])
        if prev is not None and not prev < d:
            raise SeparationError("witnesses failed to increase")
        out[x] = d
        prev = d
    return out


# --- literals ---------------------------------------------------------------------

def parse_point(text: str) -> TaggedPoint:
    """Point literal 'L:1.0.2' or 'R:3' (dot-separated digits)."""
    side, _, digits = text.strip().partition(":")
    if side not in ("L", "R") or not digits:
        raise ValueError(f"bad point literal {text!r}")
    seq = trim(int(d) for d in digits.split("."))
    return TaggedPoint(side, seq)


def format_point(p: TaggedPoint) -> str:
    return f"{p.side}:" + ".".join(str(d) for d in p.seq)


def parse_interval(text: str) -> HalfOpenInterval:
    """Interval literal '[P1,P2)'."""
    text = text.strip()
    if not (text.startswith("[") and text.endswith(")")):
        raise ValueError(f"bad interval literal {text!r}")
    lo, _, hi = text[1:-1].partition(",")
    return HalfOpenInterval(parse_point(lo), parse_point(hi))


def format_interval(iv: HalfOpenInterval) -> str:
    return f"[{format_point(iv.lo)},{format_point(iv.hi)})"
