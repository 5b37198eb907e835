"""Planar diagram calculus: non-crossing pairings between two columns of
sites, composition with loop counting, vertical reflection, tensor stacking,
the bijection with two-row standard tableaux, and nesting forests.

Boundary convention: a diagram from n sources to m targets stores a
fixed-point-free involution on 0..n+m-1 where 0..n-1 are the source sites
top-to-bottom and n..n+m-1 are the target sites bottom-to-top, i.e. the
boundary cycle of the strip.  Site numbering in text output is 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache
from math import comb

from .scalars import DeltaPoly, poly_exact_div
from .quantum import quantum_factorial, quantum_number


class ArityMismatch(ValueError):
    """Composition of diagrams whose middle arities disagree."""


class NotMonic(ValueError):
    """Operation requires a diagram of maximal propagation."""


class NotStandard(ValueError):
    """Tableau rows do not interleave as a standard tableau."""


class ShapeMismatch(ValueError):
    """Tableaux of different shapes are incomparable."""


class Diagram:
    """An (n, m)-diagram: a non-crossing perfect pairing of boundary sites."""

    __slots__ = ("n", "m", "pairing", "_hash")

    def __init__(self, n: int, m: int, pairing):
        pairing = tuple(pairing)
        total = n + m
        if total % 2:
            raise ValueError("n + m must be even")
        if len(pairing) != total:
            raise ValueError("pairing length must be n + m")
        self.n = n
        self.m = m
        self.pairing = pairing
        self._hash = hash((n, m, pairing))
        self._validate()

    def _validate(self):
        p = self.pairing
        stack = []
        for i, j in enumerate(p):
            if j == i or not 0 <= j < len(p) or p[j] != i:
                raise ValueError("pairing is not a fixed-point-free involution")
            if j > i:
                stack.append(i)
            else:
                if not stack or stack[-1] != j:
                    raise ValueError("pairing has crossing strands")
                stack.pop()

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return (
            isinstance(other, Diagram)
            and self.n == other.n
            and self.m == other.m
            and self.pairing == other.pairing
        )

    def propagation(self) -> int:
        """Number of source-to-target strands."""
        n = self.n
        return sum(1 for i in range(n) if self.pairing[i] >= n)

    def is_monic(self) -> bool:
        return self.m <= self.n and self.propagation() == self.m

    def source_links(self) -> tuple[tuple[int, int], ...]:
        """Source-to-source arcs as 0-based (lower, upper) index pairs."""
        n, p = self.n, self.pairing
        return tuple((i, p[i]) for i in range(n) if i < p[i] < n)

    def debug_str(self) -> str:
        """Text form ``n m : a1-b1 a2-b2 ...`` with 1-based boundary indices."""
        pairs = sorted((i, j) for i, j in enumerate(self.pairing) if i < j)
        body = " ".join(f"{a + 1}-{b + 1}" for a, b in pairs)
        return f"{self.n} {self.m} : {body}"

    def __repr__(self):
        return f"Diagram({self.debug_str()!r})"


@cache
def identity(n: int) -> Diagram:
    return Diagram(n, n, tuple(2 * n - 1 - x for x in range(2 * n)))


@cache
def u_gen(n: int, i: int) -> Diagram:
    """The generator with a simple cup and cap at position i, 1 <= i < n."""
    if not 1 <= i < n:
        raise ValueError("generator index out of range")
    pairing = [2 * n - 1 - x for x in range(2 * n)]
    a, b = i - 1, i
    pairing[a], pairing[b] = b, a
    ta, tb = 2 * n - 1 - a, 2 * n - 1 - b
    pairing[ta], pairing[tb] = tb, ta
    return Diagram(n, n, pairing)


@cache
def cup_diagram(n: int, i: int) -> Diagram:
    """The (n, n-2)-diagram joining source sites i and i+1."""
    if not 1 <= i < n:
        raise ValueError("cup position out of range")
    m = n - 2
    pairing = [0] * (n + m)
    pairing[i - 1], pairing[i] = i, i - 1
    t = 0
    for s in range(n):
        if s in (i - 1, i):
            continue
        tgt = n + m - 1 - t
        pairing[s] = tgt
        pairing[tgt] = s
        t += 1
    return Diagram(n, m, pairing)


def cap_diagram(n: int, i: int) -> Diagram:
    """The (n-2, n)-diagram joining target sites i and i+1."""
    return iota(cup_diagram(n, i))


def compose(d1: Diagram, d2: Diagram) -> tuple[Diagram, int]:
    """Glue d1's targets to d2's sources; returns the diagram and the number
    of closed loops removed.

    The resulting pairing is found by walking strands out of the external
    sites; loops are counted by union-find over the 2k identified middle
    points.
    """
    if d1.m != d2.n:
        raise ArityMismatch(f"cannot compose ({d1.n},{d1.m}) with ({d2.n},{d2.m})")
    n, k, m = d1.n, d1.m, d2.m
    p1, p2 = d1.pairing, d2.pairing

    # d1 middle x in [n, n+k) is glued to d2 source k-1-(x-n)
    pairing = [-1] * (n + m)

    def walk(side: int, cur: int) -> int:
        while True:
            if side == 1:
                nxt = p1[cur]
                if nxt < n:
                    return nxt
                side, cur = 2, k - 1 - (nxt - n)
            else:
                nxt = p2[cur]
                if nxt >= k:
                    return n + (nxt - k)
                side, cur = 1, n + (k - 1 - nxt)

    for s in range(n):
        if pairing[s] < 0:
            e = walk(1, s)
            pairing[s] = e
            pairing[e] = s
    for t in range(k, k + m):
        new_t = n + (t - k)
        if pairing[new_t] < 0:
            e = walk(2, t)
            pairing[new_t] = e
            pairing[e] = new_t

    # loop count: union-find over d1 middles (items 0..k-1) and d2 middles
    # (items k..2k-1); components never touching an external site are loops
    parent = list(range(2 * k))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: int, b: int):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for x in range(k):
        union(x, k + (k - 1 - x))  # gluing edge
        q = p1[n + x]
        if q >= n:
            union(x, q - n)
        q = p2[k - 1 - x]
        if q < k:
            union(k + (k - 1 - x), k + q)
    open_roots = set()
    for x in range(k):
        if p1[n + x] < n:
            open_roots.add(find(x))
        if p2[x] >= k:
            open_roots.add(find(k + x))
    roots = {find(i) for i in range(2 * k)}
    loops = len(roots) - len(open_roots)
    return Diagram(n, m, pairing), loops


def iota(d: Diagram) -> Diagram:
    """Vertical reflection m -> n; an involution and an anti-automorphism."""
    total = d.n + d.m
    p = d.pairing
    return Diagram(d.m, d.n, tuple(total - 1 - p[total - 1 - x] for x in range(total)))


def tensor(d1: Diagram, d2: Diagram) -> Diagram:
    """Vertical concatenation, d1 stacked above d2."""
    n1, m1, n2, m2 = d1.n, d1.m, d2.n, d2.m

    def map1(x: int) -> int:
        return x if x < n1 else x + n2 + m2

    pairing = [-1] * (n1 + n2 + m1 + m2)
    for x, y in enumerate(d1.pairing):
        pairing[map1(x)] = map1(y)
    for x, y in enumerate(d2.pairing):
        pairing[n1 + x] = n1 + y
    return Diagram(n1 + n2, m1 + m2, pairing)


def _diagram_from_closing(n: int, m: int, closing: tuple[int, ...]) -> Diagram:
    """Monic (n, m)-diagram with the given 1-based closing sites."""
    closing_set = set(closing)
    pairing = [-1] * (n + m)
    stack = []
    through = []
    for site in range(1, n + 1):
        if site in closing_set:
            a = stack.pop()
            pairing[a] = site - 1
            pairing[site - 1] = a
        else:
            stack.append(site - 1)
    through = stack  # survivors, top-to-bottom
    for j, s in enumerate(through):
        tgt = n + m - 1 - j
        pairing[s] = tgt
        pairing[tgt] = s
    return Diagram(n, m, pairing)


@cache
def enumerate_monic(n: int, m: int) -> tuple[Diagram, ...]:
    """All monic (n, m)-diagrams, ordered lexicographically by their tuple of
    closing sites.  The count is C(n, r) - C(n, r-1) with r = (n-m)/2."""
    if m > n or (n - m) % 2:
        raise ValueError("need m <= n of the same parity")
    r = (n - m) // 2
    out = []

    def extend(prefix: list[int], depth: int):
        if depth == r:
            out.append(_diagram_from_closing(n, m, tuple(prefix)))
            return
        lo = max(2 * (depth + 1), prefix[-1] + 1 if prefix else 0)
        for c in range(lo, n - (r - depth - 1) + 1):
            prefix.append(c)
            extend(prefix, depth + 1)
            prefix.pop()

    extend([], 0)
    assert len(out) == comb(n, r) - (comb(n, r - 1) if r else 0)
    return tuple(out)


def closing_sites(d: Diagram) -> tuple[int, ...]:
    """1-based source sites connected to an earlier source site."""
    n, p = d.n, d.pairing
    return tuple(i + 1 for i in range(n) if p[i] < i)


@dataclass(frozen=True)
class Tableau2:
    """Two strictly increasing rows partitioning 1..N, standard by column."""

    row1: tuple[int, ...]
    row2: tuple[int, ...]

    def __post_init__(self):
        labels = sorted(self.row1 + self.row2)
        if labels != list(range(1, len(labels) + 1)):
            raise NotStandard("rows must partition 1..N")
        if list(self.row1) != sorted(set(self.row1)) or list(self.row2) != sorted(set(self.row2)):
            raise NotStandard("rows must strictly increase")
        if len(self.row2) > len(self.row1):
            raise NotStandard("second row longer than first")
        for a, b in zip(self.row1, self.row2):
            if b <= a:
                raise NotStandard("column condition violated")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row1), len(self.row2)


def diagram_to_tableau(d: Diagram) -> Tableau2:
    if not d.is_monic():
        raise NotMonic(f"({d.n},{d.m})-diagram of propagation {d.propagation()}")
    second = closing_sites(d)
    first = tuple(s for s in range(1, d.n + 1) if s not in set(second))
    return Tableau2(first, second)


def tableau_to_diagram(t: Tableau2) -> Diagram:
    a, b = t.shape
    n, m = a + b, a - b
    return _diagram_from_closing(n, m, t.row2)


def tableau_leq(t: Tableau2, s: Tableau2) -> bool:
    """Componentwise order on second rows."""
    if t.shape != s.shape:
        raise ShapeMismatch(f"{t.shape} vs {s.shape}")
    return all(a <= b for a, b in zip(t.row2, s.row2))


@dataclass(frozen=True)
class Forest:
    """Nesting forest of the arcs of a rotated one-column diagram.

    ``arcs`` are (low, high) position pairs; ``down_counts[i]`` is the number
    of arcs nested inside arc i, the arc itself included.
    """

    arcs: tuple[tuple[int, int], ...]
    down_counts: tuple[int, ...]


def forest_of(d: Diagram) -> Forest:
    """Rotate the targets onto the source column and read off the nesting
    order of the resulting arcs.

    The target column is rotated around the bottom of the strip, so position
    order is t_m, ..., t_1, s_1, ..., s_n; on boundary-cycle indices this is
    the rotation x -> (x + m) mod (n + m).  This orientation is pinned by the
    first-column span of the tridiagonal cell's kernel, see the candidate
    morphism tests.
    """
    if not d.is_monic():
        raise NotMonic(f"({d.n},{d.m})-diagram of propagation {d.propagation()}")
    total = d.n + d.m
    m = d.m
    arcs = []
    for x, y in enumerate(d.pairing):
        if x < y:
            a, b = (x + m) % total, (y + m) % total
            arcs.append((a, b) if a < b else (b, a))
    arcs.sort()
    down = []
    for a, b in arcs:
        down.append(sum(1 for c, e in arcs if a <= c and e <= b))
    return Forest(tuple(arcs), tuple(down))


def h_poly(d: Diagram) -> DeltaPoly:
    """Forest polynomial of a monic diagram: the quantum factorial of the arc
    count divided by the product of quantum numbers of the nested-arc counts.
    The quotient is always exact."""
    forest = forest_of(d)
    den = DeltaPoly.const(1)
    for c in forest.down_counts:
        den = den * quantum_number(c)
    return poly_exact_div(quantum_factorial(len(forest.arcs)), den)


def nested_cap_diagram(r: int, s: int) -> Diagram:
    """Monic (r, s)-diagram with (r-s)/2 nested arcs at the top and all
    through strands below; its forest is a chain, so its h value is 1."""
    if s > r or (r - s) % 2:
        raise ValueError("need s <= r of the same parity")
    k = (r - s) // 2
    closing = tuple(range(k + 1, 2 * k + 1))
    return _diagram_from_closing(r, s, closing)
