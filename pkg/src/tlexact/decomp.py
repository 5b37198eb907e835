"""Decomposition combinatorics: the sign-choice sets attached to each cell,
the decomposition and Cartan matrices, the inverse matrix of the shifted
0/1 system, and simple-module dimensions by recursive and closed routes.

All dimension arithmetic is arbitrary precision; torsion and characteristic
may be finite or INFINITY throughout (the closed route needs both finite, or
infinite torsion).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache
from itertools import product
from math import comb

from .quantum import digits, dominates, dot_dominates, nu_paren, radix_weight
from .scalars import INFINITY


class DegenerateCell(ValueError):
    """The even, zero-target cell at vanishing loop parameter (torsion 2)
    carries no simple module; dimension queries on it are rejected."""


def _check_params(ell, p):
    if ell is not INFINITY and (not isinstance(ell, int) or ell < 2):
        raise ValueError("torsion must be an integer >= 2 or INFINITY")
    if p is not INFINITY and (not isinstance(p, int) or p < 2):
        raise ValueError("characteristic must be a prime or INFINITY")


@dataclass(frozen=True)
class ISet:
    """Sorted labels m+1 of the cells below n whose standard module carries a
    trivial composition factor."""

    n: int
    members: tuple[int, ...]


@cache
def i_set(n: int, ell, p) -> ISet:
    """Digit expansion of n+1 with every sign choice on the digits below the
    top one (the top digit keeps its sign); infinite torsion gives {n+1}."""
    _check_params(ell, p)
    ds = digits(n + 1, ell, p).digits
    top = len(ds) - 1
    base = ds[top] * radix_weight(top, ell, p)
    members = set()
    lower = [ds[j] * radix_weight(j, ell, p) for j in range(top)]
    for signs in product((1, -1), repeat=top):
        members.add(base + sum(s * w for s, w in zip(signs, lower)))
    return ISet(n, tuple(sorted(members)))


def wall_reflections(n: int, m: int, ell, p) -> list[int]:
    """Reflections of m about every admissible wall beneath it: for each
    digit weight w with a*w - 1 <= n < (a+1)*w - 1 and a*w - 1 <= m, the
    image 2*(a*w - 1) - m."""
    out = []
    w = ell
    if ell is INFINITY:
        return out
    while w <= n + 1:
        a = (n + 1) // w
        wall = a * w - 1
        if a >= 1 and wall <= m:
            out.append(2 * wall - m)
        if p is INFINITY:
            break
        w *= p
    return out


def cell_labels(n: int, ell=None) -> list[int]:
    """Cell labels m = n, n-2, ..., listed increasingly; the degenerate
    m = 0 label is dropped at torsion 2 when n is even and positive."""
    labels = list(range(n % 2, n + 1, 2))
    if ell == 2 and n > 0 and n % 2 == 0:
        labels = labels[1:]
    return labels


@dataclass(frozen=True)
class DecompTable:
    """Integer matrix indexed by cell labels of one parity."""

    n: int
    ell: object
    p: object
    labels: tuple[int, ...]
    entries: tuple[tuple[int, ...], ...]


def decomposition_matrix(n: int, ell, p) -> DecompTable:
    """Multiplicity of the simple at column label r in the standard module at
    row label m: one exactly when m+1 lies in the sign-choice set of r."""
    labels = tuple(cell_labels(n, ell))
    rows = tuple(
        tuple(1 if (m + 1) in i_set(r, ell, p).members else 0 for r in labels)
        for m in labels
    )
    return DecompTable(n, ell, p, labels, rows)


def cartan_matrix(n: int, ell, p) -> DecompTable:
    """Transpose-product of the decomposition matrix with itself."""
    d = decomposition_matrix(n, ell, p)
    size = len(d.labels)
    rows = tuple(
        tuple(
            sum(d.entries[k][i] * d.entries[k][j] for k in range(size))
            for j in range(size)
        )
        for i in range(size)
    )
    return DecompTable(n, ell, p, d.labels, rows)


def d_tilde(n: int, m: int, ell, p) -> int:
    """Shifted 0/1 system: 1 when m lies in the sign-choice set of n-1."""
    if n < 1 or m < 1 or (n - m) % 2:
        return 0
    return 1 if m in i_set(n - 1, ell, p).members else 0


def e_tilde(n: int, m: int, ell, p) -> int:
    """The four-case inverse entry in {-1, 0, 1}."""
    _check_params(ell, p)
    if ell is INFINITY:
        return 1 if n == m else 0
    if n < 1 or m < 1:
        return 0
    if (n - m) % 2:
        return 0
    half = (n + m) // 2
    v_half = nu_paren(half, ell, p)
    v_m = nu_paren(m, ell, p)
    if v_half > v_m and dominates(half - 1, m, ell, p):
        return -1
    if v_half == v_m and dot_dominates(half, m, ell, p):
        return 1
    return 0


def dim_standard(n: int, m: int) -> int:
    """Dimension of the (n, m) cell: a difference of adjacent binomials."""
    if m > n or m < 0 or (n - m) % 2:
        return 0
    r = (n - m) // 2
    return comb(n, r) - (comb(n, r - 1) if r else 0)


def _guard_degenerate(n: int, m: int, ell):
    if ell == 2 and m == 0 and n > 0 and n % 2 == 0:
        raise DegenerateCell(f"cell ({n}, 0) has no simple module at torsion 2")


@cache
def dim_simple_recursive(n: int, m: int, ell, p) -> int:
    """Simple-module dimension by the restriction recursion, with the
    subtraction rule on the columns just below a torsion multiple."""
    _check_params(ell, p)
    if m > n or m < 0 or (n - m) % 2:
        return 0
    _guard_degenerate(n, m, ell)
    if m == n:
        return 1
    if ell is INFINITY:
        return dim_standard(n, m)
    if (m + 1) % ell == 0:
        total = dim_standard(n, m)
        for m2 in range(m + 2, n + 1, 2):
            if (m + 1) in i_set(m2, ell, p).members:
                total -= dim_simple_recursive(n, m2, ell, p)
        return total
    if (m + 2) % ell == 0:
        return dim_simple_recursive(n - 1, m - 1, ell, p)
    return dim_simple_recursive(n - 1, m - 1, ell, p) + dim_simple_recursive(
        n - 1, m + 1, ell, p
    )


def dim_simple_closed(n: int, m: int, ell, p) -> int:
    """Simple-module dimension as a signed sum of cell dimensions, weighted
    by the inverse-matrix entries; stated for finite characteristic (or
    infinite torsion, where the weights are the identity)."""
    _check_params(ell, p)
    if m > n or m < 0 or (n - m) % 2:
        return 0
    _guard_degenerate(n, m, ell)
    if ell is INFINITY:
        return dim_standard(n, m)
    if p is INFINITY:
        raise ValueError("closed route needs finite characteristic; use the recursion")
    return sum(
        e_tilde(n - 2 * r + 1, m + 1, ell, p) * dim_standard(n, n - 2 * r)
        for r in range((n - m) // 2 + 1)
    )
