"""Quantum combinatorics: quantum numbers, factorials and binomials, the
difference series, mixed-radix digits, valuations, dominance and linkage.

The digit expansion of n for torsion ``ell`` and characteristic ``p`` writes
n = n0 + n1*ell + n2*ell*p + n3*ell*p^2 + ... with 0 <= n0 < ell and
0 <= ni < p beyond that; radix(i) below is the weight of digit i.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache
from math import comb

from .scalars import DELTA, INFINITY, ONE, ZERO, DeltaPoly, PointedField, poly_exact_div, specialize


@cache
def quantum_number(k: int) -> DeltaPoly:
    """The quantum number [k]; [-k] = -[k] by the reverse recurrence."""
    if k < 0:
        return -quantum_number(-k)
    if k == 0:
        return ZERO
    if k == 1:
        return ONE
    return DELTA * quantum_number(k - 1) - quantum_number(k - 2)


@cache
def quantum_factorial(n: int) -> DeltaPoly:
    if n <= 0:
        return ONE
    return quantum_factorial(n - 1) * quantum_number(n)


@cache
def quantum_binomial(n: int, r: int) -> DeltaPoly:
    """Gaussian binomial [n over r] as an exact polynomial.

    Computed by exact division of quantum factorials; the quotient is always
    integral, so NonExactDivision here means a bug upstream.
    """
    if r < 0 or r > n:
        return ZERO
    num = quantum_factorial(n)
    den = quantum_factorial(r) * quantum_factorial(n - r)
    return poly_exact_div(num, den)


def delta_series(k: int) -> DeltaPoly:
    """The difference series member: [k+1] - [k-1]; starts 2, delta, ..."""
    return quantum_number(k + 1) - quantum_number(k - 1)


@dataclass(frozen=True)
class DigitVector:
    """Little-endian digit expansion of a natural in the (ell, p) mixed radix."""

    digits: tuple[int, ...]
    ell: object
    p: object

    def radix(self, i: int):
        if i == 0:
            return 1
        if self.ell is INFINITY:
            raise ValueError("infinite torsion admits a single digit")
        if i == 1:
            return self.ell
        if self.p is INFINITY:
            raise ValueError("p = infinity admits two digits")
        return self.ell * self.p ** (i - 1)

    def value(self) -> int:
        return sum(d * self.radix(i) for i, d in enumerate(self.digits))


def radix_weight(i: int, ell, p):
    """Weight of digit position i: 1, ell, ell*p, ell*p^2, ..."""
    if i == 0:
        return 1
    if i == 1:
        return ell
    return ell * p ** (i - 1)


def digits(n: int, ell, p) -> DigitVector:
    """Greedy digit expansion of n >= 0; ell = inf keeps the whole of n in
    digit 0, p = inf keeps everything above ell in digit 1."""
    if n < 0:
        raise ValueError("digits of a negative number")
    if ell is INFINITY:
        return DigitVector((n,), ell, p)
    ds = [n % ell]
    n //= ell
    if p is INFINITY:
        if n:
            ds.append(n)
        return DigitVector(tuple(ds), ell, p)
    while n:
        ds.append(n % p)
        n //= p
    return DigitVector(tuple(ds), ell, p)


def _padded(n: int, r: int, ell, p):
    dn = digits(n, ell, p).digits
    dr = digits(r, ell, p).digits
    k = max(len(dn), len(dr))
    return dn + (0,) * (k - len(dn)), dr + (0,) * (k - len(dr))


def dominates(n: int, r: int, ell, p) -> bool:
    """Digitwise comparison: every digit of n is at least that of r."""
    dn, dr = _padded(n, r, ell, p)
    return all(a >= b for a, b in zip(dn, dr))


def nu_paren(x: int, ell, p) -> int:
    """Torsion-adjusted valuation: 0 unless ell divides x, else one more than
    the p-adic valuation of x/ell."""
    if x <= 0:
        raise ValueError("valuation of a non-positive number")
    if x % ell:
        return 0
    x //= ell
    v = 1
    if p is INFINITY:
        return v
    while x % p == 0:
        x //= p
        v += 1
    return v


def dot_dominates(n: int, r: int, ell, p) -> bool:
    """Dominance refined by equal valuation and agreeing digit there."""
    if not dominates(n, r, ell, p):
        return False
    v = nu_paren(n, ell, p)
    if v != nu_paren(r, ell, p):
        return False
    dn, dr = _padded(n, r, ell, p)
    return dn[v] == dr[v]


def lucas_binomial(n: int, r: int, field: PointedField):
    """Specialized Gaussian binomial via the digitwise factorization.

    The digit-0 factor is a small quantum binomial specialized into the
    field; the remaining factors are ordinary binomials of digits mod p.
    In symbolic mode falls back to the full symbolic binomial.
    """
    if field.is_symbolic:
        return quantum_binomial(n, r)
    p = field.characteristic
    ell = field.ell
    dn, dr = _padded(n, r, ell, p)
    out = specialize(quantum_binomial(dn[0], dr[0]), field)
    for a, b in zip(dn[1:], dr[1:]):
        out = out * (comb(a, b) % p) % p
        if not out:
            break
    return out


def quantum_binomial_mod(n: int, r: int, field: PointedField) -> int:
    """Direct specialization of the Gaussian binomial, scalable in n.

    Expands delta around the field's parameter as delta0 + t and tracks each
    [k] as (valuation, unit) of a truncated power series in t over F_p.  The
    binomial is a polynomial, so its image at delta0 is zero exactly when the
    factorial valuations leave a positive t-valuation, and otherwise the
    ratio of the unit parts.  Agrees with specialize(quantum_binomial(n, r))
    but costs O(1) per query after an O(n) table build.
    """
    if r < 0 or r > n:
        return 0
    vnum, cnum = _factorial_series(field, n)
    vr, cr = _factorial_series(field, r)
    vnr, cnr = _factorial_series(field, n - r)
    if vnum > vr + vnr:
        return 0
    assert vnum == vr + vnr, "binomial with negative valuation"
    p = field.characteristic
    return cnum * pow(cr * cnr % p, p - 2, p) % p


@cache
def _quantum_series_tables(field: PointedField, nmax: int):
    """Per-field tables: cumulative t-valuation and unit product of [1]..[k].

    Series live in F_p[t]/(t^B) with the cap B grown on demand until every
    [k] with k <= nmax shows a nonzero coefficient.
    """
    p = field.characteristic
    d0 = field.delta
    cap = 8
    while True:
        vals = [0] * (nmax + 1)
        units = [1] * (nmax + 1)
        ok = True
        # a, b are truncated series for [k-1], [k] as coefficient lists in t
        a = [0] * cap
        b = [0] * cap
        b[0] = 1
        for k in range(1, nmax + 1):
            lead = next((i for i, c in enumerate(b) if c), None)
            if lead is None:
                ok = False
                break
            vals[k] = vals[k - 1] + lead
            units[k] = units[k - 1] * b[lead] % p
            # next = (d0 + t) * b - a, truncated
            nxt = [0] * cap
            for i in range(cap):
                c = d0 * b[i] - a[i]
                if i:
                    c += b[i - 1]
                nxt[i] = c % p
            a, b = b, nxt
        if ok:
            return tuple(vals), tuple(units)
        cap *= 2


def _factorial_series(field: PointedField, k: int):
    step = 256
    nmax = ((k // step) + 1) * step
    vals, units = _quantum_series_tables(field, nmax)
    return vals[k], units[k]


def linkage_related(m: int, m_prime: int, ell) -> bool:
    """Same reflection orbit: m+1 = +-(m'+1) modulo 2*ell."""
    if ell is INFINITY:
        return m == m_prime
    return (m - m_prime) % (2 * ell) == 0 or (m + m_prime + 2) % (2 * ell) == 0
