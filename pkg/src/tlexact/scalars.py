"""Exact scalar arithmetic: dense integer polynomials in the loop parameter,
symmetric Laurent polynomials in a half-integer variable, and pointed prime
fields with their derived torsion.

Everything here is immutable and pure; all integer arithmetic is arbitrary
precision.
"""

from __future__ import annotations

import math
from functools import cache

INFINITY = math.inf


class NonExactDivision(ArithmeticError):
    """Polynomial division left a remainder where an exact quotient was required."""


class NotSymmetric(ValueError):
    """Laurent polynomial is not invariant under inverting the variable."""


class NonIntegralExponent(ValueError):
    """Laurent polynomial has a genuinely half-integral exponent."""


class DeltaPoly:
    """Dense polynomial over Z in the loop parameter.

    Canonical form: no trailing zero coefficients; the zero polynomial has an
    empty coefficient tuple.  Index i of ``coeffs`` is the degree-i
    coefficient.
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs=()):
        coeffs = tuple(coeffs)
        n = len(coeffs)
        while n and coeffs[n - 1] == 0:
            n -= 1
        self.coeffs = coeffs[:n]
        self._hash = hash(self.coeffs)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def const(c: int) -> "DeltaPoly":
        return DeltaPoly((c,))

    @staticmethod
    def monomial(c: int, degree: int) -> "DeltaPoly":
        return DeltaPoly((0,) * degree + (c,))

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def leading(self) -> int:
        if not self.coeffs:
            return 0
        return self.coeffs[-1]

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if isinstance(other, int):
            other = DeltaPoly.const(other)
        if not isinstance(other, DeltaPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = DeltaPoly.const(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return DeltaPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return DeltaPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, int):
            other = DeltaPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return ZERO
            return DeltaPoly(tuple(c * other for c in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZERO
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return DeltaPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def compose(self, inner: "DeltaPoly") -> "DeltaPoly":
        """Substitute ``inner`` for the variable (Horner)."""
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def evaluate(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def evaluate_mod(self, x: int, p: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % p
        return acc

    def reduce_mod(self, p: int) -> "DeltaPoly":
        return DeltaPoly(tuple(c % p for c in self.coeffs))

    # -- display -----------------------------------------------------------

    def __repr__(self):
        return f"DeltaPoly({self.coeffs!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                term = str(abs(c))
            else:
                mag = "" if abs(c) == 1 else str(abs(c)) + "*"
                var = "d" if i == 1 else f"d^{i}"
                term = mag + var
            if not parts:
                parts.append(("-" if c < 0 else "") + term)
            else:
                parts.append((" - " if c < 0 else " + ") + term)
        return "".join(parts)


ZERO = DeltaPoly()
ONE = DeltaPoly((1,))
DELTA = DeltaPoly((0, 1))


def poly_exact_div(num: DeltaPoly, den: DeltaPoly) -> DeltaPoly:
    """Exact quotient in Z[delta]: returns q with q*den == num.

    Raises NonExactDivision if den is zero, any coefficient step fails to
    divide over Z, or a nonzero remainder survives.  When the quotient exists
    over Z, plain long division finds it (each leading coefficient of the
    running remainder is divisible by the leading coefficient of ``den``).
    """
    if den.is_zero():
        raise NonExactDivision("division by the zero polynomial")
    if num.is_zero():
        return ZERO
    dn, dd = num.degree, den.degree
    if dn < dd:
        raise NonExactDivision(f"degree {dn} < {dd}")
    rem = list(num.coeffs)
    lead = den.coeffs[-1]
    q = [0] * (dn - dd + 1)
    for k in range(dn - dd, -1, -1):
        top = rem[k + dd]
        if top == 0:
            continue
        c, r = divmod(top, lead)
        if r:
            raise NonExactDivision("leading coefficient does not divide")
        q[k] = c
        for j, dc in enumerate(den.coeffs):
            rem[k + j] -= c * dc
    if any(rem[:dd]):
        raise NonExactDivision("nonzero remainder")
    return DeltaPoly(q)


class PointedField:
    """A prime field together with a distinguished loop parameter.

    ``characteristic`` 0 selects symbolic mode (delta is the indeterminate
    and the torsion is infinite).  In prime mode ``delta`` is a residue and
    ``ell`` -- the least k > 0 with quantum number [k] = 0 -- is found by
    scanning; the state pair ([k], [k+1]) over F_p is periodic with period at
    most p*p, so the scan is bounded by p*p + 1 and always succeeds.
    """

    __slots__ = ("characteristic", "delta", "_ell")

    def __init__(self, characteristic: int, delta: int = 0):
        if characteristic == 0:
            self.characteristic = 0
            self.delta = None
            self._ell = INFINITY
            return
        if characteristic < 2 or any(
            characteristic % q == 0 for q in range(2, int(characteristic**0.5) + 1)
        ):
            raise ValueError(f"characteristic {characteristic} is not prime")
        if not 0 <= delta < characteristic:
            raise ValueError("delta must be a residue in 0..p-1")
        self.characteristic = characteristic
        self.delta = delta
        self._ell = None

    @property
    def is_symbolic(self) -> bool:
        return self.characteristic == 0

    @property
    def ell(self):
        if self._ell is None:
            p, d = self.characteristic, self.delta
            a, b = 0, 1  # [0], [1]
            ell = None
            for k in range(1, p * p + 2):
                if b == 0:
                    ell = k
                    break
                a, b = b, (d * b - a) % p
            assert ell is not None, "quantum torsion scan exceeded its period bound"
            self._ell = ell
        return self._ell

    def quantum(self, k: int) -> int:
        """The quantum number [k] as an element of this field."""
        p, d = self.characteristic, self.delta
        neg = k < 0
        k = abs(k)
        a, b = 0, 1
        for _ in range(k):
            a, b = b, (d * b - a) % p
        return (-a) % p if neg else a

    def __eq__(self, other):
        return (
            isinstance(other, PointedField)
            and self.characteristic == other.characteristic
            and self.delta == other.delta
        )

    def __hash__(self):
        return hash((self.characteristic, self.delta))

    def __repr__(self):
        if self.is_symbolic:
            return "PointedField(symbolic)"
        return f"PointedField(p={self.characteristic}, delta={self.delta})"


def specialize(f: DeltaPoly, field: PointedField) -> int:
    """Canonical image of f in a prime-mode pointed field."""
    if field.is_symbolic:
        raise ValueError("specialize requires a prime-mode field")
    return f.evaluate_mod(field.delta, field.characteristic)


class HalfLaurent:
    """Sparse Laurent polynomial in half-integer powers of q.

    Keys of ``terms`` are twice the exponent, so key k stands for q^(k/2);
    no zero coefficients are stored.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for e, c in terms.items():
                if c:
                    clean[e] = c
        self.terms = clean

    @staticmethod
    def qpow(twice_exponent: int, coeff: int = 1) -> "HalfLaurent":
        return HalfLaurent({twice_exponent: coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, HalfLaurent) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return HalfLaurent(out)

    def __neg__(self):
        return HalfLaurent({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return HalfLaurent({e: c * other for e, c in self.terms.items()})
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return HalfLaurent(out)

    __rmul__ = __mul__

    def is_symmetric(self) -> bool:
        return all(self.terms.get(-e) == c for e, c in self.terms.items())

    def has_integral_exponents(self) -> bool:
        return all(e % 2 == 0 for e in self.terms)

    def __repr__(self):
        return f"HalfLaurent({self.terms!r})"


@cache
def _quantum_q_expansion(n: int) -> HalfLaurent:
    """[n] written in q: q^(n-1) + q^(n-3) + ... + q^(1-n), for n >= 0."""
    return HalfLaurent({2 * e: 1 for e in range(n - 1, -n, -2)})


def laurent_to_delta(f: HalfLaurent) -> DeltaPoly:
    """Base change from symmetric integral Laurent polynomials to Z[delta].

    Peels the top exponent d with coefficient c, subtracts c times the
    q-expansion of [d+1] and adds c*[d+1] in delta form; the top exponent
    strictly decreases, so this terminates.
    """
    if not f.has_integral_exponents():
        raise NonIntegralExponent("exponent is not an integer")
    if not f.is_symmetric():
        raise NotSymmetric("not invariant under q -> 1/q")
    # local import: quantum numbers live one layer up
    from .quantum import quantum_number

    work = f
    out = ZERO
    while not work.is_zero():
        d2 = max(work.terms)
        c = work.terms[d2]
        n = d2 // 2 + 1
        work = work - _quantum_q_expansion(n) * c
        out = out + quantum_number(n) * c
    return out
