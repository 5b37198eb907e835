"""Exact linear algebra kernels: elimination over prime fields (numpy,
vectorized), fraction-free Bareiss elimination over integer polynomials, and
a CRT + evaluation/interpolation determinant for larger polynomial matrices.

All routines are deterministic: pivots are chosen first-nonzero in canonical
order and the CRT prime list is fixed.
"""

from __future__ import annotations

from functools import cache
from math import lgamma, log2

import numpy as np

from .scalars import ONE, ZERO, DeltaPoly, poly_exact_div


# -- prime field elimination -------------------------------------------------


def _as_mod_array(rows, p: int) -> np.ndarray:
    a = np.array(rows, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    return a % p


def rank_mod(rows, p: int) -> int:
    """Rank over F_p by forward elimination, pivoting on the first nonzero
    entry in row order."""
    a = _as_mod_array(rows, p)
    nrows, ncols = a.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = a[r] * inv % p
        col = a[r + 1 :, c]
        if col.any():
            a[r + 1 :] = (a[r + 1 :] - np.outer(col, a[r])) % p
        r += 1
    return r


def nullspace_mod(rows, p: int) -> list[tuple[int, ...]]:
    """Right-nullspace basis over F_p from the reduced row echelon form.

    One basis vector per free column, in ascending column order, with a 1 in
    the free position; coordinates are residues 0..p-1.
    """
    a = _as_mod_array(rows, p)
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = a[r] * inv % p
        col = np.concatenate([a[:r, c], [0], a[r + 1 :, c]])
        if col.any():
            a[:] = (a - np.outer(col, a[r])) % p
        pivots.append(c)
        r += 1
    piv_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in piv_set:
            continue
        v = [0] * ncols
        v[free] = 1
        for i, c in enumerate(pivots):
            v[c] = int(-a[i, free]) % p
        basis.append(tuple(v))
    return basis


def det_mod(a: np.ndarray, p: int) -> int:
    a = a.copy() % p
    n = a.shape[0]
    det = 1
    for c in range(n):
        nz = np.nonzero(a[c:, c])[0]
        if nz.size == 0:
            return 0
        piv = c + int(nz[0])
        if piv != c:
            a[[c, piv]] = a[[piv, c]]
            det = -det % p
        v = int(a[c, c])
        det = det * v % p
        inv = pow(v, -1, p)
        a[c] = a[c] * inv % p
        col = a[c + 1 :, c]
        if col.any():
            a[c + 1 :] = (a[c + 1 :] - np.outer(col, a[c])) % p
    return det


# -- fraction-free elimination over Z[delta] ---------------------------------


def bareiss_det_polys(rows: list[list[DeltaPoly]]) -> DeltaPoly:
    """Determinant of a square DeltaPoly matrix by one-step Bareiss
    elimination; every division is exact."""
    n = len(rows)
    if n == 0:
        return ONE
    m = [list(r) for r in rows]
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if m[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not m[i][k].is_zero()), None)
            if swap is None:
                return ZERO
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            row_i = m[i]
            head = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = poly_exact_div(pivot * row_i[j] - head * m[k][j], prev)
            row_i[k] = ZERO
        prev = pivot
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


def bareiss_rank_polys(rows: list[list[DeltaPoly]]) -> int:
    """Exact rank of a DeltaPoly matrix (rank over the fraction field) by
    fraction-free elimination with full pivoting."""
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    prev = ONE
    rank = 0
    for k in range(min(nrows, ncols)):
        piv = next(
            ((i, j) for i in range(k, nrows) for j in range(k, ncols) if not m[i][j].is_zero()),
            None,
        )
        if piv is None:
            break
        pi, pj = piv
        if pi != k:
            m[k], m[pi] = m[pi], m[k]
        if pj != k:
            for row in m:
                row[k], row[pj] = row[pj], row[k]
        pivot = m[k][k]
        for i in range(k + 1, nrows):
            row_i = m[i]
            head = row_i[k]
            for j in range(k + 1, ncols):
                row_i[j] = poly_exact_div(pivot * row_i[j] - head * m[k][j], prev)
            row_i[k] = ZERO
        prev = pivot
        rank += 1
    return rank


# -- CRT determinant for monomial matrices -----------------------------------


@cache
def _crt_primes(count: int) -> tuple[int, ...]:
    """The first ``count`` primes below 2**25, descending; 25-bit moduli keep
    all numpy intermediates inside int64."""
    out = []
    n = (1 << 25) - 1
    while len(out) < count:
        if n % 2:
            k, is_p = 3, True
            while k * k <= n:
                if n % k == 0:
                    is_p = False
                    break
                k += 2
            if is_p:
                out.append(n)
        n -= 1
    return tuple(out)


def _interpolate_mod(values: list[int], p: int) -> list[int]:
    """Coefficients of the unique polynomial of degree <= D through the
    points (0, v0), ..., (D, vD) over F_p (Newton divided differences)."""
    d = len(values) - 1
    dd = [v % p for v in values]
    for j in range(1, d + 1):
        inv_j = pow(j, -1, p)
        for i in range(d, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) * inv_j % p
    coeffs = [0] * (d + 1)
    cur = [dd[d]]
    for i in range(d - 1, -1, -1):
        nxt = [0] * (len(cur) + 1)
        for k, c in enumerate(cur):
            nxt[k + 1] = (nxt[k + 1] + c) % p
            nxt[k] = (nxt[k] - c * i) % p
        nxt[0] = (nxt[0] + dd[i]) % p
        cur = nxt
    for k, c in enumerate(cur):
        coeffs[k] = c
    return coeffs


def det_monomial_crt(exponents: list[list[int | None]]) -> DeltaPoly:
    """Symbolic determinant of a matrix whose (i, j) entry is delta^e for
    e = exponents[i][j], or zero when the exponent is None.

    Evaluates the determinant at integer points modulo a fixed list of
    25-bit primes, interpolates per prime, and reassembles coefficients by
    CRT.  The coefficient 1-norm of such a determinant is at most dim!, which
    fixes the number of primes needed.
    """
    dim = len(exponents)
    if dim == 0:
        return ONE
    degree_bound = 0
    for row in exponents:
        es = [e for e in row if e is not None]
        if not es:
            return ZERO
        degree_bound += max(es)
    # log2(dim!) + slack, distributed over ~24.9-bit primes
    bits = lgamma(dim + 1) / 0.6931471805599453 + 64
    nprimes = max(2, int(bits / 24.9) + 1)
    primes = _crt_primes(nprimes)
    max_e = max(max((e for e in row if e is not None), default=0) for row in exponents)

    residues: list[list[int]] = []
    for p in primes:
        assert degree_bound < p
        values = []
        for t in range(degree_bound + 1):
            tpow = [1] * (max_e + 1)
            for e in range(1, max_e + 1):
                tpow[e] = tpow[e - 1] * t % p
            a = np.array(
                [[0 if e is None else tpow[e] for e in row] for row in exponents],
                dtype=np.int64,
            )
            values.append(det_mod(a, p))
        residues.append(_interpolate_mod(values, p))

    coeffs = []
    modulus_total = 1
    for p in primes:
        modulus_total *= p
    for k in range(degree_bound + 1):
        x, mod = 0, 1
        for p, res in zip(primes, residues):
            r = res[k]
            # solve x' = x (mod m), x' = r (mod p)
            t = (r - x) * pow(mod % p, -1, p) % p
            x += mod * t
            mod *= p
        if x > modulus_total // 2:
            x -= modulus_total
        coeffs.append(x)
    return DeltaPoly(coeffs)
