"""Exact linear algebra over Z/p^n.

Howell normal form is the workhorse: it supports row-span membership and
kernel computations over the chain ring Z/p^n.  Smith elementary divisors
are provided for shape extraction only.

Matrices are lists of rows; rows are lists of ints reduced mod p^n.
"""

from __future__ import annotations

from .errors import Inconsistent, InputError


def _val(x, p, n):
    """p-adic valuation of x mod p^n (n for x == 0)."""
    if x == 0:
        return n
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def _row_scale(row, c, q):
    return [(a * c) % q for a in row]


def _row_sub(r, s, c, q):
    return [(a - c * b) % q for a, b in zip(r, s)]


class ResidueMatrix:
    """Thin wrapper recording the modulus exponent with the entries."""

    __slots__ = ("p", "n", "rows", "cols", "entries")

    def __init__(self, p, n, entries):
        self.p = p
        self.n = n
        q = p ** n
        self.entries = [[x % q for x in row] for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0
        if any(len(r) != self.cols for r in self.entries):
            raise InputError("ragged matrix")

    def __eq__(self, other):
        return (isinstance(other, ResidueMatrix)
                and (self.p, self.n, self.entries)
                == (other.p, other.n, other.entries))

    def __repr__(self):
        return f"ResidueMatrix(p={self.p}, n={self.n}, {self.entries})"


def howell_form(A, p=None, n=None, transform=False):
    """Howell normal form of the row span.

    Accepts a ResidueMatrix or a plain list of rows (then p, n required).
    Returns (H, T) with T a list of coefficient rows (over the input rows)
    such that each H row equals T row times A; T is None unless requested.
    """
    if isinstance(A, ResidueMatrix):
        rows, p, n = A.entries, A.p, A.n
        wrap = True
    else:
        rows, wrap = A, False
        if p is None or n is None:
            raise InputError("p and n required for raw matrices")
    q = p ** n
    ncols = len(rows[0]) if rows else 0
    nrows = len(rows)
    work = []
    for i, r in enumerate(rows):
        t = [0] * nrows
        t[i] = 1
        work.append(([x % q for x in r], t))

    pivots = []  # (row, transform, pivotcol, valuation)
    for col in range(ncols):
        cands = [w for w in work if w[0][col] != 0]
        if not cands:
            continue
        piv = min(cands, key=lambda w: _val(w[0][col], p, n))
        work.remove(piv)
        prow, ptr = piv
        v = _val(prow[col], p, n)
        unit = prow[col] // (p ** v)
        iu = pow(unit, -1, q)
        prow = _row_scale(prow, iu, q)
        ptr = _row_scale(ptr, iu, q)
        pv = p ** v
        for idx, (r, t) in enumerate(work):
            if r[col]:
                c = r[col] // pv
                work[idx] = (_row_sub(r, prow, c, q), _row_sub(t, ptr, c, q))
        pivots.append((prow, ptr, col, v))
        if v > 0:
            c = p ** (n - v)
            work.append((_row_scale(prow, c, q), _row_scale(ptr, c, q)))
        work = [w for w in work if any(w[0])]

    # reduce entries above each pivot for canonicity
    for j in range(len(pivots)):
        prow, ptr, col, v = pivots[j]
        pv = p ** v
        for i in range(j):
            r, t, c0, v0 = pivots[i]
            if r[col] >= pv:
                c = r[col] // pv
                pivots[i] = (_row_sub(r, prow, c, q),
                             _row_sub(t, ptr, c, q), c0, v0)

    H = [pv[0] for pv in pivots]
    T = [pv[1] for pv in pivots]
    if wrap:
        H = ResidueMatrix(p, n, H) if H else ResidueMatrix(p, n, [[0] * ncols] if ncols else [])
    return (H, T if transform else None)


def _howell_rows(rows, p, n):
    H, _ = howell_form(rows, p, n)
    return H


def pivot_info(H, p, n):
    """(column, valuation) per Howell row."""
    out = []
    for r in H:
        col = next(i for i, x in enumerate(r) if x)
        out.append((col, _val(r[col], p, n)))
    return out


def reduce_vector(H, vec, p, n, coeffs=False):
    """Canonical remainder of vec against a Howell basis H.

    With coeffs=True also returns the combination used, so that
    vec = sum(c_i * H_i) + remainder.
    """
    q = p ** n
    vec = [x % q for x in vec]
    used = [0] * len(H)
    for i, r in enumerate(H):
        col = next(j for j, x in enumerate(r) if x)
        pv = r[col]
        if vec[col]:
            c = vec[col] // pv
            if c:
                vec = _row_sub(vec, r, c, q)
                used[i] = c
    return (vec, used) if coeffs else vec


def in_span(H, vec, p, n):
    return not any(reduce_vector(H, vec, p, n))


def span_length(H, p, n):
    """Length over Z/p of the row span (sum of n - v over pivots)."""
    return sum(n - v for _, v in pivot_info(H, p, n))


def spans_equal(H1, H2, p, n):
    return (all(in_span(H2, r, p, n) for r in H1)
            and all(in_span(H1, r, p, n) for r in H2))


def kernel_solve(A, b=None, p=None, n=None):
    """Solve A x = 0 (and optionally A x = b) over Z/p^n.

    Returns (kernel_generators, particular_solution); the solution part is
    None when b is None.  Raises Inconsistent when b is not attainable.
    x is a column vector of length cols(A).
    """
    if isinstance(A, ResidueMatrix):
        entries, p, n = A.entries, A.p, A.n
    else:
        entries = A
        if p is None or n is None:
            raise InputError("p and n required for raw matrices")
    q = p ** n
    rows = len(entries)
    cols = len(entries[0]) if entries else 0
    if cols == 0:
        if b is not None and any(x % q for x in b):
            raise Inconsistent("empty system with nonzero right-hand side")
        return [], ([] if b is not None else None)
    # left kernel of M = A^T: {x : x M = 0}
    M = [[entries[i][j] for i in range(rows)] for j in range(cols)]
    work = []
    for i, r in enumerate(M):
        t = [0] * cols
        t[i] = 1
        work.append(([x % q for x in r], t))
    pivots = []
    kernel = []
    for col in range(rows):
        cands = [w for w in work if w[0][col] != 0]
        if not cands:
            continue
        piv = min(cands, key=lambda w: _val(w[0][col], p, n))
        work.remove(piv)
        prow, ptr = piv
        v = _val(prow[col], p, n)
        unit = prow[col] // (p ** v)
        iu = pow(unit, -1, q)
        prow, ptr = _row_scale(prow, iu, q), _row_scale(ptr, iu, q)
        pv = p ** v
        for idx, (r, t) in enumerate(work):
            if r[col]:
                c = r[col] // pv
                work[idx] = (_row_sub(r, prow, c, q), _row_sub(t, ptr, c, q))
        pivots.append((prow, ptr, col, v))
        if v > 0:
            c = p ** (n - v)
            work.append((_row_scale(prow, c, q), _row_scale(ptr, c, q)))
        new_work = []
        for r, t in work:
            if any(r):
                new_work.append((r, t))
            elif any(t):
                kernel.append(t)
        work = new_work
    for r, t in work:
        if not any(r) and any(t):
            kernel.append(t)
    kernel = _howell_rows(kernel, p, n) if kernel else []

    sol = None
    if b is not None:
        bvec = [x % q for x in b]
        rem = bvec
        used = [0] * len(pivots)
        for i, (prow, ptr, col, v) in enumerate(pivots):
            pv = prow[col]
            if rem[col]:
                c = rem[col] // pv
                rem = _row_sub(rem, prow, c, q)
                used[i] = c
        if any(rem):
            raise Inconsistent("no solution")
        sol = [0] * cols
        for c, (_, ptr, _, _) in zip(used, pivots):
            if c:
                sol = [(s + c * t) % q for s, t in zip(sol, ptr)]
    return kernel, sol


def smith_elementary_divisors(A, p=None, n=None):
    """Valuations v with elementary divisors p^v (v < n), sorted ascending."""
    if isinstance(A, ResidueMatrix):
        entries, p, n = [list(r) for r in A.entries], A.p, A.n
    else:
        entries = [list(r) for r in A]
    q = p ** n
    M = [[x % q for x in row] for row in entries]
    divisors = []
    r0 = 0
    while True:
        best = None
        for i in range(r0, len(M)):
            for j in range(r0, len(M[0]) if M else 0):
                if M[i][j]:
                    v = _val(M[i][j], p, n)
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            break
        v, bi, bj = best
        M[r0], M[bi] = M[bi], M[r0]
        for row in M:
            row[r0], row[bj] = row[bj], row[r0]
        iu = pow(M[r0][r0] // (p ** v), -1, q)
        M[r0] = _row_scale(M[r0], iu, q)
        pv = p ** v
        for i in range(r0 + 1, len(M)):
            if M[i][r0]:
                c = M[i][r0] // pv
                M[i] = _row_sub(M[i], M[r0], c, q)
        for j in range(r0 + 1, len(M[0])):
            if M[r0][j]:
                c = M[r0][j] // pv
                for i in range(len(M)):
                    M[i][j] = (M[i][j] - c * M[i][r0]) % q
        divisors.append(v)
        r0 += 1
        if r0 >= len(M) or r0 >= len(M[0]):
            break
    return sorted(divisors)
