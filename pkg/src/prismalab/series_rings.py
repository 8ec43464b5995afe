"""Truncated power series over Witt coefficients and the divided-power ring.

SeriesElem models W_n[[u]] at finite u-precision N; elements flagged exact
behave as honest polynomials.  EisensteinPoly carries exact integer
coefficient lifts so that divided powers can be computed without p-adic
precision loss.  DpRing is the divided-power ring at u-degree bound D and
internal p-precision n_int, with coordinates on the basis u^i/e(i)!.
"""

from __future__ import annotations

import math
import os

from .errors import (
    InputError, InsufficientPrecision, NotDivisible, NotEisenstein,
    NotInFiltration, PrecisionLoss,
)
from .linalg_residue import howell_form, in_span, kernel_solve
from .witt_base import WittElem, WittRing

# ---------------------------------------------------------------------------
# truncated series over W_n(F_{p^m})
# ---------------------------------------------------------------------------


class SeriesElem:
    """Element of W_n[[u]] known modulo u^N (N=None means exact polynomial)."""

    __slots__ = ("ring", "coeffs", "N", "exact")

    def __init__(self, ring, coeffs, N=None, exact=None):
        self.ring = ring
        cs = [c if isinstance(c, WittElem) else ring.elem([c]) for c in coeffs]
        if exact is None:
            exact = N is None
        if N is None and not exact:
            raise InputError("unbounded elements must be exact")
        if N is not None and len(cs) > N:
            if exact and any(not c.is_zero() for c in cs[N:]):
                raise PrecisionLoss(
                    f"exact element of degree {len(cs) - 1} exceeds bound {N}")
            cs = cs[:N]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)
        self.N = N
        self.exact = exact

    # -- helpers ---------------------------------------------------------

    @classmethod
    def from_ints(cls, ring, int_coeffs, N=None, exact=None):
        return cls(ring, [ring.elem([c]) for c in int_coeffs], N, exact)

    @classmethod
    def u_pow(cls, ring, k, N=None):
        return cls.from_ints(ring, [0] * k + [1], N)

    def coeff(self, i):
        return self.coeffs[i] if i < len(self.coeffs) else self.ring.zero()

    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def truncate(self, N):
        return SeriesElem(self.ring, self.coeffs[:N], N, exact=False)

    def with_precision(self, N):
        """Declare precision N (allowed only for exact elements)."""
        if not self.exact:
            raise InputError("cannot re-declare precision of inexact element")
        return SeriesElem(self.ring, self.coeffs, N, exact=True)

    def _join(self, other):
        if self.ring != other.ring:
            raise InputError("mixed coefficient rings")
        ns = [x for x in (self.N, other.N) if x is not None]
        return (min(ns) if ns else None), (self.exact and other.exact)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        N, exact = self._join(other)
        la, lb = len(self.coeffs), len(other.coeffs)
        cs = [self.coeff(i) + other.coeff(i) for i in range(max(la, lb))]
        return SeriesElem(self.ring, cs, N, exact)

    def __sub__(self, other):
        N, exact = self._join(other)
        la, lb = len(self.coeffs), len(other.coeffs)
        cs = [self.coeff(i) - other.coeff(i) for i in range(max(la, lb))]
        return SeriesElem(self.ring, cs, N, exact)

    def __neg__(self):
        return SeriesElem(self.ring, [-c for c in self.coeffs], self.N, self.exact)

    def __mul__(self, other):
        if isinstance(other, (int, WittElem)):
            return self.scale(other)
        N, exact = self._join(other)
        if self.is_zero() or other.is_zero():
            return SeriesElem(self.ring, [], N, exact)
        deg = self.degree() + other.degree()
        if exact and N is not None and deg >= N:
            raise PrecisionLoss(
                f"exact product of degree {deg} exceeds bound {N}")
        top = deg if N is None else min(deg, N - 1)
        out = [self.ring.zero() for _ in range(top + 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if i + j > top:
                    break
                out[i + j] = out[i + j] + a * b
        return SeriesElem(self.ring, out, N, exact)

    __rmul__ = __mul__

    def scale(self, c):
        if isinstance(c, int):
            c = self.ring.elem([c])
        return SeriesElem(self.ring, [a * c for a in self.coeffs],
                          self.N, self.exact)

    def __pow__(self, k):
        acc = SeriesElem(self.ring, [self.ring.one()], self.N, self.exact)
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base if k > 1 else base
            k >>= 1
        return acc

    def __eq__(self, other):
        return (isinstance(other, SeriesElem)
                and self.ring == other.ring and self.N == other.N
                and self.exact == other.exact and self.coeffs == other.coeffs)

    def __repr__(self):
        terms = [f"{list(c.coeffs)}*u^{i}"
                 for i, c in enumerate(self.coeffs) if not c.is_zero()]
        tail = "" if self.N is None else f" + O(u^{self.N})"
        return ("0" if not terms else " + ".join(terms)) + tail


def phi_apply(x: SeriesElem) -> SeriesElem:
    """Frobenius on series: sigma on coefficients, u -> u^p."""
    r = x.ring
    p = r.p
    N = None if x.N is None else p * x.N
    out = [r.zero() for _ in range(p * len(x.coeffs))]
    for i, c in enumerate(x.coeffs):
        out[p * i] = r.sigma(c)
    return SeriesElem(r, out, N, x.exact)


# ---------------------------------------------------------------------------
# integer polynomial helpers (exact lifts, low degree first)
# ---------------------------------------------------------------------------


def int_poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def int_poly_pow(a, k):
    acc = [1]
    base = list(a)
    while k:
        if k & 1:
            acc = int_poly_mul(acc, base)
        base = int_poly_mul(base, base)
        k >>= 1
    return acc


def int_poly_divmod(a, b):
    """Exact division over Z by a monic polynomial b."""
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    db = len(b) - 1
    q = [0] * max(1, len(a) - db)
    while len(a) - 1 >= db and a:
        c = a[-1]
        d = len(a) - 1 - db
        q[d] = c
        for i in range(db + 1):
            a[d + i] -= c * b[i]
        while a and a[-1] == 0:
            a.pop()
    return q, a


def binomial_power_minus_one(k):
    """(u+1)^k - 1 as an integer polynomial."""
    return [math.comb(k, i) if i else 0 for i in range(k + 1)]


# ---------------------------------------------------------------------------
# Eisenstein polynomials
# ---------------------------------------------------------------------------


class EisensteinPoly:
    """Monic degree-e polynomial, E(0) = a0 * p with a0 a unit, lower
    coefficients divisible by p; exact integer coefficient lifts."""

    __slots__ = ("p", "int_coeffs", "e", "a0")

    def __init__(self, p, int_coeffs):
        cs = list(int_coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        if len(cs) < 2 or cs[-1] != 1:
            raise NotEisenstein("must be monic of degree >= 1")
        e = len(cs) - 1
        if cs[0] % p != 0 or (cs[0] // p) % p == 0:
            raise NotEisenstein("constant term must be p times a unit")
        if any(c % p for c in cs[1:e]):
            raise NotEisenstein("lower coefficients must be divisible by p")
        self.p = p
        self.int_coeffs = tuple(cs)
        self.e = e
        self.a0 = cs[0] // p

    def series(self, ring, N=None):
        if ring.p != self.p:
            raise InputError("prime mismatch")
        return SeriesElem.from_ints(ring, self.int_coeffs, N, exact=True)

    def __repr__(self):
        return f"EisensteinPoly(p={self.p}, e={self.e}, {list(self.int_coeffs)})"


def cyclotomic_q(p, level):
    """(u+1)^{p^level} - 1 as an integer polynomial."""
    return binomial_power_minus_one(p ** level)


def eisenstein_make(p, kind, arg):
    """kind 'cyclotomic' with arg = level n >= 1, or 'explicit' with
    arg = integer coefficient list."""
    if kind == "cyclotomic":
        level = arg
        if level < 1:
            raise InputError("cyclotomic level must be >= 1")
        num = cyclotomic_q(p, level)
        den = cyclotomic_q(p, level - 1) if level > 1 else [0, 1]
        q, rem = int_poly_divmod(num, den)
        if rem:
            raise InputError("cyclotomic division not exact")
        return EisensteinPoly(p, q)
    if kind == "explicit":
        return EisensteinPoly(p, arg)
    raise InputError(f"unknown Eisenstein kind {kind!r}")


# ---------------------------------------------------------------------------
# exact division
# ---------------------------------------------------------------------------


def divide_exact(x, by):
    """Exact division of a SeriesElem or DpElem.

    `by` is an int p^i (division by a p-power, dropping i digits of
    p-precision) or an EisensteinPoly / monic exact SeriesElem.
    """
    if isinstance(by, int):
        return _divide_p_power(x, by)
    if isinstance(by, EisensteinPoly):
        by = by.series(x.ring)
    if isinstance(x, DpElem):
        raise InputError("polynomial division is not defined on DpElem")
    if not (by.exact and not by.coeffs[-1].is_zero()):
        raise InputError("divisor must be an exact polynomial")
    if not by.coeffs[-1].is_unit():
        raise InputError("divisor must have unit leading coefficient")
    if not x.exact:
        raise InsufficientPrecision("exact division requires an exact dividend")
    lead_inv = by.coeffs[-1].inv()
    rem = list(x.coeffs)
    db = by.degree()
    quot = [x.ring.zero()] * max(1, len(rem) - db)
    while len(rem) - 1 >= db and rem:
        c = rem[-1] * lead_inv
        d = len(rem) - 1 - db
        quot[d] = c
        for i in range(db + 1):
            rem[d + i] = rem[d + i] - c * by.coeffs[i]
        while rem and rem[-1].is_zero():
            rem.pop()
    if rem:
        raise NotDivisible("nonzero remainder")
    return SeriesElem(x.ring, quot, x.N, exact=True)


def _divide_p_power(x, pk):
    ring = x.ring if isinstance(x, SeriesElem) else x.ring.ring
    p = ring.p
    i = 0
    while pk > 1:
        if pk % p:
            raise InputError("integer divisor must be a power of p")
        pk //= p
        i += 1
    if i == 0:
        return x
    if isinstance(x, DpElem):
        return x.divide_p(i)
    if ring.n - i < 1:
        raise InsufficientPrecision(
            f"cannot drop {i} digits from precision {ring.n}")
    new_ring = ring.lower_precision(i)
    pi = p ** i
    out = []
    for c in x.coeffs:
        if any(a % pi for a in c.coeffs):
            raise NotDivisible("coefficient not divisible by p^i")
        out.append(new_ring.elem([a // pi for a in c.coeffs]))
    return SeriesElem(new_ring, out, x.N, x.exact)


# ---------------------------------------------------------------------------
# divided-power ring
# ---------------------------------------------------------------------------


def _rat_mod(num, den, p, q):
    """num/den mod q = p^k for a p-integral rational; None if not p-integral."""
    if num == 0:
        return 0
    a = 0
    while num % p == 0:
        num //= p
        a += 1
    b = 0
    while den % p == 0:
        den //= p
        b += 1
    if a < b:
        return None
    return (p ** (a - b)) * num * pow(den, -1, q) % q


def precision_slack():
    return int(os.environ.get("PRISMALAB_PRECISION_SLACK", "0"))


class DpRing:
    """Divided-power ring at u-degree bound D and p-precision n_int = n + h
    (+ global slack), coordinates on the basis b_i = u^i / e(i)!."""

    def __init__(self, eis: EisensteinPoly, n, m=1, f=None, D=None, h=0):
        self.eis = eis
        self.p = eis.p
        self.e = eis.e
        self.n_user = n
        self.h = h
        self.n_int = n + h + precision_slack()
        self.q = self.p ** self.n_int
        self.ring = WittRing(self.p, self.n_int, m, f)
        self.m = m
        self.D = D if D is not None else 2 * self.p * self.e
        if self.D <= self.p * self.e:
            raise InputError("degree bound D must exceed p*e")
        self._struct = {}
        self._gamma = {}
        self._fil = {}
        self._c1 = None
        self._c1_inv = None
        self.dim = self.D * m

    # -- combinatorics ----------------------------------------------------

    def ei(self, i):
        return i // self.e

    def struct_const(self, i, j):
        """Integer e(i+j)! / (e(i)! e(j)!)."""
        key = (i, j) if i <= j else (j, i)
        c = self._struct.get(key)
        if c is None:
            num = math.factorial(self.ei(i + j))
            den = math.factorial(self.ei(i)) * math.factorial(self.ei(j))
            if num % den:
                raise InputError("non-integral structure constant")
            c = (num // den) % self.q
            self._struct[key] = c
        return c

    # -- elements ---------------------------------------------------------

    def elem(self, coords, prec=None):
        cs = [c if isinstance(c, WittElem) else self.ring.elem([c])
              for c in coords]
        cs += [self.ring.zero()] * (self.D - len(cs))
        return DpElem(self, tuple(cs[:self.D]), prec or self.n_int)

    def zero(self):
        return self.elem([])

    def one(self):
        return self.elem([1])

    def from_int_poly(self, int_coeffs, prec=None):
        """Image of an integer polynomial in u (u^i = e(i)! b_i)."""
        coords = []
        for i, a in enumerate(int_coeffs):
            if i >= self.D:
                break
            coords.append((a * math.factorial(self.ei(i))) % self.q)
        return self.elem(coords, prec)

    def from_series(self, s: SeriesElem):
        """Image of a truncated series; p-precision of the result is the
        precision of the series coefficients."""
        if s.ring.p != self.p or s.ring.m != self.m:
            raise InputError("incompatible series ring")
        prec = min(s.ring.n, self.n_int)
        coords = []
        for i, c in enumerate(s.coeffs):
            if i >= self.D:
                if not s.exact:
                    break
                # exact high terms embed as zero only when e(i)! kills them
                break
            fac = math.factorial(self.ei(i)) % self.q
            coords.append(self.ring.elem([a * fac for a in c.coeffs]))
        return self.elem(coords, prec)

    def gamma(self, j):
        """Coordinates of the divided power gamma_j(E) = E^j / j!."""
        if j not in self._gamma:
            if j == 0:
                self._gamma[j] = self.one()
            else:
                powj = int_poly_pow(list(self.eis.int_coeffs), j)
                fj = math.factorial(j)
                coords = []
                for i in range(min(len(powj), self.D)):
                    c = _rat_mod(powj[i] * math.factorial(self.ei(i)), fj,
                                 self.p, self.q)
                    if c is None:
                        raise InputError("divided power is not p-integral")
                    coords.append(c)
                self._gamma[j] = self.elem(coords)
        return self._gamma[j]

    def c1(self):
        """phi(E)/p, a unit."""
        if self._c1 is None:
            phiE = [0] * (self.p * self.e + 1)
            for i, a in enumerate(self.eis.int_coeffs):
                phiE[self.p * i] = a
            coords = []
            for i in range(min(len(phiE), self.D)):
                c = _rat_mod(phiE[i] * math.factorial(self.ei(i)), self.p,
                             self.p, self.q)
                if c is None:
                    raise InputError("phi(E) is not divisible by p")
                coords.append(c)
            self._c1 = self.elem(coords)
        return self._c1

    def c1_inv(self):
        if self._c1_inv is None:
            self._c1_inv = self.c1().inv()
        return self._c1_inv

    # -- vector expansion over Z/p^{n_int} ---------------------------------

    def to_vec(self, x):
        out = []
        for c in x.coords:
            out.extend(c.coeffs)
        return out

    def from_vec(self, vec, prec=None):
        m = self.m
        coords = [self.ring.elem(list(vec[i * m:(i + 1) * m]))
                  for i in range(self.D)]
        return DpElem(self, tuple(coords), prec or self.n_int)

    def mult_matrix(self, y):
        """Matrix of multiplication by y on the Z/p^{n_int}-basis
        {x^s b_t}; columns indexed like to_vec."""
        cols = []
        xgen = self.ring.gen()
        for t in range(self.D):
            base = self.basis_elem(t)
            for s in range(self.m):
                prod = y * base.scale_w(xgen ** s)
                cols.append(self.to_vec(prod))
        # transpose to row-major matrix acting on column vectors
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def basis_elem(self, t):
        coords = [0] * self.D
        coords[t] = 1
        return self.elem(coords)

    # -- filtration ---------------------------------------------------------

    def fil_span(self, r):
        """Howell basis of Fil^r in the truncated model (span stabilized
        over increasing divided-power generators)."""
        if r not in self._fil:
            if r == 0:
                rows = []
                for t in range(self.D):
                    for s in range(self.m):
                        v = [0] * self.dim
                        v[t * self.m + s] = 1
                        rows.append(v)
                H, _ = howell_form(rows, self.p, self.n_int)
                self._fil[r] = H
            else:
                if r > self.p:
                    raise InputError("filtration levels above p are not modelled")
                # for r <= p the divided-power ideal is generated by gamma_r
                # together with the z_i = gamma_{p^i}(E); only products whose
                # untruncated degree stays below D are admitted, so every row
                # is the image of a genuine degree-bounded ideal element
                rows = self._ideal_rows(self.gamma(r), r * self.e)
                i = 1
                while self.p ** i * self.e < self.D:
                    rows += self._ideal_rows(self.gamma(self.p ** i),
                                             self.p ** i * self.e)
                    i += 1
                H, _ = howell_form(rows, self.p, self.n_int)
                self._fil[r] = H
        return self._fil[r]

    def _ideal_rows(self, g, gdeg=0):
        """Vectors spanning the S-multiples of g (via all basis products).

        Only multipliers b_t with t + gdeg < D are used, so no product is
        silently truncated.
        """
        rows = []
        xgen = self.ring.gen()
        for t in range(self.D - gdeg):
            base = self.basis_elem(t) * g
            if all(c.is_zero() for c in base.coords):
                continue
            for s in range(self.m):
                rows.append(self.to_vec(base.scale_w(xgen ** s)))
        return rows

    def fil_contains(self, x, r):
        """Membership of x in Fil^r at the precision of x."""
        H = self.fil_span(r)
        rows = list(H)
        if x.prec < self.n_int:
            pk = self.p ** x.prec
            for i in range(self.dim):
                v = [0] * self.dim
                v[i] = pk
                rows.append(v)
            rows, _ = howell_form(rows, self.p, self.n_int)
        return in_span(rows, self.to_vec(x), self.p, self.n_int)

    def fil_lift(self, x, r):
        """An element of Fil^r (exact at n_int) congruent to x mod p^{x.prec}."""
        H = list(self.fil_span(r))
        ncols = len(H)
        pk = self.p ** x.prec
        aug = [list(row) for row in H]
        for i in range(self.dim):
            v = [0] * self.dim
            v[i] = pk
            aug.append(v)
        A = [[aug[j][i] for j in range(len(aug))] for i in range(self.dim)]
        _, sol = kernel_solve(A, self.to_vec(x), self.p, self.n_int)
        vec = [0] * self.dim
        for c, row in zip(sol[:ncols], H):
            if c:
                for i, a in enumerate(row):
                    vec[i] = (vec[i] + c * a) % self.q
        return self.from_vec(vec)

    # -- Frobenius ----------------------------------------------------------

    def phi(self, x):
        """phi(b_i) = (e(pi)!/e(i)!) b_{pi}, sigma on coordinates."""
        coords = [self.ring.zero() for _ in range(self.D)]
        for i, c in enumerate(x.coords):
            if c.is_zero():
                continue
            pi = self.p * i
            if pi >= self.D:
                continue
            fac = (math.factorial(self.ei(pi))
                   // math.factorial(self.ei(i))) % self.q
            coords[pi] = self.ring.sigma(c).scale(fac)
        return DpElem(self, tuple(coords), x.prec)

    def nabla(self, x):
        """d/du on the divided-power basis."""
        coords = [self.ring.zero() for _ in range(self.D)]
        for i, c in enumerate(x.coords):
            if i == 0 or c.is_zero():
                continue
            d = i // self.ei(i) if i % self.e == 0 else i
            coords[i - 1] = c.scale(d % self.q)
        return DpElem(self, tuple(coords), x.prec)

    def i_plus_reduce(self, x):
        """Image in S / I_+ = W (the constant coordinate)."""
        return x.coords[0]

    def __repr__(self):
        return (f"DpRing(p={self.p}, e={self.e}, n={self.n_user}, "
                f"h={self.h}, D={self.D}, m={self.m})")


class DpElem:
    __slots__ = ("ring", "coords", "prec")

    def __init__(self, ring, coords, prec):
        self.ring = ring
        self.coords = coords
        self.prec = prec

    def __add__(self, other):
        return DpElem(self.ring,
                      tuple(a + b for a, b in zip(self.coords, other.coords)),
                      min(self.prec, other.prec))

    def __sub__(self, other):
        return DpElem(self.ring,
                      tuple(a - b for a, b in zip(self.coords, other.coords)),
                      min(self.prec, other.prec))

    def __neg__(self):
        return DpElem(self.ring, tuple(-a for a in self.coords), self.prec)

    def __mul__(self, other):
        if isinstance(other, int):
            return DpElem(self.ring,
                          tuple(c.scale(other) for c in self.coords), self.prec)
        R = self.ring
        out = [R.ring.zero() for _ in range(R.D)]
        for i, a in enumerate(self.coords):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coords):
                if i + j >= R.D:
                    break
                if b.is_zero():
                    continue
                out[i + j] = out[i + j] + (a * b).scale(R.struct_const(i, j))
        return DpElem(R, tuple(out), min(self.prec, other.prec))

    __rmul__ = __mul__

    def scale_w(self, w: WittElem):
        return DpElem(self.ring, tuple(c * w for c in self.coords), self.prec)

    def __pow__(self, k):
        acc = self.ring.one()
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def is_zero(self):
        pk = self.ring.p ** self.prec
        return all(all(a % pk == 0 for a in c.coeffs) for c in self.coords)

    def reduce_prec(self, prec):
        return DpElem(self.ring, self.coords, min(self.prec, prec))

    def divide_p(self, i):
        if i == 0:
            return self
        if self.prec - i < 1:
            raise InsufficientPrecision(
                f"cannot drop {i} digits from precision {self.prec}")
        p = self.ring.p
        pi = p ** i
        pk = p ** self.prec
        out = []
        for c in self.coords:
            cs = []
            for a in c.coeffs:
                a %= pk
                if a % pi:
                    raise NotDivisible("coordinate not divisible by p^i")
                cs.append(a // pi)
            out.append(self.ring.ring.elem(cs))
        return DpElem(self.ring, tuple(out), self.prec - i)

    def inv(self):
        """Inverse of a unit (constant coordinate a unit of W)."""
        R = self.ring
        a = self.coords[0]
        if not a.is_unit():
            raise InputError("not a unit in the divided-power ring")
        ai = a.inv()
        w = (self - R.one().scale_w(a)).scale_w(ai)
        # 1/(1+w) = sum (-w)^k; w is nilpotent in the truncated model
        acc = R.one()
        term = R.one()
        for _ in range(R.D * R.n_int + 1):
            term = -(term * w)
            if all(c.is_zero() for c in term.coords):
                break
            acc = acc + term
        return acc.scale_w(ai)

    def eq(self, other):
        d = self - other
        return d.is_zero()

    def __eq__(self, other):
        return (isinstance(other, DpElem) and self.ring is other.ring
                and self.eq(other))

    def __repr__(self):
        parts = [f"{list(c.coeffs)}*b{i}"
                 for i, c in enumerate(self.coords) if not c.is_zero()]
        return ("0" if not parts else " + ".join(parts)) + f" (prec {self.prec})"


def s_phi_div(x: DpElem, i: int) -> DpElem:
    """Divided Frobenius phi_i = p^{-i} phi on Fil^i."""
    R = x.ring
    if i < 0 or i > R.p - 1:
        raise InputError("filtration level must satisfy 0 <= i <= p-1")
    # a Fil^i lift is exact at n_int; dividing phi(lift) by p^i spends i
    # internal digits, so the value is good modulo p^{n_int - i}
    out_prec = min(x.prec, R.n_int - i)
    if out_prec < R.n_user:
        raise InsufficientPrecision(
            f"internal precision {R.n_int} cannot support level {i} "
            f"at user precision {R.n_user}")
    if not R.fil_contains(x, i):
        raise NotInFiltration(f"element is not in Fil^{i}")
    lift = R.fil_lift(x, i)
    return R.phi(lift).divide_p(i).reduce_prec(out_prec)
