"""The cyclotomic example family, end to end.

For the extension generated by a p^n-th root of unity the Eisenstein
polynomial d, the torsion module S/(g0, p^n) with phi(g) = g (g0 the
level-(n-1) cyclotomic kernel element), and the ideal
J = {x : p^n | x * q_n} are all explicit; every computable claim about
them is reproduced here with completeness certificates.
"""

from __future__ import annotations

import time

from .errors import BoundaryContamination, InputError, Unstable
from .linalg_residue import howell_form, in_span, kernel_solve, span_length
from .phi_modules import (
    PhiModule, annihilator_alpha, boundary_structure_check,
    check_ann_inclusion, u_torsion,
)
from .series_rings import DpRing, cyclotomic_q, eisenstein_make
from .witt_base import WittRing


class CycloInstance:
    def __init__(self, p, n, B=None, D=None):
        if n < 1:
            raise InputError("level must be at least 1")
        self.p = p
        self.n = n
        self.d = eisenstein_make(p, "cyclotomic", n)
        self.e = p ** (n - 1) * (p - 1)
        self.q_n = cyclotomic_q(p, n)
        # kernel generator of the level below: (u+1)^{p^{n-1}} - 1
        self.g0 = _binomial_poly(p ** (n - 1))
        # the kernel lives in degree e/(p-1); B leaves an empty band of
        # width e above it so completeness is machine-checkable
        self.B = B if B is not None else max(
            4 * self.e // (p - 1), self.e + 2 * (self.e // (p - 1)))
        self.D = D if D is not None else 2 * p ** n * self.e
        # d * g0 = q_n exactly over the integers
        prod = _poly_mul(list(self.d.int_coeffs), self.g0)
        if prod != self.q_n:
            raise InputError("cyclotomic factorization failed")

    def __repr__(self):
        return f"CycloInstance(p={self.p}, n={self.n})"


def _binomial_poly(k):
    """(u+1)^k - 1 as an integer coefficient list."""
    coeffs = [1]
    for _ in range(k):
        coeffs = [a + b for a, b in zip(coeffs + [0], [0] + coeffs)]
    coeffs[0] -= 1
    return coeffs


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def ker_phi_minus_d(inst, m):
    """Kernel of f -> phi(f) - d f on polynomials of degree <= B over Z/p^m.

    Certified cyclic of order p^m, generated by g0; raises
    BoundaryContamination when a kernel element touches the top band
    (B - e, B], which would mean B is too small for completeness.
    """
    p, B, e = inst.p, inst.B, inst.e
    if not 1 <= m <= inst.n:
        raise InputError("precision level must satisfy 1 <= m <= n")
    q = p ** m
    nrows = p * B + e + 1
    cols = []
    d = list(inst.d.int_coeffs)
    for j in range(B + 1):
        col = [0] * nrows
        col[p * j] += 1
        for k, a in enumerate(d):
            col[j + k] = (col[j + k] - a) % q
        cols.append(col)
    A = [[cols[c][r] for c in range(B + 1)] for r in range(nrows)]
    K, _ = kernel_solve(A, None, p, m)
    gens, _ = howell_form(K, p, m) if K else ([], None)
    gens = [g for g in gens if any(g)]
    g0 = [c % q for c in inst.g0] + [0] * (B + 1 - len(inst.g0))
    g0span, _ = howell_form([g0], p, m)
    for g in gens:
        if any(g[t] % q for t in range(B - e + 1, B + 1)):
            raise BoundaryContamination(
                "kernel element in the top degree band; raise B")
        if not in_span(g0span, g, p, m):
            raise InputError("kernel is not cyclic on the expected generator")
    if not in_span(gens, g0, p, m):
        raise InputError("expected generator missing from the kernel")
    return gens


def h2_instance_module(inst):
    """S/(g0, p^n) with phi(g) = g as a PhiModule."""
    from .series_rings import SeriesElem
    p, n = inst.p, inst.n
    W = WittRing(p, n, 1)
    g0 = SeriesElem.from_ints(W, [c % W.q for c in inst.g0])
    one = SeriesElem.from_ints(W, [1])
    b = n * p ** (n - 1)
    return PhiModule(W, 1, [[g0]], [[one]], killed_by=(n, b))


def h2_torsion_report(inst):
    """Torsion profile of the degree-2 module of the instance."""
    p, n, e = inst.p, inst.n, inst.e
    M = h2_instance_module(inst)
    tors = u_torsion(M)
    alpha = annihilator_alpha(M)
    bound = e // (p - 1)  # e (i-1)/(p-1) at i = 2
    ok2, data2 = check_ann_inclusion(M, 2, e)
    report = {
        "p": p, "n": n, "e": e,
        "length": M.length(),
        "whole_module_torsion": tors.length() == M.length(),
        "alpha": alpha,
        "bound": bound,
        "sharp": alpha == bound,
        "ann_inclusion": ok2,
        "ann_inclusion_data": data2,
    }
    if n == 1:
        report["boundary"] = boundary_structure_check(M, e=e, i=2)
    return report


def ideal_j_mingens(inst, check_stability=True):
    """Minimal generator count of J = {x : p^n divides x q_n}.

    Computed at the dp-truncation D via Nakayama over (p, u, z_i), then
    re-verified at D + e; Unstable if the two disagree.
    """
    mu = _j_mingens_at(inst, inst.D)
    if check_stability:
        mu2 = _j_mingens_at(inst, inst.D + inst.e)
        if mu2 != mu:
            raise Unstable(f"mu changed under D -> D+e: {mu} vs {mu2}")
    return mu


def _j_mingens_at(inst, D):
    p, n = inst.p, inst.n
    S = DpRing(inst.d, 2 * n, D=D)
    q = S.q
    pn = p ** n
    dq = len(inst.q_n) - 1
    qn = S.from_int_poly(inst.q_n)
    A = S.mult_matrix(qn)
    # kernel of multiplication by q_n on S/p^n; only coordinates whose
    # product with q_n stays below the degree bound are trusted, so every
    # kernel element is genuine rather than a truncation artifact
    # the kernel solve only trusts coordinates whose product with q_n is
    # fully visible below the degree bound; the resulting generators are
    # genuine, and all later multiplications are exact below D because
    # multiplication in the divided-power ring raises degree
    faithful = D - dq
    Asub = [[A[r][c] % pn for c in range(faithful)] for r in range(S.dim)]
    K, _ = kernel_solve(Asub, None, p, n)
    rows = []
    for i in range(S.dim):
        v = [0] * S.dim
        v[i] = pn
        rows.append(v)
    for k in K:
        x = S.from_vec(list(k) + [0] * (S.dim - faithful))
        for t in range(D):
            r = S.to_vec(S.basis_elem(t) * x)
            if any(r):
                rows.append(r)
    J, _ = howell_form(rows, p, S.n_int)
    jgens = [r for r in J if any(r)]
    mults = [S.from_int_poly([0, 1])]
    i = 1
    while p ** i * S.e < D:
        mults.append(S.gamma(p ** i))
        i += 1
    mrows = []
    for r in jgens:
        x = S.from_vec(list(r))
        mrows.append([(p * a) % q for a in r])
        for mlt in mults:
            mrows.append(S.to_vec(mlt * x))
    MJ, _ = howell_form(mrows, p, S.n_int)
    return span_length(J, p, S.n_int) - span_length(MJ, p, S.n_int)


def sharpness_report(pairs=((2, 1), (3, 1), (5, 1), (2, 2))):
    rows = []
    for p, n in pairs:
        t0 = time.perf_counter()
        rep = h2_torsion_report(CycloInstance(p, n))
        rows.append({
            "p": p, "n": n, "e": rep["e"], "i": 2,
            "alpha": rep["alpha"], "bound": rep["bound"],
            "equal": rep["sharp"],
            "seconds": round(time.perf_counter() - t0, 4),
        })
    return rows
