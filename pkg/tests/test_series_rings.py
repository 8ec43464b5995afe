import math

import pytest

from prismalab.errors import (
    InsufficientPrecision, NotDivisible, NotEisenstein, NotInFiltration,
    PrecisionLoss,
)
from prismalab.series_rings import (
    DpRing, EisensteinPoly, SeriesElem, cyclotomic_q, divide_exact,
    eisenstein_make, int_poly_divmod, int_poly_pow, phi_apply, s_phi_div,
)
from prismalab.witt_base import WittRing


W22 = WittRing(2, 2, 1)
W31 = WittRing(3, 1, 1)


def test_phi_of_u_is_u_to_p():
    u = SeriesElem.u_pow(W22, 1)
    assert phi_apply(u) == SeriesElem.u_pow(W22, 2)


def test_phi_frozen_p2_n2():
    x = SeriesElem.from_ints(W22, [1, 3])
    assert phi_apply(x) == SeriesElem.from_ints(W22, [1, 0, 3])


def test_phi_of_eisenstein_vanishes_mod_p_u_pe():
    for p, kind, arg in [(2, "cyclotomic", 1), (3, "cyclotomic", 1),
                         (2, "cyclotomic", 2), (5, "explicit", [5, 10, 0, 1])]:
        E = eisenstein_make(p, kind, arg)
        R = WittRing(p, 2, 1)
        img = phi_apply(E.series(R))
        for i in range(p * E.e):
            assert all(a % p == 0 for a in img.coeff(i).coeffs)


def test_phi_multiplies_precision():
    x = SeriesElem.from_ints(W22, [1, 1], N=4)
    assert phi_apply(x).N == 8


def test_cyclotomic_frozen_small():
    d2 = eisenstein_make(2, "cyclotomic", 1)
    assert list(d2.int_coeffs) == [2, 1] and d2.e == 1 and d2.a0 == 1
    d3 = eisenstein_make(3, "cyclotomic", 1)
    assert list(d3.int_coeffs) == [3, 3, 1] and d3.e == 2 and d3.a0 == 1
    d22 = eisenstein_make(2, "cyclotomic", 2)
    # ((u+1)^4 - 1)/((u+1)^2 - 1) = u^2 + 2u + 2
    assert list(d22.int_coeffs) == [2, 2, 1] and d22.e == 2


def test_cyclotomic_divides_q_exactly():
    for p, n in [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1)]:
        d = eisenstein_make(p, "cyclotomic", n)
        den = cyclotomic_q(p, n - 1) if n > 1 else [0, 1]
        prod = [0] * (len(d.int_coeffs) + len(den) - 1)
        for i, a in enumerate(d.int_coeffs):
            for j, b in enumerate(den):
                prod[i + j] += a * b
        qn = cyclotomic_q(p, n)
        assert prod == qn[:len(prod)] and all(c == 0 for c in qn[len(prod):])
        assert d.e == p ** (n - 1) * (p - 1) and d.a0 == 1


def test_explicit_eisenstein_validation():
    eisenstein_make(5, "explicit", [5, 10, 0, 1])
    with pytest.raises(NotEisenstein):
        eisenstein_make(2, "explicit", [4, 1])  # constant term p^2
    with pytest.raises(NotEisenstein):
        eisenstein_make(3, "explicit", [3, 1, 1, 1])  # middle coeff not div p


def test_exact_flag_and_precision_loss():
    x = SeriesElem.from_ints(W22, [0, 1], N=3, exact=True)
    with pytest.raises(PrecisionLoss):
        _ = x * x * x
    y = x.truncate(3)
    assert not y.exact and (y * y).N == 3


def test_divide_exact_p_power():
    x = SeriesElem.from_ints(W22, [2, 2])
    q = divide_exact(x, 2)
    assert q.ring.n == 1 and [c.coeffs[0] for c in q.coeffs] == [1, 1]
    with pytest.raises(NotDivisible):
        divide_exact(SeriesElem.from_ints(W22, [1]), 2)
    with pytest.raises(InsufficientPrecision):
        divide_exact(SeriesElem.from_ints(W22, [0]), 4)


def test_divide_exact_by_eisenstein():
    E = eisenstein_make(2, "cyclotomic", 1)
    R = WittRing(2, 2, 1)
    u3 = SeriesElem.u_pow(R, 3)
    assert divide_exact(E.series(R) * u3, E) == u3
    with pytest.raises(NotDivisible):
        divide_exact(SeriesElem.from_ints(R, [1, 0, 0, 1]), E)


def test_c1_from_division_matches_dp_ring():
    # p=3, e=1: phi(E^2)/p^2 = c1^2 with c1 = 1 mod (p, u); the division
    # happens inside the divided-power ring
    p = 3
    E = eisenstein_make(p, "explicit", [3, 1])
    S = DpRing(E, n=2, h=2, D=12)
    phiE2 = S.from_int_poly(int_poly_pow([3, 0, 0, 1], 2))  # phi(E)^2
    c1sq = divide_exact(phiE2, 9)
    c1 = S.c1()
    assert c1.coords[0].coeffs[0] % 3 == 1
    assert ((c1 * c1).reduce_prec(c1sq.prec) - c1sq).is_zero()
    # c1 is a unit: c1 * c1^{-1} = 1
    assert (S.c1() * S.c1_inv() - S.one()).is_zero()


def test_dp_structure_constants_are_integers():
    for p, e in [(2, 1), (2, 2), (3, 2), (5, 4)]:
        E = eisenstein_make(p, "explicit", [p] + [0] * (e - 1) + [1])
        S = DpRing(E, n=1, h=0, D=3 * p * e)
        for i in range(S.D):
            for j in range(S.D - i):
                S.struct_const(i, j)  # raises if non-integral


def test_dp_quotient_by_fil_matches_truncated_series_ring():
    # S/Fil^r has the same Z/p-length as S_n/(E^r) for r <= p
    from prismalab.linalg_residue import span_length
    p = 3
    E = eisenstein_make(p, "cyclotomic", 1)  # e = 2
    S = DpRing(E, n=2, h=0, D=20)
    for r in (1, 2, 3):
        H = S.fil_span(r)
        quotient_len = S.dim * S.n_int - span_length(H, p, S.n_int)
        # S_n/(E^r) is free of rank r*e over W_n
        assert quotient_len == r * E.e * S.n_int


def test_dp_mod_p_dimension_count():
    # mod p the ring is (k[u]/u^{pe})[z_i]/(z_i^p); monomial count below D
    # must equal D
    for p, e, D in [(2, 1, 9), (3, 2, 25), (2, 2, 17)]:
        count = 0
        levels = []
        i = 1
        while p ** i * e < D:
            levels.append(p ** i * e)
            i += 1
        import itertools
        for a in range(min(p * e, D)):
            for cs in itertools.product(range(p), repeat=len(levels)):
                if a + sum(c * l for c, l in zip(cs, levels)) < D:
                    count += 1
        assert count == D


def test_z_variables_are_nilpotent_mod_p():
    p = 2
    E = eisenstein_make(p, "cyclotomic", 1)
    S = DpRing(E, n=1, h=0, D=10)
    z1 = S.gamma(p)  # class of gamma_p(E)
    sq = z1 * z1
    assert all(a % p == 0 for c in sq.coords for a in c.coeffs)


def test_phi_i_divided_frobenius_of_E_power():
    # phi_i(E^i) = c1^i, a unit
    p = 3
    E = eisenstein_make(p, "cyclotomic", 1)
    S = DpRing(E, n=1, h=2, D=20)
    Ei = S.from_int_poly(int_poly_pow(list(E.int_coeffs), 2))
    val = s_phi_div(Ei, 2)
    expect = (S.c1() * S.c1()).reduce_prec(val.prec)
    assert (val - expect).is_zero()


def test_phi_i_requires_filtration_membership():
    p = 3
    E = eisenstein_make(p, "cyclotomic", 1)
    S = DpRing(E, n=1, h=1, D=20)
    with pytest.raises(NotInFiltration):
        s_phi_div(S.one(), 1)


def test_boundary_generator_divided_frobenius():
    # phi_i(u^{ep-1}) = c1^{p-1} mod p when e = 1, and 0 when e > 1
    for p in (2, 3, 5):
        for e in [d for d in range(1, p) if (p - 1) % d == 0]:
            i = (p - 1) // e
            E = eisenstein_make(
                p, "cyclotomic", 1) if e == p - 1 else eisenstein_make(
                p, "explicit", [p] + [0] * (e - 1) + [1])
            if E.e != e:
                E = eisenstein_make(p, "explicit", [p] + [0] * (e - 1) + [1])
            S = DpRing(E, n=1, h=i, D=2 * p * e + 2)
            x = S.from_int_poly([0] * (e * p - 1) + [1], prec=1)
            val = s_phi_div(x, i)
            if e == 1:
                expect = (S.c1() ** (p - 1)).reduce_prec(1)
            else:
                expect = S.zero().reduce_prec(1)
            assert (val.reduce_prec(1) - expect).is_zero(), (p, e, i)


def test_phi_fil_lands_in_p_power():
    import random
    rng = random.Random(9)
    p = 3
    E = eisenstein_make(p, "cyclotomic", 1)
    S = DpRing(E, n=1, h=2, D=20)
    for i in (1, 2):
        H = S.fil_span(i)
        for _ in range(10):
            coeffs = [rng.randrange(S.q) for _ in range(len(H))]
            vec = [0] * S.dim
            for c, row in zip(coeffs, H):
                for t, a in enumerate(row):
                    vec[t] = (vec[t] + c * a) % S.q
            x = S.from_vec(vec)
            img = S.phi(x)
            assert all(a % p ** i == 0 for c in img.coords for a in c.coeffs)


def test_int_poly_divmod():
    q, r = int_poly_divmod([2, 3, 1], [2, 1])  # (u+1)(u+2)
    assert q == [1, 1] and r == []
