import random

import pytest

from prismalab.breuil_fl import (
    BreuilModule, FLModule, fl_criterion, fl_to_breuil, is_breuil_module,
    is_fl_module, kisin_to_breuil, residual_module, unramified_realization,
)
from prismalab.errors import BadRamification, HasUTorsion, InputError
from prismalab.linalg_residue import kernel_solve, spans_equal
from prismalab.phi_modules import EtalePhiModule, KisinModule, PhiModule
from prismalab.series_rings import (
    DpRing, SeriesElem, eisenstein_make, s_phi_div,
)
from prismalab.witt_base import WittRing


def dp_ring(p, h, e=1, D=None, m=1, f=None):
    E = eisenstein_make(p, "explicit", [p] + [0] * (e - 1) + [1])
    return DpRing(E, 1, m=m, f=f, D=D, h=h)


def tate_breuil(S, h):
    """Rank 1, Fil = Fil^h S, phi_h the divided Frobenius of the ring."""
    fil, img = [], []
    for row in S.fil_span(h):
        s = S.from_vec(row)
        fil.append([s])
        img.append([s_phi_div(s, h)])
    return BreuilModule(S, 1, h, fil, img)


# ---------------------------------------------------------------------------
# Breuil modules
# ---------------------------------------------------------------------------


def test_tate_rank_one_is_breuil():
    for p, h in [(2, 1), (3, 1), (3, 2)]:
        B = tate_breuil(dp_ring(p, h), h)
        ok, why = is_breuil_module(B)
        assert ok, (p, h, why)


def test_scaled_image_breaks_generation():
    S = dp_ring(3, 1)
    u = S.from_int_poly([0, 1])
    fil, img = [], []
    for row in S.fil_span(1):
        s = S.from_vec(row)
        fil.append([s])
        img.append([u * s_phi_div(s, 1)])
    B = BreuilModule(S, 1, 1, fil, img)
    ok, why = is_breuil_module(B)
    assert not ok and why == "generation"


def test_inconsistent_images_detected():
    # two generators of the same filtration with images that disagree on
    # the overlap
    S = dp_ring(3, 1)
    E = S.from_int_poly(list(S.eis.int_coeffs))
    u = S.from_int_poly([0, 1])
    fil = [[E], [u * E]]
    img = [[S.c1()], [S.one()]]  # should be u^3 * c1, not 1
    B = BreuilModule(S, 1, 1, fil, img)
    assert not B.phi_h_consistent()
    ok, why = is_breuil_module(B)
    assert not ok


def test_missing_divided_powers_fails_containment():
    # the ideal generated by E alone misses gamma_p(E)
    S = dp_ring(3, 1)
    E = S.from_int_poly(list(S.eis.int_coeffs))
    B = BreuilModule(S, 1, 1, [[E]], [[S.c1()]])
    ok, why = is_breuil_module(B)
    assert not ok and why == "fil-contains-filS"


def test_breuil_direct_sum():
    S = dp_ring(3, 1)
    B = tate_breuil(S, 1)
    BB = B.direct_sum(B)
    assert BB.r == 2
    ok, why = is_breuil_module(BB)
    assert ok, why


def test_mismatched_lengths_rejected():
    S = dp_ring(3, 1)
    with pytest.raises(InputError):
        BreuilModule(S, 1, 1, [[S.one()]], [])


# ---------------------------------------------------------------------------
# Fontaine-Laffaille modules
# ---------------------------------------------------------------------------


def unit_fl(W, h=1):
    return FLModule(W, [1], h, {}, {0: [[W.one()]]})


def tate_fl(W):
    one, zero = W.one(), W.zero()
    return FLModule(W, [1], 1, {1: [[one]]}, {0: [[zero]], 1: [[one]]})


def test_unit_and_tate_fl():
    W = WittRing(3, 1, 1)
    for M in (unit_fl(W), tate_fl(W)):
        ok, why = is_fl_module(M)
        assert ok, why
        okb, whyb = is_breuil_module(fl_to_breuil(M))
        assert okb, whyb
        assert fl_criterion(M)


def test_fl_axiom_failures():
    W = WittRing(3, 1, 1)
    one, zero = W.one(), W.zero()
    # phi_1 = 0 as well: images cannot generate
    M = FLModule(W, [1], 1, {1: [[one]]}, {0: [[zero]], 1: [[zero]]})
    assert is_fl_module(M) == (False, "axiom3")
    assert not fl_criterion(M)
    # phi_0 nonzero on Fil^1: violates phi_0 = p phi_1 there
    M = FLModule(W, [1], 1, {1: [[one]]}, {0: [[one]], 1: [[one]]})
    assert is_fl_module(M) == (False, "axiom2")
    assert not fl_criterion(M)


def test_fl_chain_violation():
    W = WittRing(3, 1, 1)
    one, zero = W.one(), W.zero()
    # Fil^2 contains e_2 which is not in Fil^1
    fil = {1: [[one, zero]], 2: [[zero, one]]}
    phi = {0: [[one, zero], [zero, one]], 1: [[zero, zero]],
           2: [[zero, zero]]}
    M = FLModule(W, [1, 1], 2, fil, phi)
    ok, why = is_fl_module(M)
    assert (ok, why) == (False, "axiom1-chain")


def test_fl_direct_sum_additive():
    W = WittRing(3, 1, 1)
    M = unit_fl(W).direct_sum(tate_fl(W))
    ok, why = is_fl_module(M)
    assert ok, why
    assert fl_criterion(M)
    B = fl_to_breuil(M)
    ok, why = is_breuil_module(B)
    assert ok, why
    # base change commutes with sums at the level of Fil spans
    Bsum = fl_to_breuil(unit_fl(W)).direct_sum(fl_to_breuil(tate_fl(W)))
    assert spans_equal(B.fil_span(), Bsum.fil_span(), B.p, 1)


def _random_invertible(rng, g, p):
    A = [[int(i == j) for j in range(g)] for i in range(g)]
    for _ in range(3 * g):
        i, j = rng.randrange(g), rng.randrange(g)
        if i == j:
            continue
        c = rng.randrange(1, p)
        for k in range(g):
            A[i][k] = (A[i][k] + c * A[j][k]) % p
    return A


def _random_fl(rng, W, g, h, break_axiom=None):
    p = W.p
    A = _random_invertible(rng, g, p)
    levels = [rng.randrange(h + 1) for _ in range(g)]
    col = lambda t: [W.elem([A[s][t]]) for s in range(g)]
    zero = [W.zero() for _ in range(g)]
    basis = lambda t: [W.one() if s == t else W.zero() for s in range(g)]
    fil = {i: [basis(t) for t in range(g) if levels[t] >= i]
           for i in range(1, h + 1)}
    phi = {i: [] for i in range(h + 1)}
    for i in range(h + 1):
        for t in range(g):
            if levels[t] >= i:
                phi[i].append(col(t) if levels[t] == i else list(zero))
    if break_axiom == 3:
        t = rng.randrange(g)
        idx = [s for s in range(g) if levels[s] >= levels[t]].index(t)
        phi[levels[t]][idx] = list(zero)
    if break_axiom == 2:
        # nonzero phi_i below the level of some generator
        cands = [t for t in range(g) if levels[t] > 0]
        if not cands:
            return None
        t = rng.choice(cands)
        i = rng.randrange(levels[t])
        idx = [s for s in range(g) if levels[s] >= i].index(t)
        phi[i][idx] = col(t)
    return FLModule(W, [1] * g, h, fil, phi)


@pytest.mark.parametrize("p", [3, 5])
def test_fl_criterion_matches_axioms(p):
    rng = random.Random(100 + p)
    W = WittRing(p, 1, 1)
    done = 0
    while done < 20:
        g = rng.randrange(1, 3)
        h = rng.randrange(1, min(p - 1, 3) + 1)
        kind = rng.choice([None, None, 2, 3])
        M = _random_fl(rng, W, g, h, break_axiom=kind)
        if M is None:
            continue
        ok, why = is_fl_module(M)
        assert ok == (kind is None), (p, g, h, kind, why)
        assert fl_criterion(M) == ok, (p, g, h, kind, why)
        done += 1


def test_fl_projector_witnesses():
    W = WittRing(3, 1, 1)
    one, zero = W.one(), W.zero()
    M = tate_fl(W).direct_sum(unit_fl(W))
    # projector onto the first coordinate witnesses Fil^1 inside Fil^0
    M.projectors = {0: [[one, zero], [zero, zero]]}
    ok, why = is_fl_module(M)
    assert ok, why
    # a wrong projector (onto the second coordinate) is rejected
    M.projectors = {0: [[zero, zero], [zero, one]]}
    assert is_fl_module(M) == (False, "axiom1-projector")


# ---------------------------------------------------------------------------
# base change from height-h modules
# ---------------------------------------------------------------------------


def test_kisin_rank_one_unit_and_tate():
    p = 3
    W = WittRing(p, 1, 1)
    E = eisenstein_make(p, "explicit", [p, 1])
    one = SeriesElem.from_ints(W, [1])
    # phi(e) = e: the filtration after base change is Fil^1 S itself
    M = PhiModule(W, 1, [], [[one]])
    K = KisinModule(M, 1, [[E.series(W)]], E)
    B = kisin_to_breuil(K, 1, D=8)
    ok, why = is_breuil_module(B)
    assert ok, why
    T = tate_breuil(dp_ring(p, 1, D=8), 1)
    assert spans_equal(B.fil_span(), T.fil_span(), p, 1)
    # phi(e) = E e: every element already maps into E M, so the
    # filtration is the whole module
    M = PhiModule(W, 1, [], [[E.series(W)]])
    K = KisinModule(M, 1, [[one]], E)
    B = kisin_to_breuil(K, 1, D=8)
    ok, why = is_breuil_module(B)
    assert ok, why
    from prismalab.linalg_residue import span_length
    assert span_length(B.fil_span(), p, 1) == B.dim


def test_kisin_rank_two():
    p = 3
    W = WittRing(p, 1, 1)
    E = eisenstein_make(p, "explicit", [p, 1])
    z = SeriesElem.from_ints(W, [])
    one = SeriesElem.from_ints(W, [1])
    M = PhiModule(W, 2, [], [[z, E.series(W)], [one, z]])
    psi = [[z, one], [E.series(W), z]]
    K = KisinModule(M, 2, psi, E)
    B = kisin_to_breuil(K, 2, D=8)
    ok, why = is_breuil_module(B)
    assert ok, why


def test_kisin_with_torsion_rejected():
    p = 3
    W = WittRing(p, 1, 1)
    E = eisenstein_make(p, "explicit", [p, 1])
    u = SeriesElem.from_ints(W, [0, 1])
    M = PhiModule(W, 1, [[u]], [[E.series(W)]], killed_by=(1, 1))
    K = KisinModule(M, 1, [[SeriesElem.from_ints(W, [1])]], E)
    with pytest.raises(HasUTorsion):
        kisin_to_breuil(K, 1)


# ---------------------------------------------------------------------------
# residual modules
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("p", [3, 5])
def test_residual_unramified_rank_one(p):
    V = EtalePhiModule(p, 1, 1, [[1]])
    R = residual_module(V, 1)
    ok, why = is_breuil_module(R.breuil)
    assert ok, why
    out = unramified_realization(R, 8)
    assert out["dimension"] == 1


def test_residual_rank_two_and_realization():
    # phi swaps a basis of V over F_3; fixed points need F_9
    p = 3
    V = EtalePhiModule(p, 1, 2, [[0, 2], [1, 0]])
    R = residual_module(V, 1)
    ok, why = is_breuil_module(R.breuil)
    assert ok, why
    out = unramified_realization(R, 8)
    assert out["dimension"] == 2


def test_residual_stable_under_larger_truncation():
    p = 3
    V = EtalePhiModule(p, 1, 2, [[1, 1], [0, 1]])
    for D in (None, 12):
        R = residual_module(V, 1, D=D)
        ok, why = is_breuil_module(R.breuil)
        assert ok, (D, why)


def test_residual_bad_ramification():
    V = EtalePhiModule(3, 1, 1, [[1]])
    with pytest.raises(BadRamification):
        residual_module(V, 4)


def test_residual_higher_e_zero_branch():
    # e > 1: the divided Frobenius kills the boundary generator, so only
    # the length data remains
    V = EtalePhiModule(5, 1, 1, [[1]])
    R = residual_module(V, 2)
    assert R.breuil is None and R.h == 2
    info = R.length_check()
    # oracle: kernel of u^p on the truncated ring, minus the unfaithful
    # top p coordinates which are killed by truncation alone
    S = R.S
    up = S.from_int_poly([0] * S.p + [1])
    A = S.mult_matrix(up)
    K, _ = kernel_solve([[a % S.p for a in row] for row in A], None, S.p, 1)
    assert len(K) - S.p * S.m == info["torsion_per_rank"]
    with pytest.raises(BadRamification):
        unramified_realization(R, 4)


def test_residual_quadratic_coefficients():
    # m = 2: the realization dimension is m * dim V
    p = 3
    V = EtalePhiModule(p, 2, 1, [[[0, 1]]])
    R = residual_module(V, 1)
    ok, why = is_breuil_module(R.breuil)
    assert ok, why
    out = unramified_realization(R, 10)
    assert out["dimension"] == 2
