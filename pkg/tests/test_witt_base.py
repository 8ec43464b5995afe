import random

import pytest

from prismalab.errors import NotAUnit, InputError
from prismalab.witt_base import (
    WittRing, default_irreducible, is_irreducible_mod_p, witt_arith,
    witt_sigma,
)


def test_irreducibility_detector():
    assert is_irreducible_mod_p([1, 1, 1], 2)        # x^2+x+1
    assert not is_irreducible_mod_p([1, 0, 1], 2)    # (x+1)^2
    assert is_irreducible_mod_p([1, 2, 0, 1], 3)     # degree 3 mod 3
    assert not is_irreducible_mod_p([0, 1, 1], 5)    # x(x+1)


def test_default_irreducible_small_fields():
    for p, m in [(2, 1), (2, 2), (2, 3), (3, 2), (5, 2), (2, 4)]:
        f = default_irreducible(p, m)
        assert len(f) == m + 1 and f[-1] == 1
        assert is_irreducible_mod_p(f, p)


def test_ring_cardinality():
    R = WittRing(2, 2, 2, [1, 1, 1])
    assert len(set(e.coeffs for e in R.elements())) == 2 ** (2 * 2)


def test_sigma_identity_when_m_is_1():
    R = WittRing(3, 2, 1)
    for c in range(9):
        assert witt_sigma(R.elem([c])) == R.elem([c])


def test_sigma_frozen_value_p2_n2():
    # unique root of f congruent to x^2 mod 2, found by enumeration
    R = WittRing(2, 2, 2, [1, 1, 1])
    assert R.sigma_gen() == R.elem([3, 3])
    x = R.gen()
    roots = [y for y in R.elements()
             if (y * y + y + R.one()).is_zero()
             and all((a - b) % 2 == 0 for a, b in zip(y.coeffs, (x * x).coeffs))]
    assert roots == [R.elem([3, 3])]


def test_sigma_involution_on_w2_f4():
    R = WittRing(2, 2, 2, [1, 1, 1])
    for e in R.elements():
        assert witt_sigma(witt_sigma(e)) == e


def test_sigma_order_m_and_frobenius_mod_p_exhaustive():
    # every ring with p^{nm} <= 4096
    cases = []
    for p in (2, 3, 5, 7, 11):
        for n in (1, 2, 3, 4):
            for m in (1, 2, 3, 4):
                if p ** (n * m) <= 4096:
                    cases.append((p, n, m))
    for p, n, m in cases:
        R = WittRing(p, n, m)
        for e in R.elements():
            s = e
            for _ in range(m):
                s = witt_sigma(s)
            assert s == e, (p, n, m)
            fr = witt_sigma(e)
            pw = e ** p
            assert fr.reduce_mod(p) == pw.reduce_mod(p), (p, n, m)


def test_sigma_is_ring_hom_random():
    R = WittRing(3, 2, 2)
    rng = random.Random(0)
    els = R.elements()
    for _ in range(1000):
        a, b = rng.choice(els), rng.choice(els)
        assert witt_sigma(a + b) == witt_sigma(a) + witt_sigma(b)
        assert witt_sigma(a * b) == witt_sigma(a) * witt_sigma(b)


def test_arith_basics_and_frozen_inverse():
    R = WittRing(3, 2, 1)
    a = R.elem([5])
    assert witt_arith(a, R.one(), "mul") == a
    # brute force over Z/9: 4 * 7 = 28 = 1 mod 9
    assert witt_arith(R.elem([4]), R.elem([4]), "inv") == R.elem([7])
    assert [b for b in range(9) if (4 * b) % 9 == 1] == [7]


def test_one_plus_p_times_anything_is_a_unit():
    R = WittRing(2, 3, 2)
    for e in R.elements():
        u = R.one() + e.scale(2)
        assert (u * u.inv()) == R.one()


def test_not_a_unit():
    R = WittRing(2, 2, 1)
    with pytest.raises(NotAUnit):
        R.elem([2]).inv()


def test_ring_axioms_random_triples():
    R = WittRing(2, 3, 2)
    rng = random.Random(1)
    els = R.elements()
    for _ in range(1000):
        a, b, c = (rng.choice(els) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert (a + b) + c == a + (b + c)


def test_reducible_f_rejected():
    with pytest.raises(InputError):
        WittRing(2, 1, 2, [1, 0, 1])


def test_lower_precision():
    R = WittRing(2, 3, 2)
    R2 = R.lower_precision(2)
    assert R2.n == 1 and R2.p == 2 and R2.m == 2
