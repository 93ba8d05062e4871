import random
from itertools import combinations, permutations

import pytest

from polycoho import hkn_ring
from polycoho.hkn_ring import HknPolynomial
from polycoho.labels import NiceLabel
from polycoho.lengths import LengthVector, mask_of, random_generic
from polycoho.nice_ring import (
    RingElement,
    chern,
    cup,
    elementary_product,
    equal_in_ring,
    from_hkn,
    label_to_hkn,
    normal_form,
    random_fresh,
    sigma_identity_check,
    sigma_sum,
    to_hkn,
)
from polycoho.sampling import random_element

from conftest import GENERIC, chamber_reps

R = HknPolynomial.R()
V = HknPolynomial.V


def E(L, *blocks, prune=False):
    return RingElement.from_blocks(L, *blocks, prune=prune)


@pytest.fixture
def L8():
    return random_generic(8, 4000, 0)


def test_elementary_product_examples(L8):
    L = L8
    P = lambda *f: elementary_product(f, L, prune=False)
    assert P((1, 2, 1), (2, 3, 1)) == E(L, ([1, 2, 3], []))
    assert P((1, 2, 1), (1, 3, -1)) == E(L, ([1, 2], [3]))
    # (1 2 ~3) * (4 5 ~3) = -(1 2 4 5 ~3)
    assert P((1, 2, 1), (1, 3, -1), (4, 5, 1), (4, 3, -1)) == -E(L, ([1, 2, 4, 5], [3]))
    assert P((1, 2, 1), (1, 2, 1)) == E(L, ([1, 2, 3], [])) - E(L, ([1, 2], [3]))
    assert P((1, 2, -1), (1, 2, -1)) == -E(L, ([1, 3], [2])) + E(L, ([1], [2, 3]))


def test_elementary_product_vanishing(L8):
    assert not elementary_product([(1, 2, 1), (1, 2, -1)], L8)
    assert not elementary_product([(1, 2, 1), (2, 3, -1), (1, 3, 1)], L8)
    # six factors exceed dimension 5
    assert not elementary_product([(1, 2, 1)] * 6, L8)


def test_elementary_product_order_independent(L8):
    rng = random.Random(2)
    factors = [(1, 2, 1), (2, 3, -1), (1, 3, -1), (4, 5, 1), (5, 4, 1)]
    base = elementary_product(factors, L8, prune=False)
    for _ in range(20):
        rng.shuffle(factors)
        assert elementary_product(factors, L8, prune=False) == base


def test_cup_worked_products():
    L7 = random_generic(7, 2000, 0)
    got = E(L7, ([1, 2, 3], [])) * E(L7, ([1, 2, 4], []))
    assert equal_in_ring(got, E(L7, ([1, 2, 3, 4, 5], []), prune=True) - E(L7, ([1, 2, 3, 4], [5]), prune=True))
    # n = 5: codim 4 products vanish
    L5 = GENERIC[5]
    assert not (E(L5, ([1, 2, 3], [])) * E(L5, ([1, 2, 4], [])))


def test_unit():
    L = GENERIC[6]
    x = E(L, ([1, 2], [3])) + E(L, ([4, 5], [])) * 3
    assert RingElement.unit(L) * x == RingElement(L, x.terms)
    assert x * 1 == x


def test_to_hkn_examples():
    L = GENERIC[5]
    n = L.n
    assert to_hkn(E(L, ([n, 1], []))) == V(1)
    assert to_hkn(E(L, ([1, 2], []))) == V(1) + V(2) + R
    assert to_hkn(E(L, ([1], [2]))) == V(2) - V(1)
    assert to_hkn(E(L, ([n], [2]))) == V(2) + R


def test_to_hkn_derived_from_chern_relations():
    # (ij) = Ch(i) - (i n) + (j n) with Ch(i) = 2V_i + R
    for L in chamber_reps(5):
        basis = hkn_ring.graded_basis(L)
        n = L.n
        for i, j in combinations(range(1, n), 2):
            lhs = basis.reduce(to_hkn(E(L, ([i, j], []), prune=True)))
            rhs = basis.reduce(V(i) * 2 + R - V(i) + V(j))
            assert lhs == rhs


def test_normal_form_examples():
    L = GENERIC[6]
    for i, j in permutations(range(1, 7), 2):
        assert not normal_form(E(L, ([i, j], [])) * E(L, ([i], [j])))
    for i, j, k, l in permutations(range(1, 7), 4):
        assert not normal_form(RingElement(L, (E(L, ([i, j], [])) + E(L, ([k, l], [])) - E(L, ([j, k], [])) - E(L, ([i, l], []))).terms))
    unit = normal_form(RingElement.unit(L))
    assert unit[0].coords == (1,)


def test_chern():
    L = GENERIC[5]
    assert chern(1, 2, L) == E(L, ([1, 2], [])) - E(L, ([1], [2]))
    assert equal_in_ring(chern(1, 2, L), chern(1, 3, L))
    basis = hkn_ring.graded_basis(L)
    assert normal_form(chern(5, 1, L)) == basis.reduce(-R)
    for i in range(1, 5):
        assert normal_form(chern(i, 5, L)) == basis.reduce(V(i) * 2 + R)
    with pytest.raises(ValueError):
        chern(2, 2, L)


def test_sigma_examples():
    L5, L6 = GENERIC[5], GENERIC[6]
    assert sigma_identity_check(mask_of([1, 2]), L5)
    assert sigma_identity_check(mask_of([1, 2, 3]), L6)
    assert sigma_identity_check(mask_of([1, 2, 3, 4]), L6)
    # base case spelled out: -Ch(n) + (1 n) + (2 n) = (1 2)
    n = L5.n
    lhs = -chern(n, 1, L5) + E(L5, ([1, n], []), prune=True) + E(L5, ([2, n], []), prune=True)
    assert equal_in_ring(lhs, E(L5, ([1, 2], []), prune=True))
    assert equal_in_ring(sigma_sum(mask_of([1, 2]), L5), lhs)


def test_from_hkn_dictionary():
    L = GENERIC[5]
    n = L.n
    assert from_hkn(V(2), L) == E(L, ([n, 2], []), prune=True)
    for g in hkn_ring.ideal_generators(L):
        assert not normal_form(from_hkn(g, L))


def test_mismatched_contexts():
    with pytest.raises(ValueError):
        RingElement.unit(GENERIC[5]) * RingElement.unit(LengthVector((6, 9, 11, 12, 14)))


@pytest.mark.parametrize("n", [4, 5, 6])
def test_oracle_soundness(n):
    rng = random.Random(n)
    cases = 0
    for L in chamber_reps(n)[:5]:
        basis = hkn_ring.graded_basis(L)
        for _ in range(50):
            a, b = random_element(rng, L), random_element(rng, L)
            assert normal_form(cup(a, b)) == basis.reduce(to_hkn(a) * to_hkn(b))
            cases += 1
    assert cases >= 200 or n == 4


@pytest.mark.parametrize("n", [5, 6, 7])
def test_commutative_associative_fresh_index(n):
    rng = random.Random(10 + n)
    L = GENERIC[n]
    for _ in range(40):
        a, b, c = (random_element(rng, L, max_codim=2) for _ in range(3))
        assert cup(a, b) == cup(b, a)
        assert equal_in_ring(cup(cup(a, b), c), cup(a, cup(b, c)))
        assert equal_in_ring(cup(a, b), cup(a, b, fresh=random_fresh(rng)))


def test_degree_additivity():
    rng = random.Random(4)
    L = GENERIC[7]
    for _ in range(50):
        la, _ = random_nice_label_codim(rng, 7)
        lb, _ = random_nice_label_codim(rng, 7)
        for label in cup(RingElement(L, {la: 1}, prune=False), RingElement(L, {lb: 1}, prune=False)).terms:
            assert label.codim() == la.codim() + lb.codim()


def random_nice_label_codim(rng, n):
    from polycoho.sampling import random_nice_label
    return random_nice_label(rng, n, max_codim=2)


def test_long_blocks_vanish_in_oracle():
    rng = random.Random(5)
    from polycoho.sampling import random_nice_label
    for n in (5, 6, 7):
        for L in chamber_reps(n)[:6]:
            basis = hkn_ring.graded_basis(L)
            for _ in range(60):
                label, _ = random_nice_label(rng, n)
                if any(L.is_long(I) or L.is_long(J) for I, J in label.factors):
                    assert not basis.reduce(label_to_hkn(label, n))


def test_format():
    L = GENERIC[7]
    x = E(L, ([1, 2, 3], [])) - E(L, ([1, 2], [3])) * 2 + 3
    assert str(x) == "3 - 2*(1 2 ~3) + (1 2 3)"
    assert str(RingElement(L)) == "0"
