from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from polycoho.lengths import (
    LengthError,
    LengthVector,
    indices_of,
    mask_of,
    random_generic,
)


def brute_generic(lengths):
    """Every signed sum over every nonempty subset is nonzero (3**n patterns)."""
    for signs in product((-1, 0, 1), repeat=len(lengths)):
        if any(signs) and sum(s * l for s, l in zip(signs, lengths)) == 0:
            return False
    return True


def brute_long_sets(lengths):
    total = sum(lengths)
    n = len(lengths)
    out = set()
    for bits in product((0, 1), repeat=n):
        if 2 * sum(b * l for b, l in zip(bits, lengths)) > total:
            out.add(frozenset(i + 1 for i in range(n) if bits[i]))
    return out


def test_mask_roundtrip():
    assert indices_of(mask_of([1, 3, 4])) == (1, 3, 4)
    assert mask_of([]) == 0
    with pytest.raises(ValueError):
        mask_of([0])


@pytest.mark.parametrize("lengths, total", [((3, 5, 6, 7), 21), ((1, 1, 1, 1, 1), 5), ((2, 3, 4, 6), 15)])
def test_perimeter(lengths, total):
    assert LengthVector(lengths).perimeter() == total


def test_is_long():
    assert LengthVector((1, 1, 1, 1, 1)).is_long(mask_of([1, 2, 3]))
    assert LengthVector((3, 5, 6, 7)).is_long(mask_of([2, 3]))
    assert not LengthVector((3, 5, 6, 7)).is_long(0)
    assert not LengthVector((3, 5, 6, 7)).is_long(mask_of([1, 4]))  # 2*10 < 21


@pytest.mark.parametrize("lengths", [(3, 5, 6, 7), (1, 1, 1, 1, 1), (1, 2, 4, 8, 16), (2, 3, 4, 6), (6, 9, 11, 12, 13)])
def test_is_generic_matches_signed_sum_brute_force(lengths):
    assert LengthVector(lengths).is_generic() == brute_generic(lengths)


def test_is_generic_examples():
    assert LengthVector((3, 5, 6, 7)).is_generic()
    assert not LengthVector((1, 1, 1, 1, 1)).is_generic()
    assert LengthVector((1, 2, 4, 8, 16)).is_generic()


def test_is_nonempty():
    assert LengthVector((3, 5, 6, 7)).is_nonempty()
    assert not LengthVector((1, 1, 1, 10)).is_nonempty()
    assert LengthVector((1, 1, 1, 1, 1)).is_nonempty()


def test_invalid_vectors():
    with pytest.raises(LengthError):
        LengthVector((1, 2, 3))
    with pytest.raises(LengthError):
        LengthVector((1, 2, 0, 3))
    with pytest.raises(LengthError):
        LengthVector.parse("1,a,3,4")
    assert LengthVector.parse("3, 5,6,7") == LengthVector((3, 5, 6, 7))


def test_chamber_signature_3567():
    sig = LengthVector((3, 5, 6, 7)).chamber_signature()
    pairs = [mask_of(p) for p in ([2, 3], [2, 4], [3, 4])]
    want = {m for m in range(16) if any(m & p == p for p in pairs)}
    assert set(sig.long_sets) == want
    got = {frozenset(indices_of(m)) for m in sig.long_sets}
    assert got == brute_long_sets((3, 5, 6, 7))
    assert sorted(sig.minimal_long_sets()) == sorted(pairs)


def test_chamber_signature_flags_emptiness():
    sig = LengthVector((1, 2, 4, 8, 16)).chamber_signature()
    assert sig.is_long(mask_of([5]))
    assert sig.is_empty_moduli()


def test_chamber_signature_rejects_walls():
    with pytest.raises(LengthError):
        LengthVector((1, 1, 1, 1)).chamber_signature()
    with pytest.raises(LengthError):
        LengthVector((2, 3, 4, 5)).chamber_signature()  # 2+5 = 3+4


def test_generic_representative_stays_in_chamber():
    L = LengthVector((1, 1, 1, 1, 1))
    rep = L.generic_representative()
    assert rep.is_generic()
    assert rep.chamber_signature() == L.chamber_signature()


def test_random_generic():
    for args in [(4, 10, 0), (5, 100, 1), (7, 400, 3)]:
        L = random_generic(*args)
        assert L.n == args[0]
        assert L.is_generic() and L.is_nonempty()
        assert max(L.lengths) <= args[1]
    assert random_generic(5, 100, 1) == random_generic(5, 100, 1)


def test_random_generic_budget():
    # entries in 1..3 cannot give 4 distinct values, so never generic
    with pytest.raises(LengthError):
        random_generic(4, 3, 0)
    with pytest.raises(LengthError):
        random_generic(3, 10, 0)


lengths_strategy = st.lists(st.integers(1, 60), min_size=4, max_size=7).map(tuple)


@settings(max_examples=150, deadline=None)
@given(lengths_strategy)
def test_generic_agrees_with_brute_force(lengths):
    assert LengthVector(lengths).is_generic() == brute_generic(lengths)


@settings(max_examples=150, deadline=None)
@given(lengths_strategy, st.integers(2, 5))
def test_signature_invariants(lengths, factor):
    L = LengthVector(lengths)
    if not L.is_off_walls():
        return
    sig = L.chamber_signature()
    full = L.full_mask
    assert not sig.is_long(0)
    assert sig.is_long(full)
    for m in range(full + 1):
        assert sig.is_long(m) != sig.is_long(full & ~m)
        if sig.is_long(m):
            for k in range(L.n):
                assert sig.is_long(m | 1 << k)
    assert L.scaled(factor).chamber_signature() == sig


@settings(max_examples=100, deadline=None)
@given(lengths_strategy)
def test_generic_implies_off_walls(lengths):
    L = LengthVector(lengths)
    if L.is_generic():
        assert L.is_off_walls()
