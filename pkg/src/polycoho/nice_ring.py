"""Cup products of nice manifolds.

A product of elementary factors is evaluated by inserting the factors one at
a time into a signed partition of ``[n]``:

* a factor joining two classes merges them (rules for shared indices);
* a factor contradicting its class (``u_a = -u_a``) kills the term;
* a factor already implied by its class is replaced by ``+Ch(a)`` (codirected)
  or ``-Ch(a)`` (opposite), and ``Ch(a) = (a k) - (a ~k)`` for a fresh index
  ``k`` outside the class of ``a``.

Every class carries an orientation (a sign per index).  For a consistent
orientation ``sigma`` on the merged class,

    (X, sigma|X) * (Y, sigma|Y) = sigma(v) (X u Y, sigma)

when X and Y meet in the single index v.  Adding ``(a b)_s`` between two
classes therefore multiplies the running coefficient by ``s * sigma(a)``,
after flipping the class of b (sign -1) if its orientation disagrees.

Equality in the ring is decided by the polynomial normal form in
:mod:`polycoho.hkn_ring`; this module only applies the cheap vanishing rules
(dimension bound, contradictions, long blocks).
"""

from __future__ import annotations

import random
from collections import defaultdict
from typing import Callable, Iterable, Mapping

from . import hkn_ring
from .hkn_ring import HknPolynomial, QuotientVector
from .labels import Elementary, LabelError, NiceLabel, label_sort_key
from .lengths import LengthVector, indices_of, lowest_index, mask_of

# (a, component mask of a, n) -> fresh index outside the component
FreshIndexPolicy = Callable[[int, int, int], int]


def smallest_fresh(a: int, component: int, n: int) -> int:
    for k in range(1, n + 1):
        if not component >> (k - 1) & 1:
            return k
    raise ValueError("component covers every index")


def random_fresh(rng: random.Random) -> FreshIndexPolicy:
    def choose(a: int, component: int, n: int) -> int:
        free = [k for k in range(1, n + 1) if not component >> (k - 1) & 1]
        return rng.choice(free)
    return choose


class RingElement:
    """Integer combination of canonical nice labels for a fixed length vector."""

    __slots__ = ("L", "terms")

    def __init__(self, L: LengthVector, terms: Mapping[NiceLabel, int] | None = None, prune: bool = True):
        # prune=False keeps labels with long blocks; the dimension bound always applies
        self.L = L
        self.terms: dict[NiceLabel, int] = {}
        top = L.n - 3
        for label, c in (terms or {}).items():
            if c and label.codim() <= top and (not prune or admissible(label, L)):
                self.terms[label] = self.terms.get(label, 0) + c
        self.terms = {k: v for k, v in self.terms.items() if v}

    @classmethod
    def unit(cls, L: LengthVector) -> "RingElement":
        return cls(L, {NiceLabel(): 1})

    @classmethod
    def zero(cls, L: LengthVector) -> "RingElement":
        return cls(L)

    @classmethod
    def from_label(cls, L: LengthVector, label: NiceLabel, coeff: int = 1, prune: bool = True) -> "RingElement":
        return cls(L, {label: coeff}, prune=prune)

    @classmethod
    def from_blocks(cls, L: LengthVector, *blocks, prune: bool = True) -> "RingElement":
        """``from_blocks(L, ([1, 2], [3]), ([4, 5], []))`` is ``(1 2 ~3).(4 5)``."""
        label, sign = NiceLabel.parse_blocks(blocks)
        return cls(L, {label: sign}, prune=prune)

    @classmethod
    def elementary(cls, L: LengthVector, a: int, b: int, s: int) -> "RingElement":
        if s == 1:
            return cls.from_blocks(L, ([a, b], []))
        return cls.from_blocks(L, ([a], [b]))

    def _check(self, other: "RingElement") -> None:
        if other.L != self.L:
            raise ValueError("ring elements over different length vectors")

    def __add__(self, other):
        if isinstance(other, int):
            other = RingElement.unit(self.L) * other
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return RingElement(self.L, out, prune=False)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.L, {k: -v for k, v in self.terms.items()}, prune=False)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return RingElement(self.L, {k: v * other for k, v in self.terms.items()}, prune=False)
        return cup(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "RingElement":
        out = RingElement.unit(self.L)
        for _ in range(k):
            out = cup(out, self)
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, RingElement) and self.L == other.L and self.terms == other.terms

    def __hash__(self):
        return hash((self.L, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda t: label_sort_key(t[0])))

    def __str__(self) -> str:
        return format_combination(self)

    def __repr__(self) -> str:
        return f"RingElement({self})"


def format_combination(x) -> str:
    """``(1 2 3) - 2*(1 ~2).(3 4)``; labels sorted by codim then indices."""
    items = list(x)
    if not items:
        return "0"
    out = ""
    for k, (label, c) in enumerate(items):
        body = str(label)
        mag = abs(c)
        term = body if mag == 1 else f"{mag}*{body}"
        if body == "1":
            term = str(mag)
        if k == 0:
            out = ("-" if c < 0 else "") + term
        else:
            out += (" - " if c < 0 else " + ") + term
    return out


def admissible(label: NiceLabel, L: LengthVector) -> bool:
    """False when the label vanishes by dimension or by a long block."""
    if label.codim() > L.n - 3:
        return False
    return not any(L.is_long(I) or L.is_long(J) for I, J in label.factors)


# ---------------------------------------------------------------------------
# the product engine


class _SignedPartition:
    """Classes of ``[n]`` with an orientation sign per index."""

    __slots__ = ("comp", "sign")

    def __init__(self, n: int):
        # comp[i] is the mask of i's class; sign[i] its orientation (+1/-1)
        self.comp = [0] + [1 << (i - 1) for i in range(1, n + 1)]
        self.sign = [1] * (n + 1)

    def copy(self) -> "_SignedPartition":
        p = _SignedPartition.__new__(_SignedPartition)
        p.comp = list(self.comp)
        p.sign = list(self.sign)
        return p

    def merge(self, a: int, b: int, s: int) -> int:
        """Join the classes of a and b by ``(a b)_s``; return the coefficient."""
        coeff = 1
        sign = self.sign
        if sign[b] != s * sign[a]:
            for i in indices_of(self.comp[b]):
                sign[i] = -sign[i]
            coeff = -1
        coeff *= s * sign[a]
        merged = self.comp[a] | self.comp[b]
        for i in indices_of(merged):
            self.comp[i] = merged
        return coeff

    def read_label(self) -> tuple[NiceLabel, int]:
        coeff = 1
        factors = []
        seen = 0
        for i in range(1, len(self.comp)):
            c = self.comp[i]
            if c & seen or c == 1 << (i - 1):
                continue
            seen |= c
            root = lowest_index(c)
            flip = self.sign[root]
            coeff *= flip
            I = J = 0
            for j in indices_of(c):
                if self.sign[j] * flip > 0:
                    I |= 1 << (j - 1)
                else:
                    J |= 1 << (j - 1)
            factors.append((I, J))
        return NiceLabel(tuple(factors)), coeff

    def has_long_block(self, L: LengthVector) -> bool:
        seen = 0
        for i in range(1, len(self.comp)):
            c = self.comp[i]
            if c & seen:
                continue
            seen |= c
            pos = sum(1 << (j - 1) for j in indices_of(c) if self.sign[j] > 0)
            if L.is_long(pos) or L.is_long(c & ~pos):
                return True
        return False


def _normalize_elementary(f: Elementary) -> tuple[Elementary, int]:
    """Put the smaller index first: ``(a ~b) = -(b ~a)``, ``(a b) = (b a)``."""
    a, b, s = f
    if a == b:
        raise LabelError(f"elementary factor needs distinct indices, got ({a} {b})")
    if s not in (1, -1):
        raise LabelError(f"bad elementary sign {s}")
    if a < b:
        return (a, b, s), 1
    return (b, a, s), s


def elementary_product(
    factors: Iterable[Elementary],
    L: LengthVector,
    fresh: FreshIndexPolicy = smallest_fresh,
    prune: bool = True,
) -> RingElement:
    """Cup product of elementary factors as a combination of nice labels.

    With ``prune=False`` labels with long blocks are kept (the dimension
    bound still applies).
    """
    n = L.n
    coeff = 1
    queue = []
    for f in factors:
        if not (1 <= f[0] <= n and 1 <= f[1] <= n):
            raise LabelError(f"index out of range in {f}")
        g, s = _normalize_elementary(f)
        coeff *= s
        queue.append(g)
    if len(queue) > n - 3:
        return RingElement(L)
    queue.sort()
    out: dict[NiceLabel, int] = defaultdict(int)
    _expand(_SignedPartition(n), queue, 0, coeff, L, fresh, prune, out)
    return RingElement(L, out, prune=prune)


def _expand(part, queue, pos, coeff, L, fresh, prune, out) -> None:
    while pos < len(queue):
        a, b, s = queue[pos]
        if part.comp[a] != part.comp[b]:
            coeff *= part.merge(a, b, s)
            if prune and part.has_long_block(L):
                return
            pos += 1
            continue
        if part.sign[a] * part.sign[b] != s:
            return  # u_a = -u_a: disjoint submanifolds
        # redundant factor: s * Ch(a), Ch(a) = (a k) - (a ~k)
        k = fresh(a, part.comp[a], L.n)
        for branch_sign in (1, -1):
            sub = part.copy()
            c = coeff * s * branch_sign * sub.merge(a, k, branch_sign)
            if prune and sub.has_long_block(L):
                continue
            _expand(sub, queue, pos + 1, c, L, fresh, prune, out)
        return
    label, sign = part.read_label()
    out[label] += coeff * sign


def cup(a: RingElement, b: RingElement, fresh: FreshIndexPolicy = smallest_fresh) -> RingElement:
    a._check(b)
    out: dict[NiceLabel, int] = defaultdict(int)
    for la, ca in a.terms.items():
        sa = la.star_decomposition()
        for lb, cb in b.terms.items():
            prod = elementary_product(sa + lb.star_decomposition(), a.L, fresh)
            for label, c in prod.terms.items():
                out[label] += ca * cb * c
    return RingElement(a.L, out)


def chern(i: int, k: int, L: LengthVector) -> RingElement:
    """``Ch(i) = (i k) - (i ~k)``."""
    if i == k:
        raise ValueError("Ch(i) needs an auxiliary index k != i")
    return RingElement.elementary(L, i, k, 1) - RingElement.elementary(L, i, k, -1)


def default_chern(i: int, L: LengthVector) -> RingElement:
    k = 1 if i != 1 else 2
    return chern(i, k, L)


# ---------------------------------------------------------------------------
# translation to the polynomial presentation


def elementary_to_hkn(a: int, b: int, s: int, n: int) -> HknPolynomial:
    """Image of ``(a b)`` / ``(a ~b)``.

    ``(n i) = V_i``, ``(n ~i) = U_i = V_i + R``; for ``i, j != n``,
    ``(i j) = V_i + V_j + R`` and ``(i ~j) = V_j - V_i``.
    """
    V, R = HknPolynomial.V, HknPolynomial.R()
    if s == 1:
        if a == n:
            return V(b)
        if b == n:
            return V(a)
        return V(a) + V(b) + R
    if a == n:
        return V(b) + R
    if b == n:
        return -(V(a) + R)
    return V(b) - V(a)


def label_to_hkn(label: NiceLabel, n: int) -> HknPolynomial:
    p = HknPolynomial.constant(1)
    for a, b, s in label.star_decomposition():
        p = p * elementary_to_hkn(a, b, s, n)
    return p


def to_hkn(x: RingElement) -> HknPolynomial:
    out = HknPolynomial()
    n = x.L.n
    for label, c in x.terms.items():
        out = out + label_to_hkn(label, n) * c
    return out


NormalForm = dict[int, QuotientVector]


def normal_form(x: RingElement) -> NormalForm:
    return hkn_ring.graded_basis(x.L).reduce(to_hkn(x))


def equal_in_ring(x: RingElement, y: RingElement) -> bool:
    return not normal_form(x - y)


def sigma_sum(H: int, L: LengthVector) -> RingElement:
    """``sum (S n) * (-Ch(n))^(|H - S| - 1)`` over ``S < H`` with ``S + {n}`` short."""
    n = L.n
    last = 1 << (n - 1)
    minus_ch = -default_chern(n, L)
    total = RingElement(L)
    size = bin(H).count("1")
    S = H
    while True:
        S = (S - 1) & H
        if L.is_short(S | last):
            term = RingElement.from_label(L, NiceLabel.build([(S | last, 0)])[0])
            term = term * (minus_ch ** (size - bin(S).count("1") - 1))
            total = total + term
        if S == 0:
            break
    return total


def sigma_identity_check(H: int, L: LengthVector) -> bool:
    if H >> (L.n - 1):
        raise ValueError("H must avoid the last index")
    if bin(H).count("1") < 2:
        raise ValueError("H needs at least two indices")
    target = RingElement.from_label(L, NiceLabel.build([(H, 0)])[0])
    return equal_in_ring(sigma_sum(H, L), target)


def from_hkn(p: HknPolynomial, L: LengthVector) -> RingElement:
    """Evaluate a polynomial at ``V_i = (n i)``, ``R = (n ~1) - (n 1)``."""
    n = L.n
    R = RingElement.elementary(L, n, 1, -1) - RingElement.elementary(L, n, 1, 1)
    out = RingElement(L)
    for (r, v), c in p.terms.items():
        term = R ** r
        for i in indices_of(v):
            term = term * RingElement.elementary(L, n, i, 1)
        out = out + term * c
    return out


def dictionary_U(i: int, L: LengthVector) -> RingElement:
    return RingElement.elementary(L, L.n, i, -1)
