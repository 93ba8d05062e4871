"""The presentation by perfect manifolds (labels without overlines).

Products are computed by the case analysis against one elementary factor
``(i j)`` at a time:

1. i or j is free: append j to the block of i (or open a new block);
2. i and j lie in different blocks: merge them;
3. i and j share a block B: use the four-term relation
   ``(i j) = (i x) + (j y) - (x y)`` with x, y outside B and not in a common
   block, which reduces to cases 1 and 2.

``phi`` embeds perfect labels into the nice ring unchanged; ``psi`` rewrites
overlined factors as ``(I).(J k) - (I k).(J)``.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Mapping

from .labels import LabelError, NiceLabel, PerfectLabel, label_sort_key
from .lengths import LengthVector, indices_of, lowest_index, mask_of, popcount
from .nice_ring import RingElement, equal_in_ring, format_combination, normal_form


class PerfectElement:
    __slots__ = ("L", "terms")

    def __init__(self, L: LengthVector, terms: Mapping[PerfectLabel, int] | None = None):
        self.L = L
        out: dict[PerfectLabel, int] = {}
        for label, c in (terms or {}).items():
            if c and _admissible(label, L):
                out[label] = out.get(label, 0) + c
        self.terms = {k: v for k, v in out.items() if v}

    @classmethod
    def unit(cls, L: LengthVector) -> "PerfectElement":
        return cls(L, {PerfectLabel(): 1})

    @classmethod
    def from_blocks(cls, L: LengthVector, *blocks, coeff: int = 1) -> "PerfectElement":
        return cls(L, {PerfectLabel.build(mask_of(b) for b in blocks): coeff})

    def _check(self, other):
        if other.L != self.L:
            raise ValueError("perfect elements over different length vectors")

    def __add__(self, other):
        if isinstance(other, int):
            other = PerfectElement.unit(self.L) * other
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return PerfectElement(self.L, out)

    __radd__ = __add__

    def __neg__(self):
        return PerfectElement(self.L, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return PerfectElement(self.L, {k: v * other for k, v in self.terms.items()})
        return perfect_product(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = PerfectElement.unit(self.L)
        for _ in range(k):
            out = perfect_product(out, self)
        return out

    def __eq__(self, other):
        return isinstance(other, PerfectElement) and self.L == other.L and self.terms == other.terms

    def __hash__(self):
        return hash((self.L, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda t: label_sort_key(t[0])))

    def __str__(self):
        return format_combination(self)

    def __repr__(self):
        return f"PerfectElement({self})"


def _admissible(label: PerfectLabel, L: LengthVector) -> bool:
    if label.codim() > L.n - 3:
        return False
    return not any(L.is_long(b) for b in label.blocks)


def phi(x: PerfectElement) -> RingElement:
    return RingElement(x.L, {label.as_nice(): c for label, c in x.terms.items()})


def perfect_normal_form(x: PerfectElement):
    return normal_form(phi(x))


def equal_perfect(x: PerfectElement, y: PerfectElement) -> bool:
    return equal_in_ring(phi(x), phi(y))


# ---------------------------------------------------------------------------
# products


def _times_edge(label: PerfectLabel, i: int, j: int, L: LengthVector, out: dict, coeff: int) -> None:
    """Accumulate ``coeff * label * (i j)`` into ``out``."""
    if label.codim() + 1 > L.n - 3:
        return
    bi, bj = label.block_of(i), label.block_of(j)
    bit_i, bit_j = 1 << (i - 1), 1 << (j - 1)
    if bi and bi == bj:
        x, y = _four_term_partners(label, bi, L.n)
        # (i j) = (i x) + (j y) - (x y)
        _times_edge(label, i, x, L, out, coeff)
        _times_edge(label, j, y, L, out, coeff)
        _times_edge(label, x, y, L, out, -coeff)
        return
    merged = (bi or bit_i) | (bj or bit_j)
    blocks = [b for b in label.blocks if b not in (bi, bj)] + [merged]
    new = PerfectLabel.build(blocks)
    if not L.is_long(merged):
        out[new] += coeff


def _four_term_partners(label: PerfectLabel, block: int, n: int) -> tuple[int, int]:
    """Smallest x, y outside ``block`` that do not share a block."""
    outside = [k for k in range(1, n + 1) if not block >> (k - 1) & 1]
    for x in outside:
        bx = label.block_of(x)
        for y in outside:
            if y != x and not (bx and bx == label.block_of(y)):
                return x, y
    raise LabelError("no admissible partners for the four-term rewrite")


def label_times_label(a: PerfectLabel, b: PerfectLabel, L: LengthVector) -> dict[PerfectLabel, int]:
    current: dict[PerfectLabel, int] = {a: 1}
    for i, j, _ in b.star_decomposition():
        nxt: dict[PerfectLabel, int] = defaultdict(int)
        for label, c in current.items():
            _times_edge(label, i, j, L, nxt, c)
        current = {k: v for k, v in nxt.items() if v}
    return current


def perfect_product(a: PerfectElement, b: PerfectElement) -> PerfectElement:
    a._check(b)
    out: dict[PerfectLabel, int] = defaultdict(int)
    for la, ca in a.terms.items():
        for lb, cb in b.terms.items():
            for label, c in label_times_label(la, lb, a.L).items():
                out[label] += ca * cb * c
    return PerfectElement(a.L, out)


def reference_product(a: PerfectElement, b: PerfectElement) -> PerfectElement:
    """Slow route: ``psi(phi(a) * phi(b))`` through the nice ring."""
    return psi(phi(a) * phi(b))


# ---------------------------------------------------------------------------
# psi: nice -> perfect


def smallest_outside(mask: int, n: int) -> int | None:
    for k in range(1, n + 1):
        if not mask >> (k - 1) & 1:
            return k
    return None


def psi_elementary(i: int, j: int, k: int, L: LengthVector) -> PerfectElement:
    """``psi(i ~j) = (j k) - (i k)``."""
    if len({i, j, k}) != 3:
        raise ValueError("psi(i ~j) needs three distinct indices")
    return PerfectElement.from_blocks(L, [j, k]) - PerfectElement.from_blocks(L, [i, k])


def psi_factor(I: int, J: int, L: LengthVector, k: int | None = None) -> PerfectElement:
    """``psi(I ~J) = (I).(J k) - (I k).(J)`` for k outside ``I | J``.

    Works on the blocks as given (no reorientation), so
    ``psi_factor(I, J) + psi_factor(J, I) == 0`` holds term by term.
    """
    if I & J:
        raise LabelError("blocks overlap")
    if not J:
        return PerfectElement(L, {PerfectLabel.build([I]): 1})
    if not I:
        # (~J) alone is -(J) with the roles swapped
        return -psi_factor(J, 0, L)
    if k is None:
        k = smallest_outside(I | J, L.n)
        if k is None:
            # I | J = [n]: codim n - 1 exceeds the dimension
            return PerfectElement(L)
    elif (I | J) >> (k - 1) & 1:
        raise ValueError(f"k={k} must lie outside the factor")
    kb = 1 << (k - 1)
    return (
        PerfectElement(L, {PerfectLabel.build([I, J | kb]): 1})
        - PerfectElement(L, {PerfectLabel.build([I | kb, J]): 1})
    )


def psi_label(label: NiceLabel, L: LengthVector) -> PerfectElement:
    out = PerfectElement.unit(L)
    for I, J in label.factors:
        out = perfect_product(out, psi_factor(I, J, L))
        if not out:
            break
    return out


def psi(x: RingElement) -> PerfectElement:
    out = PerfectElement(x.L)
    for label, c in x.terms.items():
        out = out + psi_label(label, x.L) * c
    return out


def psi_phi_roundtrip_check(x: PerfectElement) -> bool:
    return equal_perfect(psi(phi(x)), x)
