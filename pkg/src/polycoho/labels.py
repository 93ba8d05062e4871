"""Labels of nice and perfect submanifolds.

A nice factor ``(I ~J)`` freezes the edges of ``I`` codirected and those of
``J`` pointing the opposite way.  Swapping the two blocks reverses the
orientation, ``(I ~J) = -(J ~I)``, so every factor is stored with the
smallest index of ``I | J`` on the ``I`` side.  Factors on a single index
are the unit and are dropped.

Factors are ``(I_mask, J_mask)`` pairs; labels keep them sorted by their
smallest index.  Elementary factors, the building blocks of products, are
triples ``(a, b, s)`` meaning ``(a b)`` for ``s = +1`` and ``(a ~b)`` for
``s = -1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .lengths import indices_of, lowest_index, mask_of, popcount

Factor = tuple[int, int]
Elementary = tuple[int, int, int]


class LabelError(ValueError):
    pass


def canonicalize_factor(I: int, J: int) -> tuple[Factor | None, int]:
    """Return ``(factor, sign)``; ``factor`` is None for the unit."""
    if I & J:
        raise LabelError(f"blocks overlap in {indices_of(I & J)}")
    union = I | J
    if not union:
        raise LabelError("empty factor")
    if popcount(union) == 1:
        return None, 1
    if J & (union & -union):
        return (J, I), -1
    return (I, J), 1


@dataclass(frozen=True, order=True)
class NiceLabel:
    factors: tuple[Factor, ...] = ()

    @classmethod
    def build(cls, factors: Iterable[tuple[int, int]]) -> tuple["NiceLabel", int]:
        """Canonical label of a product of disjoint factors, with its sign."""
        sign = 1
        out = []
        used = 0
        for I, J in factors:
            if (I | J) & used:
                raise LabelError("factors of a label must be disjoint")
            used |= I | J
            f, s = canonicalize_factor(I, J)
            sign *= s
            if f is not None:
                out.append(f)
        out.sort(key=lambda f: lowest_index(f[0] | f[1]))
        return cls(tuple(out)), sign

    @classmethod
    def parse_blocks(cls, blocks: Iterable[tuple[Iterable[int], Iterable[int]]]) -> tuple["NiceLabel", int]:
        return cls.build((mask_of(I), mask_of(J)) for I, J in blocks)

    def codim(self) -> int:
        return sum(popcount(I | J) - 1 for I, J in self.factors)

    def support(self) -> int:
        m = 0
        for I, J in self.factors:
            m |= I | J
        return m

    def is_perfect(self) -> bool:
        return all(J == 0 for _, J in self.factors)

    def star_decomposition(self) -> list[Elementary]:
        """Elementary factors from each factor's root; their product is this label."""
        out = []
        for I, J in self.factors:
            root = lowest_index(I)
            out += [(root, i, 1) for i in indices_of(I) if i != root]
            out += [(root, j, -1) for j in indices_of(J)]
        return out

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return ".".join(format_factor(I, J) for I, J in self.factors)


def format_factor(I: int, J: int) -> str:
    toks = [str(i) for i in indices_of(I)] + [f"~{j}" for j in indices_of(J)]
    # print in index order, overlines inline
    toks.sort(key=lambda t: int(t.lstrip("~")))
    return "(" + " ".join(toks) + ")"


@dataclass(frozen=True, order=True)
class PerfectLabel:
    blocks: tuple[int, ...] = ()

    @classmethod
    def build(cls, blocks: Iterable[int]) -> "PerfectLabel":
        out = []
        used = 0
        for b in blocks:
            if b & used:
                raise LabelError("blocks of a perfect label must be disjoint")
            used |= b
            if popcount(b) >= 2:
                out.append(b)
        out.sort(key=lowest_index)
        return cls(tuple(out))

    def codim(self) -> int:
        return sum(popcount(b) - 1 for b in self.blocks)

    def support(self) -> int:
        m = 0
        for b in self.blocks:
            m |= b
        return m

    def block_of(self, i: int) -> int:
        """The block containing index i, or 0 if i is free."""
        bit = 1 << (i - 1)
        for b in self.blocks:
            if b & bit:
                return b
        return 0

    def as_nice(self) -> NiceLabel:
        return NiceLabel(tuple((b, 0) for b in self.blocks))

    def star_decomposition(self) -> list[Elementary]:
        return self.as_nice().star_decomposition()

    def __str__(self) -> str:
        if not self.blocks:
            return "1"
        return ".".join(format_factor(b, 0) for b in self.blocks)


def elementary_label(a: int, b: int, s: int) -> tuple[NiceLabel, int]:
    if s == 1:
        return NiceLabel.build([(mask_of([a, b]), 0)])
    return NiceLabel.build([(mask_of([a]), mask_of([b]))])


def label_sort_key(label: NiceLabel | PerfectLabel):
    """Order for printing: codimension, then the factor index lists."""
    if isinstance(label, PerfectLabel):
        parts = tuple((indices_of(b), ()) for b in label.blocks)
    else:
        parts = tuple((indices_of(I), indices_of(J)) for I, J in label.factors)
    return (label.codim(), parts)
