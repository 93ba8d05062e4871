"""Length vectors of flexible polygons, long/short subsets and chambers.

Index subsets of ``[n] = {1, ..., n}`` are stored as integer bitmasks with
index ``i`` living in bit ``i - 1``.  Helpers at the bottom of this module
convert between masks and sorted index tuples.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable


class LengthError(ValueError):
    """Raised for malformed, non-generic or empty-moduli length vectors."""


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        if i < 1:
            raise ValueError(f"index {i} out of range")
        mask |= 1 << (i - 1)
    return mask


def indices_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def lowest_index(mask: int) -> int:
    """Smallest index contained in a nonempty mask."""
    return (mask & -mask).bit_length()


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class LengthVector:
    """Positive integer bar lengths ``l_1, ..., l_n`` with ``n >= 4``."""

    lengths: tuple[int, ...]

    def __post_init__(self):
        lengths = tuple(int(x) for x in self.lengths)
        object.__setattr__(self, "lengths", lengths)
        if len(lengths) < 4:
            raise LengthError(f"need at least 4 edges, got {len(lengths)}")
        if any(x <= 0 for x in lengths):
            raise LengthError(f"lengths must be positive integers: {lengths}")

    @classmethod
    def parse(cls, text: str) -> "LengthVector":
        try:
            values = tuple(int(tok) for tok in text.replace(" ", "").split(","))
        except ValueError:
            raise LengthError(f"cannot parse lengths {text!r}") from None
        return cls(values)

    @property
    def n(self) -> int:
        return len(self.lengths)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def __str__(self) -> str:
        return ",".join(map(str, self.lengths))

    def perimeter(self) -> int:
        return sum(self.lengths)

    def subset_sum(self, mask: int) -> int:
        return self._sums[mask]

    def is_long(self, mask: int) -> bool:
        # integer form of  sum_I l_i > perimeter / 2
        return 2 * self._sums[mask] > self._sums[-1]

    def is_short(self, mask: int) -> bool:
        return not self.is_long(mask)

    def subset_sums(self) -> list[int]:
        """All ``2**n`` subset sums, indexed by mask."""
        return list(self._sums)

    @cached_property
    def _sums(self) -> tuple[int, ...]:
        sums = [0]
        for l in self.lengths:
            sums += [s + l for s in sums]
        return tuple(sums)

    def is_generic(self) -> bool:
        """True iff no signed sum ``sum_{i in I} +-l_i`` over nonempty I vanishes.

        A vanishing signed sum is the same thing as two distinct subsets
        with equal sums (split I by sign, strip the common part), so it is
        enough to check that all ``2**n`` subset sums are distinct.
        """
        return len(set(self._sums)) == len(self._sums)

    def is_off_walls(self) -> bool:
        """True iff no subset sum equals its complement's sum."""
        total = self._sums[-1]
        return not any(2 * s == total for s in self._sums)

    def is_nonempty(self) -> bool:
        return not any(self.is_long(1 << k) for k in range(self.n))

    def long_subsets(self) -> list[int]:
        total = self._sums[-1]
        return [m for m, s in enumerate(self._sums) if 2 * s > total]

    def chamber_signature(self) -> "ChamberSignature":
        """Long subsets of ``[n]``; defined for every vector off the walls."""
        if not self.is_off_walls():
            raise LengthError(f"lengths {self} lie on a wall: {self.wall_witness()}")
        return ChamberSignature(self.n, frozenset(self.long_subsets()))

    def generic_representative(self) -> "LengthVector":
        """A generic vector in the same chamber.

        ``K * l_i + 2**(i-1)`` with ``K = 2**n``: the perturbation is a
        nonzero signed sum of distinct powers of two, smaller than K, so it
        neither vanishes nor changes the sign of any nonzero signed sum.
        """
        if self.is_generic():
            return self
        if not self.is_off_walls():
            raise LengthError(f"lengths {self} lie on a wall: {self.wall_witness()}")
        K = 1 << self.n
        return LengthVector(tuple(K * l + (1 << k) for k, l in enumerate(self.lengths)))

    def scaled(self, factor: int) -> "LengthVector":
        return LengthVector(tuple(factor * l for l in self.lengths))

    def check_usable(self) -> None:
        """Raise LengthError unless the vector is generic with nonempty moduli."""
        if not self.is_nonempty():
            raise LengthError(f"moduli space empty for lengths {self}")
        if not self.is_generic():
            raise LengthError(f"lengths {self} are not generic: {self.wall_witness()}")

    def wall_witness(self) -> str:
        """Describe one vanishing signed sum, or '' for generic vectors."""
        seen: dict[int, int] = {}
        for mask, s in enumerate(self._sums):
            if s in seen:
                a, b = seen[s], mask
                common = a & b
                a, b = a & ~common, b & ~common
                plus = "+".join(f"l{i}" for i in indices_of(a)) or "0"
                minus = "+".join(f"l{i}" for i in indices_of(b))
                return f"{plus} = {minus}"
            seen[s] = mask
        return ""


@dataclass(frozen=True)
class ChamberSignature:
    """The collection of long subsets of ``[n]``; constant on each chamber."""

    n: int
    long_sets: frozenset[int]

    def is_long(self, mask: int) -> bool:
        return mask in self.long_sets

    def is_empty_moduli(self) -> bool:
        return any((1 << k) in self.long_sets for k in range(self.n))

    def minimal_long_sets(self) -> list[int]:
        return sorted(
            m for m in self.long_sets
            if not any((m & ~(1 << k)) in self.long_sets for k in range(self.n) if m >> k & 1)
        )

    def key(self) -> bytes:
        bits = bytearray((1 << self.n) // 8 + 1)
        for m in self.long_sets:
            bits[m >> 3] |= 1 << (m & 7)
        return bytes(bits)


MAX_RETRIES = 10_000


def random_generic(n: int, bound: int, seed: int, retries: int = MAX_RETRIES) -> LengthVector:
    """Sample a generic length vector with entries in ``1..bound``."""
    if n < 4:
        raise LengthError("need n >= 4")
    if bound < n:
        raise LengthError("bound must be at least n")
    rng = random.Random(seed)
    for _ in range(retries):
        L = LengthVector(tuple(rng.randint(1, bound) for _ in range(n)))
        if L.is_generic() and L.is_nonempty():
            return L
    raise LengthError(f"no generic nonempty {n}-vector found in {retries} tries with bound {bound}")
