"""Exhaustive chamber scan over small integer length vectors."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import comb

from . import hkn_ring
from .lengths import LengthError, LengthVector

MAX_CANDIDATES = 5_000_000


@dataclass
class Chamber:
    found: LengthVector  # first sorted vector hitting the chamber
    representative: LengthVector  # generic vector in the same chamber
    betti: list[int]


def scan(n: int, bound: int, with_betti: bool = True) -> list[Chamber]:
    """One entry per chamber with nonempty moduli, up to reordering the edges.

    Candidates are nondecreasing vectors with entries in ``1..bound`` lying
    off every wall; each new chamber gets a generic representative.
    """
    if n < 4:
        raise LengthError("need n >= 4")
    if bound < 1:
        raise LengthError("bound must be positive")
    count = comb(bound + n - 1, n)
    if count > MAX_CANDIDATES:
        raise LengthError(f"scan budget exceeded: {count} candidates (limit {MAX_CANDIDATES})")
    seen = set()
    out = []
    for v in combinations_with_replacement(range(1, bound + 1), n):
        total = sum(v)
        if 2 * v[-1] >= total:
            continue
        L = LengthVector(v)
        if not L.is_off_walls():
            continue
        key = frozenset(L.long_subsets())
        if key in seen:
            continue
        seen.add(key)
        rep = L.generic_representative()
        betti = hkn_ring.betti(rep) if with_betti else []
        out.append(Chamber(L, rep, betti))
    return out
