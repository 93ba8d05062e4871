"""Random labels and ring elements for property checks."""

from __future__ import annotations

import random

from .labels import NiceLabel, PerfectLabel
from .lengths import LengthVector, mask_of
from .nice_ring import RingElement
from .perfect_ring import PerfectElement


def random_nice_label(rng: random.Random, n: int, max_codim: int | None = None) -> tuple[NiceLabel, int]:
    """Disjoint random factors of total codim at most ``max_codim`` (default n - 3)."""
    if max_codim is None:
        max_codim = n - 3
    order = list(range(1, n + 1))
    rng.shuffle(order)
    budget = rng.randint(0, max(max_codim, 0))
    factors = []
    pos = 0
    while budget > 0 and pos < n - 1:
        size = rng.randint(2, min(budget + 1, n - pos))
        block = order[pos:pos + size]
        pos += size
        budget -= size - 1
        I = [block[0]] + [i for i in block[1:] if rng.random() < 0.5]
        J = [i for i in block if i not in I]
        factors.append((mask_of(I), mask_of(J)))
    return NiceLabel.build(factors)


def random_element(rng: random.Random, L: LengthVector, terms: int = 2, max_codim: int | None = None) -> RingElement:
    out = RingElement(L)
    for _ in range(terms):
        label, sign = random_nice_label(rng, L.n, max_codim)
        out = out + RingElement(L, {label: sign * rng.choice([-2, -1, 1, 1, 2])})
    return out


def random_perfect(rng: random.Random, L: LengthVector, terms: int = 2, max_codim: int | None = None) -> PerfectElement:
    out = PerfectElement(L)
    for _ in range(terms):
        label, _ = random_nice_label(rng, L.n, max_codim)
        blocks = PerfectLabel.build(I | J for I, J in label.factors)
        out = out + PerfectElement(L, {blocks: rng.choice([-2, -1, 1, 1, 2])})
    return out


def random_elementary(rng: random.Random, n: int) -> tuple[int, int, int]:
    a, b = rng.sample(range(1, n + 1), 2)
    return a, b, rng.choice([1, -1])
