"""Identity checks run by ``polycoho verify``.

Each check returns a :class:`CheckResult`.  Checks whose indices do not fit
in ``[n]`` are reported as skipped rather than passed.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Callable, Iterator

from . import hkn_ring
from .labels import NiceLabel
from .lengths import LengthVector, mask_of, popcount
from .nice_ring import (
    RingElement,
    chern,
    cup,
    elementary_product,
    equal_in_ring,
    from_hkn,
    normal_form,
    random_fresh,
    sigma_identity_check,
    to_hkn,
)
from .perfect_ring import PerfectElement, perfect_product, phi, psi, psi_factor
from .sampling import random_element, random_perfect


@dataclass
class CheckResult:
    name: str
    status: str  # "pass", "fail" or "skip"
    detail: str = ""
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.status != "fail"

    def line(self) -> str:
        tag = self.status.upper()
        extra = f": {self.detail}" if self.detail else ""
        return f"{tag:4} {self.name}{extra} [{self.seconds:.2f}s]"


class Skip(Exception):
    pass


def E(L: LengthVector, *blocks, prune: bool = False) -> RingElement:
    return RingElement.from_blocks(L, *blocks, prune=prune)


def need(L: LengthVector, n: int) -> None:
    if L.n < n:
        raise Skip(f"needs n >= {n}")


def product_of(L: LengthVector, *labels: RingElement, prune: bool = False) -> RingElement:
    factors = []
    sign = 1
    for x in labels:
        (label, c), = x.terms.items()
        if c not in (1, -1):
            raise ValueError("expected a signed label")
        sign *= c
        factors += label.star_decomposition()
    return elementary_product(factors, L, prune=prune) * sign


# ---------------------------------------------------------------------------
# worked identities


def check_rule_examples(L):
    need(L, 6)
    bad = []
    cases = [
        ((([1, 2], []),), (([3, 4], []), ([5], [6])), (([1, 2], []), ([3, 4], []), ([5], [6])), 1),
        ((([1, 2, 3], []),), (([3, 4, 5], []),), (([1, 2, 3, 4, 5], []),), 1),
        ((([1, 2, 3], []),), (([3, 4], [5]),), (([1, 2, 3, 4], [5]),), 1),
        ((([1, 2], [3]),), (([4, 5], [3]),), (([1, 2, 4, 5], [3]),), -1),
    ]
    for a, b, c, sign in cases:
        got = product_of(L, E(L, *a), E(L, *b))
        if got != E(L, *c) * sign:
            bad.append(f"{E(L, *a)} * {E(L, *b)} gave {got}")
    return bad


def check_orthogonal_pair(L):
    bad = []
    for i, j in permutations(range(1, L.n + 1), 2):
        x = E(L, ([i, j], [])) * E(L, ([i], [j]))
        if x:
            bad.append(f"({i} {j})*({i} ~{j}) = {x}")
    return bad


def check_power(L):
    bad = []
    n = L.n
    for i, j in permutations(range(1, n + 1), 2):
        k = min(set(range(1, n + 1)) - {i, j})
        sq = product_of(L, E(L, ([i, j], [])), E(L, ([i, j], [])))
        if sq != E(L, ([i, j, k], [])) - E(L, ([i, j], [k])):
            bad.append(f"({i} {j})^2 = {sq}")
        sq = product_of(L, E(L, ([i], [j])), E(L, ([i], [j])))
        if sq != -E(L, ([i, k], [j])) + E(L, ([i], [j, k])):
            bad.append(f"({i} ~{j})^2 = {sq}")
        for kk in set(range(1, n + 1)) - {i, j}:
            ch = chern(i, kk, L)
            pos, opp = E(L, ([i, j], []), prune=True), E(L, ([i], [j]), prune=True)
            if not equal_in_ring(pos * pos, pos * ch) or not equal_in_ring(opp * opp, -(opp * ch)):
                bad.append(f"power rule with Ch({i}) via k={kk}")
    return bad


def check_chern_independence(L):
    bad = []
    n = L.n
    for i in range(1, n + 1):
        others = [k for k in range(1, n + 1) if k != i]
        base = chern(i, others[0], L)
        for k in others[1:]:
            if not equal_in_ring(base, chern(i, k, L)):
                bad.append(f"Ch({i}) via {others[0]} vs {k}")
        for j, k in permutations(others, 2):
            three = E(L, ([i, j], []), prune=True) + E(L, ([i, k], []), prune=True) - E(L, ([j, k], []), prune=True)
            if not equal_in_ring(base, three):
                bad.append(f"Ch({i}) != ({i} {j}) + ({i} {k}) - ({j} {k})")
    return bad


def check_four_term(L):
    bad = []
    for i, j, k, l in permutations(range(1, L.n + 1), 4):
        x = (E(L, ([i, j], [])) + E(L, ([k, l], [])) - E(L, ([j, k], [])) - E(L, ([i, l], [])))
        if normal_form(RingElement(L, x.terms)):
            bad.append(f"({i}{j})+({k}{l})-({j}{k})-({i}{l})")
    return bad


def check_worked_products(L):
    need(L, 7)
    bad = []
    got = product_of(L, E(L, ([1, 2, 3], [])), E(L, ([1, 2, 4], [])))
    want = E(L, ([1, 2, 3, 4, 5], [])) - E(L, ([1, 2, 3, 4], [5]))
    if got != want:
        bad.append(f"(123)*(124) = {got}")
    if L.n >= 8:
        got = product_of(L, *[E(L, ([1, 2], []))] * 4, E(L, ([5, 6], [])))
        if got != twelve_fourth_times_56(L):
            bad.append(f"(12)^4*(56) = {got}")
        x = E(L, ([1, 2], []), prune=True) ** 4 * E(L, ([5, 6], []), prune=True)
        if not equal_in_ring(x, RingElement(L, got.terms)):
            bad.append("(12)^4*(56) disagrees with the polynomial ring")
    return bad


def twelve_fourth_times_56(L):
    return (
        E(L, ([1, 2, 3, 4, 5, 6], []))
        - E(L, ([1, 2, 4, 5, 6], [3]))
        - E(L, ([1, 2, 3, 5, 6], [4]))
        - E(L, ([1, 2, 3, 4], [5, 6]))
        + E(L, ([1, 2, 5, 6], [3, 4]))
        + E(L, ([1, 2, 3], [4, 5, 6]))
        + E(L, ([1, 2, 4], [3, 5, 6]))
        - E(L, ([1, 2], [3, 4, 5, 6]))
    )


def check_sigma(L):
    bad = []
    n = L.n
    for size in range(2, n):
        for H in combinations(range(1, n), size):
            if not sigma_identity_check(mask_of(H), L):
                bad.append(f"H={H}")
    return bad


def check_dictionary(L):
    bad = []
    n = L.n
    # families (3) and (4) evaluated at V_i = (n i), R = (n ~1) - (n 1)
    for g in hkn_ring.ideal_generators(L):
        if normal_form(from_hkn(g, L)):
            bad.append(repr(g))
    # families (1) and (2) with U_i = (n ~i) as its own label
    for i in range(1, n):
        Ui = E(L, ([n], [i]), prune=True)
        Vi = E(L, ([n, i], []), prune=True)
        Rn = E(L, ([n], [1]), prune=True) - E(L, ([n, 1], []), prune=True)
        if normal_form(Ui - Vi - Rn) or normal_form(Ui * Vi):
            bad.append(f"label form of U{i}")
    basis = hkn_ring.graded_basis(L)
    for i in range(1, n + 1):
        k = 1 if i != 1 else 2
        want = basis.reduce(hkn_ring.chern_hkn(i, n))
        if normal_form(chern(i, k, L)) != want:
            bad.append(f"Ch({i}) image")
    return bad


def check_psi_relations(L):
    bad = []
    n = L.n
    P = lambda *b: PerfectElement.from_blocks(L, *b)
    m = lambda *ix: mask_of(ix)
    # (1) antisymmetry, term by term
    for I, J in [((1,), (2,)), ((1, 2), (3,)), ((1,), (2, 3))]:
        if max(I + J) < n and psi_factor(m(*I), m(*J), L) + psi_factor(m(*J), m(*I), L):
            bad.append(f"(1) for {I},{J}")
    # k-independence of psi(i ~j)
    for i, j in permutations(range(1, n + 1), 2):
        ks = [k for k in range(1, n + 1) if k not in (i, j)]
        first = P([j, ks[0]]) - P([i, ks[0]])
        for k in ks[1:]:
            if not equal_in_ring(phi(first), phi(P([j, k]) - P([i, k]))):
                bad.append(f"k-independence for ({i} ~{j})")
    # (2) products through a shared codirected index
    if n >= 6:
        pairs = [
            ((m(1), m(2)), (m(1), m(3)), (m(1), m(2, 3))),
            ((m(1, 2), m(3)), (m(1, 4), m(5)), (m(1, 2, 4), m(3, 5))),
        ]
        for (I1, J1), (I2, J2), (I, J) in pairs:
            lhs = psi_factor(I1, J1, L) * psi_factor(I2, J2, L)
            if not equal_in_ring(phi(lhs), phi(psi_factor(I, J, L))):
                bad.append("(2) shared index")
    # (3) long blocks
    for I in range(1, 1 << n):
        for J in _submasks(((1 << n) - 1) & ~I):
            if J and (L.is_long(I) or L.is_long(J)) and psi_factor(I, J, L):
                bad.append(f"(3) for {I},{J}")
                break
    # (4) and (5)
    for i, j in permutations(range(1, n + 1), 2):
        x = E(L, ([i, j], []), prune=True) * E(L, ([i], [j]), prune=True)
        y = perfect_product(P([i, j]), psi_factor(m(i), m(j), L))
        if psi(x) or normal_form(phi(y)):
            bad.append(f"(4) for {i},{j}")
        for k in range(1, n + 1):
            if k in (i, j):
                continue
            rel = (E(L, ([i, j], [])) - E(L, ([i], [j])) - E(L, ([i, k], [])) + E(L, ([i], [k])))
            if normal_form(phi(psi(RingElement(L, rel.terms)))):
                bad.append(f"(5) for {i},{j},{k}")
    return bad


def _submasks(mask: int) -> Iterator[int]:
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


# ---------------------------------------------------------------------------
# randomized suites


def check_oracle(L, rng, samples):
    basis = hkn_ring.graded_basis(L)
    bad = []
    for _ in range(samples):
        a, b = random_element(rng, L), random_element(rng, L)
        if normal_form(a * b) != basis.reduce(to_hkn(a) * to_hkn(b)):
            bad.append(f"{a} * {b}")
    return bad


def check_structure(L, rng, samples):
    bad = []
    for _ in range(samples):
        a, b, c = (random_element(rng, L, max_codim=max(1, (L.n - 3) // 2)) for _ in range(3))
        if a * b != b * a:
            bad.append(f"commutativity: {a}, {b}")
        if not equal_in_ring((a * b) * c, a * (b * c)):
            bad.append(f"associativity: {a}, {b}, {c}")
        if not equal_in_ring(a * b, cup(a, b, fresh=random_fresh(rng))):
            bad.append(f"fresh index: {a}, {b}")
    return bad


def check_perfect(L, rng, samples):
    bad = []
    for _ in range(samples):
        x, y = random_perfect(rng, L), random_perfect(rng, L)
        if psi(phi(x)) != x:
            bad.append(f"psi(phi({x}))")
        if not equal_in_ring(phi(x * y), phi(x) * phi(y)):
            bad.append(f"product {x} * {y}")
        z = random_element(rng, L)
        if not equal_in_ring(phi(psi(z)), z):
            bad.append(f"phi(psi({z}))")
    return bad


def check_topology(L):
    basis = hkn_ring.graded_basis(L)
    b = basis.betti()
    bad = []
    if b[0] != 1:
        bad.append(f"b0 = {b[0]}")
    if b != b[::-1]:
        bad.append(f"betti {b} not palindromic")
    if basis.slice(L.n - 2).rank != 0:
        bad.append("nonzero class above the top degree")
    return bad


def all_checks(L: LengthVector, seed: int = 0, samples: int = 50) -> list[tuple[str, Callable[[], list[str]]]]:
    rng = random.Random(seed)
    return [
        ("disjoint and shared-index product rules", lambda: check_rule_examples(L)),
        ("(ij)*(i~j) = 0", lambda: check_orthogonal_pair(L)),
        ("squares of (ij) and (i~j)", lambda: check_power(L)),
        ("Chern class: auxiliary index and three-term form", lambda: check_chern_independence(L)),
        ("four-term relation", lambda: check_four_term(L)),
        ("worked products (123)*(124) and (12)^4*(56)", lambda: check_worked_products(L)),
        ("Sigma(H) = (H) for all H in [n-1]", lambda: check_sigma(L)),
        ("dictionary V=(ni), U=(n~i), R and Chern images", lambda: check_dictionary(L)),
        ("psi kills the nice-ring relations", lambda: check_psi_relations(L)),
        (f"oracle equivalence on {samples} random pairs", lambda: check_oracle(L, rng, samples)),
        (f"commutativity/associativity/fresh index on {samples} triples", lambda: check_structure(L, rng, samples)),
        (f"psi/phi round trips and perfect products on {samples} samples", lambda: check_perfect(L, rng, samples)),
        ("freeness, b0 = 1, Poincare duality", lambda: check_topology(L)),
    ]


def run(L: LengthVector, seed: int = 0, samples: int = 50) -> list[CheckResult]:
    results = []
    for name, fn in all_checks(L, seed, samples):
        t = time.perf_counter()
        try:
            bad = fn()
            status, detail = ("fail", "; ".join(bad[:3]) + (f" (+{len(bad) - 3} more)" if len(bad) > 3 else "")) if bad else ("pass", "")
        except Skip as e:
            status, detail = "skip", str(e)
        except hkn_ring.PresentationError as e:
            status, detail = "fail", str(e)
        results.append(CheckResult(name, status, detail, time.perf_counter() - t))
    return results
