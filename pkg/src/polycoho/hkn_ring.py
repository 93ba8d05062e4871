"""Polynomial presentation of the cohomology ring and its normal forms.

The ring is ``Z[R, V_1..V_{n-1}, U_1..U_{n-1}]`` modulo

1. ``U_i - V_i - R``
2. ``U_i V_i``
3. ``prod_{i in I} V_i`` for ``I`` in ``[n-1]`` with ``I + {n}`` long
4. ``sum_{S < H, S + {n} short} V_S R^(|H - S| - 1)`` for long ``H`` in ``[n-1]``

``U_i`` is eliminated through (1), after which (2) becomes the local rewrite
``V_i^2 = -R V_i``.  Every polynomial is therefore kept square-free in the
``V``'s, and monomials are pairs ``(r_exp, v_mask)``.

Normal forms come from an integer row echelon form of the degree-``d`` slice
of the ideal.  All pivots must be 1; the non-pivot monomials then form a
Z-basis of the quotient in degree ``d`` and reduction is plain back
substitution.  Degrees are complex degrees (cohomological degree / 2).
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

from .lengths import ChamberSignature, LengthVector, indices_of, mask_of, popcount

Monomial = tuple[int, int]  # (exponent of R, mask of V indices)


class PresentationError(RuntimeError):
    """The relation lattice has a non-unit pivot (quotient not visibly free)."""


class HknPolynomial:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        self.terms: dict[Monomial, int] = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def constant(cls, c: int) -> "HknPolynomial":
        return cls({(0, 0): c})

    @classmethod
    def R(cls) -> "HknPolynomial":
        return cls({(1, 0): 1})

    @classmethod
    def V(cls, i: int) -> "HknPolynomial":
        return cls({(0, 1 << (i - 1)): 1})

    @classmethod
    def U(cls, i: int) -> "HknPolynomial":
        return cls({(0, 1 << (i - 1)): 1, (1, 0): 1})

    @classmethod
    def V_prod(cls, mask: int, r_exp: int = 0, coeff: int = 1) -> "HknPolynomial":
        return cls({(r_exp, mask): coeff})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = HknPolynomial.constant(other)
        return isinstance(other, HknPolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "HknPolynomial") -> "HknPolynomial":
        if isinstance(other, int):
            other = HknPolynomial.constant(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return HknPolynomial(out)

    __radd__ = __add__

    def __neg__(self) -> "HknPolynomial":
        return HknPolynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "HknPolynomial") -> "HknPolynomial":
        return self + (-other)

    def __rsub__(self, other) -> "HknPolynomial":
        return (-self) + other

    def __mul__(self, other) -> "HknPolynomial":
        if isinstance(other, int):
            return HknPolynomial({m: c * other for m, c in self.terms.items()})
        return multiply(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "HknPolynomial":
        out = HknPolynomial.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def homogeneous_parts(self) -> dict[int, "HknPolynomial"]:
        parts: dict[int, dict[Monomial, int]] = {}
        for (r, v), c in self.terms.items():
            parts.setdefault(r + popcount(v), {})[(r, v)] = c
        return {d: HknPolynomial(t) for d, t in parts.items()}

    def __repr__(self) -> str:
        return format_polynomial(self)


def monomial_degree(m: Monomial) -> int:
    return m[0] + popcount(m[1])


def multiply(p: HknPolynomial, q: HknPolynomial) -> HknPolynomial:
    """Product with ``V_i^2 -> -R V_i`` applied on the fly."""
    out: dict[Monomial, int] = {}
    for (r1, v1), c1 in p.terms.items():
        for (r2, v2), c2 in q.terms.items():
            overlap = popcount(v1 & v2)
            key = (r1 + r2 + overlap, v1 | v2)
            c = c1 * c2
            out[key] = out.get(key, 0) + (-c if overlap & 1 else c)
    return HknPolynomial(out)


def format_polynomial(p: HknPolynomial) -> str:
    if not p.terms:
        return "0"
    pieces = []
    for (r, v), c in sorted(p.terms.items(), key=lambda t: _display_key(t[0])):
        factors = []
        if r == 1:
            factors.append("R")
        elif r > 1:
            factors.append(f"R^{r}")
        factors += [f"V{i}" for i in indices_of(v)]
        body = "*".join(factors)
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if not body:
            term = str(mag)
        elif mag == 1:
            term = body
        else:
            term = f"{mag}*{body}"
        pieces.append((sign, term))
    first_sign, first = pieces[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, term in pieces[1:]:
        text += f" {sign} {term}"
    return text


def _display_key(m: Monomial):
    r, v = m
    return (r + popcount(v), popcount(v), indices_of(v), r)


# ---------------------------------------------------------------------------
# ideal generators


def ideal_generators(L: LengthVector, minimal_only: bool = False) -> list[HknPolynomial]:
    """Generators of families (3) and (4); families (1), (2) are built in."""
    n = L.n
    last = 1 << (n - 1)
    gens = []
    product_sets = [I for I in range(1 << (n - 1)) if L.is_long(I | last)]
    if minimal_only:
        pool = set(product_sets)
        product_sets = [
            I for I in product_sets
            if not any((I & ~(1 << k)) in pool for k in range(n - 1) if I >> k & 1)
        ]
    for I in product_sets:
        gens.append(HknPolynomial.V_prod(I))
    for H in range(1 << (n - 1)):
        if not L.is_long(H):
            continue
        size = popcount(H)
        terms = {}
        for S in _proper_submasks(H):
            if L.is_short(S | last):
                terms[(size - popcount(S) - 1, S)] = 1
        gens.append(HknPolynomial(terms))
    return gens


def _proper_submasks(H: int):
    S = (H - 1) & H
    while True:
        yield S
        if S == 0:
            return
        S = (S - 1) & H


# ---------------------------------------------------------------------------
# integer echelon form


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


class IntegerEchelon:
    """Row echelon form over Z, built one row at a time.

    Rows are sparse dicts ``column -> value``; a smaller column number has
    higher elimination priority.  Every stored row has a positive leading
    entry (its pivot), and no two rows share a pivot column.
    """

    def __init__(self):
        self.rows: dict[int, dict[int, int]] = {}

    def insert(self, row: Mapping[int, int]) -> None:
        row = {c: v for c, v in row.items() if v}
        while row:
            p = min(row)
            a = row[p]
            pivot_row = self.rows.get(p)
            if pivot_row is None:
                self.rows[p] = row if a > 0 else {c: -v for c, v in row.items()}
                return
            b = pivot_row[p]
            if a % b == 0:
                q = a // b
                row = _axpy(row, -q, pivot_row)
                continue
            # unimodular combination: new pivot row gets gcd(a, b)
            g, x, y = _xgcd(b, a)
            new_pivot = _lincomb(x, pivot_row, y, row)
            residue = _lincomb(a // g, pivot_row, -(b // g), row)
            if new_pivot[p] < 0:
                new_pivot = {c: -v for c, v in new_pivot.items()}
            self.rows[p] = new_pivot
            row = residue

    def pivots(self) -> dict[int, int]:
        return {p: r[p] for p, r in self.rows.items()}

    def reduce(self, vec: Mapping[int, int]) -> dict[int, int]:
        """Eliminate pivot columns from ``vec`` (requires unit pivots)."""
        vec = {c: v for c, v in vec.items() if v}
        for p in sorted(self.rows):
            v = vec.get(p)
            if not v:
                continue
            row = self.rows[p]
            if v % row[p]:
                raise PresentationError(f"pivot {row[p]} does not divide {v}")
            vec = _axpy(vec, -(v // row[p]), row)
        return vec


def _axpy(y: dict[int, int], a: int, x: Mapping[int, int]) -> dict[int, int]:
    out = dict(y)
    for c, v in x.items():
        s = out.get(c, 0) + a * v
        if s:
            out[c] = s
        else:
            out.pop(c, None)
    return out


def _lincomb(a: int, x: Mapping[int, int], b: int, y: Mapping[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for c, v in x.items():
        out[c] = a * v
    for c, v in y.items():
        out[c] = out.get(c, 0) + b * v
    return {c: v for c, v in out.items() if v}


# ---------------------------------------------------------------------------
# graded basis


def degree_monomials(n: int, d: int) -> list[Monomial]:
    """All square-free monomials ``R^a V_S`` of degree d, in elimination order.

    Fewer V factors come first (pure powers of R are eliminated before
    anything else), then lexicographic on the sorted V indices.  With this
    order every chamber up to n = 7 has unit pivots; the reverse order does
    not (``R^2`` is three times the top class of the pentagon chamber).
    """
    out = []
    for s in range(0, min(d, n - 1) + 1):
        for combo in combinations(range(1, n), s):
            out.append((d - s, mask_of(combo)))
    return out


@dataclass
class DegreeSlice:
    degree: int
    monomials: list[Monomial]
    column: dict[Monomial, int]
    echelon: IntegerEchelon
    basis_columns: list[int]

    @property
    def rank(self) -> int:
        return len(self.basis_columns)

    @property
    def basis(self) -> list[Monomial]:
        return [self.monomials[c] for c in self.basis_columns]


@dataclass(frozen=True)
class QuotientVector:
    degree: int
    coords: tuple[int, ...]

    def is_zero(self) -> bool:
        return not any(self.coords)


@dataclass
class GradedBasis:
    """Per-degree bases of the quotient ring for one chamber."""

    L: LengthVector
    slices: list[DegreeSlice] = field(default_factory=list)
    minimal_only: bool = False

    @property
    def top(self) -> int:
        return self.L.n - 3

    def betti(self) -> list[int]:
        return [s.rank for s in self.slices[: self.top + 1]]

    def slice(self, d: int) -> DegreeSlice:
        while d >= len(self.slices):
            self.slices.append(_build_slice(self.L, len(self.slices), self._generators))
        return self.slices[d]

    def reduce(self, p: HknPolynomial) -> dict[int, QuotientVector]:
        """Normal form of every homogeneous component; zero components dropped."""
        out = {}
        for d, part in sorted(p.homogeneous_parts().items()):
            qv = self.reduce_homogeneous(part, d)
            if not qv.is_zero():
                out[d] = qv
        return out

    def reduce_homogeneous(self, p: HknPolynomial, d: int) -> QuotientVector:
        sl = self.slice(d)
        vec = {sl.column[m]: c for m, c in p.terms.items()}
        rest = sl.echelon.reduce(vec)
        return QuotientVector(d, tuple(rest.get(c, 0) for c in sl.basis_columns))

    def lift(self, qv: QuotientVector) -> HknPolynomial:
        sl = self.slice(qv.degree)
        return HknPolynomial({m: c for m, c in zip(sl.basis, qv.coords)})

    def to_json(self) -> str:
        return json.dumps(
            [
                {
                    "degree": s.degree,
                    "rank": s.rank,
                    "basis": [[r, list(indices_of(v))] for r, v in s.basis],
                }
                for s in self.slices[: self.top + 1]
            ]
        )

    def __post_init__(self):
        self._generators = ideal_generators(self.L, self.minimal_only)
        for d in range(self.top + 2):
            self.slice(d)


def _build_slice(L: LengthVector, d: int, generators: list[HknPolynomial]) -> DegreeSlice:
    n = L.n
    monomials = degree_monomials(n, d)
    column = {m: k for k, m in enumerate(monomials)}
    ech = IntegerEchelon()
    for g in generators:
        for gd, part in g.homogeneous_parts().items():
            if gd > d:
                continue
            for m in degree_monomials(n, d - gd):
                prod = multiply(part, HknPolynomial({m: 1}))
                if prod:
                    ech.insert({column[k]: c for k, c in prod.terms.items()})
    bad = {p: v for p, v in ech.pivots().items() if v != 1}
    if bad:
        raise PresentationError(
            f"non-unit pivots {sorted(bad.values())} in degree {d} for lengths {L}"
        )
    basis_columns = [k for k in range(len(monomials)) if k not in ech.rows]
    # present the basis in ascending order (fewest V factors first)
    basis_columns.sort(key=lambda k: _display_key(monomials[k]))
    return DegreeSlice(d, monomials, column, ech, basis_columns)


_cache: dict[tuple[bytes, int, bool], GradedBasis] = {}
_cache_lock = threading.Lock()


def graded_basis(L: LengthVector, minimal_only: bool = False) -> GradedBasis:
    """Graded basis, cached per chamber signature.

    Reading a cached basis needs no lock; construction is serialized.
    """
    L.check_usable()
    key = (L.chamber_signature().key(), L.n, minimal_only)
    basis = _cache.get(key)
    if basis is None:
        with _cache_lock:
            basis = _cache.get(key)
            if basis is None:
                basis = GradedBasis(L, minimal_only=minimal_only)
                _cache[key] = basis
    return basis


def betti(L: LengthVector) -> list[int]:
    return graded_basis(L).betti()


def reduce(p: HknPolynomial, basis: GradedBasis) -> dict[int, QuotientVector]:
    return basis.reduce(p)


def chern_hkn(i: int, n: int) -> HknPolynomial:
    """First Chern class of the i-th edge bundle: ``2 V_i + R`` or ``-R`` for i = n."""
    if i == n:
        return -HknPolynomial.R()
    return HknPolynomial.V(i) * 2 + HknPolynomial.R()
