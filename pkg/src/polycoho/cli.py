"""Command line front end.

    polycoho multiply --lengths 3,5,6,7 "(1 2)*(1 ~2)"
    polycoho verify   --lengths 11,13,17,19,23
    polycoho betti    --lengths 3,5,6,7
    polycoho chambers -n 5 --bound 20
    polycoho basis    --lengths 3,5,6,7

Exit codes: 0 ok, 2 bad lengths, 3 parse error, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import hkn_ring, verify
from .chambers import scan
from .hkn_ring import HknPolynomial, format_polynomial
from .labels import NiceLabel
from .lengths import LengthError, LengthVector, indices_of
from .nice_ring import RingElement, default_chern, to_hkn
from .parser import BinOp, Chern, Gen, Label, Neg, Num, ParseError, Pow, parse
from .perfect_ring import PerfectElement, phi

EXIT_LENGTHS = 2
EXIT_PARSE = 3
EXIT_VERIFY = 4


def evaluate(expr, mode: str, L: LengthVector):
    """Evaluate a parsed expression in the ring selected by ``mode``."""
    if isinstance(expr, Num):
        return _unit(mode, L) * expr.value
    if isinstance(expr, Label):
        if mode == "nice":
            return RingElement.from_blocks(L, *expr.factors)
        return PerfectElement.from_blocks(L, *[I for I, _ in expr.factors])
    if isinstance(expr, Chern):
        return _chern(expr.index, mode, L)
    if isinstance(expr, Gen):
        if expr.name == "R":
            return HknPolynomial.R()
        return getattr(HknPolynomial, expr.name)(expr.index)
    if isinstance(expr, Neg):
        return -evaluate(expr.arg, mode, L)
    if isinstance(expr, Pow):
        return evaluate(expr.base, mode, L) ** expr.exp
    if isinstance(expr, BinOp):
        a, b = evaluate(expr.left, mode, L), evaluate(expr.right, mode, L)
        if expr.op == "+":
            return a + b
        if expr.op == "-":
            return a - b
        return a * b
    raise TypeError(f"unknown node {expr!r}")


def _unit(mode, L):
    if mode == "nice":
        return RingElement.unit(L)
    if mode == "perfect":
        return PerfectElement.unit(L)
    return HknPolynomial.constant(1)


def _chern(i: int, mode: str, L: LengthVector):
    if mode == "nice":
        return default_chern(i, L)
    if mode == "hkn":
        return hkn_ring.chern_hkn(i, L.n)
    j, k = [x for x in range(1, L.n + 1) if x != i][:2]
    P = lambda *b: PerfectElement.from_blocks(L, b)
    return P(i, j) + P(i, k) - P(j, k)


def compute(text: str, mode: str, L: LengthVector):
    """Parse, evaluate and return ``(value, hkn image)``."""
    value = evaluate(parse(text, mode, L.n), mode, L)
    if mode == "nice":
        image = to_hkn(value)
    elif mode == "perfect":
        image = to_hkn(phi(value))
    else:
        image = value
    return value, image


def json_payload(value, image: HknPolynomial, L: LengthVector):
    """``{degree, basis, coords, terms}``; a list of these if inhomogeneous."""
    basis = hkn_ring.graded_basis(L)
    parts = image.homogeneous_parts()
    terms_by_degree: dict[int, list] = {}
    if not isinstance(value, HknPolynomial):
        for label, c in value:
            terms_by_degree.setdefault(label.codim(), []).append({"label": str(label), "coeff": c})
    else:
        for (r, v), c in sorted(value.terms.items()):
            terms_by_degree.setdefault(r + len(indices_of(v)), []).append(
                {"label": format_polynomial(HknPolynomial({(r, v): 1})), "coeff": c}
            )
    degrees = sorted(set(parts) | set(terms_by_degree))
    out = []
    for d in degrees:
        sl = basis.slice(d)
        qv = basis.reduce_homogeneous(parts.get(d, HknPolynomial()), d)
        out.append({
            "degree": d,
            "basis": [[r, list(indices_of(v))] for r, v in sl.basis],
            "coords": list(qv.coords),
            "terms": terms_by_degree.get(d, []),
        })
    if not out:
        return {"degree": None, "basis": [], "coords": [], "terms": []}
    return out[0] if len(out) == 1 else out


def _lengths(args) -> LengthVector:
    L = LengthVector.parse(args.lengths)
    L.check_usable()
    return L


def cmd_multiply(args) -> int:
    L = _lengths(args)
    try:
        value, image = compute(args.expr, args.mode, L)
    except ParseError as e:
        print(f"parse error: {e.pretty()}", file=sys.stderr)
        return EXIT_PARSE
    if args.json:
        print(json.dumps(json_payload(value, image, L)))
        return 0
    if isinstance(value, HknPolynomial):
        print(format_polynomial(value))
        reduced = hkn_ring.graded_basis(L).reduce(value)
        print("normal form:", format_polynomial(_lift_all(reduced, L)))
    else:
        print(value)
        print("hkn:", format_polynomial(image))
    return 0


def _lift_all(reduced, L):
    basis = hkn_ring.graded_basis(L)
    out = HknPolynomial()
    for qv in reduced.values():
        out = out + basis.lift(qv)
    return out


def cmd_verify(args) -> int:
    L = _lengths(args)
    results = verify.run(L, seed=args.seed, samples=args.samples)
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.ok]
    print(f"{len(results) - len(failed)}/{len(results)} checks ok for lengths {L}")
    return EXIT_VERIFY if failed else 0


def cmd_betti(args) -> int:
    L = _lengths(args)
    b = hkn_ring.betti(L)
    print(" ".join(map(str, b)))
    coh = []
    for x in b:
        coh += [x, 0]
    print("cohomological:", " ".join(map(str, coh[:-1])))
    return 0


def cmd_chambers(args) -> int:
    chambers = scan(args.n, args.bound)
    if args.json:
        print(json.dumps([
            {"found": list(c.found.lengths), "representative": list(c.representative.lengths), "betti": c.betti}
            for c in chambers
        ]))
        return 0
    for c in chambers:
        print(f"{str(c.found):<24} {str(c.representative):<40} {' '.join(map(str, c.betti))}")
    print(f"{len(chambers)} chambers")
    return 0


def cmd_basis(args) -> int:
    L = _lengths(args)
    print(hkn_ring.graded_basis(L).to_json())
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polycoho", description="Cohomology rings of polygon spaces.")
    sub = p.add_subparsers(dest="command", required=True)

    def lengths_arg(sp):
        sp.add_argument("--lengths", required=True, help="comma separated positive integers, e.g. 3,5,6,7")

    m = sub.add_parser("multiply", help="evaluate an expression and print its canonical form")
    lengths_arg(m)
    m.add_argument("expr")
    m.add_argument("--mode", choices=("nice", "perfect", "hkn"), default="nice")
    m.add_argument("--json", action="store_true")
    m.set_defaults(func=cmd_multiply)

    v = sub.add_parser("verify", help="run every identity check")
    lengths_arg(v)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--samples", type=int, default=50)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("betti", help="Betti numbers")
    lengths_arg(b)
    b.set_defaults(func=cmd_betti)

    c = sub.add_parser("chambers", help="scan chambers of small length vectors")
    c.add_argument("-n", type=int, required=True)
    c.add_argument("--bound", type=int, default=20)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_chambers)

    g = sub.add_parser("basis", help="dump the graded basis as JSON")
    lengths_arg(g)
    g.set_defaults(func=cmd_basis)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LengthError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_LENGTHS
    except hkn_ring.PresentationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
