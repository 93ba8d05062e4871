import random

import pytest

from polycoho.cli import compute
from polycoho.hkn_ring import HknPolynomial, format_polynomial
from polycoho.parser import BinOp, Chern, Gen, Label, Neg, Num, ParseError, Pow, parse
from polycoho.sampling import random_element, random_perfect

from conftest import GENERIC


def test_label_syntax():
    assert parse("(1 2 ~3).(4 5)", n=5) == Label((((1, 2), (3,)), ((4, 5), ())))
    assert parse("(1 2 3).(4 5)", "perfect", 5) == Label((((1, 2, 3), ()), ((4, 5), ())))
    assert parse("(3)", n=5) == Label((((3,), ()),))


def test_arithmetic_structure():
    e = parse("2*(1 2)^3 - -Ch(4) + (1 3)", n=5)
    assert e == BinOp(
        "+",
        BinOp("-", BinOp("*", Num(2), Pow(Label((((1, 2), ()),)), 3)), Neg(Chern(4))),
        Label((((1, 3), ()),)),
    )
    assert parse("R*V1 + U4^2", "hkn", 5) == BinOp(
        "+", BinOp("*", Gen("R"), Gen("V", 1)), Pow(Gen("U", 4), 2)
    )
    assert parse(" ( 2 + 3 ) * (1\n2)", n=4) == BinOp(
        "*", BinOp("+", Num(2), Num(3)), Label((((1, 2), ()),))
    )


@pytest.mark.parametrize(
    "text, mode, pos",
    [
        ("(1 ~2)", "perfect", 3),
        ("(1 7)", "nice", 3),
        ("(1 2 1)", "nice", 5),
        ("(1 2).(2 3)", "nice", 11),
        ("V1", "nice", 0),
        ("(1 2)", "hkn", 0),
        ("V5", "hkn", 1),
        ("(1 2 ~3", "nice", 7),
        ("(1 2) +", "nice", 7),
        ("", "nice", 0),
        ("(1 2) (3 4)", "nice", 6),
        ("(1 2)^", "nice", 6),
    ],
)
def test_parse_errors(text, mode, pos):
    with pytest.raises(ParseError) as info:
        parse(text, mode, 5)
    assert info.value.pos == pos
    assert info.value.pretty().splitlines()[-1] == "  " + " " * pos + "^"


def test_perfect_mode_rejects_overline_message():
    with pytest.raises(ParseError, match="'~' is not allowed"):
        parse("(1 2 ~3)", "perfect", 5)


@pytest.mark.parametrize("n", [5, 6, 7])
def test_format_roundtrip_nice(n):
    rng = random.Random(n)
    L = GENERIC[n]
    for _ in range(50):
        x = random_element(rng, L)
        assert compute(str(x), "nice", L)[0] == x


@pytest.mark.parametrize("n", [5, 6])
def test_format_roundtrip_perfect(n):
    rng = random.Random(n)
    L = GENERIC[n]
    for _ in range(50):
        x = random_perfect(rng, L)
        assert compute(str(x), "perfect", L)[0] == x


def test_format_roundtrip_hkn():
    L = GENERIC[5]
    V, R = HknPolynomial.V, HknPolynomial.R()
    p = (V(1) * 3 - R * V(2) + 2) ** 2 - R ** 3
    text = format_polynomial(p)
    assert compute(text, "hkn", L)[0] == p


def test_chern_in_each_mode():
    L = GENERIC[5]
    assert format_polynomial(compute("Ch(5)", "hkn", L)[0]) == "-R"
    assert format_polynomial(compute("Ch(5)", "nice", L)[1]) == "-R"
    assert format_polynomial(compute("Ch(5)", "perfect", L)[1]) == "-R"
    assert compute("Ch(2)", "hkn", L)[0] == HknPolynomial.V(2) * 2 + HknPolynomial.R()
