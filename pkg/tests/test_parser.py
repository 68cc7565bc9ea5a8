import random

import pytest

from gen import random_ast
from teamsem.formula import (
    CondIndepAtom,
    Conj,
    ConstancyAtom,
    DepAtom,
    Disj,
    EqLiteral,
    ExclusionAtom,
    Exists,
    Forall,
    InclusionAtom,
    IndepAtom,
    LinImp,
    RelLiteral,
    SlashExists,
    TupleDiseq,
)
from teamsem.parser import ParseError, parse, parse_lines, to_text


def test_spec_examples():
    assert parse("dep(x, y)") == DepAtom(("x",), ("y",))
    assert parse("x y _||_ u v") == IndepAtom(("x", "y"), ("u", "v"))
    f = parse("E x A y E z (dep(z, y) & !(z = x))")
    assert f == Exists("x", Forall("y", Exists("z", Conj(DepAtom(("z",), ("y",)), EqLiteral("z", "x", True)))))


def test_printer_examples():
    assert to_text(DepAtom(("x",), ("y",))) == "dep(x, y)"
    assert to_text(ConstancyAtom(("x",))) == "dep(x)"
    assert to_text(CondIndepAtom(("x",), ("y",), ("z",))) == "y _||_{x} z"


def test_atom_forms():
    assert parse("dep(x y; z)") == DepAtom(("x", "y"), ("z",))
    assert parse("dep((), x)") == DepAtom((), ("x",))
    assert parse("incl(x y ; u v)") == InclusionAtom(("x", "y"), ("u", "v"))
    assert parse("excl(x ; y)") == ExclusionAtom(("x",), ("y",))
    assert parse("(x y) != (u v)") == TupleDiseq(("x", "y"), ("u", "v"))
    assert parse("y _||_{x, w} z") == CondIndepAtom(("x", "w"), ("y",), ("z",))
    assert parse("() _||_ x") == IndepAtom((), ("x",))
    assert parse("R(x, y)") == RelLiteral("R", ("x", "y"))
    assert parse("!R(x)") == RelLiteral("R", ("x",), True)
    assert parse("x != y") == EqLiteral("x", "y", True)
    assert parse("E x / y x = y") == SlashExists("x", "y", EqLiteral("x", "y"))


def test_precedence_and_associativity():
    a, b, c = (EqLiteral(v, v) for v in "abc")
    assert parse("a = a & b = b | c = c") == Disj(Conj(a, b), c)
    assert parse("a = a | b = b | c = c") == Disj(a, Disj(b, c))
    assert parse("a = a -o b = b -o c = c") == LinImp(a, LinImp(b, c))
    assert parse("a = a | b = b -o c = c") == LinImp(Disj(a, b), c)
    assert parse("E x a = a & b = b") == Conj(Exists("x", a), b)
    assert parse("(a = a | b = b) & c = c") == Conj(Disj(a, b), c)


def test_unicode_aliases():
    assert parse("∀x ∃y (dep(x, y) ∧ ¬(x = y)) ∨ x ⊥ y") == parse("A x E y (dep(x, y) & !(x = y)) | x _||_ y")
    assert parse("x = y ↔ u ≠ v") == parse("x = y <-> u != v")


def test_biconditional_desugars():
    f = parse("x = v <-> y = u")
    assert f == Disj(
        Conj(EqLiteral("x", "v"), EqLiteral("y", "u")),
        Conj(EqLiteral("x", "v", True), EqLiteral("y", "u", True)),
    )


@pytest.mark.parametrize(
    "text",
    ["", "dep(x,", "x = ", "E (x = y)", "incl(x y ; z)", "x _||_", "x = y )", "E x / x", "dep(x) & & dep(y)", "x @ y"],
)
def test_errors_carry_positions(text):
    with pytest.raises((ParseError, ValueError)) as info:
        parse(text)
    if isinstance(info.value, ParseError):
        line, column = info.value.position
        assert line >= 1 and column >= 1
        assert str(info.value)


def test_error_fields():
    with pytest.raises(ParseError) as info:
        parse("A x\n  (x = )")
    err = info.value
    assert err.position == (2, 8)
    assert ")" in err.found
    assert err.expected


def test_keywords_are_not_names():
    with pytest.raises(ParseError):
        parse("E E x = x")
    with pytest.raises(ParseError):
        parse("dep = x")


def test_parse_lines_skips_comments():
    fs = parse_lines("# premises\ndep(x, y)\n\n x _||_ y  # trailing\n")
    assert fs == [DepAtom(("x",), ("y",)), IndepAtom(("x",), ("y",))]


def test_round_trip_sample():
    rng = random.Random(7)
    for _ in range(300):
        f = random_ast(rng, rng.randint(0, 6))
        assert parse(to_text(f)) == f, to_text(f)
