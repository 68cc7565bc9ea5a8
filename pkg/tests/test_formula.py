import pytest

from teamsem.formula import (
    Conj,
    ConstancyAtom,
    DepAtom,
    Disj,
    EqLiteral,
    Exists,
    ExclusionAtom,
    Forall,
    FormulaError,
    InclusionAtom,
    IndepAtom,
    RelLiteral,
    SlashExists,
    TupleDiseq,
    desugar_iff,
    free_variables,
    is_downward_closed,
    is_first_order,
    relation_symbols,
    rename,
    walk,
)
from teamsem.parser import parse


def test_free_variables_of_atoms_count_every_side():
    assert free_variables(DepAtom(("x",), ("y",))) == {"x", "y"}
    assert free_variables(parse("y _||_{x} z")) == {"x", "y", "z"}


def test_free_variables_respect_binders():
    assert free_variables(parse("E z incl(x ; z)")) == {"x"}


def test_evenness_sentence_is_closed():
    f = parse("A x E y A u E v (x y _||_ u v & (x = v <-> y = u) & !(x = y))")
    assert free_variables(f) == frozenset()


def test_slash_counts_slashed_variable_as_free():
    assert free_variables(parse("E x / y dep(x)")) == {"y"}


def test_rename_examples():
    assert rename(DepAtom(("x",), ("y",)), "y", "w") == DepAtom(("x",), ("w",))
    assert rename(parse("E y x _||_ y"), "x", "u") == parse("E y u _||_ y")
    with pytest.raises(FormulaError):
        rename(parse("E y x _||_ y"), "x", "y")


def test_rename_leaves_bound_occurrences():
    f = parse("x = y & E x x = y")
    assert rename(f, "x", "u") == parse("u = y & E x x = y")


@pytest.mark.parametrize("text", ["dep(x, y) & E z z = x", "A u (u = v | R(u))", "x _||_{y} z -o incl(x ; y)"])
def test_rename_free_variable_set(text):
    f = parse(text)
    old = sorted(free_variables(f))[0]
    g = rename(f, old, "fresh")
    assert free_variables(g) == (free_variables(f) - {old}) | {"fresh"}


def test_desugar_iff_examples():
    a, b = EqLiteral("x", "v"), EqLiteral("y", "u")
    assert desugar_iff(a, b) == Disj(Conj(a, b), Conj(EqLiteral("x", "v", True), EqLiteral("y", "u", True)))
    r = RelLiteral("R", ("x",))
    assert desugar_iff(r, EqLiteral("x", "y")) == Disj(
        Conj(r, EqLiteral("x", "y")), Conj(RelLiteral("R", ("x",), True), EqLiteral("x", "y", True))
    )
    with pytest.raises(FormulaError):
        desugar_iff(DepAtom(("x",), ("y",)), a)


def test_arity_checks():
    with pytest.raises(FormulaError):
        InclusionAtom(("x",), ("y", "z"))
    with pytest.raises(FormulaError):
        ExclusionAtom(("x", "y"), ("z",))
    with pytest.raises(FormulaError):
        TupleDiseq(("x",), ())


def test_bad_names_rejected():
    with pytest.raises(FormulaError):
        EqLiteral("x y", "z")
    with pytest.raises(FormulaError):
        Exists("1x", EqLiteral("x", "x"))


def test_negation_only_on_literals():
    # NNF by construction: only literal nodes carry a negation flag
    f = parse("!(x = y) & A z (!R(z) | dep(z))")
    flagged = [n for n in walk(f) if getattr(n, "negated", False)]
    assert all(isinstance(n, (EqLiteral, RelLiteral)) for n in flagged)
    assert len(flagged) == 2


def test_classification():
    assert is_first_order(parse("A x (x = y | R(x)) & (x) != (y)"))
    assert not is_first_order(parse("E x dep(x)"))
    assert is_downward_closed(parse("A x E y (dep(x, y) | x = y)"))
    assert not is_downward_closed(parse("x _||_ y"))
    assert not is_downward_closed(parse("incl(x ; y)"))


def test_relation_symbols():
    assert relation_symbols(parse("R(x) & P(x, y)")) == {"R": 1, "P": 2}
    with pytest.raises(FormulaError):
        relation_symbols(Conj(RelLiteral("R", ("x",)), RelLiteral("R", ("x", "y"))))


def test_constancy_is_its_own_node():
    assert parse("dep(x)") == ConstancyAtom(("x",))
    assert parse("dep(x)") != DepAtom((), ("x",))


def test_nodes_are_hashable_values():
    assert hash(parse("A x dep(x, y)")) == hash(Forall("x", DepAtom(("x",), ("y",))))
    assert parse("E x / y x = y") == SlashExists("x", "y", EqLiteral("x", "y"))
    assert parse("x _||_ y") == IndepAtom(("x",), ("y",))
