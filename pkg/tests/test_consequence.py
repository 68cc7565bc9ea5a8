import pytest

from teamsem.consequence import consequence_check, equivalent, structures
from teamsem.evaluator import BudgetExhausted, EvalConfig, satisfies
from teamsem.parser import parse
from teamsem.structures import EnumerationBoundExceeded


def check(a, b, **kw):
    kw.setdefault("max_domain", 2)
    kw.setdefault("variables", ("x", "y"))
    return consequence_check(parse(a), parse(b), **kw)


def test_constancy_both_ways():
    assert check("dep(x)", "x _||_ x")
    assert check("x _||_ x", "dep(x)")


def test_independence_is_symmetric():
    assert check("x _||_ y", "y _||_ x")


def test_dependence_is_not_symmetric():
    r = check("dep(x, y)", "dep(y, x)")
    assert not r.holds
    M, S = r.countermodel
    assert len(S) == 2
    assert satisfies(M, S, parse("dep(x, y)")).verdict is True
    assert satisfies(M, S, parse("dep(y, x)")).verdict is False
    # the first countermodel in enumeration order
    assert M.domain_size == 2
    assert sorted(S.assignments(), key=lambda a: (a["x"], a["y"])) == [{"x": 0, "y": 0}, {"x": 1, "y": 0}]


def test_relations_are_enumerated():
    # R(x) does not entail R(y), but needs a model with R interpreted
    r = check("R(x)", "R(y)")
    assert not r.holds
    M, _ = r.countermodel
    assert "R" in M.relations
    assert check("R(x) & x = y", "R(y)")


def test_bounds():
    with pytest.raises(EnumerationBoundExceeded):
        consequence_check(parse("dep(x, y z)"), parse("x = x"), max_vars=2)
    with pytest.raises(ValueError):
        consequence_check(parse("dep(x, y)"), parse("x = x"), variables=("x",))
    with pytest.raises(EnumerationBoundExceeded):
        list(structures({"P": 3}, 3))


def test_equivalent_returns_both_directions():
    ab, ba = equivalent(parse("dep(x, y)"), parse("y _||_{x} y"), max_domain=3)
    assert ab.holds and ba.holds
    assert ab.checked > 0


def test_budget_propagates():
    with pytest.raises(BudgetExhausted):
        consequence_check(
            parse("A u E v A w E t (u v _||_ w t & (u = w <-> v = t) & !(u = v))"),
            parse("x = x"),
            max_domain=5,
            max_vars=1,
            variables=("x",),
            config=EvalConfig(time_budget=0.05),
        )
