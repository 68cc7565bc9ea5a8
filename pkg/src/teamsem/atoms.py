"""Team-level satisfaction of the dependency atoms and flat literals.

Each function takes a Team and variable tuples and raises ValueError when a
variable is missing from the team's domain.
"""

from __future__ import annotations

from collections import defaultdict

from .structures import Structure, Team


def _proj(team: Team, variables):
    pos = team.positions(variables)
    return lambda r: tuple(r[i] for i in pos)


def eval_dep(team: Team, antecedent, consequent) -> bool:
    """Rows that agree on the antecedent agree on the consequent."""
    ante, cons = _proj(team, antecedent), _proj(team, consequent)
    seen: dict = {}
    for r in team.rows:
        if seen.setdefault(ante(r), cons(r)) != cons(r):
            return False
    return True


def eval_constancy(team: Team, variables) -> bool:
    return eval_dep(team, (), variables)


def eval_indep(team: Team, lhs, rhs) -> bool:
    """Every occurring lhs-value co-occurs with every occurring rhs-value."""
    pl, pr = _proj(team, lhs), _proj(team, rhs)
    pairs = {(pl(r), pr(r)) for r in team.rows}
    left = {p for p, _ in pairs}
    right = {q for _, q in pairs}
    return len(pairs) == len(left) * len(right)


def eval_cond_indep(team: Team, condition, lhs, rhs) -> bool:
    """lhs and rhs are independent inside every group agreeing on condition."""
    pc, pl, pr = _proj(team, condition), _proj(team, lhs), _proj(team, rhs)
    groups: dict = defaultdict(set)
    for r in team.rows:
        groups[pc(r)].add((pl(r), pr(r)))
    for pairs in groups.values():
        left = {p for p, _ in pairs}
        right = {q for _, q in pairs}
        if len(pairs) != len(left) * len(right):
            return False
    return True


def _check_arity(lhs, rhs) -> None:
    if len(lhs) != len(rhs):
        raise ValueError(f"arity mismatch: {len(lhs)} vs {len(rhs)}")


def eval_inclusion(team: Team, lhs, rhs) -> bool:
    _check_arity(lhs, rhs)
    return team.project(lhs) <= team.project(rhs)


def eval_exclusion(team: Team, lhs, rhs) -> bool:
    _check_arity(lhs, rhs)
    return team.project(lhs).isdisjoint(team.project(rhs))


def eval_tuple_diseq(team: Team, lhs, rhs) -> bool:
    _check_arity(lhs, rhs)
    pl, pr = _proj(team, lhs), _proj(team, rhs)
    return all(pl(r) != pr(r) for r in team.rows)


def eval_eq(team: Team, x: str, y: str, negated: bool = False) -> bool:
    i, j = team.index(x), team.index(y)
    return all((r[i] == r[j]) != negated for r in team.rows)


def eval_rel(structure: Structure, team: Team, symbol: str, args, negated: bool = False) -> bool:
    p = _proj(team, args)
    return all(structure.holds(symbol, p(r)) != negated for r in team.rows)
