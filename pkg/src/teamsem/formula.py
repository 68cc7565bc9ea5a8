"""Formula syntax trees for first-order logic with team-semantics atoms.

All nodes are frozen dataclasses, so formulas are hashable values that can be
shared freely. Negation only exists as a flag on equality and relation
literals: every constructible formula is in negation normal form.

Variables are plain strings; variable tuples are Python tuples of strings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, fields
from typing import Iterator, Union

Variable = str
VarTuple = tuple[str, ...]

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
KEYWORDS = frozenset({"E", "A", "dep", "incl", "excl"})


class FormulaError(ValueError):
    """Raised when a formula node is constructed or rewritten illegally."""


def _check_var(v) -> None:
    if not isinstance(v, str) or not _NAME.fullmatch(v) or v in KEYWORDS:
        raise FormulaError(f"invalid variable name {v!r}")


def _check_tuple(t, what: str) -> None:
    if not isinstance(t, tuple):
        raise FormulaError(f"{what} must be a tuple of variables, got {type(t).__name__}")
    for v in t:
        _check_var(v)


def _check_formula(f, what: str) -> None:
    if not isinstance(f, Formula):
        raise FormulaError(f"{what} must be a Formula, got {type(f).__name__}")


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()

    def children(self) -> tuple["Formula", ...]:
        return ()

    def __str__(self) -> str:
        from .parser import to_text

        return to_text(self)


# -- literals -----------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class EqLiteral(Formula):
    x: str
    y: str
    negated: bool = False

    def __post_init__(self):
        _check_var(self.x)
        _check_var(self.y)


@dataclass(frozen=True, slots=True)
class RelLiteral(Formula):
    symbol: str
    args: VarTuple
    negated: bool = False

    def __post_init__(self):
        _check_var(self.symbol)
        _check_tuple(self.args, "relation arguments")


@dataclass(frozen=True, slots=True)
class TupleDiseq(Formula):
    """Flat disequality: in every row the two tuples differ somewhere."""

    lhs: VarTuple
    rhs: VarTuple

    def __post_init__(self):
        _check_tuple(self.lhs, "lhs")
        _check_tuple(self.rhs, "rhs")
        if len(self.lhs) != len(self.rhs):
            raise FormulaError("tuple disequality needs tuples of equal length")


# -- dependency atoms ---------------------------------------------------------


@dataclass(frozen=True, slots=True)
class DepAtom(Formula):
    """dep(antecedent, consequent): the antecedent determines the consequent."""

    antecedent: VarTuple
    consequent: VarTuple

    def __post_init__(self):
        _check_tuple(self.antecedent, "antecedent")
        _check_tuple(self.consequent, "consequent")


@dataclass(frozen=True, slots=True)
class ConstancyAtom(Formula):
    vars: VarTuple

    def __post_init__(self):
        _check_tuple(self.vars, "vars")


@dataclass(frozen=True, slots=True)
class IndepAtom(Formula):
    lhs: VarTuple
    rhs: VarTuple

    def __post_init__(self):
        _check_tuple(self.lhs, "lhs")
        _check_tuple(self.rhs, "rhs")


@dataclass(frozen=True, slots=True)
class CondIndepAtom(Formula):
    """lhs is independent of rhs once condition is kept fixed."""

    condition: VarTuple
    lhs: VarTuple
    rhs: VarTuple

    def __post_init__(self):
        _check_tuple(self.condition, "condition")
        _check_tuple(self.lhs, "lhs")
        _check_tuple(self.rhs, "rhs")


@dataclass(frozen=True, slots=True)
class InclusionAtom(Formula):
    lhs: VarTuple
    rhs: VarTuple

    def __post_init__(self):
        _check_tuple(self.lhs, "lhs")
        _check_tuple(self.rhs, "rhs")
        if len(self.lhs) != len(self.rhs):
            raise FormulaError(
                f"inclusion atom arity mismatch: {len(self.lhs)} vs {len(self.rhs)}"
            )


@dataclass(frozen=True, slots=True)
class ExclusionAtom(Formula):
    lhs: VarTuple
    rhs: VarTuple

    def __post_init__(self):
        _check_tuple(self.lhs, "lhs")
        _check_tuple(self.rhs, "rhs")
        if len(self.lhs) != len(self.rhs):
            raise FormulaError(
                f"exclusion atom arity mismatch: {len(self.lhs)} vs {len(self.rhs)}"
            )


# -- connectives and quantifiers ----------------------------------------------


@dataclass(frozen=True, slots=True)
class Conj(Formula):
    left: Formula
    right: Formula

    def __post_init__(self):
        _check_formula(self.left, "left")
        _check_formula(self.right, "right")

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, slots=True)
class Disj(Formula):
    """Split disjunction."""

    left: Formula
    right: Formula

    def __post_init__(self):
        _check_formula(self.left, "left")
        _check_formula(self.right, "right")

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, slots=True)
class Exists(Formula):
    var: str
    body: Formula

    def __post_init__(self):
        _check_var(self.var)
        _check_formula(self.body, "body")

    def children(self):
        return (self.body,)


@dataclass(frozen=True, slots=True)
class Forall(Formula):
    var: str
    body: Formula

    def __post_init__(self):
        _check_var(self.var)
        _check_formula(self.body, "body")

    def children(self):
        return (self.body,)


@dataclass(frozen=True, slots=True)
class SlashExists(Formula):
    """There is a value for var, chosen independently of independent_of."""

    var: str
    independent_of: str
    body: Formula

    def __post_init__(self):
        _check_var(self.var)
        _check_var(self.independent_of)
        _check_formula(self.body, "body")

    def children(self):
        return (self.body,)


@dataclass(frozen=True, slots=True)
class LinImp(Formula):
    antecedent: Formula
    consequent: Formula

    def __post_init__(self):
        _check_formula(self.antecedent, "antecedent")
        _check_formula(self.consequent, "consequent")

    def children(self):
        return (self.antecedent, self.consequent)


Literal = Union[EqLiteral, RelLiteral]
ATOM_TYPES = (
    DepAtom,
    ConstancyAtom,
    IndepAtom,
    CondIndepAtom,
    InclusionAtom,
    ExclusionAtom,
)
FLAT_ATOM_TYPES = (EqLiteral, RelLiteral, TupleDiseq)
QUANTIFIER_TYPES = (Exists, Forall, SlashExists)


def atom_vars(f: Formula) -> VarTuple:
    """All variable occurrences of an atomic node, in order."""
    if isinstance(f, EqLiteral):
        return (f.x, f.y)
    if isinstance(f, RelLiteral):
        return f.args
    if isinstance(f, DepAtom):
        return f.antecedent + f.consequent
    if isinstance(f, ConstancyAtom):
        return f.vars
    if isinstance(f, CondIndepAtom):
        return f.condition + f.lhs + f.rhs
    if isinstance(f, (TupleDiseq, IndepAtom, InclusionAtom, ExclusionAtom)):
        return f.lhs + f.rhs
    raise TypeError(f"not an atomic formula: {type(f).__name__}")


def is_atomic(f: Formula) -> bool:
    return isinstance(f, FLAT_ATOM_TYPES + ATOM_TYPES)


def walk(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal of all nodes."""
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children()))


def free_variables(f: Formula) -> frozenset[str]:
    if is_atomic(f):
        return frozenset(atom_vars(f))
    if isinstance(f, QUANTIFIER_TYPES):
        inner = free_variables(f.body) - {f.var}
        if isinstance(f, SlashExists):
            # the slashed variable names a column of the incoming team
            inner |= {f.independent_of}
        return inner
    out: frozenset[str] = frozenset()
    for c in f.children():
        out |= free_variables(c)
    return out


def all_variables(f: Formula) -> frozenset[str]:
    """Every variable occurring anywhere in f, bound or free."""
    out = set()
    for node in walk(f):
        if is_atomic(node):
            out.update(atom_vars(node))
        elif isinstance(node, QUANTIFIER_TYPES):
            out.add(node.var)
            if isinstance(node, SlashExists):
                out.add(node.independent_of)
    return frozenset(out)


def relation_symbols(f: Formula) -> dict[str, int]:
    """Map each relation symbol used in f to its arity."""
    out: dict[str, int] = {}
    for node in walk(f):
        if isinstance(node, RelLiteral):
            if out.setdefault(node.symbol, len(node.args)) != len(node.args):
                raise FormulaError(f"relation {node.symbol} used with two arities")
    return out


def is_first_order(f: Formula) -> bool:
    """True when f has no dependency atoms, slash quantifiers or linear implication."""
    return all(
        isinstance(n, FLAT_ATOM_TYPES + (Conj, Disj, Exists, Forall)) for n in walk(f)
    )


def is_downward_closed(f: Formula) -> bool:
    """Syntactic sufficient condition for closure under subteams."""
    if isinstance(f, (IndepAtom, CondIndepAtom, InclusionAtom)):
        return False
    if isinstance(f, LinImp):
        return is_downward_closed(f.consequent)
    return all(is_downward_closed(c) for c in f.children())


def contains(f: Formula, kinds) -> bool:
    return any(isinstance(n, kinds) for n in walk(f))


def _sub(t: VarTuple, old: str, new: str) -> VarTuple:
    return tuple(new if v == old else v for v in t)


def _rename(f: Formula, old: str, new: str) -> Formula:
    if isinstance(f, QUANTIFIER_TYPES):
        if isinstance(f, SlashExists) and f.independent_of == old:
            f = SlashExists(f.var, new, f.body)
        if f.var == old:
            return f
        return type(f)(**{**_field_map(f), "body": _rename(f.body, old, new)})
    if isinstance(f, (Conj, Disj)):
        return type(f)(_rename(f.left, old, new), _rename(f.right, old, new))
    if isinstance(f, LinImp):
        return LinImp(_rename(f.antecedent, old, new), _rename(f.consequent, old, new))
    if isinstance(f, EqLiteral):
        return EqLiteral(new if f.x == old else f.x, new if f.y == old else f.y, f.negated)
    # every other atom: substitute inside each tuple-valued field
    changes = {
        name: _sub(value, old, new)
        for name, value in _field_map(f).items()
        if isinstance(value, tuple)
    }
    return type(f)(**{**_field_map(f), **changes})


def _field_map(f: Formula) -> dict:
    return {fld.name: getattr(f, fld.name) for fld in fields(f)}


def rename(f: Formula, old: str, new: str) -> Formula:
    """Replace the free occurrences of old by new.

    new must not occur anywhere in f, which makes the substitution
    capture-free by construction.
    """
    _check_var(new)
    if new in all_variables(f) and new != old:
        raise FormulaError(f"cannot rename {old} to {new}: {new} already occurs in the formula")
    if new == old:
        return f
    return _rename(f, old, new)


def negate_literal(f: Literal) -> Literal:
    if isinstance(f, EqLiteral):
        return EqLiteral(f.x, f.y, not f.negated)
    if isinstance(f, RelLiteral):
        return RelLiteral(f.symbol, f.args, not f.negated)
    raise FormulaError("only equality and relation literals can be negated")


def desugar_iff(a: Formula, b: Formula) -> Formula:
    """(a <-> b) as (a & b) | (!a & !b), for literals a and b."""
    for side in (a, b):
        if not isinstance(side, (EqLiteral, RelLiteral)):
            raise FormulaError("biconditional is only defined between literals")
    return Disj(Conj(a, b), Conj(negate_literal(a), negate_literal(b)))


def conj(*parts: Formula) -> Formula:
    """Right-nested conjunction of one or more formulas."""
    if not parts:
        raise FormulaError("empty conjunction")
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Conj(p, out)
    return out


def exists(variables, body: Formula) -> Formula:
    for v in reversed(tuple(variables)):
        body = Exists(v, body)
    return body


def forall(variables, body: Formula) -> Formula:
    for v in reversed(tuple(variables)):
        body = Forall(v, body)
    return body
