"""Derivability for dependence and independence statements.

Three engines share one proof object:

* Armstrong's rules for functional dependence, decided by attribute closure.
* The independence axioms (Empty Set, Symmetry, Weakening, Constancy,
  Exchange), decided by saturating the finite statement space.
* Six rules for conditional independence, searched breadth-first up to a
  depth bound. A negative answer there only means "not found".

Statements are canonicalised to variable sets, so reordering and duplicating
variables inside a tuple never needs a rule of its own.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Union

from . import atoms
from .formula import CondIndepAtom, ConstancyAtom, DepAtom, Formula, IndepAtom
from .parser import parse, to_text
from .structures import Structure, Team

Vars = frozenset


def _fs(vs) -> frozenset:
    if isinstance(vs, str):
        vs = vs.split()
    return frozenset(vs)


def _tup(vs) -> tuple:
    return tuple(sorted(vs))


# -- statements ----------------------------------------------------------------


@dataclass(frozen=True)
class FDStatement:
    """dep(antecedent, consequent) read as a pair of sets."""

    antecedent: frozenset
    consequent: frozenset

    def __post_init__(self):
        object.__setattr__(self, "antecedent", _fs(self.antecedent))
        object.__setattr__(self, "consequent", _fs(self.consequent))

    @property
    def variables(self) -> frozenset:
        return self.antecedent | self.consequent

    def to_formula(self) -> Formula:
        if not self.antecedent:
            return ConstancyAtom(_tup(self.consequent))
        return DepAtom(_tup(self.antecedent), _tup(self.consequent))

    def holds_in(self, team: Team) -> bool:
        return atoms.eval_dep(team, _tup(self.antecedent), _tup(self.consequent))

    def __str__(self):
        return to_text(self.to_formula())


@dataclass(frozen=True)
class IndStatement:
    """lhs _||_ rhs; either side may be empty."""

    lhs: frozenset
    rhs: frozenset

    def __post_init__(self):
        object.__setattr__(self, "lhs", _fs(self.lhs))
        object.__setattr__(self, "rhs", _fs(self.rhs))

    @property
    def variables(self) -> frozenset:
        return self.lhs | self.rhs

    def to_formula(self) -> Formula:
        return IndepAtom(_tup(self.lhs), _tup(self.rhs))

    def holds_in(self, team: Team) -> bool:
        return atoms.eval_indep(team, _tup(self.lhs), _tup(self.rhs))

    def __str__(self):
        return to_text(self.to_formula())


@dataclass(frozen=True)
class CIStatement:
    """lhs _||_{condition} rhs."""

    condition: frozenset
    lhs: frozenset
    rhs: frozenset

    def __post_init__(self):
        for name in ("condition", "lhs", "rhs"):
            object.__setattr__(self, name, _fs(getattr(self, name)))

    @property
    def variables(self) -> frozenset:
        return self.condition | self.lhs | self.rhs

    def to_formula(self) -> Formula:
        return CondIndepAtom(_tup(self.condition), _tup(self.lhs), _tup(self.rhs))

    def holds_in(self, team: Team) -> bool:
        return atoms.eval_cond_indep(team, _tup(self.condition), _tup(self.lhs), _tup(self.rhs))

    def __str__(self):
        return to_text(self.to_formula())


Statement = Union[FDStatement, IndStatement, CIStatement]

ARMSTRONG, INDEPENDENCE, CONDITIONAL = "armstrong", "independence", "conditional"
SYSTEMS = {ARMSTRONG: FDStatement, INDEPENDENCE: IndStatement, CONDITIONAL: CIStatement}


def statement_from_formula(f: Formula, system: str) -> Statement:
    if system == ARMSTRONG:
        if isinstance(f, DepAtom):
            return FDStatement(f.antecedent, f.consequent)
        if isinstance(f, ConstancyAtom):
            return FDStatement((), f.vars)
    elif system == INDEPENDENCE:
        if isinstance(f, IndepAtom):
            return IndStatement(f.lhs, f.rhs)
    elif system == CONDITIONAL:
        if isinstance(f, CondIndepAtom):
            return CIStatement(f.condition, f.lhs, f.rhs)
        if isinstance(f, IndepAtom):
            return CIStatement((), f.lhs, f.rhs)
    else:
        raise ValueError(f"unknown system {system!r}; expected one of {sorted(SYSTEMS)}")
    raise ValueError(f"{to_text(f)} is not a {system} statement")


def parse_statement(text: str, system: str) -> Statement:
    return statement_from_formula(parse(text), system)


def parse_statements(text: str, system: str) -> list[Statement]:
    """One statement per line; blank lines and # comments are skipped."""
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse_statement(line, system))
    return out


# -- proofs --------------------------------------------------------------------

PREMISE = "Premise"


class ProofError(ValueError):
    """A derivation step does not match the schema of its rule."""


@dataclass(frozen=True)
class Derivation:
    conclusion: Statement
    rule: str
    premises: tuple = ()

    def lines(self, depth: int = 0) -> list[str]:
        out = [f"{'  ' * depth}{self.rule}: {self.conclusion}"]
        for p in self.premises:
            out.extend(p.lines(depth + 1))
        return out

    def to_text(self) -> str:
        return "\n".join(self.lines())

    def __str__(self):
        return self.to_text()

    def nodes(self):
        yield self
        for p in self.premises:
            yield from p.nodes()

    def leaves(self) -> set:
        return {n.conclusion for n in self.nodes() if n.rule == PREMISE}


def parse_derivation(text: str, system: str) -> Derivation:
    """Inverse of Derivation.to_text."""
    entries = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip(" "))
        if indent % 2:
            raise ProofError(f"line {lineno}: odd indentation")
        rule, sep, stmt = line.strip().partition(": ")
        if not sep:
            raise ProofError(f"line {lineno}: expected 'Rule: statement'")
        entries.append((indent // 2, rule, parse_statement(stmt, system)))
    if not entries:
        raise ProofError("empty proof")

    pos = 0

    def build(depth):
        nonlocal pos
        d, rule, stmt = entries[pos]
        if d != depth:
            raise ProofError(f"unexpected indentation at proof line {pos + 1}")
        pos += 1
        kids = []
        while pos < len(entries) and entries[pos][0] > depth:
            kids.append(build(depth + 1))
        return Derivation(stmt, rule, tuple(kids))

    root = build(0)
    if pos != len(entries):
        raise ProofError("trailing lines after the proof root")
    return root


def _fd_step(rule, c, ps) -> bool:
    if rule == "A1":
        return not ps and c.antecedent == c.consequent
    if rule == "A2":
        return len(ps) == 1 and ps[0].consequent == c.consequent and ps[0].antecedent <= c.antecedent
    if rule == "A4":
        if len(ps) != 2:
            return False
        a, b = ps
        return a.antecedent == c.antecedent and a.consequent == b.antecedent and b.consequent == c.consequent
    if rule == "Union":
        if len(ps) != 2:
            return False
        a, b = ps
        return a.antecedent == b.antecedent == c.antecedent and c.consequent == a.consequent | b.consequent
    raise ProofError(f"unknown Armstrong rule {rule!r}")


def _ind_step(rule, c, ps) -> bool:
    if rule == "Empty Set":
        return not ps and not c.rhs
    if rule == "Symmetry":
        return len(ps) == 1 and ps[0].lhs == c.rhs and ps[0].rhs == c.lhs
    if rule == "Weakening":
        return len(ps) == 1 and ps[0].lhs == c.lhs and c.rhs <= ps[0].rhs
    if rule == "Constancy":
        return len(ps) == 1 and ps[0].lhs == ps[0].rhs == c.lhs
    if rule == "Exchange":
        if len(ps) != 2:
            return False
        a, b = ps
        return c.lhs == a.lhs and b.lhs == a.lhs | a.rhs and c.rhs == a.rhs | b.rhs
    raise ProofError(f"unknown independence rule {rule!r}")


def _ci_step(rule, c, ps) -> bool:
    if rule == "Reflexivity":
        return not ps and c.condition == c.lhs
    if rule == "Symmetry":
        return len(ps) == 1 and ps[0].condition == c.condition and ps[0].lhs == c.rhs and ps[0].rhs == c.lhs
    if rule == "Weakening":
        p = ps[0] if len(ps) == 1 else None
        return p is not None and p.condition == c.condition and c.lhs <= p.lhs and c.rhs <= p.rhs
    if len(ps) != 2:
        return False
    a, b = ps
    if rule == "First Transitivity":
        # z: x _||_ y  and  zx: u _||_ y  give  z: u _||_ y
        return (
            b.condition == a.condition | a.lhs
            and a.rhs == b.rhs == c.rhs
            and c.condition == a.condition
            and c.lhs == b.lhs
        )
    if rule == "Second Transitivity":
        # z: y _||_ y  and  y: zx _||_ u  give  z: x _||_ u
        return (
            a.lhs == a.rhs == b.condition
            and c.condition == a.condition
            and b.lhs == a.condition | c.lhs
            and c.rhs == b.rhs
        )
    if rule == "Exchange":
        # z: x _||_ y  and  z: xy _||_ u  give  z: x _||_ yu
        return (
            a.condition == b.condition == c.condition
            and c.lhs == a.lhs
            and b.lhs == a.lhs | a.rhs
            and c.rhs == a.rhs | b.rhs
        )
    raise ProofError(f"unknown conditional independence rule {rule!r}")


_STEP = {ARMSTRONG: _fd_step, INDEPENDENCE: _ind_step, CONDITIONAL: _ci_step}


def system_of(stmt: Statement) -> str:
    for name, cls in SYSTEMS.items():
        if isinstance(stmt, cls):
            return name
    raise TypeError(f"not a statement: {stmt!r}")


def check_derivation(d: Derivation, premises: Iterable[Statement], system: str | None = None) -> None:
    """Replay every node against its rule schema; raises ProofError.

    Leaves marked Premise must belong to `premises`.
    """
    system = system or system_of(d.conclusion)
    cls, step = SYSTEMS[system], _STEP[system]
    allowed = set(premises)
    for node in d.nodes():
        if not isinstance(node.conclusion, cls):
            raise ProofError(f"{node.conclusion!r} is not a {system} statement")
        concl, ps = node.conclusion, [p.conclusion for p in node.premises]
        if node.rule == PREMISE:
            if node.premises or concl not in allowed:
                raise ProofError(f"{concl} is used as a premise but is not one")
        elif not step(node.rule, concl, ps):
            shown = ", ".join(map(str, ps)) or "no premises"
            raise ProofError(f"{node.rule} does not give {concl} from {shown}")


def is_valid_derivation(d: Derivation, premises: Iterable[Statement], system: str | None = None) -> bool:
    try:
        check_derivation(d, premises, system)
    except ProofError:
        return False
    return True


@dataclass
class DeriveResult:
    derivable: bool
    derivation: Derivation | None = None
    exhausted: bool = True  # False when a bounded search stopped early
    explored: int = 0

    def __bool__(self) -> bool:
        return self.derivable


class NotRefutable(ValueError):
    """A counterexample was requested for a derivable goal."""


def _two_element(variables: Iterable[str], rows: Iterable[dict]) -> tuple[Structure, Team]:
    return Structure(2), Team.from_assignments(list(rows), _tup(variables))


# -- Armstrong -----------------------------------------------------------------


def fd_closure(sigma: Iterable[FDStatement], start) -> frozenset:
    """Smallest superset of `start` closed under the dependencies in sigma."""
    sigma = list(sigma)
    closed = set(_fs(start))
    changed = True
    while changed:
        changed = False
        for s in sigma:
            if s.antecedent <= closed and not s.consequent <= closed:
                closed |= s.consequent
                changed = True
    return frozenset(closed)


def armstrong_derives(sigma: Iterable[FDStatement], goal: FDStatement) -> DeriveResult:
    sigma = list(dict.fromkeys(sigma))
    Y = goal.antecedent

    def a1(X):
        return Derivation(FDStatement(X, X), "A1")

    def widen(X, V):
        """dep(V, X) for X a subset of V."""
        d = a1(X)
        return d if X == V else Derivation(FDStatement(V, X), "A2", (d,))

    def chain(first, second):
        """dep(Y, A) and dep(A, C) give dep(Y, C), skipping reflexive links."""
        a, b = first.conclusion, second.conclusion
        if a.antecedent == a.consequent:
            return second
        if b.antecedent == b.consequent:
            return first
        return Derivation(FDStatement(a.antecedent, b.consequent), "A4", (first, second))

    V = frozenset(Y)
    proof = a1(Y)  # always proves dep(Y, V)
    steps = 0
    changed = True
    while changed:
        changed = False
        for s in sigma:
            if s.antecedent <= V and not s.consequent <= V:
                steps += 1
                # dep(V, A) and the premise dep(A, C) give dep(V, C); add V itself
                to_cons = chain(widen(s.antecedent, V), Derivation(s, PREMISE))
                grow = Derivation(FDStatement(V, V | s.consequent), "Union", (a1(V), to_cons))
                V = V | s.consequent
                proof = chain(proof, grow)
                changed = True
    if not goal.consequent <= V:
        return DeriveResult(False, None, True, steps)
    final = chain(proof, widen(goal.consequent, V))
    return DeriveResult(True, final, True, steps)


def armstrong_counterexample(sigma: Iterable[FDStatement], goal: FDStatement) -> tuple[Structure, Team]:
    """The two-row team: closure columns constant, every other column 0 then 1."""
    sigma = list(sigma)
    V = fd_closure(sigma, goal.antecedent)
    if goal.consequent <= V:
        raise NotRefutable(f"{goal} is derivable")
    universe = goal.variables.union(*(s.variables for s in sigma))
    rows = [{v: 0 for v in universe}, {v: (0 if v in V else 1) for v in universe}]
    M, S = _two_element(universe, rows)
    bad = [s for s in sigma if not s.holds_in(S)]
    if bad or goal.holds_in(S):
        raise AssertionError(f"counterexample construction failed for {goal} (violated: {bad})")
    return M, S


# -- independence axioms -------------------------------------------------------


def _subsets(s) -> list[frozenset]:
    s = sorted(s)
    return [frozenset(c) for k in range(len(s) + 1) for c in itertools.combinations(s, k)]


class _Closure:
    """Forward chaining to a fixpoint with one recorded justification per fact."""

    def __init__(self):
        self.why: dict = {}
        self.queue: list = []

    def add(self, stmt, rule, premises=()) -> None:
        if stmt not in self.why:
            self.why[stmt] = (rule, tuple(premises))
            self.queue.append(stmt)

    def proof(self, stmt) -> Derivation:
        cache: dict = {}

        def build(s):
            d = cache.get(s)
            if d is None:
                rule, ps = self.why[s]
                d = Derivation(s, rule, tuple(build(p) for p in ps))
                cache[s] = d
            return d

        return build(stmt)


def gpp_closure(sigma: Iterable[IndStatement], universe=()) -> _Closure:
    """Saturate sigma under the independence axioms over a finite universe."""
    sigma = list(sigma)
    universe = _fs(universe).union(*(s.variables for s in sigma))
    subsets = _subsets(universe)
    cl = _Closure()
    for s in sigma:
        cl.add(s, PREMISE)
    for X in subsets:
        cl.add(IndStatement(X, ()), "Empty Set")
    by_lhs = defaultdict(list)  # lhs -> statements
    by_union = defaultdict(list)  # lhs | rhs -> statements
    i = 0
    while i < len(cl.queue):
        s = cl.queue[i]
        i += 1
        X, Y = s.lhs, s.rhs
        cl.add(IndStatement(Y, X), "Symmetry", (s,))
        for Y2 in _subsets(Y):
            cl.add(IndStatement(X, Y2), "Weakening", (s,))
        if X == Y:
            for Z in subsets:
                cl.add(IndStatement(X, Z), "Constancy", (s,))
        by_lhs[X].append(s)
        by_union[X | Y].append(s)
        # s as first premise (X, Y) with (X | Y, Z) already known, and as second
        for t in list(by_lhs[X | Y]):
            cl.add(IndStatement(X, Y | t.rhs), "Exchange", (s, t))
        for t in list(by_union[X]):
            cl.add(IndStatement(t.lhs, t.rhs | Y), "Exchange", (t, s))
    return cl


def gpp_derives(sigma: Iterable[IndStatement], goal: IndStatement) -> DeriveResult:
    cl = gpp_closure(sigma, goal.variables)
    if goal in cl.why:
        return DeriveResult(True, cl.proof(goal), True, len(cl.why))
    return DeriveResult(False, None, True, len(cl.why))


def minimize_goal(closed, goal: IndStatement) -> IndStatement:
    """Shrink a non-derivable goal until every proper sub-pair is derivable."""
    current = goal
    shrunk = True
    while shrunk:
        shrunk = False
        for side in ("lhs", "rhs"):
            for v in sorted(getattr(current, side)):
                smaller = IndStatement(
                    current.lhs - {v} if side == "lhs" else current.lhs,
                    current.rhs - {v} if side == "rhs" else current.rhs,
                )
                if smaller not in closed:
                    current, shrunk = smaller, True
                    break
            if shrunk:
                break
    return current


@dataclass
class ParityTeam:
    """The completeness-proof team together with the data it was built from."""

    structure: Structure
    team: Team
    minimal_goal: IndStatement
    pivot: str | None  # the parity variable; None for the product-team case
    constants: frozenset = field(default_factory=frozenset)


def gpp_parity_team(sigma: Iterable[IndStatement], goal: IndStatement) -> ParityTeam:
    sigma = list(sigma)
    cl = gpp_closure(sigma, goal.variables)
    closed = cl.why
    if goal in closed:
        raise NotRefutable(f"{goal} is derivable")
    universe = sorted(goal.variables.union(*(s.variables for s in sigma)))
    constants = frozenset(v for v in universe if IndStatement({v}, {v}) in closed)
    small = minimize_goal(closed, goal)
    X, Y = small.lhs, small.rhs
    free = [v for v in universe if v not in constants]
    pivot = None
    if X & Y:
        # only possible as u _||_ u for a single non-constant u: product team
        parity = None
    else:
        pivot = min(X)
        parity = sorted((X | Y) - {pivot})
    rows = []
    for values in itertools.product((0, 1), repeat=len(free)):
        s = dict.fromkeys(constants, 0)
        s.update(zip(free, values))
        if pivot is not None:
            if sum(s[v] for v in parity) % 2 != s[pivot]:
                continue
        rows.append(s)
    M, S = _two_element(universe, rows)
    return ParityTeam(M, S, small, pivot, constants)


def gpp_counterexample(sigma: Iterable[IndStatement], goal: IndStatement) -> tuple[Structure, Team]:
    """Team over {0,1} satisfying sigma and falsifying goal, checked before returning."""
    sigma = list(sigma)
    pt = gpp_parity_team(sigma, goal)
    bad = [s for s in sigma if not s.holds_in(pt.team)]
    if bad or goal.holds_in(pt.team) or pt.minimal_goal.holds_in(pt.team):
        raise AssertionError(f"parity construction failed for {goal} (violated: {bad})")
    return pt.structure, pt.team


# -- conditional independence --------------------------------------------------


def ci_closure(sigma: Iterable[CIStatement], depth: int, universe=(), goal: CIStatement | None = None):
    """Run up to `depth` rounds of the six rules, stopping early at `goal`.

    Returns the closure (one justification per statement) and whether the
    rules saturated.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    sigma = list(dict.fromkeys(sigma))
    universe = _fs(universe).union(*(s.variables for s in sigma))
    if goal is not None:
        universe |= goal.variables
    subsets = _subsets(universe)
    cl = _Closure()
    for s in sigma:
        cl.add(s, PREMISE)
    if goal is not None and goal in cl.why:
        return cl, False

    by_cond = defaultdict(list)  # condition -> facts
    by_cond_rhs = defaultdict(list)  # (condition, rhs) -> facts
    by_reach = defaultdict(list)  # (condition | lhs, rhs) -> facts
    by_cond_lhs = defaultdict(list)  # (condition, lhs) -> facts
    by_cond_span = defaultdict(list)  # (condition, lhs | rhs) -> facts
    diagonal = defaultdict(list)  # lhs (== rhs) -> facts

    def index(s):
        by_cond[s.condition].append(s)
        by_cond_rhs[(s.condition, s.rhs)].append(s)
        by_reach[(s.condition | s.lhs, s.rhs)].append(s)
        by_cond_lhs[(s.condition, s.lhs)].append(s)
        by_cond_span[(s.condition, s.lhs | s.rhs)].append(s)
        if s.lhs == s.rhs:
            diagonal[s.lhs].append(s)

    def consequences(s):
        """Everything one rule application gives with s as one of the premises."""
        Z, X, Y = s.condition, s.lhs, s.rhs
        yield CIStatement(Z, Y, X), "Symmetry", (s,)
        for X2 in _subsets(X):
            for Y2 in _subsets(Y):
                yield CIStatement(Z, X2, Y2), "Weakening", (s,)
        # First Transitivity, s first: (Z, X, Y) + (Z|X, U, Y)
        for t in by_cond_rhs[(Z | X, Y)]:
            yield CIStatement(Z, t.lhs, Y), "First Transitivity", (s, t)
        # ... s second: t = (Z', X', Y) with Z' | X' == Z
        for t in by_reach[(Z, Y)]:
            yield CIStatement(t.condition, X, Y), "First Transitivity", (t, s)
        # Second Transitivity, s first: s = (Z, Y, Y); t = (Y, L, U) with Z <= L
        if X == Y:
            for t in by_cond[X]:
                if Z <= t.lhs:
                    yield CIStatement(Z, t.lhs, t.rhs), "Second Transitivity", (s, t)
        # ... s second: s = (Y', L, U), t = (Z', Y', Y') with Z' <= L
        for t in diagonal[Z]:
            if t.condition <= X:
                yield CIStatement(t.condition, X, Y), "Second Transitivity", (t, s)
        # Exchange, s first: (Z, X, Y) + (Z, X|Y, U)
        for t in by_cond_lhs[(Z, X | Y)]:
            yield CIStatement(Z, X, Y | t.rhs), "Exchange", (s, t)
        # ... s second: t = (Z, X', Y') with X' | Y' == X
        for t in by_cond_span[(Z, X)]:
            yield CIStatement(Z, t.lhs, t.rhs | Y), "Exchange", (t, s)

    frontier = list(cl.queue)
    for s in frontier:
        index(s)
    for level in range(depth):
        new = []

        def push(stmt, rule, ps):
            if stmt not in cl.why:
                cl.add(stmt, rule, ps)
                new.append(stmt)

        if level == 0:
            for X in subsets:
                for Y in subsets:
                    push(CIStatement(X, X, Y), "Reflexivity", ())
        for s in frontier:
            for stmt, rule, ps in consequences(s):
                push(stmt, rule, ps)
        if not new:
            return cl, True
        if goal is not None and goal in cl.why:
            return cl, False
        # new facts join with everything known, including each other
        for s in new:
            index(s)
        frontier = new
    return cl, False


def ci_derive(sigma: Iterable[CIStatement], goal: CIStatement, depth: int = 6) -> DeriveResult:
    """Breadth-first chaining for at most `depth` rounds.

    Only variables occurring in sigma or the goal are used. A False verdict
    with exhausted=True means the rules saturated without reaching the goal;
    either way it is not a semantic refutation.
    """
    cl, saturated = ci_closure(sigma, depth, goal=goal)
    if goal in cl.why:
        return DeriveResult(True, cl.proof(goal), saturated, len(cl.why))
    return DeriveResult(False, None, saturated, len(cl.why))
