"""Deciding M |=_S phi by structural recursion over the formula.

Disjunction searches the splits of the team, the existential quantifiers
search witness maps by depth-first backtracking, and linear implication
enumerates every team over the current variables. Results of subformula
evaluations are memoised on (node, team).

Search pruning (``EvalConfig.prune``) rests on two facts about the
quantifier clauses: extending a team at x keeps its projection onto the
other variables unchanged, and downward-closed formulas that fail on a team
fail on all of its supersets. Atoms reachable from a quantifier body through
conjunctions and further quantifiers are therefore checked on the partial
team while witnesses are still being chosen.
"""

from __future__ import annotations

import itertools
import time
from collections import Counter, defaultdict
from dataclasses import dataclass, field, replace

from . import atoms
from .formula import (
    CondIndepAtom,
    Conj,
    ConstancyAtom,
    DepAtom,
    Disj,
    EqLiteral,
    ExclusionAtom,
    Exists,
    Forall,
    Formula,
    InclusionAtom,
    IndepAtom,
    LinImp,
    RelLiteral,
    SlashExists,
    TupleDiseq,
    contains,
    free_variables,
    is_downward_closed,
    is_first_order,
    relation_symbols,
)
from .structures import (
    EnumerationBoundExceeded,
    Row,
    Structure,
    Team,
    all_teams,
    extend_universal,
    extender,
)

STRICT, LAX = "strict", "lax"
PARTITIONS, COVERS = "partitions", "covers"


class BudgetExhausted(RuntimeError):
    """The time budget ran out before a verdict was reached."""


@dataclass(frozen=True)
class EvalConfig:
    mode: str = STRICT
    split_mode: str = PARTITIONS
    memo: bool = True
    row_bound: int = 4096  # largest team the evaluator may build
    team_enum_bound: int = 16  # largest |M|**|vars| for enumerating all teams
    time_budget: float = 60.0
    flat_shortcut: bool = True  # evaluate first-order subformulas row by row
    prune: bool = True

    def __post_init__(self):
        if self.mode not in (STRICT, LAX):
            raise ValueError(f"mode must be strict or lax, got {self.mode!r}")
        if self.split_mode not in (PARTITIONS, COVERS):
            raise ValueError(f"split_mode must be partitions or covers, got {self.split_mode!r}")
        if self.row_bound < 1 or self.team_enum_bound < 1:
            raise ValueError("bounds must be positive")
        if self.time_budget <= 0:
            raise ValueError("time budget must be positive")


@dataclass
class EvalStats:
    nodes: int = 0
    memo_hits: int = 0
    elapsed: float = 0.0


@dataclass
class EvalResult:
    verdict: bool | None
    stats: EvalStats = field(default_factory=EvalStats)

    @property
    def budget_exhausted(self) -> bool:
        return self.verdict is None

    @property
    def status(self) -> str:
        if self.verdict is None:
            return "budget-exhausted"
        return "true" if self.verdict else "false"

    def __bool__(self) -> bool:
        if self.verdict is None:
            raise BudgetExhausted("no verdict: time budget exhausted")
        return self.verdict


# -- incremental checks used inside the witness search -------------------------


class _DepCheck:
    """Refutation of dep / constancy is monotone in the rows added."""

    def __init__(self, ante, cons):
        self.ante, self.cons = ante, cons
        self.seen: dict = {}
        self.stack: list = []

    def push(self, rows) -> bool:
        added = []
        for r in rows:
            a = tuple(r[i] for i in self.ante)
            c = tuple(r[i] for i in self.cons)
            prev = self.seen.get(a)
            if prev is None:
                self.seen[a] = c
                added.append(a)
            elif prev != c:
                for k in added:
                    del self.seen[k]
                return False
        self.stack.append(added)
        return True

    def pop(self):
        for k in self.stack.pop():
            del self.seen[k]


class _ExclusionCheck:
    def __init__(self, lhs, rhs):
        self.lhs, self.rhs = lhs, rhs
        self.left: Counter = Counter()
        self.right: Counter = Counter()
        self.stack: list = []

    def push(self, rows) -> bool:
        ls = [tuple(r[i] for i in self.lhs) for r in rows]
        rs = [tuple(r[i] for i in self.rhs) for r in rows]
        new_l, new_r = set(ls), set(rs)
        if new_l & new_r or any(v in self.right for v in new_l) or any(v in self.left for v in new_r):
            return False
        self.left.update(ls)
        self.right.update(rs)
        self.stack.append((ls, rs))
        return True

    def pop(self):
        ls, rs = self.stack.pop()
        self.left.subtract(ls)
        self.right.subtract(rs)
        self.left += Counter()
        self.right += Counter()


class _Lookahead:
    """Non-monotone atoms: every co-occurrence the atom demands of the rows
    chosen so far must be present already or still producible by a unit
    that has not been assigned."""

    def __init__(self, kind, positions, potentials):
        self.kind = kind
        self.pos = positions
        self.potentials = potentials  # per search depth: set of producible keys
        self.keys: Counter = Counter()
        self.stack: list = []

    def key(self, r):
        return tuple(tuple(r[i] for i in p) for p in self.pos)

    def potential_key(self, r):
        if self.kind == "incl":
            return tuple(r[i] for i in self.pos[1])
        return self.key(r)

    def push(self, rows, depth) -> bool:
        ks = [self.key(r) for r in rows]
        self.keys.update(ks)
        self.stack.append(ks)
        return self._ok(self.potentials[depth])

    def pop(self):
        self.keys.subtract(self.stack.pop())
        self.keys += Counter()

    def _ok(self, potential) -> bool:
        have = self.keys
        if self.kind == "indep":
            left = {p for p, _ in have}
            right = {q for _, q in have}
            for q in right:
                for p in left:
                    k = (p, q)
                    if k not in have and k not in potential:
                        return False
            return True
        if self.kind == "cond":
            groups = defaultdict(lambda: (set(), set()))
            for c, p, q in have:
                groups[c][0].add(p)
                groups[c][1].add(q)
            for c, (left, right) in groups.items():
                for p in left:
                    for q in right:
                        k = (c, p, q)
                        if k not in have and k not in potential:
                            return False
            return True
        # inclusion: keys are (lhs value, rhs value)
        targets = {q for _, q in have}
        for p, _ in have:
            if p not in targets and p not in potential:
                return False
        return True


# -- the evaluator --------------------------------------------------------------


class Evaluator:
    """Evaluates formulas over one structure under one configuration.

    The memo table lives as long as the evaluator, so reuse one instance to
    share work across many teams.
    """

    def __init__(self, structure: Structure, config: EvalConfig | None = None):
        self.M = structure
        self.cfg = config or EvalConfig()
        self.lax = self.cfg.mode == LAX
        self.memo: dict = {}
        self.stats = EvalStats()
        self._deadline = None
        self._analysis: dict = {}
        self._keep: list = []
        self._compiled: dict = {}

    # -- bookkeeping --

    def start_clock(self, budget: float | None = None):
        self._deadline = time.monotonic() + (budget if budget is not None else self.cfg.time_budget)

    def _tick(self):
        self.stats.nodes += 1
        if self._deadline is not None and self.stats.nodes & 255 == 0:
            if time.monotonic() > self._deadline:
                raise BudgetExhausted(f"time budget of {self.cfg.time_budget}s exhausted")

    def _info(self, f: Formula) -> dict:
        info = self._analysis.get(id(f))
        if info is None:
            self._keep.append(f)
            info = {
                "flat": is_first_order(f),
                "dc": is_downward_closed(f),
                "fv": free_variables(f),
            }
            self._analysis[id(f)] = info
        return info

    def _team(self, variables, rows) -> Team:
        rows = frozenset(rows)
        if len(rows) > self.cfg.row_bound:
            raise EnumerationBoundExceeded(f"team of {len(rows)} rows exceeds row_bound {self.cfg.row_bound}")
        return Team(variables, rows)

    # -- flat formulas compiled to row predicates --

    def row_predicate(self, f: Formula, variables: tuple[str, ...]):
        key = (id(f), variables)
        fn = self._compiled.get(key)
        if fn is None:
            self._keep.append(f)
            fn = self._compile(f, {v: i for i, v in enumerate(variables)}, len(variables))
            self._compiled[key] = fn
        return fn

    def _compile(self, f, slots, size):
        dom = tuple(self.M.domain)
        if isinstance(f, EqLiteral):
            i, j, neg = slots[f.x], slots[f.y], f.negated
            return lambda env: (env[i] == env[j]) != neg
        if isinstance(f, RelLiteral):
            pos, neg = [slots[a] for a in f.args], f.negated
            table = self.M.relations.get(f.symbol)
            if table is None:
                raise ValueError(f"relation symbol {f.symbol!r} is not interpreted in the structure")
            tuples = table[1]
            return lambda env: (tuple(env[i] for i in pos) in tuples) != neg
        if isinstance(f, TupleDiseq):
            lp, rp = [slots[v] for v in f.lhs], [slots[v] for v in f.rhs]
            return lambda env: any(env[i] != env[j] for i, j in zip(lp, rp))
        if isinstance(f, Conj):
            a, b = self._compile(f.left, slots, size), self._compile(f.right, slots, size)
            return lambda env: a(env) and b(env)
        if isinstance(f, Disj):
            a, b = self._compile(f.left, slots, size), self._compile(f.right, slots, size)
            return lambda env: a(env) or b(env)
        if isinstance(f, (Exists, Forall)):
            body = self._compile(f.body, {**slots, f.var: size}, size + 1)
            if isinstance(f, Exists):
                return lambda env: any(body(env + (a,)) for a in dom)
            return lambda env: all(body(env + (a,)) for a in dom)
        raise TypeError(f"{type(f).__name__} is not first-order")

    # -- main recursion --

    def sat(self, f: Formula, team: Team) -> bool:
        self._tick()
        info = self._info(f)
        if info["flat"] and self.cfg.flat_shortcut:
            pred = self.row_predicate(f, team.vars)
            return all(pred(r) for r in team.rows)
        compound = isinstance(f, (Conj, Disj, Exists, Forall, SlashExists, LinImp))
        if compound and self.cfg.memo:
            key = (id(f), team)
            hit = self.memo.get(key)
            if hit is not None:
                self.stats.memo_hits += 1
                return hit
            out = self._sat(f, team)
            self.memo[key] = out
            return out
        return self._sat(f, team)

    def _sat(self, f: Formula, team: Team) -> bool:
        if isinstance(f, EqLiteral):
            return atoms.eval_eq(team, f.x, f.y, f.negated)
        if isinstance(f, RelLiteral):
            return atoms.eval_rel(self.M, team, f.symbol, f.args, f.negated)
        if isinstance(f, TupleDiseq):
            return atoms.eval_tuple_diseq(team, f.lhs, f.rhs)
        if isinstance(f, DepAtom):
            return atoms.eval_dep(team, f.antecedent, f.consequent)
        if isinstance(f, ConstancyAtom):
            return atoms.eval_dep(team, (), f.vars)
        if isinstance(f, IndepAtom):
            return atoms.eval_indep(team, f.lhs, f.rhs)
        if isinstance(f, CondIndepAtom):
            return atoms.eval_cond_indep(team, f.condition, f.lhs, f.rhs)
        if isinstance(f, InclusionAtom):
            return atoms.eval_inclusion(team, f.lhs, f.rhs)
        if isinstance(f, ExclusionAtom):
            return atoms.eval_exclusion(team, f.lhs, f.rhs)
        if isinstance(f, Conj):
            first, second = f.left, f.right
            if self._cheap(second) and not self._cheap(first):
                first, second = second, first
            return self.sat(first, team) and self.sat(second, team)
        if isinstance(f, Disj):
            return self._disj(f, team)
        if isinstance(f, Forall):
            ext = extend_universal(team, f.var, self.M)
            return self.sat(f.body, self._team(ext.vars, ext.rows))
        if isinstance(f, Exists):
            units = [[r] for r in sorted(team.rows)]
            return self._search(team, f.var, f.body, units, self.lax)
        if isinstance(f, SlashExists):
            return self._slash(f, team)
        if isinstance(f, LinImp):
            return self._linimp(f, team)
        raise TypeError(f"unknown formula node {type(f).__name__}")

    def _cheap(self, f: Formula) -> bool:
        return not isinstance(f, (Conj, Disj, Exists, Forall, SlashExists, LinImp))

    # -- disjunction --

    def _disj(self, f: Disj, team: Team) -> bool:
        left, right = f.left, f.right
        rows = sorted(team.rows)
        both_dc = self._info(left)["dc"] and self._info(right)["dc"]
        if not rows:
            return self.sat(left, team) and self.sat(right, team)
        if both_dc and self.cfg.prune:
            return self._dc_split(left, right, team, rows)
        partitions = self.cfg.split_mode == PARTITIONS and both_dc
        n = len(rows)
        for mask in range(1 << n):
            self._tick()
            s1 = team.with_rows(r for i, r in enumerate(rows) if mask >> i & 1)
            if not self.sat(left, s1):
                continue
            rest = [r for i, r in enumerate(rows) if not mask >> i & 1]
            inside = [r for i, r in enumerate(rows) if mask >> i & 1]
            extras = [()] if partitions else _subsets(inside)
            for extra in extras:
                if self.sat(right, team.with_rows(rest + list(extra))):
                    return True
        return False

    def _dc_split(self, left, right, team: Team, rows) -> bool:
        """Partition search for two downward-closed disjuncts: a row that
        fits neither side alone sinks the split, and a failing partial side
        cuts the branch."""
        only_l, only_r, free = [], [], []
        for r in rows:
            single = team.with_rows([r])
            in_l, in_r = self.sat(left, single), self.sat(right, single)
            if in_l and in_r:
                free.append(r)
            elif in_l:
                only_l.append(r)
            elif in_r:
                only_r.append(r)
            else:
                return False
        if not self.sat(left, team.with_rows(only_l)) or not self.sat(right, team.with_rows(only_r)):
            return False

        def go(i, ls, rs):
            self._tick()
            if i == len(free):
                return True
            r = free[i]
            for side, formula in ((ls, left), (rs, right)):
                side.append(r)
                if self.sat(formula, team.with_rows(side)) and go(i + 1, ls, rs):
                    return True
                side.pop()
            return False

        return go(0, list(only_l), list(only_r))

    # -- linear implication --

    def _linimp(self, f: LinImp, team: Team) -> bool:
        for other in all_teams(team.vars, self.M, self.cfg.team_enum_bound):
            self._tick()
            if self.sat(f.antecedent, other) and not self.sat(f.consequent, team.union(other)):
                return False
        return True

    # -- slash quantifier --

    def _slash(self, f: SlashExists, team: Team) -> bool:
        # x must be a function of every column except x and the slashed one
        keep = [i for i, v in enumerate(team.vars) if v not in (f.var, f.independent_of)]
        if f.independent_of not in team.vars:
            raise ValueError(f"slashed variable {f.independent_of!r} is not in the team's domain")
        groups: dict = defaultdict(list)
        for r in sorted(team.rows):
            groups[tuple(r[i] for i in keep)].append(r)
        return self._search(team, f.var, f.body, list(groups.values()), lax=False)

    # -- witness search --

    def _hoisted(self, body: Formula) -> list[Formula]:
        """Atoms and first-order parts that the body's team must satisfy on
        the projection produced at this quantifier."""
        info = self._info(body)
        if "hoisted" in info:
            return info["hoisted"]
        out = []

        def visit(g, bound):
            gi = self._info(g)
            if gi["flat"] or not isinstance(g, (Conj, Exists, Forall, SlashExists, Disj, LinImp)):
                if not gi["fv"] & bound:
                    out.append(g)
                else:
                    weak = _project_atom(g, bound)
                    if weak is not None:
                        out.append(weak)
                return
            if isinstance(g, Conj):
                visit(g.left, bound)
                visit(g.right, bound)
            elif isinstance(g, (Exists, Forall, SlashExists)):
                visit(g.body, bound | {g.var})

        visit(body, frozenset())
        info["hoisted"] = out
        return out

    def _search(self, team: Team, x: str, body: Formula, units: list[list[Row]], lax: bool) -> bool:
        new_vars, ext = extender(team.vars, x)
        dom = tuple(self.M.domain)
        prune = self.cfg.prune
        body_dc = self._info(body)["dc"]
        if lax and body_dc and prune:
            lax = False  # a strict sub-extension of a lax witness also works

        cands = [list(dom) for _ in units]
        monotone, lookahead_specs = [], []
        if prune:
            for g in self._hoisted(body):
                gi = self._info(g)
                if not gi["fv"] <= set(new_vars):
                    continue
                if x not in gi["fv"]:
                    if not self.sat(g, team):
                        return False
                    continue
                if gi["flat"]:
                    if self.cfg.flat_shortcut:
                        pred = self.row_predicate(g, new_vars)
                        ok = lambda r, pred=pred: pred(r)
                    else:
                        ok = lambda r, g=g: self.sat(g, self._team(new_vars, [r]))
                    cands = [[a for a in c if all(ok(ext(r, a)) for r in u)] for c, u in zip(cands, units)]
                elif isinstance(g, DepAtom):
                    monotone.append(("dep", [new_vars.index(v) for v in g.antecedent], [new_vars.index(v) for v in g.consequent]))
                elif isinstance(g, ConstancyAtom):
                    monotone.append(("dep", [], [new_vars.index(v) for v in g.vars]))
                elif isinstance(g, ExclusionAtom):
                    monotone.append(("excl", [new_vars.index(v) for v in g.lhs], [new_vars.index(v) for v in g.rhs]))
                elif isinstance(g, IndepAtom):
                    lookahead_specs.append(("indep", [[new_vars.index(v) for v in g.lhs], [new_vars.index(v) for v in g.rhs]]))
                elif isinstance(g, CondIndepAtom):
                    lookahead_specs.append(("cond", [[new_vars.index(v) for v in t] for t in (g.condition, g.lhs, g.rhs)]))
                elif isinstance(g, InclusionAtom):
                    lookahead_specs.append(("incl", [[new_vars.index(v) for v in g.lhs], [new_vars.index(v) for v in g.rhs]]))
            if body_dc:
                cands = [
                    [a for a in c if all(self.sat(body, self._team(new_vars, [ext(r, a)])) for r in u)]
                    for c, u in zip(cands, units)
                ]
        if any(not c for c in cands):
            return False

        order = sorted(range(len(units)), key=lambda i: len(cands[i])) if prune else list(range(len(units)))
        units = [units[i] for i in order]
        cands = [cands[i] for i in order]
        choices = [
            [frozenset(s) for s in _nonempty_subsets(c)] if lax else [frozenset((a,)) for a in c]
            for c in cands
        ]

        checks = []
        for kind, a, b in monotone:
            checks.append(_DepCheck(a, b) if kind == "dep" else _ExclusionCheck(a, b))
        looks = []
        for kind, positions in lookahead_specs:
            look = _Lookahead(kind, positions, None)
            potentials = [set() for _ in range(len(units) + 1)]
            for d in range(len(units) - 1, -1, -1):
                acc = set(potentials[d + 1])
                for r in units[d]:
                    for a in cands[d]:
                        acc.add(look.potential_key(ext(r, a)))
                potentials[d] = acc
            look.potentials = potentials
            looks.append(look)

        chosen: list[Row] = []

        def go(d: int) -> bool:
            self._tick()
            if d == len(units):
                return self.sat(body, self._team(new_vars, chosen))
            for values in choices[d]:
                new_rows = [ext(r, a) for r in units[d] for a in values]
                pushed = []
                ok = True
                for c in checks:
                    if c.push(new_rows):
                        pushed.append(c)
                    else:
                        ok = False
                        break
                looked = []
                if ok:
                    for lk in looks:
                        looked.append(lk)
                        if not lk.push(new_rows, d + 1):
                            ok = False
                            break
                if ok:
                    chosen.extend(new_rows)
                    if go(d + 1):
                        return True
                    del chosen[len(chosen) - len(new_rows):]
                for c in pushed:
                    c.pop()
                for lk in looked:
                    lk.pop()
            return False

        return go(0)


def _project_atom(g: Formula, bound) -> Formula | None:
    """A consequence of atom g that only mentions variables outside `bound`.

    Quantifiers below the search point never change the projection of the
    team onto the variables already present, so any weakening of g that
    avoids the inner variables must already hold there.
    """

    def keep(vs):
        return tuple(v for v in vs if v not in bound)

    if isinstance(g, IndepAtom):
        lhs, rhs = keep(g.lhs), keep(g.rhs)
        return IndepAtom(lhs, rhs) if lhs and rhs else None
    if isinstance(g, CondIndepAtom):
        if set(g.condition) & bound:
            return None
        lhs, rhs = keep(g.lhs), keep(g.rhs)
        return CondIndepAtom(g.condition, lhs, rhs) if lhs and rhs else None
    if isinstance(g, DepAtom):
        if set(g.antecedent) & bound:
            return None
        cons = keep(g.consequent)
        return DepAtom(g.antecedent, cons) if cons else None
    if isinstance(g, ConstancyAtom):
        cons = keep(g.vars)
        return ConstancyAtom(cons) if cons else None
    if isinstance(g, InclusionAtom):
        pairs = [(a, b) for a, b in zip(g.lhs, g.rhs) if a not in bound and b not in bound]
        if not pairs:
            return None
        return InclusionAtom(tuple(a for a, _ in pairs), tuple(b for _, b in pairs))
    return None


def _subsets(items):
    for k in range(len(items) + 1):
        yield from itertools.combinations(items, k)


def _nonempty_subsets(items):
    for k in range(1, len(items) + 1):
        yield from itertools.combinations(items, k)


# -- public entry points ----------------------------------------------------------


def effective_config(formulas, config: EvalConfig | None) -> EvalConfig:
    """Inclusion atoms force lax witnesses."""
    config = config or EvalConfig()
    if config.mode == STRICT and any(contains(f, InclusionAtom) for f in formulas):
        return replace(config, mode=LAX)
    return config


def check_vocabulary(structure: Structure, f: Formula) -> None:
    for symbol, arity in relation_symbols(f).items():
        if symbol not in structure.relations:
            raise ValueError(f"relation symbol {symbol!r} is not interpreted in the structure")
        if structure.relations[symbol][0] != arity:
            raise ValueError(f"relation {symbol!r} has arity {structure.relations[symbol][0]}, used with {arity}")


def satisfies(structure: Structure, team: Team, f: Formula, config: EvalConfig | None = None) -> EvalResult:
    """Decide structure |=_team f.

    Exhausting the time budget yields a result whose verdict is None rather
    than False.
    """
    missing = free_variables(f) - set(team.vars)
    if missing:
        raise ValueError(f"free variables {sorted(missing)} are not in the team's domain {team.vars}")
    check_vocabulary(structure, f)
    ev = Evaluator(structure, effective_config([f], config))
    ev.start_clock()
    t0 = time.monotonic()
    try:
        verdict = ev.sat(f, team)
    except BudgetExhausted:
        verdict = None
    ev.stats.elapsed = time.monotonic() - t0
    return EvalResult(verdict, ev.stats)


def satisfies_sentence(structure: Structure, f: Formula, config: EvalConfig | None = None) -> EvalResult:
    fv = free_variables(f)
    if fv:
        raise ValueError(f"not a sentence: free variables {sorted(fv)}")
    return satisfies(structure, Team.unit(), f, config)
