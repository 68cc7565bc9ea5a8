"""Finite relational structures, assignments and teams.

A team is stored column-wise: a sorted tuple of variable names plus a
frozenset of value tuples, one tuple per assignment. Two teams with the same
variable domain and the same assignments are equal and hash alike, which is
what the evaluator's memo table relies on.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping

FORMAT_VERSION = 1
DEFAULT_ROW_BOUND = 16

Row = tuple[int, ...]


class EnumerationBoundExceeded(ValueError):
    """An exhaustive enumeration would exceed its configured bound."""


@dataclass(frozen=True)
class Structure:
    """Domain {0, ..., domain_size-1} with relation interpretations."""

    domain_size: int
    relations: Mapping[str, tuple[int, frozenset[Row]]] = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.domain_size, int) or self.domain_size < 1:
            raise ValueError(f"domain_size must be a positive integer, got {self.domain_size!r}")
        rels = {}
        for name, (arity, tuples) in self.relations.items():
            tuples = frozenset(tuple(t) for t in tuples)
            for t in tuples:
                if len(t) != arity:
                    raise ValueError(f"relation {name}: tuple {t} does not have arity {arity}")
                if any(not isinstance(a, int) or not 0 <= a < self.domain_size for a in t):
                    raise ValueError(f"relation {name}: tuple {t} leaves the domain")
            rels[name] = (arity, tuples)
        object.__setattr__(self, "relations", rels)

    @property
    def domain(self) -> range:
        return range(self.domain_size)

    def __len__(self) -> int:
        return self.domain_size

    def __hash__(self):
        return hash((self.domain_size, tuple(sorted(self.relations.items(), key=lambda kv: kv[0]))))

    def holds(self, symbol: str, values: Row) -> bool:
        try:
            return tuple(values) in self.relations[symbol][1]
        except KeyError:
            raise ValueError(f"relation symbol {symbol!r} is not interpreted in the structure") from None

    def to_json(self) -> dict:
        return {
            "format": FORMAT_VERSION,
            "domain_size": self.domain_size,
            "relations": {
                name: {"arity": arity, "tuples": sorted(list(t) for t in tuples)}
                for name, (arity, tuples) in sorted(self.relations.items())
            },
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "Structure":
        rels = {}
        for name, entry in doc.get("relations", {}).items():
            if isinstance(entry, Mapping):
                arity, tuples = entry["arity"], entry.get("tuples", [])
            else:
                # bare list of tuples; arity read off the first tuple
                tuples = entry
                if not tuples:
                    raise ValueError(f"relation {name}: empty tuple list needs an explicit arity")
                arity = len(tuples[0])
            rels[name] = (arity, frozenset(tuple(t) for t in tuples))
        return cls(doc["domain_size"], rels)


def _sorted_vars(variables: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(set(variables)))


@dataclass(frozen=True)
class Team:
    """A set of assignments over a common variable domain."""

    vars: tuple[str, ...]
    rows: frozenset[Row]

    def __post_init__(self):
        if list(self.vars) != sorted(set(self.vars)):
            raise ValueError("team variables must be sorted and distinct; use Team.of")
        for r in self.rows:
            if len(r) != len(self.vars):
                raise ValueError(f"row {r} does not match variables {self.vars}")

    @classmethod
    def of(cls, variables: Iterable[str], rows: Iterable[Row] = ()) -> "Team":
        """Build from rows given in the order of `variables` (any order)."""
        variables = tuple(variables)
        target = _sorted_vars(variables)
        if len(target) != len(variables):
            raise ValueError(f"duplicate variables in {variables}")
        perm = [variables.index(v) for v in target]
        return cls(target, frozenset(tuple(r[i] for i in perm) for r in rows))

    @classmethod
    def from_assignments(cls, assignments: Iterable[Mapping[str, int]], variables: Iterable[str] | None = None) -> "Team":
        assignments = list(assignments)
        if variables is None:
            variables = assignments[0].keys() if assignments else ()
        target = _sorted_vars(variables)
        rows = set()
        for s in assignments:
            if set(s) != set(target):
                raise ValueError(f"assignment {dict(s)} is not total on {target}")
            rows.add(tuple(s[v] for v in target))
        return cls(target, frozenset(rows))

    @classmethod
    def unit(cls) -> "Team":
        """The team holding just the empty assignment."""
        return cls((), frozenset({()}))

    @classmethod
    def empty(cls, variables: Iterable[str] = ()) -> "Team":
        return cls(_sorted_vars(variables), frozenset())

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self) -> Iterator[Row]:
        return iter(sorted(self.rows))

    def __bool__(self) -> bool:
        return bool(self.rows)

    def index(self, var: str) -> int:
        try:
            return self.vars.index(var)
        except ValueError:
            raise ValueError(f"variable {var!r} is not in the team's domain {self.vars}") from None

    def positions(self, variables: Iterable[str]) -> tuple[int, ...]:
        return tuple(self.index(v) for v in variables)

    def project(self, variables: Iterable[str]) -> set[Row]:
        pos = self.positions(variables)
        return {tuple(r[i] for i in pos) for r in self.rows}

    def assignments(self) -> list[dict[str, int]]:
        return [dict(zip(self.vars, r)) for r in sorted(self.rows)]

    def with_rows(self, rows: Iterable[Row]) -> "Team":
        return Team(self.vars, frozenset(rows))

    def union(self, other: "Team") -> "Team":
        if other.vars != self.vars:
            raise ValueError(f"cannot merge teams over {self.vars} and {other.vars}")
        return Team(self.vars, self.rows | other.rows)

    def subteams(self) -> Iterator["Team"]:
        rows = sorted(self.rows)
        for mask in range(1 << len(rows)):
            yield self.with_rows(r for i, r in enumerate(rows) if mask >> i & 1)

    def to_json(self) -> dict:
        return {"format": FORMAT_VERSION, "variables": list(self.vars), "team": self.assignments()}

    @classmethod
    def from_json(cls, doc: Mapping) -> "Team":
        return cls.from_assignments(doc.get("team", []), doc.get("variables"))


def extender(variables: tuple[str, ...], x: str) -> tuple[tuple[str, ...], Callable[[Row, int], Row]]:
    """Variables after binding x, and a function row, value -> extended row."""
    if x in variables:
        i = variables.index(x)
        return variables, lambda r, a: r[:i] + (a,) + r[i + 1:]
    new_vars = _sorted_vars(variables + (x,))
    i = new_vars.index(x)
    return new_vars, lambda r, a: r[:i] + (a,) + r[i:]


def extend_universal(team: Team, x: str, structure: Structure) -> Team:
    """{ s(a/x) : s in team, a in M }."""
    new_vars, ext = extender(team.vars, x)
    dom = structure.domain
    return Team(new_vars, frozenset(ext(r, a) for r in team.rows for a in dom))


WitnessMap = Mapping[Row, Iterable[int]] | Callable[[dict[str, int]], Iterable[int]]


def extend_existential(team: Team, x: str, witnesses: WitnessMap) -> Team:
    """{ s(a/x) : s in team, a in W(s) }; every witness set must be nonempty.

    `witnesses` maps rows (tuples in the team's variable order) to value
    sets, or is a callable receiving the assignment as a dict.
    """
    new_vars, ext = extender(team.vars, x)
    out = set()
    for r in team.rows:
        if callable(witnesses):
            values = witnesses(dict(zip(team.vars, r)))
        else:
            values = witnesses[r]
        if isinstance(values, int):
            values = (values,)
        values = set(values)
        if not values:
            raise ValueError(f"empty witness set for row {dict(zip(team.vars, r))}")
        out.update(ext(r, a) for a in values)
    return Team(new_vars, frozenset(out))


def covers(team: Team, partitions: bool = False) -> Iterator[tuple[Team, Team]]:
    """All (S1, S2) with S1 | S2 == team; disjoint pairs only if partitions."""
    rows = sorted(team.rows)
    choices = ((0, 1) if partitions else (0, 1, 2))
    for pick in itertools.product(choices, repeat=len(rows)):
        left = [r for r, c in zip(rows, pick) if c != 1]
        right = [r for r, c in zip(rows, pick) if c != 0]
        yield team.with_rows(left), team.with_rows(right)


def all_rows(variables: Iterable[str], structure: Structure) -> list[Row]:
    variables = _sorted_vars(variables)
    return list(itertools.product(structure.domain, repeat=len(variables)))


def all_teams(variables: Iterable[str], structure: Structure, bound: int = DEFAULT_ROW_BOUND) -> Iterator[Team]:
    """Every team over `variables`: 2 ** (|M| ** |variables|) of them."""
    variables = _sorted_vars(variables)
    size = structure.domain_size ** len(variables)
    if size > bound:
        raise EnumerationBoundExceeded(
            f"{structure.domain_size}^{len(variables)} = {size} possible rows exceeds the bound {bound}"
        )
    rows = all_rows(variables, structure)
    for mask in range(1 << len(rows)):
        yield Team(variables, frozenset(r for i, r in enumerate(rows) if mask >> i & 1))


def load_document(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def dump_document(structure: Structure | None = None, team: Team | None = None) -> str:
    doc: dict = {"format": FORMAT_VERSION}
    if structure is not None:
        doc.update(structure.to_json())
    if team is not None:
        doc.update(team.to_json())
    return json.dumps(doc, indent=2, sort_keys=True)
