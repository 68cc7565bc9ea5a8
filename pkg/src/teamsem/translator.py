"""Rewriting dependency atoms into other atoms.

Three translations are available:

    dep(x)          ->  x _||_ x
    dep(x, y)       ->  y _||_{x} y
    excl(x ; y)     ->  E z (incl(x ; z) & y _||_ z & (y) != (z))

The exclusion rewrite introduces fresh variables named ``_z0``, ``_z1``, ...
skipping any name already present in the input, so the output is
deterministic and capture-free.
"""

from __future__ import annotations

import itertools
from dataclasses import replace
from typing import Iterable

from .formula import (
    ATOM_TYPES,
    FLAT_ATOM_TYPES,
    QUANTIFIER_TYPES,
    CondIndepAtom,
    Conj,
    ConstancyAtom,
    DepAtom,
    Disj,
    ExclusionAtom,
    Formula,
    FormulaError,
    InclusionAtom,
    IndepAtom,
    LinImp,
    TupleDiseq,
    all_variables,
    conj,
    exists,
)

CONSTANCY, DEP_TO_COND, EXCLUSION = "constancy", "dep-to-cond", "exclusion"
TARGETS = frozenset({CONSTANCY, DEP_TO_COND, EXCLUSION})
FRESH_PREFIX = "_z"


class FreshNames:
    """Deterministic supply of variable names avoiding a given set."""

    def __init__(self, avoid: Iterable[str] = (), prefix: str = FRESH_PREFIX):
        self.avoid = set(avoid)
        self.prefix = prefix
        self._counter = itertools.count()

    def __call__(self) -> str:
        while True:
            name = f"{self.prefix}{next(self._counter)}"
            if name not in self.avoid:
                self.avoid.add(name)
                return name


def constancy_to_indep(f: ConstancyAtom) -> IndepAtom:
    if not isinstance(f, ConstancyAtom):
        raise FormulaError(f"expected a constancy atom, got {type(f).__name__}")
    return IndepAtom(f.vars, f.vars)


def dep_to_cond_indep(f: DepAtom) -> CondIndepAtom:
    if not isinstance(f, DepAtom):
        raise FormulaError(f"expected a dependence atom, got {type(f).__name__}")
    return CondIndepAtom(f.antecedent, f.consequent, f.consequent)


def exclusion_to_indep(f: ExclusionAtom, fresh: FreshNames | None = None) -> Formula:
    if not isinstance(f, ExclusionAtom):
        raise FormulaError(f"expected an exclusion atom, got {type(f).__name__}")
    if len(f.lhs) != len(f.rhs):
        raise FormulaError(f"arity mismatch in exclusion atom: {len(f.lhs)} vs {len(f.rhs)}")
    fresh = fresh or FreshNames(all_variables(f))
    z = tuple(fresh() for _ in f.lhs)
    body = conj(InclusionAtom(f.lhs, z), IndepAtom(f.rhs, z), TupleDiseq(f.rhs, z))
    return exists(z, body)


def eliminate_atoms(f: Formula, targets: Iterable[str] = TARGETS) -> Formula:
    """Apply the selected translations everywhere in f, bottom-up."""
    targets = frozenset(targets)
    unknown = targets - TARGETS
    if unknown:
        raise ValueError(f"unknown targets {sorted(unknown)}; choose from {sorted(TARGETS)}")
    fresh = FreshNames(all_variables(f))

    def go(g: Formula) -> Formula:
        if isinstance(g, ConstancyAtom) and CONSTANCY in targets:
            return constancy_to_indep(g)
        if isinstance(g, DepAtom) and DEP_TO_COND in targets:
            return dep_to_cond_indep(g)
        if isinstance(g, ExclusionAtom) and EXCLUSION in targets:
            return exclusion_to_indep(g, fresh)
        if isinstance(g, ATOM_TYPES + FLAT_ATOM_TYPES):
            return g
        if isinstance(g, (Conj, Disj)):
            return type(g)(go(g.left), go(g.right))
        if isinstance(g, LinImp):
            return LinImp(go(g.antecedent), go(g.consequent))
        if isinstance(g, QUANTIFIER_TYPES):
            return replace(g, body=go(g.body))
        raise TypeError(f"unexpected formula node {type(g).__name__}")

    return go(f)

