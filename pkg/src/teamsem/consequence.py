"""Bounded semantic consequence: phi |= psi over every small model and team."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Iterator

from .evaluator import EvalConfig, Evaluator, effective_config
from .formula import Conj, Formula, free_variables, relation_symbols
from .structures import EnumerationBoundExceeded, Structure, Team, all_teams

DEFAULT_STRUCTURE_BOUND = 4096


@dataclass
class ConsequenceResult:
    holds: bool
    countermodel: tuple[Structure, Team] | None = None
    checked: int = 0  # (structure, team) pairs examined

    def __bool__(self) -> bool:
        return self.holds


def structures(symbols: dict[str, int], max_domain: int, bound: int = DEFAULT_STRUCTURE_BOUND) -> Iterator[Structure]:
    """Every structure interpreting `symbols`, domain sizes 1..max_domain."""
    names = sorted(symbols)
    for n in range(1, max_domain + 1):
        spaces = [list(itertools.product(range(n), repeat=symbols[s])) for s in names]
        total = 1
        for sp in spaces:
            total *= 2 ** len(sp)
        if total > bound:
            raise EnumerationBoundExceeded(f"{total} structures of size {n} exceeds the bound {bound}")
        per_symbol = [
            [frozenset(t for i, t in enumerate(sp) if mask >> i & 1) for mask in range(1 << len(sp))]
            for sp in spaces
        ]
        for interp in itertools.product(*per_symbol):
            yield Structure(n, {s: (symbols[s], ext) for s, ext in zip(names, interp)})


def consequence_check(
    phi: Formula,
    psi: Formula,
    max_domain: int = 3,
    max_vars: int = 2,
    variables=None,
    config: EvalConfig | None = None,
) -> ConsequenceResult:
    """Look for a model and team satisfying phi but not psi.

    Teams range over `variables` (default: the free variables of both
    formulas). This is a bounded search: `holds` only speaks for models up to
    max_domain elements. Raises BudgetExhausted when the time budget runs
    out before a verdict.
    """
    fv = free_variables(phi) | free_variables(psi)
    variables = sorted(fv if variables is None else set(variables))
    if not fv <= set(variables):
        raise ValueError(f"variables {sorted(fv - set(variables))} are free but not in the team domain")
    if len(variables) > max_vars:
        raise EnumerationBoundExceeded(f"{len(variables)} variables exceed max_vars={max_vars}")
    symbols = relation_symbols(Conj(phi, psi))  # raises on an arity clash
    cfg = effective_config([phi, psi], config)
    deadline = time.monotonic() + cfg.time_budget
    checked = 0
    for M in structures(symbols, max_domain):
        ev = Evaluator(M, cfg)
        ev.start_clock(deadline - time.monotonic())
        for S in all_teams(variables, M, cfg.team_enum_bound):
            checked += 1
            if ev.sat(phi, S) and not ev.sat(psi, S):
                return ConsequenceResult(False, (M, S), checked)
    return ConsequenceResult(True, None, checked)


def equivalent(phi: Formula, psi: Formula, **kwargs) -> tuple[ConsequenceResult, ConsequenceResult]:
    return consequence_check(phi, psi, **kwargs), consequence_check(psi, phi, **kwargs)
