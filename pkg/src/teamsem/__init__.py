"""Model checking and inference for dependence and independence logic."""

from .axioms import (
    CIStatement,
    Derivation,
    FDStatement,
    IndStatement,
    armstrong_counterexample,
    armstrong_derives,
    check_derivation,
    ci_derive,
    gpp_counterexample,
    gpp_derives,
)
from .consequence import consequence_check, equivalent
from .evaluator import BudgetExhausted, EvalConfig, EvalResult, Evaluator, satisfies, satisfies_sentence
from .formula import free_variables, rename
from .parser import ParseError, parse, to_text
from .structures import EnumerationBoundExceeded, Structure, Team
from .translator import eliminate_atoms

__all__ = [
    "BudgetExhausted",
    "CIStatement",
    "Derivation",
    "EnumerationBoundExceeded",
    "EvalConfig",
    "EvalResult",
    "Evaluator",
    "FDStatement",
    "IndStatement",
    "ParseError",
    "Structure",
    "Team",
    "armstrong_counterexample",
    "armstrong_derives",
    "check_derivation",
    "ci_derive",
    "consequence_check",
    "eliminate_atoms",
    "equivalent",
    "free_variables",
    "gpp_counterexample",
    "gpp_derives",
    "parse",
    "rename",
    "satisfies",
    "satisfies_sentence",
    "to_text",
]
