"""Command-line front end: eval, derive, equiv, rewrite.

Exit codes: 0 for a positive answer (true, derivable, equivalent, rewritten),
1 for a negative one, 2 for errors and exhausted budgets.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import axioms
from .consequence import consequence_check
from .evaluator import BudgetExhausted, EvalConfig, satisfies
from .formula import free_variables
from .parser import ParseError, parse, to_text
from .sentences import NAMED, named
from .structures import EnumerationBoundExceeded, Structure, Team, dump_document, load_document
from .translator import TARGETS, eliminate_atoms

OK, NEGATIVE, ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _config(args) -> EvalConfig:
    return EvalConfig(mode=args.mode, split_mode=args.splits, time_budget=args.budget)


def _formula(text: str):
    """Formula text, or @name for a built-in sentence."""
    if text.startswith("@"):
        try:
            return named(text[1:])
        except KeyError as e:
            raise UsageError(e.args[0]) from None
    return parse(text)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def cmd_eval(args, out) -> int:
    f = _formula(args.formula)
    if args.model is None and args.domain_size is None:
        raise UsageError("give a model file or --domain-size")
    doc = load_document(args.model) if args.model else {}
    M = Structure.from_json(doc) if args.model else Structure(args.domain_size)
    if args.sentence:
        S = Team.unit()
    elif args.team:
        S = Team.from_json(load_document(args.team))
    elif "team" in doc:
        S = Team.from_json(doc)
    elif not free_variables(f):
        S = Team.unit()
    else:
        raise UsageError(f"free variables {sorted(free_variables(f))} need a team (--team)")
    if args.sentence and free_variables(f):
        raise UsageError(f"not a sentence: free variables {sorted(free_variables(f))}")
    result = satisfies(M, S, f, _config(args))
    print(f"verdict: {result.status}", file=out)
    print(f"nodes: {result.stats.nodes}", file=out)
    print(f"memo_hits: {result.stats.memo_hits}", file=out)
    print(f"elapsed: {result.stats.elapsed:.3f}s", file=out)
    if result.verdict is None:
        return ERROR
    return OK if result.verdict else NEGATIVE


def cmd_derive(args, out) -> int:
    system = args.system
    premises = axioms.parse_statements(_read(args.premises), system) if args.premises else []
    goal = axioms.parse_statement(args.goal, system)
    if system == axioms.ARMSTRONG:
        result = axioms.armstrong_derives(premises, goal)
        refute = axioms.armstrong_counterexample
    elif system == axioms.INDEPENDENCE:
        result = axioms.gpp_derives(premises, goal)
        refute = axioms.gpp_counterexample
    else:
        result = axioms.ci_derive(premises, goal, args.depth)
        refute = None
    if result.derivable:
        axioms.check_derivation(result.derivation, premises, system)
        print("DERIVABLE", file=out)
        print(result.derivation.to_text(), file=out)
        return OK
    if refute is None:
        reason = "rules saturated" if result.exhausted else f"depth {args.depth} exhausted"
        print(f"UNKNOWN ({reason})", file=out)
        return NEGATIVE
    M, S = refute(premises, goal)
    print("NOT-DERIVABLE", file=out)
    print(dump_document(M, S), file=out)
    return NEGATIVE


def cmd_equiv(args, out) -> int:
    a, b = _formula(args.formula_a), _formula(args.formula_b)
    cfg = _config(args)
    for lhs, rhs, label in ((a, b, "A does not entail B"), (b, a, "B does not entail A")):
        result = consequence_check(lhs, rhs, args.max_domain, args.max_vars, config=cfg)
        if not result.holds:
            M, S = result.countermodel
            print(f"NOT-EQUIVALENT: {label}", file=out)
            print(dump_document(M, S), file=out)
            return NEGATIVE
    print(f"EQUIVALENT (domain size <= {args.max_domain})", file=out)
    return OK


def cmd_rewrite(args, out) -> int:
    targets = [t.strip() for t in args.targets.split(",") if t.strip()]
    print(to_text(eliminate_atoms(_formula(args.formula), targets)), file=out)
    return OK


def _eval_flags(p):
    p.add_argument("--mode", choices=["strict", "lax"], default="strict", help="witness semantics (default strict)")
    p.add_argument("--splits", choices=["partitions", "covers"], default="partitions", help="disjunction splits")
    p.add_argument("--budget", type=float, default=60.0, help="time budget in seconds (default 60)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="teamsem", description="Team semantics toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="decide M |=_S phi")
    p.add_argument("model", nargs="?", help="model JSON file (may also hold the team)")
    p.add_argument("formula", help=f"formula text, or @name with name in: {', '.join(sorted(NAMED))}")
    p.add_argument("--team", help="team JSON file")
    p.add_argument("--domain-size", type=int, help="use the empty-vocabulary model of this size")
    p.add_argument("--sentence", action="store_true", help="evaluate on the team holding only the empty assignment")
    _eval_flags(p)
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("derive", help="derivability in a rule system")
    p.add_argument("system", choices=sorted(axioms.SYSTEMS))
    p.add_argument("premises", nargs="?", help="file with one premise per line ('-' for stdin)")
    p.add_argument("goal")
    p.add_argument("--depth", type=int, default=6, help="search depth for the conditional system (default 6)")
    p.set_defaults(run=cmd_derive)

    p = sub.add_parser("equiv", help="bounded equivalence check")
    p.add_argument("formula_a")
    p.add_argument("formula_b")
    p.add_argument("--max-domain", type=int, default=3)
    p.add_argument("--max-vars", type=int, default=2)
    _eval_flags(p)
    p.set_defaults(run=cmd_equiv)

    p = sub.add_parser("rewrite", help="eliminate atoms by translation")
    p.add_argument("formula")
    p.add_argument("--targets", default=",".join(sorted(TARGETS)), help="comma-separated subset of: "
                   + ", ".join(sorted(TARGETS)))
    p.set_defaults(run=cmd_rewrite)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return OK if e.code == 0 else ERROR
    try:
        return args.run(args, out)
    except ParseError as e:
        print(f"parse error: {e}", file=out)
    except json.JSONDecodeError as e:
        print(f"error: bad JSON: {e}", file=out)
    except (UsageError, EnumerationBoundExceeded, BudgetExhausted, OSError, KeyError, ValueError) as e:
        msg = e.args[0] if e.args else str(e)
        print(f"error: {msg}", file=out)
    return ERROR


if __name__ == "__main__":
    sys.exit(main())
