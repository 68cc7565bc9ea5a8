"""Seeded random formula generators shared by the property and acceptance tests."""

from __future__ import annotations

import random

from teamsem.formula import (
    CondIndepAtom,
    Conj,
    ConstancyAtom,
    DepAtom,
    Disj,
    EqLiteral,
    ExclusionAtom,
    Exists,
    Forall,
    InclusionAtom,
    IndepAtom,
    LinImp,
    RelLiteral,
    SlashExists,
    TupleDiseq,
)

LITERALS = ("eq", "rel")
FIRST_ORDER = LITERALS + ("diseq", "and", "or", "exists", "forall")
DEPENDENCE = FIRST_ORDER + ("dep", "const")
ALL_ATOMS = ("eq", "rel", "diseq", "dep", "const", "indep", "cond", "incl", "excl")
EVERYTHING = ALL_ATOMS + ("and", "or", "exists", "forall", "slash", "linimp")

ATOM_KINDS = set(ALL_ATOMS)
BINARY = {"and", "or", "linimp"}
QUANT = {"exists", "forall", "slash"}


def _tuple(rng, scope, lo, hi):
    return tuple(rng.choice(scope) for _ in range(rng.randint(lo, hi)))


def random_atom(rng: random.Random, kind: str, scope, relations):
    scope = list(scope)
    if kind == "eq":
        return EqLiteral(rng.choice(scope), rng.choice(scope), rng.random() < 0.5)
    if kind == "rel":
        sym = rng.choice(sorted(relations))
        return RelLiteral(sym, _tuple(rng, scope, relations[sym], relations[sym]), rng.random() < 0.5)
    if kind == "diseq":
        k = rng.randint(1, 2)
        return TupleDiseq(_tuple(rng, scope, k, k), _tuple(rng, scope, k, k))
    if kind == "dep":
        return DepAtom(_tuple(rng, scope, 0, 2), _tuple(rng, scope, 1, 2))
    if kind == "const":
        return ConstancyAtom(_tuple(rng, scope, 1, 2))
    if kind == "indep":
        return IndepAtom(_tuple(rng, scope, 0, 2), _tuple(rng, scope, 1, 2))
    if kind == "cond":
        return CondIndepAtom(_tuple(rng, scope, 0, 2), _tuple(rng, scope, 1, 2), _tuple(rng, scope, 1, 2))
    if kind in ("incl", "excl"):
        k = rng.randint(1, 2)
        cls = InclusionAtom if kind == "incl" else ExclusionAtom
        return cls(_tuple(rng, scope, k, k), _tuple(rng, scope, k, k))
    raise ValueError(kind)


def random_formula(
    rng: random.Random,
    depth: int,
    free=("x", "y"),
    bound=("z",),
    kinds=DEPENDENCE,
    relations=None,
    atom_bias: float = 0.3,
):
    """A formula whose free variables lie in `free`.

    Quantifiers bind names from `bound`; atoms draw variables from whatever
    is in scope, so the result is always well-scoped for a team over `free`.
    """
    relations = relations if relations is not None else {"R": 1}
    kinds = [k for k in kinds if k != "rel" or relations]
    atoms = [k for k in kinds if k in ATOM_KINDS]
    compound = [k for k in kinds if k not in ATOM_KINDS]

    def go(d, scope):
        if d == 0 or not compound or rng.random() < atom_bias:
            return random_atom(rng, rng.choice(atoms), scope, relations)
        k = rng.choice(compound)
        if k in BINARY:
            left, right = go(d - 1, scope), go(d - 1, scope)
            return {"and": Conj, "or": Disj, "linimp": LinImp}[k](left, right)
        var = rng.choice(bound)
        inner = sorted(set(scope) | {var})
        if k == "exists":
            return Exists(var, go(d - 1, inner))
        if k == "forall":
            return Forall(var, go(d - 1, inner))
        return SlashExists(var, rng.choice(scope), go(d - 1, inner))

    return go(depth, list(free))


NAME_POOL = ("x", "y", "z", "u", "v", "w", "x1", "y'", "_t", "long_name", "Ex", "Ax", "deps")


def random_ast(rng: random.Random, depth: int = 6):
    """Arbitrary well-formed AST (scoping ignored) for syntax round trips."""
    relations = {"R": 1, "P": 2, "Q_0": 0, "S'": 3}

    def go(d):
        if d == 0 or rng.random() < 0.25:
            kind = rng.choice(ALL_ATOMS)
            if kind in ("dep", "indep"):
                # empty tuples on either side are legal and exercise "()"
                lo = 0
                a, b = _tuple(rng, NAME_POOL, lo, 3), _tuple(rng, NAME_POOL, lo, 3)
                return DepAtom(a, b) if kind == "dep" else IndepAtom(a, b)
            if kind == "cond":
                return CondIndepAtom(*(_tuple(rng, NAME_POOL, 0, 3) for _ in range(3)))
            if kind == "const":
                return ConstancyAtom(_tuple(rng, NAME_POOL, 0, 3))
            if kind in ("incl", "excl", "diseq"):
                k = rng.randint(0 if kind != "diseq" else 1, 3)
                cls = {"incl": InclusionAtom, "excl": ExclusionAtom, "diseq": TupleDiseq}[kind]
                return cls(_tuple(rng, NAME_POOL, k, k), _tuple(rng, NAME_POOL, k, k))
            return random_atom(rng, kind, NAME_POOL, relations)
        k = rng.choice(("and", "or", "linimp", "exists", "forall", "slash"))
        if k in BINARY:
            return {"and": Conj, "or": Disj, "linimp": LinImp}[k](go(d - 1), go(d - 1))
        var = rng.choice(NAME_POOL)
        if k == "exists":
            return Exists(var, go(d - 1))
        if k == "forall":
            return Forall(var, go(d - 1))
        return SlashExists(var, rng.choice(NAME_POOL), go(d - 1))

    return go(depth)
