"""Named sentences of the empty vocabulary used in tests and examples."""

from __future__ import annotations

from .formula import Formula
from .parser import parse

# true exactly in infinite models
INFINITY_DEP = "E x A y E z (dep(z, y) & !(z = x))"
INFINITY_INDEP = "E z A x E y A u E v (x y _||_ u v & (x = u <-> y = v) & !(v = z))"

# evenness of the domain size, as usually displayed; see EVENNESS_* below
EVENNESS_DEP = "A x E y A u E v (dep(u, v) & (x = v <-> y = u) & !(x = y))"
EVENNESS_INDEP = "A x E y A u E v (x y _||_ u v & (x = v <-> y = u) & !(x = y))"

# The displayed forms only force x -> y to be a fixed-point-free
# permutation, which exists on every domain of two or more elements. Adding
# the injectivity clause (x = u <-> y = v) forces an involution, so these
# are true exactly on even domains.
EVENNESS_DEP_INVOLUTION = (
    "A x E y A u E v (dep(u, v) & (x = u <-> y = v) & (x = v <-> y = u) & !(x = y))"
)
EVENNESS_INDEP_INVOLUTION = (
    "A x E y A u E v (x y _||_ u v & (x = u <-> y = v) & (x = v <-> y = u) & !(x = y))"
)

NAMED = {
    "infinity-dep": INFINITY_DEP,
    "infinity-indep": INFINITY_INDEP,
    "evenness-dep": EVENNESS_DEP,
    "evenness-indep": EVENNESS_INDEP,
    "evenness-dep-involution": EVENNESS_DEP_INVOLUTION,
    "evenness-indep-involution": EVENNESS_INDEP_INVOLUTION,
}


def named(name: str) -> Formula:
    try:
        return parse(NAMED[name])
    except KeyError:
        raise KeyError(f"unknown sentence {name!r}; known: {', '.join(sorted(NAMED))}") from None


def normal_form_pair(phi: str) -> tuple[Formula, Formula]:
    """A dependence-atom sentence and its independence-atom counterpart.

    phi is a quantifier-free formula over x, y, v, w. The first sentence
    makes v depend on x only and w on y only; the second expresses the same
    with independence atoms.
    """
    dep = parse(f"A x A y E v E w (dep(x, v) & dep(y, w) & ({phi}))")
    ind = parse(f"A x A y E v E w (x v _||_ y & y w _||_ x v & ({phi}))")
    return dep, ind
