"""Plain-text formula syntax: a recursive-descent parser and its printer.

Grammar (binary connectives are right-associative; ``-o`` binds weakest,
then ``|``, then ``&``; quantifiers scope over the next unary formula)::

    formula  := disj [ "-o" formula ]
    disj     := conj [ "|" disj ]
    conj     := unary [ "&" conj ]
    unary    := ("E" | "A") NAME unary
              | "E" NAME "/" NAME unary
              | "(" formula ")"
              | atom
    atom     := literal [ "<->" literal ]
              | "dep" "(" vars [ ("," | ";") vars ] ")"
              | "incl" "(" vars ";" vars ")"
              | "excl" "(" vars ";" vars ")"
              | "(" vars ")" "!=" "(" vars ")"
              | vars "_||_" [ "{" vars "}" ] vars
    literal  := NAME "=" NAME | NAME "!=" NAME | NAME "(" vars ")"
              | "!" literal | "!" "(" literal ")"
    vars     := "(" ")" | NAME { [","] NAME }

Inside ``dep(...)`` the comma separates antecedent from consequent, so the
variables of each side are whitespace-separated there. ``E``, ``A``, ``dep``,
``incl`` and ``excl`` are keywords and cannot be used as names.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

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
    KEYWORDS,
    FormulaError,
    InclusionAtom,
    IndepAtom,
    LinImp,
    RelLiteral,
    SlashExists,
    TupleDiseq,
    desugar_iff,
    negate_literal,
)


_UNICODE = {
    "∧": "&",
    "∨": "|",
    "⊸": "-o",
    "¬": "!",
    "∃": "E",
    "∀": "A",
    "⊥": "_||_",
    "≠": "!=",
    "↔": "<->",
}

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<sym>_\|\|_|<->|-o|!=|[()&|{},;=!/])
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)


class ParseError(ValueError):
    def __init__(self, line: int, column: int, expected: str, found: str):
        self.line = line
        self.column = column
        self.expected = expected
        self.found = found
        super().__init__(f"{line}:{column}: expected {expected}, found {found}")

    @property
    def position(self) -> tuple[int, int]:
        return (self.line, self.column)


@dataclass(frozen=True)
class Token:
    kind: str  # "sym", "name" or "eof"
    text: str
    line: int
    column: int

    def describe(self) -> str:
        return "end of input" if self.kind == "eof" else repr(self.text)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        ch = text[pos]
        if ch in _UNICODE:
            tokens.append(Token("sym" if ch not in "∃∀" else "name", _UNICODE[ch], line, pos - line_start + 1))
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(line, pos - line_start + 1, "a token", repr(ch))
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, m.group(), line, pos - line_start + 1))
        else:
            for i, c in enumerate(m.group()):
                if c == "\n":
                    line += 1
                    line_start = pos + i + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    # -- token helpers --

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str, k: int = 0) -> bool:
        t = self.peek(k)
        return t.kind != "eof" and t.text == text

    def at_name(self, k: int = 0) -> bool:
        t = self.peek(k)
        return t.kind == "name" and t.text not in KEYWORDS

    def fail(self, expected: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise ParseError(tok.line, tok.column, expected, tok.describe())

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(repr(text))
        self.i += 1
        return self.toks[self.i - 1]

    def name(self) -> str:
        if not self.at_name():
            self.fail("a variable or relation name")
        self.i += 1
        return self.toks[self.i - 1].text

    # -- grammar --

    def parse(self) -> Formula:
        f = self.formula()
        if self.peek().kind != "eof":
            self.fail("a connective or end of input")
        return f

    def formula(self) -> Formula:
        left = self.disj()
        if self.at("-o"):
            self.i += 1
            return LinImp(left, self.formula())
        return left

    def disj(self) -> Formula:
        left = self.conj()
        if self.at("|"):
            self.i += 1
            return Disj(left, self.disj())
        return left

    def conj(self) -> Formula:
        left = self.unary()
        if self.at("&"):
            self.i += 1
            return Conj(left, self.conj())
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "name" and tok.text in ("E", "A"):
            self.i += 1
            var = self.name()
            if tok.text == "E" and self.at("/"):
                self.i += 1
                other = self.name()
                return SlashExists(var, other, self.unary())
            body = self.unary()
            return Exists(var, body) if tok.text == "E" else Forall(var, body)
        if self.at("("):
            if self._paren_tuple_ahead():
                return self.paren_tuple_atom()
            self.i += 1
            inner = self.formula()
            self.expect(")")
            if self.at("<->"):
                return self.iff_tail(inner, tok)
            return inner
        return self.atom()

    def _paren_tuple_ahead(self) -> bool:
        """'(' names ')' followed by '!=' or '_||_' starts a tuple atom."""
        k = 1
        while self.at_name(k) or self.at(",", k):
            k += 1
        return self.at(")", k) and (self.at("!=", k + 1) or self.at("_||_", k + 1))

    def paren_tuple_atom(self) -> Formula:
        start = self.peek()
        lhs = self.paren_vars()
        if self.at("_||_"):
            return self.indep_tail(lhs)
        self.expect("!=")
        if not self.at("("):
            self.fail("'(' starting the right-hand tuple")
        rhs = self.paren_vars()
        return self.build(TupleDiseq, start, lhs, rhs)

    def paren_vars(self) -> tuple[str, ...]:
        self.expect("(")
        out = []
        while not self.at(")"):
            out.append(self.name())
            if self.at(","):
                self.i += 1
        self.expect(")")
        return tuple(out)

    def vars(self, commas: bool = True) -> tuple[str, ...]:
        if self.at("(") and self.at(")", 1):
            self.i += 2
            return ()
        out = [self.name()]
        while True:
            if commas and self.at(",") and self.at_name(1):
                self.i += 1
            if self.at_name():
                out.append(self.name())
            else:
                return tuple(out)

    def build(self, cls, tok: Token, *args) -> Formula:
        try:
            return cls(*args)
        except FormulaError as exc:
            raise ParseError(tok.line, tok.column, "matching arities", str(exc)) from None

    def atom(self) -> Formula:
        tok = self.peek()
        if tok.kind == "name" and tok.text == "dep":
            self.i += 1
            self.expect("(")
            first = self.vars(commas=False)
            if self.at(",") or self.at(";"):
                self.i += 1
                second = self.vars(commas=False)
                self.expect(")")
                return DepAtom(first, second)
            self.expect(")")
            return ConstancyAtom(first)
        if tok.kind == "name" and tok.text in ("incl", "excl"):
            self.i += 1
            self.expect("(")
            lhs = self.vars()
            self.expect(";")
            rhs = self.vars()
            self.expect(")")
            cls = InclusionAtom if tok.text == "incl" else ExclusionAtom
            return self.build(cls, tok, lhs, rhs)
        if self.at("!"):
            lit = self.literal()
            return self.iff_tail(lit, tok) if self.at("<->") else lit
        if not self.at_name():
            self.fail("a formula")
        nxt = self.peek(1)
        if nxt.kind == "sym" and nxt.text in ("=", "!=", "("):
            lit = self.literal()
            return self.iff_tail(lit, tok) if self.at("<->") else lit
        lhs = self.vars()
        if not self.at("_||_"):
            self.fail("'_||_' after a variable list")
        return self.indep_tail(lhs)

    def indep_tail(self, lhs: tuple[str, ...]) -> Formula:
        self.expect("_||_")
        if self.at("{"):
            self.i += 1
            cond = () if self.at("}") else self.vars()
            self.expect("}")
            return CondIndepAtom(cond, lhs, self.vars())
        return IndepAtom(lhs, self.vars())

    def literal(self) -> Formula:
        if self.at("!"):
            self.i += 1
            if self.at("("):
                self.i += 1
                inner = self.literal()
                self.expect(")")
            else:
                inner = self.literal()
            return negate_literal(inner)
        if self.at("("):
            self.i += 1
            inner = self.literal()
            self.expect(")")
            return inner
        left = self.name()
        if self.at("="):
            self.i += 1
            return EqLiteral(left, self.name())
        if self.at("!="):
            self.i += 1
            return EqLiteral(left, self.name(), negated=True)
        if self.at("("):
            self.i += 1
            args = () if self.at(")") else self.vars()
            self.expect(")")
            return RelLiteral(left, args)
        self.fail("'=', '!=' or '(' after a name in a literal")

    def iff_tail(self, left: Formula, tok: Token) -> Formula:
        self.expect("<->")
        right_tok = self.peek()
        right = self.literal()
        for side, t in ((left, tok), (right, right_tok)):
            if not isinstance(side, (EqLiteral, RelLiteral)):
                raise ParseError(t.line, t.column, "a literal on each side of '<->'", "a compound formula")
        return desugar_iff(left, right)


def parse(text: str) -> Formula:
    """Parse one formula; raises ParseError with a line/column position."""
    return _Parser(text).parse()


def parse_lines(text: str) -> list[Formula]:
    """One formula per non-blank line; '#' starts a comment."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            out.append(parse(line))
        except ParseError as exc:
            raise ParseError(lineno, exc.column, exc.expected, exc.found) from None
    return out


# -- printing -----------------------------------------------------------------

_PREC = {LinImp: 1, Disj: 2, Conj: 3}
_OPS = {LinImp: "-o", Disj: "|", Conj: "&"}


def _vars(t: tuple[str, ...]) -> str:
    return " ".join(t) if t else "()"


def _atom_text(f: Formula) -> str:
    if isinstance(f, EqLiteral):
        return f"!({f.x} = {f.y})" if f.negated else f"{f.x} = {f.y}"
    if isinstance(f, RelLiteral):
        return ("!" if f.negated else "") + f"{f.symbol}({', '.join(f.args)})"
    if isinstance(f, TupleDiseq):
        return f"({' '.join(f.lhs)}) != ({' '.join(f.rhs)})"
    if isinstance(f, DepAtom):
        return f"dep({_vars(f.antecedent)}, {_vars(f.consequent)})"
    if isinstance(f, ConstancyAtom):
        return f"dep({_vars(f.vars)})"
    if isinstance(f, IndepAtom):
        return f"{_vars(f.lhs)} _||_ {_vars(f.rhs)}"
    if isinstance(f, CondIndepAtom):
        return f"{_vars(f.lhs)} _||_{{{' '.join(f.condition)}}} {_vars(f.rhs)}"
    if isinstance(f, InclusionAtom):
        return f"incl({_vars(f.lhs)} ; {_vars(f.rhs)})"
    if isinstance(f, ExclusionAtom):
        return f"excl({_vars(f.lhs)} ; {_vars(f.rhs)})"
    raise TypeError(f"cannot print {type(f).__name__}")


def _prec(f: Formula) -> int:
    return _PREC.get(type(f), 4)


def to_text(f: Formula) -> str:
    """Render f in the surface syntax; parse(to_text(f)) == f."""
    cls = type(f)
    if cls in _PREC:
        a, b = f.children()
        p = _PREC[cls]
        left = to_text(a)
        right = to_text(b)
        if _prec(a) <= p:
            left = f"({left})"
        if _prec(b) < p:
            right = f"({right})"
        return f"{left} {_OPS[cls]} {right}"
    if isinstance(f, (Exists, Forall, SlashExists)):
        body = to_text(f.body)
        if _prec(f.body) < 4:
            body = f"({body})"
        q = "A" if isinstance(f, Forall) else "E"
        head = f"{q} {f.var}" + (f" / {f.independent_of}" if isinstance(f, SlashExists) else "")
        return f"{head} {body}"
    return _atom_text(f)
