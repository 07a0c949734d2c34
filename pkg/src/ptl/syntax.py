"""Formulas of propositional logic enriched with the typicality operator.

Concrete syntax (ASCII, Unicode aliases in brackets)::

    !a   [¬]   negation            *a   [•]   typicality
    a & b [∧]  conjunction         a | b [∨]  disjunction
    a -> b [→] implication         a <-> b [↔] equivalence
    T [⊤] / F [⊥]                  atoms: [a-z][a-z0-9_]*

Precedence, tightest first: ``! *``, ``&``, ``|``, ``->``, ``<->``.
``->`` associates to the right, every other binary connective to the left.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable

from .errors import NestedTypicality, ParseError

__all__ = [
    "Formula", "Atom", "Not", "And", "Or", "Implies", "Iff", "Top", "Bot", "Typ",
    "TOP", "BOT", "parse", "render", "typicality_depth", "atoms", "is_propositional",
    "conjoin", "disjoin", "NormalFormSentence", "to_normal_form", "as_formula", "as_kb", "is_conditional",
]


class Formula:
    __slots__ = ()

    def __str__(self):
        return render(self, minimal=True)


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    name: str

    def __post_init__(self):
        if not _ATOM_RE.fullmatch(self.name):
            raise ValueError(f"invalid atom name {self.name!r}")


@dataclass(frozen=True, slots=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Top(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Bot(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Typ(Formula):
    sub: Formula


TOP = Top()
BOT = Bot()

_ATOM_RE = re.compile(r"[a-z][a-z0-9_]*")
_BINARY = (And, Or, Implies, Iff)


def conjoin(formulas: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``T``."""
    formulas = list(formulas)
    return reduce(And, formulas) if formulas else TOP


def disjoin(formulas: Iterable[Formula]) -> Formula:
    """Left-nested disjunction; the empty disjunction is ``F``."""
    formulas = list(formulas)
    return reduce(Or, formulas) if formulas else BOT


# ---------------------------------------------------------------- parsing

_UNICODE = {"¬": "!", "∧": "&", "∨": "|", "→": "->", "↔": "<->", "•": "*", "⊤": "T", "⊥": "F"}
_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<op><->|->|[!*&|()TF])|(?P<atom>[a-z][a-z0-9_]*)"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    line, col = 1, 1
    while pos < len(text):
        ch = text[pos]
        if ch in _UNICODE:
            tokens.append((_UNICODE[ch], line, col))
            pos += 1
            col += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unknown token {ch!r}", line, col, text)
        lexeme = m.group()
        if m.lastgroup == "atom":
            tokens.append((("atom", lexeme), line, col))
        elif m.lastgroup == "op":
            tokens.append((lexeme, line, col))
        for c in lexeme:
            if c == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        pos = m.end()
    tokens.append((None, line, col))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message):
        _, line, col = self.tokens[self.i]
        raise ParseError(message, line, col, self.text)

    def expect(self, kind):
        if self.peek() != kind:
            self.error(f"expected {kind!r}, found {_describe(self.peek())}")
        self.advance()

    def formula(self):
        left = self.imp()
        while self.peek() == "<->":
            self.advance()
            left = Iff(left, self.imp())
        return left

    def imp(self):
        left = self.disj()
        if self.peek() == "->":
            self.advance()
            return Implies(left, self.imp())
        return left

    def disj(self):
        left = self.conj()
        while self.peek() == "|":
            self.advance()
            left = Or(left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.peek() == "&":
            self.advance()
            left = And(left, self.unary())
        return left

    def unary(self):
        tok = self.peek()
        if tok == "!":
            self.advance()
            return Not(self.unary())
        if tok == "*":
            self.advance()
            return Typ(self.unary())
        if tok == "T":
            self.advance()
            return TOP
        if tok == "F":
            self.advance()
            return BOT
        if tok == "(":
            self.advance()
            inner = self.formula()
            self.expect(")")
            return inner
        if isinstance(tok, tuple):
            self.advance()
            return Atom(tok[1])
        self.error(f"unexpected {_describe(tok)}")


def _describe(tok):
    if tok is None:
        return "end of input"
    if isinstance(tok, tuple):
        return f"atom {tok[1]!r}"
    return repr(tok)


def parse(text: str) -> Formula:
    """Parse one formula; raises :class:`ParseError` with line and column."""
    p = _Parser(text)
    if p.peek() is None:
        p.error("empty formula")
    f = p.formula()
    if p.peek() is not None:
        p.error(f"unexpected {_describe(p.peek())}")
    return f


# -------------------------------------------------------------- rendering

_OPS = {And: "&", Or: "|", Implies: "->", Iff: "<->"}
_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_UNARY_PREC = 5


def render(f: Formula, minimal: bool = False) -> str:
    """Render ``f`` so that :func:`parse` gives back an equal AST.

    By default every binary connective is parenthesized, e.g. ``(p & !r)``.
    With ``minimal=True`` parentheses are only emitted where precedence and
    associativity require them, e.g. ``*b -> f``.
    """
    if minimal:
        return _render_min(f)[0]
    return _render_full(f)


def _render_full(f):
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "T"
    if isinstance(f, Bot):
        return "F"
    if isinstance(f, Not):
        return "!" + _render_full(f.sub)
    if isinstance(f, Typ):
        return "*" + _render_full(f.sub)
    return f"({_render_full(f.left)} {_OPS[type(f)]} {_render_full(f.right)})"


def _render_min(f):
    if isinstance(f, Atom):
        return f.name, _UNARY_PREC
    if isinstance(f, Top):
        return "T", _UNARY_PREC
    if isinstance(f, Bot):
        return "F", _UNARY_PREC
    if isinstance(f, (Not, Typ)):
        s, p = _render_min(f.sub)
        if p < _UNARY_PREC:
            s = f"({s})"
        return ("!" if isinstance(f, Not) else "*") + s, _UNARY_PREC
    prec = _PREC[type(f)]
    right_assoc = isinstance(f, Implies)
    ls, lp = _render_min(f.left)
    rs, rp = _render_min(f.right)
    if lp < prec or (lp == prec and right_assoc):
        ls = f"({ls})"
    if rp < prec or (rp == prec and not right_assoc):
        rs = f"({rs})"
    return f"{ls} {_OPS[type(f)]} {rs}", prec


# --------------------------------------------------------------- queries

def typicality_depth(f: Formula) -> int:
    if isinstance(f, (Atom, Top, Bot)):
        return 0
    if isinstance(f, Not):
        return typicality_depth(f.sub)
    if isinstance(f, Typ):
        return 1 + typicality_depth(f.sub)
    return max(typicality_depth(f.left), typicality_depth(f.right))


def is_propositional(f: Formula) -> bool:
    return typicality_depth(f) == 0


def atoms(f: Formula) -> set[str]:
    if isinstance(f, Atom):
        return {f.name}
    if isinstance(f, (Top, Bot)):
        return set()
    if isinstance(f, (Not, Typ)):
        return atoms(f.sub)
    return atoms(f.left) | atoms(f.right)


# ------------------------------------------------------------ normal form

@dataclass(frozen=True)
class NormalFormSentence:
    """``*θ1 & ... & *θt -> φ | *ψ1 | ... | *ψs`` with propositional θ, φ, ψ."""

    antecedents: tuple[Formula, ...]
    propositional_part: Formula
    consequents: tuple[Formula, ...]

    def __post_init__(self):
        for g in (*self.antecedents, self.propositional_part, *self.consequents):
            if not is_propositional(g):
                raise NestedTypicality(f"normal-form component {render(g)} is not propositional")

    def to_formula(self) -> Formula:
        lhs = conjoin(Typ(t) for t in self.antecedents)
        rhs = disjoin([self.propositional_part, *(Typ(p) for p in self.consequents)])
        return Implies(lhs, rhs)

    def __str__(self):
        return render(self.to_formula(), minimal=True)


# literals are (positive, key); key is an atom name or a Typ node
def _nnf_cnf(f, positive=True):
    """Clause set (frozenset of frozensets of literals) for ``f`` or its negation."""
    if isinstance(f, Top):
        return frozenset() if positive else frozenset([frozenset()])
    if isinstance(f, Bot):
        return frozenset([frozenset()]) if positive else frozenset()
    if isinstance(f, Atom):
        return frozenset([frozenset([(positive, f.name)])])
    if isinstance(f, Typ):
        if not is_propositional(f.sub):
            raise NestedTypicality(f"nested typicality in {render(f, minimal=True)}")
        return frozenset([frozenset([(positive, f)])])
    if isinstance(f, Not):
        return _nnf_cnf(f.sub, not positive)
    if isinstance(f, Implies):
        f = Or(Not(f.left), f.right)
    elif isinstance(f, Iff):
        f = And(Or(Not(f.left), f.right), Or(f.left, Not(f.right)))
    a = _nnf_cnf(f.left, positive)
    b = _nnf_cnf(f.right, positive)
    # negation swaps the roles of conjunction and disjunction
    if isinstance(f, And) == positive:
        return a | b
    return frozenset(c1 | c2 for c1 in a for c2 in b)


def _sort_key(f):
    return render(f)


def to_normal_form(f: Formula) -> tuple[NormalFormSentence, ...]:
    """Split ``f`` into normal-form sentences whose conjunction has the same models.

    Typicality subformulas ``*β`` are treated as opaque atoms during a naive
    CNF conversion; each clause then becomes one sentence.  The result is
    deduplicated and sorted, so it is canonical for a given input.
    Nested typicality is rejected with :class:`NestedTypicality`.
    """
    if typicality_depth(f) > 1:
        raise NestedTypicality(f"nested typicality in {render(f, minimal=True)}")
    out = set()
    for clause in _nnf_cnf(f):
        if any((not pos, key) in clause for pos, key in clause):
            continue
        thetas, psis, props = [], [], []
        for pos, key in clause:
            if isinstance(key, Typ):
                (psis if pos else thetas).append(key.sub)
            else:
                props.append((key, pos))
        props.sort()
        phi = disjoin(Atom(name) if pos else Not(Atom(name)) for name, pos in props)
        out.add(NormalFormSentence(
            tuple(sorted(thetas, key=_sort_key)), phi, tuple(sorted(psis, key=_sort_key))))
    return tuple(sorted(out, key=lambda s: render(s.to_formula())))


def as_formula(x) -> Formula:
    """Accept a :class:`Formula` or formula text."""
    if isinstance(x, Formula):
        return x
    if isinstance(x, str):
        return parse(x)
    raise TypeError(f"expected a formula or formula text, got {type(x).__name__}")


def as_kb(kb) -> tuple[Formula, ...]:
    """Normalize a single formula or an iterable of formulas/texts to a tuple."""
    if isinstance(kb, (Formula, str)):
        return (as_formula(kb),)
    return tuple(as_formula(x) for x in kb)


def is_conditional(f: Formula) -> bool:
    """``f`` has the shape ``*a -> b`` with ``a`` and ``b`` propositional."""
    return (isinstance(f, Implies) and isinstance(f.left, Typ)
            and is_propositional(f.left.sub) and is_propositional(f.right))
