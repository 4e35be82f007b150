"""Modal formula AST, parser, printer, and substitution.

The core AST has exactly four constructors: propositional variables,
falsum, implication, and box.  Negation, conjunction, disjunction,
biconditional, diamond, and verum exist only in the concrete syntax and
are desugared on parse:

    ~A      ==  A -> false
    true    ==  false -> false
    A & B   ==  ~(A -> ~B)
    A | B   ==  ~A -> B
    A <-> B ==  (A -> B) & (B -> A)
    <>A     ==  ~[]~A

Precedence, tightest first: unary {~, [], <>}, &, |, -> (right
associative), <-> (left associative).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import ParseError

__all__ = [
    "Formula", "Var", "Bot", "Imp", "Box", "BOT",
    "neg", "top", "conj", "disj", "iff", "diamond",
    "variables", "substitute", "modal_depth", "node_count",
    "parse", "render", "parse_axiom_lines",
]


@dataclass(frozen=True)
class Formula:
    """Base class of the four core constructors."""


@dataclass(frozen=True)
class Var(Formula):
    index: int


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Box(Formula):
    arg: Formula


BOT = Bot()


def neg(f: Formula) -> Formula:
    return Imp(f, BOT)


def top() -> Formula:
    return Imp(BOT, BOT)


def conj(a: Formula, b: Formula) -> Formula:
    return neg(Imp(a, neg(b)))


def disj(a: Formula, b: Formula) -> Formula:
    return Imp(neg(a), b)


def iff(a: Formula, b: Formula) -> Formula:
    return conj(Imp(a, b), Imp(b, a))


def diamond(f: Formula) -> Formula:
    return neg(Box(neg(f)))


def variables(f: Formula) -> set[int]:
    """Set of variable indices occurring in ``f``."""
    out: set[int] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Var):
            out.add(g.index)
        elif isinstance(g, Imp):
            stack.append(g.left)
            stack.append(g.right)
        elif isinstance(g, Box):
            stack.append(g.arg)
    return out


def substitute(f: Formula, sigma: Mapping[int, Formula]) -> Formula:
    """Simultaneous uniform substitution; unmapped variables stay fixed."""
    if isinstance(f, Var):
        return sigma.get(f.index, f)
    if isinstance(f, Imp):
        return Imp(substitute(f.left, sigma), substitute(f.right, sigma))
    if isinstance(f, Box):
        return Box(substitute(f.arg, sigma))
    return f


def modal_depth(f: Formula) -> int:
    if isinstance(f, Imp):
        return max(modal_depth(f.left), modal_depth(f.right))
    if isinstance(f, Box):
        return 1 + modal_depth(f.arg)
    return 0


def node_count(f: Formula) -> int:
    if isinstance(f, Imp):
        return 1 + node_count(f.left) + node_count(f.right)
    if isinstance(f, Box):
        return 1 + node_count(f.arg)
    return 1


# --- parsing ---------------------------------------------------------------

_PUNCT = ("<->", "->", "[]", "<>", "(", ")", "~", "&", "|")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens: list[tuple[str, str, int]] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        for punct in _PUNCT:
            if text.startswith(punct, i):
                tokens.append((punct, punct, i))
                i += len(punct)
                break
        else:
            if c == "p":
                j = i + 1
                while j < n and text[j].isdigit():
                    j += 1
                if j == i + 1:
                    raise ParseError("expected digits after 'p'", i)
                tokens.append(("var", text[i + 1:j], i))
                i = j
            elif c.isalpha():
                j = i
                while j < n and text[j].isalpha():
                    j += 1
                word = text[i:j]
                if word not in ("false", "true"):
                    raise ParseError(f"unknown token {word!r}", i)
                tokens.append((word, word, i))
                i = j
            else:
                raise ParseError(f"unexpected character {c!r}", i)
    tokens.append(("eof", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def formula(self) -> Formula:
        left = self.imp()
        while self.peek()[0] == "<->":
            self.take()
            left = iff(left, self.imp())
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek()[0] == "->":
            self.take()
            return Imp(left, self.imp())
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.peek()[0] == "|":
            self.take()
            left = disj(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.unary()
        while self.peek()[0] == "&":
            self.take()
            left = conj(left, self.unary())
        return left

    def unary(self) -> Formula:
        kind, _, _ = self.peek()
        if kind == "~":
            self.take()
            return neg(self.unary())
        if kind == "[]":
            self.take()
            return Box(self.unary())
        if kind == "<>":
            self.take()
            return diamond(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        kind, text, pos = self.take()
        if kind == "false":
            return BOT
        if kind == "true":
            return top()
        if kind == "var":
            return Var(int(text))
        if kind == "(":
            inner = self.formula()
            kind, _, pos = self.take()
            if kind != ")":
                raise ParseError("expected ')'", pos)
            return inner
        if kind == "eof":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected token {text!r}", pos)


def parse(text: str) -> Formula:
    """Parse concrete syntax into the desugared core AST."""
    parser = _Parser(text)
    f = parser.formula()
    kind, text_, pos = parser.peek()
    if kind != "eof":
        raise ParseError(f"unexpected token {text_!r} after formula", pos)
    return f


def parse_axiom_lines(text: str) -> list[Formula]:
    """Parse an axiom file body: one formula per line, '#' starts a comment."""
    out = []
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        out.append(parse(stripped))
    return out


# --- printing --------------------------------------------------------------

_IFF, _IMP, _OR, _AND, _UNARY, _ATOM = 1, 2, 3, 4, 5, 6


def _child(f: Formula, minimum: int) -> str:
    text, level = _fmt(f)
    return f"({text})" if level < minimum else text


def _fmt(f: Formula) -> tuple[str, int]:
    if isinstance(f, Var):
        return f"p{f.index}", _ATOM
    if isinstance(f, Bot):
        return "false", _ATOM
    if isinstance(f, Box):
        return "[]" + _child(f.arg, _UNARY), _UNARY
    # f is an implication; pick the most specific sugar whose desugaring
    # reproduces this exact tree, so parse(render(f)) round trips.
    left, right = f.left, f.right
    if right == BOT:
        if left == BOT:
            return "true", _ATOM
        if isinstance(left, Box) and isinstance(left.arg, Imp) and left.arg.right == BOT:
            return "<>" + _child(left.arg.left, _UNARY), _UNARY
        if isinstance(left, Imp) and isinstance(left.right, Imp) and left.right.right == BOT:
            a, b = left.left, left.right.left
            if (isinstance(a, Imp) and isinstance(b, Imp)
                    and a.left == b.right and a.right == b.left):
                return f"{_child(a.left, _IFF)} <-> {_child(a.right, _IMP)}", _IFF
            return f"{_child(a, _AND)} & {_child(b, _UNARY)}", _AND
        return "~" + _child(left, _UNARY), _UNARY
    if isinstance(left, Imp) and left.right == BOT:
        return f"{_child(left.left, _OR)} | {_child(right, _AND)}", _OR
    return f"{_child(left, _OR)} -> {_child(right, _IMP)}", _IMP


def render(f: Formula) -> str:
    """Canonical concrete syntax with minimal parentheses; inverse of parse."""
    return _fmt(f)[0]
