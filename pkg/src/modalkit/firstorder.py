"""First-order formulas over one binary predicate R and monadic predicates
P0, P1, ...: the standard translation of modal formulas, a Tarskian
evaluator over finite frames and models, and the quasi-modal sentence
recognizer.

Quantified variables are integer indices, printed as v0, v1, ...
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from . import formula as fm
from .errors import InvalidInputError, ParseError
from .frame import Frame, Model, truth

__all__ = [
    "FOFormula", "RAtom", "PAtom", "Bottom", "Negation", "Conjunction",
    "Disjunction", "Implication", "Forall", "Exists",
    "free_variables", "fo_satisfies", "frame_satisfies",
    "standard_translation", "simplify_fo", "check_translation_equivalence",
    "QuasiModalResult", "is_quasi_modal",
    "parse_fo", "render_fo",
]


@dataclass(frozen=True)
class FOFormula:
    """Base class of first-order formulas."""


@dataclass(frozen=True)
class RAtom(FOFormula):
    x: int
    y: int


@dataclass(frozen=True)
class PAtom(FOFormula):
    pred: int
    x: int


@dataclass(frozen=True)
class Bottom(FOFormula):
    pass


@dataclass(frozen=True)
class Negation(FOFormula):
    arg: FOFormula


@dataclass(frozen=True)
class Conjunction(FOFormula):
    left: FOFormula
    right: FOFormula


@dataclass(frozen=True)
class Disjunction(FOFormula):
    left: FOFormula
    right: FOFormula


@dataclass(frozen=True)
class Implication(FOFormula):
    left: FOFormula
    right: FOFormula


@dataclass(frozen=True)
class Forall(FOFormula):
    var: int
    body: FOFormula


@dataclass(frozen=True)
class Exists(FOFormula):
    var: int
    body: FOFormula


BOTTOM = Bottom()


def free_variables(f: FOFormula) -> set[int]:
    if isinstance(f, RAtom):
        return {f.x, f.y}
    if isinstance(f, PAtom):
        return {f.x}
    if isinstance(f, Bottom):
        return set()
    if isinstance(f, Negation):
        return free_variables(f.arg)
    if isinstance(f, (Conjunction, Disjunction, Implication)):
        return free_variables(f.left) | free_variables(f.right)
    return free_variables(f.body) - {f.var}


# --- evaluation --------------------------------------------------------------

def fo_satisfies(m: Model, f: FOFormula, env: Mapping[int, int]) -> bool:
    """Tarskian satisfaction over the finite structure; quantifiers range
    over all worlds.  ``env`` must cover the free variables."""
    missing = free_variables(f) - set(env)
    if missing:
        raise InvalidInputError(
            f"unbound free variable v{min(missing)}")
    return _sat(m, f, dict(env))


def _sat(m: Model, f: FOFormula, env: dict[int, int]) -> bool:
    if isinstance(f, RAtom):
        return bool(m.frame.rel[env[f.x]] >> env[f.y] & 1)
    if isinstance(f, PAtom):
        return bool(m.val.get(f.pred, 0) >> env[f.x] & 1)
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Negation):
        return not _sat(m, f.arg, env)
    if isinstance(f, Conjunction):
        return _sat(m, f.left, env) and _sat(m, f.right, env)
    if isinstance(f, Disjunction):
        return _sat(m, f.left, env) or _sat(m, f.right, env)
    if isinstance(f, Implication):
        return not _sat(m, f.left, env) or _sat(m, f.right, env)
    universal = isinstance(f, Forall)
    saved = env.get(f.var)
    result = universal
    for w in range(m.frame.n):
        env[f.var] = w
        if _sat(m, f.body, env) != universal:
            result = not universal
            break
    if saved is None:
        env.pop(f.var, None)
    else:
        env[f.var] = saved
    return result


def frame_satisfies(fr: Frame, sentence: FOFormula) -> bool:
    """Satisfaction of a sentence in a bare frame (empty valuation)."""
    return fo_satisfies(Model(fr, {}), sentence, {})


# --- standard translation -----------------------------------------------------

def standard_translation(f: fm.Formula, x: int = 0) -> FOFormula:
    """First-order translation with free variable ``x``; the variable bound
    for each box is the successor index, so nesting depth allocates fresh
    names."""
    if isinstance(f, fm.Var):
        return PAtom(f.index, x)
    if isinstance(f, fm.Bot):
        return BOTTOM
    if isinstance(f, fm.Imp):
        return Implication(standard_translation(f.left, x),
                           standard_translation(f.right, x))
    y = x + 1
    return Forall(y, Implication(RAtom(x, y), standard_translation(f.arg, y)))


def simplify_fo(f: FOFormula) -> FOFormula:
    """Rewrite implications-to-falsum as negations and push negations
    through connectives and quantifiers; satisfaction is unchanged."""
    if isinstance(f, Implication):
        left, right = simplify_fo(f.left), simplify_fo(f.right)
        if right == BOTTOM:
            return _negate(left)
        return Implication(left, right)
    if isinstance(f, Negation):
        return _negate(simplify_fo(f.arg))
    if isinstance(f, Conjunction):
        return Conjunction(simplify_fo(f.left), simplify_fo(f.right))
    if isinstance(f, Disjunction):
        return Disjunction(simplify_fo(f.left), simplify_fo(f.right))
    if isinstance(f, Forall):
        return Forall(f.var, simplify_fo(f.body))
    if isinstance(f, Exists):
        return Exists(f.var, simplify_fo(f.body))
    return f


def _negate(f: FOFormula) -> FOFormula:
    if isinstance(f, Negation):
        return f.arg
    if isinstance(f, Forall):
        if isinstance(f.body, Implication):
            return Exists(f.var, Conjunction(f.body.left, _negate(f.body.right)))
        return Exists(f.var, _negate(f.body))
    if isinstance(f, Exists):
        if isinstance(f.body, Conjunction):
            return Forall(f.var, Implication(f.body.left, _negate(f.body.right)))
        return Forall(f.var, _negate(f.body))
    if isinstance(f, Conjunction):
        return Disjunction(_negate(f.left), _negate(f.right))
    if isinstance(f, Disjunction):
        return Conjunction(_negate(f.left), _negate(f.right))
    if isinstance(f, Implication):
        return Conjunction(f.left, _negate(f.right))
    return Negation(f)


def check_translation_equivalence(m: Model, a: int, f: fm.Formula) -> bool:
    """Cross-validate the two evaluators: modal truth at ``a`` must agree
    with first-order satisfaction of the translation under x := a."""
    modal = truth(m, a, f)
    fo = fo_satisfies(m, standard_translation(f, 0), {0: a})
    return modal == fo


# --- quasi-modal recognition ----------------------------------------------------

@dataclass(frozen=True)
class QuasiModalResult:
    quasi_modal: bool
    violation: Optional[str] = None

    def __bool__(self) -> bool:
        return self.quasi_modal


def is_quasi_modal(s: FOFormula) -> QuasiModalResult:
    """Syntactic check for the shape: one outer universal quantifier over a
    matrix built from atomic formulas with conjunction, disjunction, and the
    relation-bounded quantifiers forall z (y R z -> ...) and
    exists z (y R z & ...) with y distinct from z and in scope."""
    if free_variables(s):
        raise InvalidInputError("quasi-modal recognition needs a sentence")
    if not isinstance(s, Forall):
        return QuasiModalResult(False, "sentence must start with a universal quantifier")
    violation = _qm_violation(s.body, {s.var})
    return QuasiModalResult(violation is None, violation)


def _qm_violation(f: FOFormula, scope: set[int]) -> Optional[str]:
    if isinstance(f, (RAtom, PAtom)):
        return None
    if isinstance(f, (Conjunction, Disjunction)):
        return _qm_violation(f.left, scope) or _qm_violation(f.right, scope)
    if isinstance(f, Forall):
        if not isinstance(f.body, Implication):
            return "universal quantifier without a relational guard"
        return (_qm_guard(f.body.left, f.var, scope, "universal")
                or _qm_violation(f.body.right, scope | {f.var}))
    if isinstance(f, Exists):
        if isinstance(f.body, RAtom):
            # degenerate bounded existential with a trivially true tail
            return _qm_guard(f.body, f.var, scope, "existential")
        if not isinstance(f.body, Conjunction):
            return "existential quantifier without a relational guard"
        return (_qm_guard(f.body.left, f.var, scope, "existential")
                or _qm_violation(f.body.right, scope | {f.var}))
    if isinstance(f, Negation):
        return "negation is not allowed in the matrix"
    if isinstance(f, Implication):
        return "implication outside a bounded universal guard"
    return "falsum is not allowed in the matrix"


def _qm_guard(guard: FOFormula, bound: int, scope: set[int],
              kind: str) -> Optional[str]:
    if not isinstance(guard, RAtom):
        return f"bounded {kind} guard must be a relational atom"
    if guard.y != bound:
        return f"bound variable must fill the second slot of the {kind} guard"
    if guard.x == bound:
        return "guard variable must differ from the bound variable"
    if guard.x not in scope:
        return f"guard variable v{guard.x} is not in scope"
    return None


# --- concrete syntax ------------------------------------------------------------

def render_fo(f: FOFormula) -> str:
    """Deterministic concrete syntax; quantifier bodies are parenthesized."""
    return _fo_fmt(f)[0]


_FO_LOW, _FO_OR, _FO_AND, _FO_NEG, _FO_ATOM = 1, 2, 3, 4, 5


def _fo_child(f: FOFormula, minimum: int) -> str:
    text, level = _fo_fmt(f)
    return f"({text})" if level < minimum else text


def _fo_fmt(f: FOFormula) -> tuple[str, int]:
    if isinstance(f, RAtom):
        return f"v{f.x} R v{f.y}", _FO_ATOM
    if isinstance(f, PAtom):
        return f"P{f.pred}(v{f.x})", _FO_ATOM
    if isinstance(f, Bottom):
        return "false", _FO_ATOM
    if isinstance(f, Negation):
        return "~" + _fo_child(f.arg, _FO_NEG), _FO_NEG
    if isinstance(f, Conjunction):
        return f"{_fo_child(f.left, _FO_AND)} & {_fo_child(f.right, _FO_NEG)}", _FO_AND
    if isinstance(f, Disjunction):
        return f"{_fo_child(f.left, _FO_OR)} | {_fo_child(f.right, _FO_AND)}", _FO_OR
    if isinstance(f, Implication):
        return f"{_fo_child(f.left, _FO_OR)} -> {_fo_child(f.right, _FO_LOW)}", _FO_LOW
    word = "forall" if isinstance(f, Forall) else "exists"
    return f"{word} v{f.var} ({render_fo(f.body)})", _FO_LOW


_FO_PUNCT = ("->", "(", ")", "~", "&", "|")


def _fo_tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens: list[tuple[str, str, int]] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        for punct in _FO_PUNCT:
            if text.startswith(punct, i):
                tokens.append((punct, punct, i))
                i += len(punct)
                break
        else:
            if c == "P" and i + 1 < n and text[i + 1].isdigit():
                j = i + 1
                while j < n and text[j].isdigit():
                    j += 1
                tokens.append(("pred", text[i + 1:j], i))
                i = j
            elif c == "R" and not (i + 1 < n and text[i + 1].isalnum()):
                tokens.append(("R", "R", i))
                i += 1
            elif c.isalpha() or c == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                word = text[i:j]
                if word in ("forall", "exists", "false"):
                    tokens.append((word, word, i))
                else:
                    tokens.append(("ident", word, i))
                i = j
            else:
                raise ParseError(f"unexpected character {c!r}", i)
    tokens.append(("eof", "", n))
    return tokens


class _FOParser:
    def __init__(self, text: str):
        self.tokens = _fo_tokenize(text)
        self.pos = 0
        self.names: dict[str, int] = {}

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def var_index(self, name: str) -> int:
        if name not in self.names:
            self.names[name] = len(self.names)
        return self.names[name]

    def expect_ident(self) -> int:
        kind, text, pos = self.take()
        if kind != "ident":
            raise ParseError("expected a variable name", pos)
        return self.var_index(text)

    def formula(self) -> FOFormula:
        kind, _, _ = self.peek()
        if kind in ("forall", "exists"):
            self.take()
            var = self.expect_ident()
            body = self.formula()
            return Forall(var, body) if kind == "forall" else Exists(var, body)
        return self.imp()

    def imp(self) -> FOFormula:
        left = self.disj()
        if self.peek()[0] == "->":
            self.take()
            return Implication(left, self.formula())
        return left

    def disj(self) -> FOFormula:
        left = self.conj()
        while self.peek()[0] == "|":
            self.take()
            left = Disjunction(left, self.conj())
        return left

    def conj(self) -> FOFormula:
        left = self.unary()
        while self.peek()[0] == "&":
            self.take()
            left = Conjunction(left, self.unary())
        return left

    def unary(self) -> FOFormula:
        kind, _, _ = self.peek()
        if kind == "~":
            self.take()
            return Negation(self.unary())
        if kind in ("forall", "exists"):
            # quantifier scope extends as far right as possible
            return self.formula()
        return self.atom()

    def atom(self) -> FOFormula:
        kind, text, pos = self.take()
        if kind == "false":
            return BOTTOM
        if kind == "pred":
            k, _, p = self.take()
            if k != "(":
                raise ParseError("expected '(' after predicate", p)
            x = self.expect_ident()
            k, _, p = self.take()
            if k != ")":
                raise ParseError("expected ')'", p)
            return PAtom(int(text), x)
        if kind == "ident":
            x = self.var_index(text)
            k, _, p = self.take()
            if k != "R":
                raise ParseError("expected 'R' after variable", p)
            y = self.expect_ident()
            return RAtom(x, y)
        if kind == "(":
            inner = self.formula()
            k, _, p = self.take()
            if k != ")":
                raise ParseError("expected ')'", p)
            return inner
        if kind == "eof":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected token {text!r}", pos)


def parse_fo(text: str) -> FOFormula:
    """Parse the first-order concrete syntax used by the command line."""
    parser = _FOParser(text)
    f = parser.formula()
    kind, text_, pos = parser.peek()
    if kind != "eof":
        raise ParseError(f"unexpected token {text_!r} after formula", pos)
    return f
