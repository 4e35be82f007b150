"""Shared fixtures: the two running example frames, the named axiom set,
the validity-transfer corpus, and exhaustive small-frame/algebra corpora."""

from __future__ import annotations

import itertools
import random

import pytest

from modalkit import Frame, ModalAlgebra, parse
from modalkit.definability import enumerate_frames
from modalkit.formula import BOT, Box, Formula, Imp, Var
from modalkit.frame import find_bounded_morphisms

# the reflexive point and the single-arrow frame used throughout the spec
# examples of this suite
F1 = Frame.from_pairs(1, [(0, 0)])
F2 = Frame.from_pairs(2, [(0, 1)])
U2 = Frame.from_pairs(2, [(0, 0), (0, 1), (1, 0), (1, 1)])

AXIOMS = {
    "T": "[]p0 -> p0",
    "4": "[]p0 -> [][]p0",
    "B": "p0 -> []<>p0",
    "5": "<>p0 -> []<>p0",
    "Grz": "[]([](p0 -> []p0) -> p0) -> p0",
    "Dummett": "[]([](p0 -> []p0) -> []p0) -> (<>[]p0 -> []p0)",
    "McKinsey": "[]<>p0 -> <>[]p0",
}

CORPUS_50 = [
    AXIOMS["T"],
    AXIOMS["4"],
    AXIOMS["B"],
    AXIOMS["5"],
    AXIOMS["Grz"],
    AXIOMS["Dummett"],
    AXIOMS["McKinsey"],
    "[]p0 -> <>p0",
    "<>[]p0 -> []<>p0",
    "[](p0 -> p1) -> ([]p0 -> []p1)",
    "[](p0 & p1) <-> []p0 & []p1",
    "<>(p0 | p1) <-> <>p0 | <>p1",
    "p0 -> p0",
    "false -> p0",
    "p0 -> true",
    "[]true",
    "~<>false",
    "p0 & p1 -> p0",
    "p0 -> p0 | p1",
    "[](p0 -> p0)",
    "[][]p0 -> []p0",
    "p0 -> []p0",
    "[]p0 -> p1",
    "p0",
    "false",
    "<>true",
    "[](p0 | ~p0)",
    "<>p0 -> p0",
    "p0 -> <>p0",
    "<>p0 & <>p1 -> <>(p0 & p1)",
    "[]p0 | []p1 -> [](p0 | p1)",
    "[](p0 | p1) -> []p0 | <>p1",
    "<>(p0 & p1) -> <>p0 & <>p1",
    "([]p0 -> p0) | ([]p1 -> p1)",
    "[](p0 -> p1) | [](p1 -> p0)",
    "<>[]p0 -> p0",
    "p0 <-> ~~p0",
    "~(p0 & ~p0)",
    "[]~p0 <-> ~<>p0",
    "<>~p0 <-> ~[]p0",
    "[]p0 -> [](p1 -> p0)",
    "<>(p0 -> p1) <-> ([]p0 -> <>p1)",
    "[]p0 & <>p1 -> <>(p0 & p1)",
    "p0 & p1 & p2 -> p0",
    "[](p0 & p1 & p2) -> []p2",
    "<>p0 -> []p1 -> <>(p0 & p1)",
    "[]([]p0 -> p0) -> []p0",
    "~[]false",
    "<>p0 -> <><>p0",
    "[]p0 & []p1 -> [](p0 & p1)",
]


@pytest.fixture(scope="session")
def f1() -> Frame:
    return F1


@pytest.fixture(scope="session")
def f2() -> Frame:
    return F2


@pytest.fixture(scope="session")
def u2() -> Frame:
    return U2


@pytest.fixture(scope="session")
def named_axioms() -> dict[str, Formula]:
    return {name: parse(text) for name, text in AXIOMS.items()}


@pytest.fixture(scope="session")
def corpus_50() -> list[Formula]:
    formulas = [parse(text) for text in CORPUS_50]
    assert len(formulas) == 50
    return formulas


def all_frames_exhaustive(max_worlds: int) -> list[Frame]:
    """Every frame on 1..max_worlds labelled worlds (not up to isomorphism)."""
    out = []
    for n in range(1, max_worlds + 1):
        mask = (1 << n) - 1
        for code in range(1 << (n * n)):
            out.append(Frame(n, tuple(code >> (i * n) & mask for i in range(n))))
    return out


@pytest.fixture(scope="session")
def frames_upto3() -> list[Frame]:
    frames = all_frames_exhaustive(3)
    assert len(frames) == 2 + 16 + 512
    return frames


@pytest.fixture(scope="session")
def frames_upto3_iso() -> list[Frame]:
    return list(enumerate_frames(3, up_to_iso=True))


def all_algebras(max_atoms: int) -> list[ModalAlgebra]:
    """Every diamond table on 1..max_atoms atoms."""
    out = []
    for k in range(1, max_atoms + 1):
        for dia in itertools.product(range(1 << k), repeat=k):
            out.append(ModalAlgebra(k, dia))
    return out


@pytest.fixture(scope="session")
def algebras_upto3() -> list[ModalAlgebra]:
    algebras = all_algebras(3)
    assert len(algebras) == 2 + 16 + 512
    return algebras


@pytest.fixture(scope="session")
def morphism_catalog(frames_upto3_iso):
    """All bounded morphisms between every ordered pair of representatives."""
    catalog = {}
    for i, src in enumerate(frames_upto3_iso):
        for j, tgt in enumerate(frames_upto3_iso):
            found = find_bounded_morphisms(src, tgt)
            if found:
                catalog[i, j] = found
    return catalog


def random_frame(rng: random.Random, max_worlds: int) -> Frame:
    n = rng.randint(1, max_worlds)
    rel = tuple(rng.randrange(1 << n) for _ in range(n))
    return Frame(n, rel)


def random_core_formula(rng: random.Random, max_nodes: int, var_count: int = 3) -> Formula:
    if max_nodes <= 1:
        return Var(rng.randrange(var_count)) if rng.random() < 0.8 else BOT
    roll = rng.random()
    if roll < 0.35:
        return Box(random_core_formula(rng, max_nodes - 1, var_count))
    if roll < 0.85:
        left_budget = rng.randint(1, max_nodes - 2) if max_nodes > 2 else 1
        return Imp(random_core_formula(rng, left_budget, var_count),
                   random_core_formula(rng, max_nodes - 1 - left_budget, var_count))
    return Var(rng.randrange(var_count)) if rng.random() < 0.8 else BOT


def random_depth_formula(rng: random.Random, depth: int, var_count: int = 3) -> Formula:
    """Random formula of AST depth at most ``depth``, through the sugar
    constructors so the desugared shapes get exercised too."""
    from modalkit.formula import conj, diamond, disj, iff, neg, top

    if depth == 0 or rng.random() < 0.25:
        leaf = rng.random()
        if leaf < 0.7:
            return Var(rng.randrange(var_count))
        return BOT if leaf < 0.85 else top()
    kind = rng.choice(["imp", "box", "diamond", "not", "and", "or", "iff"])
    sub = lambda: random_depth_formula(rng, depth - 1, var_count)
    if kind == "imp":
        return Imp(sub(), sub())
    if kind == "box":
        return Box(sub())
    if kind == "diamond":
        return diamond(sub())
    if kind == "not":
        return neg(sub())
    if kind == "and":
        return conj(sub(), sub())
    if kind == "or":
        return disj(sub(), sub())
    return iff(sub(), sub())
