"""Finite modal algebras and the frame/algebra duality: complex algebras,
canonical frames, canonical embedding algebras, dual morphisms, direct
products, and the block decomposition of the canonical frame of a direct
power.

An algebra on ``k`` atoms has the bitsets over 0..k-1 as its elements.
Only the additive diamond is stored, as its values on atoms; the box is
recovered by De Morgan duality:

    m(b) = union of dia[q] over atoms q in b        l(b) = ~m(~b)

Ultrafilters of a finite Boolean algebra are principal at atoms, so atoms
double as the worlds of the canonical frame throughout.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .errors import (
    InvalidInputError,
    MalformedMapError,
    SearchSpaceExceededError,
)
from .formula import Bot, Formula, Imp, Var, variables
from .frame import (
    BoundedMorphism,
    Frame,
    Validity,
    bit_list,
    bits,
    generated_subframe,
    is_bounded_morphism,
    is_isomorphic,
)
from .limits import DEFAULT_LIMITS, Limits

__all__ = [
    "ModalAlgebra", "Homomorphism", "Block", "PowerDecomposition",
    "cm", "cf", "em", "jt_embedding", "algebra_validates", "term_value",
    "direct_product", "direct_power",
    "dual_of_bounded_morphism", "dual_of_homomorphism",
    "decompose_cf_of_power", "is_homomorphism", "find_homomorphisms",
    "algebra_from_dict", "algebra_to_dict", "algebras_isomorphic",
]


@dataclass(frozen=True)
class ModalAlgebra:
    """A finite modal algebra given by atom count and diamond-on-atoms table."""

    atoms: int
    dia: tuple[int, ...]

    def __post_init__(self):
        if self.atoms < 1:
            raise InvalidInputError("an algebra needs at least one atom")
        if len(self.dia) != self.atoms:
            raise InvalidInputError("diamond table must have one row per atom")
        if any(row & ~self.top for row in self.dia):
            raise InvalidInputError("diamond table entry out of range")

    @property
    def top(self) -> int:
        return (1 << self.atoms) - 1

    def m(self, b: int) -> int:
        out = 0
        for q in bit_list(b):
            out |= self.dia[q]
        return out

    def l(self, b: int) -> int:
        return ~self.m(~b & self.top) & self.top

    def elements(self) -> Iterator[int]:
        return iter(range(1 << self.atoms))

    @property
    def size(self) -> int:
        return 1 << self.atoms


@dataclass(frozen=True)
class Homomorphism:
    """An algebra map stored by its dual action on target atoms.

    ``dual_atom_map[q]`` is the source atom whose principal ultrafilter is
    the inverse image of the one at target atom ``q``; the induced element
    map is ``apply``.
    """

    source: ModalAlgebra
    target: ModalAlgebra
    dual_atom_map: tuple[int, ...]

    def __post_init__(self):
        if len(self.dual_atom_map) != self.target.atoms:
            raise MalformedMapError("dual atom map must cover every target atom")
        if any(not 0 <= p < self.source.atoms for p in self.dual_atom_map):
            raise MalformedMapError("dual atom map entry out of range")

    def apply(self, a: int) -> int:
        """Image of source element ``a`` in the target algebra."""
        if a & ~self.source.top:
            raise InvalidInputError("element out of range")
        return bits(q for q, p in enumerate(self.dual_atom_map) if a >> p & 1)

    def is_injective(self) -> bool:
        return set(self.dual_atom_map) == set(range(self.source.atoms))

    def is_surjective(self) -> bool:
        return len(set(self.dual_atom_map)) == len(self.dual_atom_map)


# --- the duality -------------------------------------------------------------

def cm(fr: Frame) -> ModalAlgebra:
    """Complex algebra of a frame: atoms are worlds, m on an atom is its
    predecessor set, so the derived l is the box induced by R."""
    return ModalAlgebra(fr.n, tuple(fr.predecessors(b) for b in range(fr.n)))


def cf(alg: ModalAlgebra) -> Frame:
    """Canonical frame: worlds are atoms, and p sees q iff p lies below m(q)."""
    k = alg.atoms
    rel = tuple(bits(q for q in range(k) if alg.dia[q] >> p & 1) for p in range(k))
    return Frame(k, rel)


def em(alg: ModalAlgebra) -> ModalAlgebra:
    """Canonical embedding algebra, the complex algebra of the canonical frame."""
    return cm(cf(alg))


def jt_embedding(alg: ModalAlgebra) -> Homomorphism:
    """The representation map sending each element to its set of atoms.

    Elements are already stored as atom sets, so the dual atom map is the
    identity; on finite algebras the embedding is bijective.
    """
    return Homomorphism(alg, em(alg), tuple(range(alg.atoms)))


# --- validity ----------------------------------------------------------------

def term_value(alg: ModalAlgebra, f: Formula, assignment: dict[int, int]) -> int:
    """Value of ``f`` as a term function under an assignment of elements."""
    if isinstance(f, Var):
        return assignment.get(f.index, 0)
    if isinstance(f, Bot):
        return 0
    if isinstance(f, Imp):
        return (~term_value(alg, f.left, assignment) & alg.top) | \
            term_value(alg, f.right, assignment)
    return alg.l(term_value(alg, f.arg, assignment))


def _compile_term(alg: ModalAlgebra, f: Formula, var_list):
    top = alg.top
    position = {v: i for i, v in enumerate(var_list)}
    if alg.atoms <= 12:
        m_table = tuple(alg.m(b) for b in range(alg.size))

        def box(b: int) -> int:
            return ~m_table[~b & top] & top
    else:
        def box(b: int) -> int:
            return alg.l(b)

    def build(g: Formula):
        if isinstance(g, Var):
            i = position[g.index]
            return lambda vals: vals[i]
        if isinstance(g, Bot):
            return lambda vals: 0
        if isinstance(g, Imp):
            left, right = build(g.left), build(g.right)
            return lambda vals: (~left(vals) & top) | right(vals)
        arg = build(g.arg)
        return lambda vals: box(arg(vals))

    return build(f)


def algebra_validates(alg: ModalAlgebra, f: Formula,
                      limits: Limits = DEFAULT_LIMITS) -> Validity:
    """Whether the equation "f = 1" holds under every assignment of elements
    to variables; on failure returns the least falsifying assignment."""
    var_list = sorted(variables(f))
    space = alg.size ** len(var_list)
    if space > limits.max_assignments:
        raise SearchSpaceExceededError(
            f"{space} assignments exceed the cap of {limits.max_assignments}")
    evaluate = _compile_term(alg, f, var_list)
    for values in itertools.product(range(alg.size), repeat=len(var_list)):
        if evaluate(values) != alg.top:
            return Validity(False, dict(zip(var_list, values)), None)
    return Validity(True)


# --- products ----------------------------------------------------------------

def direct_product(algs: Sequence[ModalAlgebra],
                   limits: Limits = DEFAULT_LIMITS) -> tuple[ModalAlgebra, tuple[Homomorphism, ...]]:
    """Direct product with blockwise diamond; returns projection homomorphisms."""
    if not algs:
        raise InvalidInputError("direct product needs at least one factor")
    total = sum(a.atoms for a in algs)
    if total > limits.max_atoms:
        raise SearchSpaceExceededError(
            f"{total} atoms exceed the cap of {limits.max_atoms}")
    dia: list[int] = []
    offsets: list[int] = []
    offset = 0
    for alg in algs:
        offsets.append(offset)
        dia.extend(row << offset for row in alg.dia)
        offset += alg.atoms
    product = ModalAlgebra(total, tuple(dia))
    projections = tuple(
        Homomorphism(product, alg, tuple(range(off, off + alg.atoms)))
        for alg, off in zip(algs, offsets))
    return product, projections


def direct_power(alg: ModalAlgebra, i_count: int,
                 limits: Limits = DEFAULT_LIMITS) -> tuple[ModalAlgebra, tuple[Homomorphism, ...]]:
    if i_count < 1:
        raise InvalidInputError("direct power needs a positive exponent")
    return direct_product([alg] * i_count, limits)


# --- dual morphisms ----------------------------------------------------------

def dual_of_bounded_morphism(g: BoundedMorphism) -> Homomorphism:
    """Inverse-image homomorphism cm(target) -> cm(source) of a bounded morphism.

    In the dual-atom-map representation this is the world map itself.
    """
    if not is_bounded_morphism(g.mapping, g.source, g.target):
        raise MalformedMapError("map violates the bounded morphism conditions")
    return Homomorphism(cm(g.target), cm(g.source), tuple(g.mapping))


def dual_of_homomorphism(h: Homomorphism) -> BoundedMorphism:
    """Bounded morphism cf(target) -> cf(source) dual to an algebra map.

    The stored dual atom map, read as a world map, is exactly this morphism.
    """
    if not is_homomorphism(h):
        raise MalformedMapError("dual atom map does not give a homomorphism")
    return BoundedMorphism(cf(h.target), cf(h.source), h.dual_atom_map)


def is_homomorphism(h: Homomorphism, limits: Limits = DEFAULT_LIMITS) -> bool:
    """Whether the induced element map is a modal algebra homomorphism.

    Two routes: structurally, the dual atom map must be a bounded morphism
    between the canonical frames; elementwise, the induced map must preserve
    top, complement, meet, and commute with l.  Under the cap both are
    computed and must agree.
    """
    structural = is_bounded_morphism(h.dual_atom_map, cf(h.target), cf(h.source))
    pair_space = h.source.size ** 2
    if pair_space > limits.max_assignments:
        return structural
    src, tgt = h.source, h.target
    elementwise = h.apply(src.top) == tgt.top
    if elementwise:
        for a in src.elements():
            fa = h.apply(a)
            if h.apply(~a & src.top) != ~fa & tgt.top or h.apply(src.l(a)) != tgt.l(fa):
                elementwise = False
                break
            for b in src.elements():
                if h.apply(a & b) != fa & h.apply(b):
                    elementwise = False
                    break
            if not elementwise:
                break
    if structural != elementwise:
        raise AssertionError(
            "structural and elementwise homomorphism checks disagree")
    return structural


def find_homomorphisms(src: ModalAlgebra, tgt: ModalAlgebra,
                       limits: Limits = DEFAULT_LIMITS) -> list[Homomorphism]:
    """All homomorphisms src -> tgt, by exhausting dual atom maps."""
    space = src.atoms ** tgt.atoms
    if space > limits.max_assignments:
        raise SearchSpaceExceededError(
            f"{space} candidate maps exceed the cap of {limits.max_assignments}")
    out = []
    for dual in itertools.product(range(src.atoms), repeat=tgt.atoms):
        h = Homomorphism(src, tgt, dual)
        if is_homomorphism(h, limits):
            out.append(h)
    return out


# --- canonical frame of a direct power ---------------------------------------

@dataclass(frozen=True)
class Block:
    """One inner subframe of cf(alg^I) together with its isomorphism to cf(alg)."""

    worlds: tuple[int, ...]
    frame: Frame
    iso_to_cf: tuple[int, ...]


@dataclass(frozen=True)
class PowerDecomposition:
    frame: Frame
    blocks: tuple[Block, ...]


def decompose_cf_of_power(alg: ModalAlgebra, i_count: int,
                          limits: Limits = DEFAULT_LIMITS) -> PowerDecomposition:
    """Partition the canonical frame of alg^I into inner subframes, one per
    principal ultrafilter on I, each isomorphic to cf(alg).

    The world at atom (i, p) contains the characteristic element of {i}, so
    it lands in the block of the principal ultrafilter at i; on a finite
    index set these blocks exhaust the frame.
    """
    if i_count < 1:
        raise InvalidInputError("index set must be nonempty")
    k = alg.atoms
    if i_count * k > limits.max_atoms:
        raise SearchSpaceExceededError(
            f"{i_count * k} atoms exceed the cap of {limits.max_atoms}")
    power, _ = direct_power(alg, i_count, limits)
    whole = cf(power)
    blocks = []
    for i in range(i_count):
        worlds = bits(range(i * k, (i + 1) * k))
        sub, surviving = generated_subframe(whole, worlds)
        iso = tuple(old - i * k for old in surviving)
        blocks.append(Block(surviving, sub, iso))
    return PowerDecomposition(whole, tuple(blocks))


# --- helpers -----------------------------------------------------------------

def algebras_isomorphic(a: ModalAlgebra, b: ModalAlgebra) -> Optional[tuple[int, ...]]:
    """An isomorphism of algebras as an atom bijection, via canonical frames."""
    return is_isomorphic(cf(a), cf(b))


def algebra_from_dict(d: dict, limits: Limits = DEFAULT_LIMITS) -> ModalAlgebra:
    """Load an algebra from ``{"atoms": k, "diamond": [[..], ...]}``."""
    try:
        k = int(d["atoms"])
        rows = [bits(int(q) for q in row) for row in d["diamond"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"malformed algebra JSON: {exc}") from exc
    if k > limits.max_atoms:
        raise SearchSpaceExceededError(
            f"{k} atoms exceed the cap of {limits.max_atoms}")
    return ModalAlgebra(k, tuple(rows))


def algebra_to_dict(alg: ModalAlgebra) -> dict:
    return {"atoms": alg.atoms, "diamond": [bit_list(row) for row in alg.dia]}
