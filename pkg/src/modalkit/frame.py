"""Finite Kripke frames and models: truth, validity, and the
validity-preserving frame constructions (generated subframes, bounded
morphisms, disjoint unions, principal ultraproducts, ultrafilter
extensions).

Worlds are the integers 0..n-1 and every set of worlds is an int used as
a bitset; ``rel[a]`` is the bitset of R-successors of world ``a``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    InvalidInputError,
    MalformedMapError,
    SearchSpaceExceededError,
    UnsupportedUltrafilterError,
)
from .formula import Bot, Formula, Imp, Var, variables
from .limits import DEFAULT_LIMITS, Limits

__all__ = [
    "Frame", "Model", "BoundedMorphism", "Validity",
    "bits", "bit_list",
    "truth", "eval_worlds", "frame_valid", "validates",
    "generated_subframe", "is_bounded_morphism", "find_bounded_morphisms",
    "morphism_image", "disjoint_union", "ultraproduct_principal",
    "ultrafilter_extension", "is_isomorphic",
    "frame_from_dict", "frame_to_dict", "model_from_dict", "model_to_dict",
]


def bits(worlds: Iterable[int]) -> int:
    """Pack an iterable of world indices into a bitset."""
    out = 0
    for w in worlds:
        out |= 1 << w
    return out


def bit_list(bitset: int) -> list[int]:
    """Unpack a bitset into a sorted list of indices."""
    out = []
    i = 0
    while bitset:
        if bitset & 1:
            out.append(i)
        bitset >>= 1
        i += 1
    return out


@dataclass(frozen=True)
class Frame:
    """A finite frame: ``n`` worlds and per-world successor bitsets."""

    n: int
    rel: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInputError("a frame needs at least one world")
        if len(self.rel) != self.n:
            raise InvalidInputError("rel must list one successor set per world")
        full = (1 << self.n) - 1
        for a, succ in enumerate(self.rel):
            if succ & ~full:
                raise InvalidInputError(f"successor of world {a} out of range")

    @staticmethod
    def from_pairs(n: int, pairs: Iterable[tuple[int, int]]) -> "Frame":
        rel = [0] * n
        for a, b in pairs:
            if not (0 <= a < n and 0 <= b < n):
                raise InvalidInputError(f"edge ({a}, {b}) out of range")
            rel[a] |= 1 << b
        return Frame(n, tuple(rel))

    def pairs(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(self.n) for b in bit_list(self.rel[a])]

    def successors(self, a: int) -> int:
        return self.rel[a]

    def predecessors(self, b: int) -> int:
        return bits(a for a in range(self.n) if self.rel[a] >> b & 1)


@dataclass(frozen=True)
class Model:
    """A frame plus a valuation; absent variables denote the empty set."""

    frame: Frame
    val: Mapping[int, int]

    def __post_init__(self):
        full = (1 << self.frame.n) - 1
        for var, worlds in self.val.items():
            if worlds & ~full:
                raise InvalidInputError(f"valuation of p{var} out of range")


@dataclass(frozen=True)
class BoundedMorphism:
    """A world map satisfying the forth and back conditions."""

    source: Frame
    target: Frame
    mapping: tuple[int, ...]

    def __post_init__(self):
        if not is_bounded_morphism(self.mapping, self.source, self.target):
            raise MalformedMapError("map violates the bounded morphism conditions")

    def is_surjective(self) -> bool:
        return set(self.mapping) == set(range(self.target.n))

    def is_injective(self) -> bool:
        return len(set(self.mapping)) == len(self.mapping)


@dataclass(frozen=True)
class Validity:
    """Verdict of a validity check, with the least countermodel on failure."""

    valid: bool
    valuation: Optional[dict[int, int]] = None
    world: Optional[int] = None

    def __bool__(self) -> bool:
        return self.valid


# --- truth and validity ----------------------------------------------------

def eval_worlds(m: Model, f: Formula) -> int:
    """Bitset of worlds where ``f`` is true in ``m``."""
    full = (1 << m.frame.n) - 1
    if isinstance(f, Var):
        return m.val.get(f.index, 0)
    if isinstance(f, Bot):
        return 0
    if isinstance(f, Imp):
        return (~eval_worlds(m, f.left) & full) | eval_worlds(m, f.right)
    truth_set = eval_worlds(m, f.arg)
    boxed = 0
    for a in range(m.frame.n):
        if not m.frame.rel[a] & ~truth_set:
            boxed |= 1 << a
    return boxed


def truth(m: Model, a: int, f: Formula) -> bool:
    """Whether ``f`` is true at world ``a`` of ``m``."""
    if not 0 <= a < m.frame.n:
        raise InvalidInputError(f"world {a} out of range")
    return bool(eval_worlds(m, f) >> a & 1)


@lru_cache(maxsize=4096)
def _box_table(fr: Frame) -> tuple[int, ...]:
    return tuple(
        bits(a for a in range(fr.n) if not fr.rel[a] & ~s)
        for s in range(1 << fr.n))


def _compile_eval(fr: Frame, f: Formula, var_list: Sequence[int]):
    """Compile ``f`` into a closure over a tuple of variable bitsets.

    The box operation is table-driven when the frame is small enough for
    the table to pay off; the result agrees with ``eval_worlds`` everywhere.
    """
    full = (1 << fr.n) - 1
    position = {v: i for i, v in enumerate(var_list)}
    if fr.n <= 12:
        box_table = _box_table(fr)

        def box(s: int) -> int:
            return box_table[s]
    else:
        def box(s: int) -> int:
            out = 0
            for a in range(fr.n):
                if not fr.rel[a] & ~s:
                    out |= 1 << a
            return out

    def build(g: Formula):
        if isinstance(g, Var):
            i = position[g.index]
            return lambda vals: vals[i]
        if isinstance(g, Bot):
            return lambda vals: 0
        if isinstance(g, Imp):
            left, right = build(g.left), build(g.right)
            return lambda vals: (~left(vals) & full) | right(vals)
        arg = build(g.arg)
        return lambda vals: box(arg(vals))

    return build(f)


def frame_valid(fr: Frame, f: Formula, limits: Limits = DEFAULT_LIMITS) -> Validity:
    """Brute-force frame validity over all valuations of the variables in ``f``.

    On failure the countermodel is the lexicographically least (valuation,
    world) witness.
    """
    var_list = sorted(variables(f))
    space = (1 << fr.n) ** len(var_list)
    if space > limits.max_assignments:
        raise SearchSpaceExceededError(
            f"{space} valuations exceed the cap of {limits.max_assignments}")
    full = (1 << fr.n) - 1
    evaluate = _compile_eval(fr, f, var_list)
    # itertools.product varies the last variable fastest, so valuations come
    # out in lexicographic order over the sorted variable list.
    for values in itertools.product(range(1 << fr.n), repeat=len(var_list)):
        truth_set = evaluate(values)
        if truth_set != full:
            world = 0
            while truth_set >> world & 1:
                world += 1
            return Validity(False, dict(zip(var_list, values)), world)
    return Validity(True)


def validates(fr: Frame, axioms: Iterable[Formula],
              limits: Limits = DEFAULT_LIMITS) -> bool:
    """Whether the frame validates every axiom in the list."""
    return all(frame_valid(fr, f, limits) for f in axioms)


# --- frame constructions ----------------------------------------------------

def generated_subframe(fr: Frame, seeds: int) -> tuple[Frame, tuple[int, ...]]:
    """Smallest successor-closed subframe containing ``seeds``.

    Returns the subframe and the surviving old world indices in ascending
    order (new index ``i`` corresponds to old world ``worlds[i]``).
    """
    full = (1 << fr.n) - 1
    if seeds & ~full:
        raise InvalidInputError("seed world out of range")
    if not seeds:
        raise InvalidInputError("seed set must be nonempty")
    closed = seeds
    frontier = seeds
    while frontier:
        reach = 0
        for a in bit_list(frontier):
            reach |= fr.rel[a]
        frontier = reach & ~closed
        closed |= reach
    worlds = tuple(bit_list(closed))
    index = {old: new for new, old in enumerate(worlds)}
    rel = tuple(bits(index[b] for b in bit_list(fr.rel[old])) for old in worlds)
    return Frame(len(worlds), rel), worlds


def is_bounded_morphism(mapping: Sequence[int], src: Frame, tgt: Frame) -> bool:
    """Check the forth and back conditions of a candidate world map."""
    if len(mapping) != src.n or any(not 0 <= c < tgt.n for c in mapping):
        raise MalformedMapError("map must send every source world to a target world")
    for a in range(src.n):
        image_succ = bits(mapping[b] for b in bit_list(src.rel[a]))
        # forth: aRb implies f(a) R' f(b)
        if image_succ & ~tgt.rel[mapping[a]]:
            return False
        # back: f(a) R' c implies c = f(b) for some b with aRb
        if tgt.rel[mapping[a]] & ~image_succ:
            return False
    return True


def find_bounded_morphisms(src: Frame, tgt: Frame, surjective_only: bool = False,
                           limits: Limits = DEFAULT_LIMITS) -> list[BoundedMorphism]:
    """All bounded morphisms from ``src`` to ``tgt``, in lexicographic map order."""
    space = tgt.n ** src.n
    if space > limits.max_assignments:
        raise SearchSpaceExceededError(
            f"{space} candidate maps exceed the cap of {limits.max_assignments}")
    found: list[BoundedMorphism] = []
    mapping = [0] * src.n

    def forth_ok(w: int) -> bool:
        # check edges between w and already-assigned worlds in both directions
        for u in range(w + 1):
            if src.rel[u] >> w & 1 and not tgt.rel[mapping[u]] >> mapping[w] & 1:
                return False
            if src.rel[w] >> u & 1 and not tgt.rel[mapping[w]] >> mapping[u] & 1:
                return False
        return True

    def extend(w: int) -> None:
        if w == src.n:
            if is_bounded_morphism(mapping, src, tgt):
                if not surjective_only or set(mapping) == set(range(tgt.n)):
                    found.append(BoundedMorphism(src, tgt, tuple(mapping)))
            return
        for c in range(tgt.n):
            mapping[w] = c
            if forth_ok(w):
                extend(w + 1)

    extend(0)
    return found


def morphism_image(g: BoundedMorphism) -> tuple[Frame, tuple[int, ...]]:
    """Image of a bounded morphism as an inner subframe of its target."""
    return generated_subframe(g.target, bits(g.mapping))


def disjoint_union(frames: Sequence[Frame]) -> tuple[Frame, tuple[tuple[int, ...], ...]]:
    """Disjoint union with worlds reindexed by offset; returns injection maps."""
    if not frames:
        raise InvalidInputError("disjoint union needs at least one frame")
    rel: list[int] = []
    injections: list[tuple[int, ...]] = []
    offset = 0
    for fr in frames:
        injections.append(tuple(range(offset, offset + fr.n)))
        rel.extend(succ << offset for succ in fr.rel)
        offset += fr.n
    return Frame(offset, tuple(rel)), tuple(injections)


def ultraproduct_principal(frames: Sequence[Frame], j: Optional[int],
                           limits: Limits = DEFAULT_LIMITS) -> tuple[Frame, tuple[int, ...]]:
    """Ultraproduct modulo the principal ultrafilter at index ``j``.

    The quotient of the Cartesian product is built literally: two tuples are
    identified iff they agree at coordinate ``j``.  Returns the quotient frame
    (classes ordered by their j-th coordinate) and the canonical isomorphism
    onto ``frames[j]``.  ``j=None`` requests a nonprincipal ultrafilter, which
    does not exist on a finite index set.
    """
    if not frames:
        raise InvalidInputError("ultraproduct needs at least one frame")
    if j is None:
        raise UnsupportedUltrafilterError(
            "every ultrafilter on a finite index set is principal; "
            "nonprincipal ultraproducts are not representable at finite scale")
    if not 0 <= j < len(frames):
        raise InvalidInputError(f"index {j} out of range")
    space = 1
    for fr in frames:
        space *= fr.n
    if space > limits.max_assignments:
        raise SearchSpaceExceededError(
            f"{space} product tuples exceed the cap of {limits.max_assignments}")
    classes: list[list[tuple[int, ...]]] = [[] for _ in range(frames[j].n)]
    for t in itertools.product(*(range(fr.n) for fr in frames)):
        classes[t[j]].append(t)
    rel_j = frames[j].rel
    rel = tuple(bits(w for w in range(frames[j].n)
                     if rel_j[cls[0][j]] >> classes[w][0][j] & 1)
                for cls in classes)
    quotient = Frame(frames[j].n, rel)
    return quotient, tuple(range(frames[j].n))


def ultrafilter_extension(fr: Frame) -> tuple[Frame, tuple[int, ...]]:
    """Canonical frame of the complex algebra; isomorphic to ``fr`` when finite.

    The ultrafilters of a finite powerset algebra are the principal ones, so
    the identity on world indices is the isomorphism.
    """
    from .algebra import cf, cm  # deferred: algebra imports this module

    return cf(cm(fr)), tuple(range(fr.n))


def is_isomorphic(a: Frame, b: Frame) -> Optional[tuple[int, ...]]:
    """A relation-preserving bijection from ``a`` to ``b``, or None.

    Backtracking over world images with degree-sequence pruning.
    """
    if a.n != b.n:
        return None

    def signature(fr: Frame, w: int) -> tuple[int, int, int]:
        out_deg = fr.rel[w].bit_count()
        in_deg = fr.predecessors(w).bit_count()
        return out_deg, in_deg, fr.rel[w] >> w & 1

    sig_a = [signature(a, w) for w in range(a.n)]
    sig_b = [signature(b, w) for w in range(b.n)]
    if sorted(sig_a) != sorted(sig_b):
        return None
    mapping = [-1] * a.n
    used = [False] * b.n

    def consistent(w: int) -> bool:
        for u in range(w + 1):
            if (a.rel[u] >> w & 1) != (b.rel[mapping[u]] >> mapping[w] & 1):
                return False
            if (a.rel[w] >> u & 1) != (b.rel[mapping[w]] >> mapping[u] & 1):
                return False
        return True

    def extend(w: int) -> bool:
        if w == a.n:
            return True
        for c in range(b.n):
            if used[c] or sig_b[c] != sig_a[w]:
                continue
            mapping[w] = c
            used[c] = True
            if consistent(w) and extend(w + 1):
                return True
            used[c] = False
        mapping[w] = -1
        return False

    return tuple(mapping) if extend(0) else None


# --- JSON ------------------------------------------------------------------

def frame_from_dict(d: dict, limits: Limits = DEFAULT_LIMITS) -> Frame:
    """Load a frame from ``{"worlds": n, "rel": [[a, b], ...]}``."""
    try:
        n = int(d["worlds"])
        pairs = [(int(a), int(b)) for a, b in d["rel"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"malformed frame JSON: {exc}") from exc
    if n > limits.max_worlds:
        raise SearchSpaceExceededError(
            f"{n} worlds exceed the cap of {limits.max_worlds}")
    return Frame.from_pairs(n, pairs)


def frame_to_dict(fr: Frame) -> dict:
    return {"worlds": fr.n, "rel": [[a, b] for a, b in fr.pairs()]}


def model_from_dict(d: dict, limits: Limits = DEFAULT_LIMITS) -> Model:
    """Load a model from frame JSON extended with ``"val": {"p0": [..]}``."""
    fr = frame_from_dict(d, limits)
    val: dict[int, int] = {}
    for name, worlds in d.get("val", {}).items():
        if not (name.startswith("p") and name[1:].isdigit()):
            raise InvalidInputError(f"bad variable name {name!r} in model JSON")
        val[int(name[1:])] = bits(int(w) for w in worlds)
    return Model(fr, val)


def model_to_dict(m: Model) -> dict:
    d = frame_to_dict(m.frame)
    d["val"] = {f"p{var}": bit_list(worlds) for var, worlds in sorted(m.val.items())}
    return d
