"""Closure analysis of finite frame classes under the validity-preserving
operations, and bounded search for a modal formula defining a class.

Everything here works up to isomorphism: frames are canonicalized by the
least adjacency encoding over all world permutations, and all claims are
relative to an explicit size bound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .errors import InvalidInputError, SearchSpaceExceededError
from .firstorder import FOFormula, frame_satisfies, free_variables, parse_fo
from .formula import BOT, Box, Formula, Imp, Var, modal_depth
from .frame import (
    Frame,
    bit_list,
    disjoint_union,
    find_bounded_morphisms,
    frame_from_dict,
    frame_to_dict,
    frame_valid,
    generated_subframe,
    is_isomorphic,
)
from .limits import DEFAULT_LIMITS, Limits

__all__ = [
    "FrameClass", "ClosureViolation", "ClosureReport",
    "adjacency_encoding", "canonical_encoding", "enumerate_frames",
    "closure_report", "search_defining_formula", "enumerate_formulas",
    "frame_class_from_dict",
]


@dataclass(frozen=True)
class FrameClass:
    """Either an explicit finite list of frames or a first-order predicate
    with a size bound; membership is taken up to isomorphism."""

    frames: Optional[tuple[Frame, ...]] = None
    predicate: Optional[FOFormula] = None
    bound: Optional[int] = None

    def __post_init__(self):
        if (self.frames is None) == (self.predicate is None):
            raise InvalidInputError(
                "a frame class is either an explicit list or a predicate, not both")
        if self.predicate is not None:
            if self.bound is None:
                raise InvalidInputError("a predicate class needs a size bound")
            if free_variables(self.predicate):
                raise InvalidInputError("the class predicate must be a sentence")

    @staticmethod
    def explicit(frames: Sequence[Frame]) -> "FrameClass":
        return FrameClass(frames=tuple(frames))

    @staticmethod
    def first_order(sentence: FOFormula, bound: int) -> "FrameClass":
        return FrameClass(predicate=sentence, bound=bound)

    def contains(self, fr: Frame) -> bool:
        if self.frames is not None:
            return any(is_isomorphic(fr, member) is not None for member in self.frames)
        return fr.n <= self.bound and frame_satisfies(fr, self.predicate)


# --- frame enumeration up to isomorphism -------------------------------------

def adjacency_encoding(fr: Frame) -> int:
    """Row-major adjacency matrix packed into an int (bit i*n+j is edge i->j)."""
    code = 0
    for i in range(fr.n):
        code |= fr.rel[i] << (i * fr.n)
    return code


def _encode_permuted(fr: Frame, perm: Sequence[int]) -> int:
    code = 0
    for i in range(fr.n):
        row = 0
        for j in bit_list(fr.rel[i]):
            row |= 1 << perm[j]
        code |= row << (perm[i] * fr.n)
    return code


def canonical_encoding(fr: Frame) -> tuple[int, int]:
    """Least adjacency encoding over all world permutations, keyed by size."""
    best = min(_encode_permuted(fr, perm)
               for perm in itertools.permutations(range(fr.n)))
    return fr.n, best


def _frame_from_encoding(n: int, code: int) -> Frame:
    mask = (1 << n) - 1
    return Frame(n, tuple(code >> (i * n) & mask for i in range(n)))


def enumerate_frames(max_worlds: int, up_to_iso: bool = True,
                     limits: Limits = DEFAULT_LIMITS) -> Iterator[Frame]:
    """All frames with 1..max_worlds worlds, canonical representatives only
    when ``up_to_iso`` is set, in (size, encoding) order."""
    if max_worlds > limits.max_worlds:
        raise SearchSpaceExceededError(
            f"{max_worlds} worlds exceed the cap of {limits.max_worlds}")
    for n in range(1, max_worlds + 1):
        perms = list(itertools.permutations(range(n)))
        for code in range(1 << (n * n)):
            fr = _frame_from_encoding(n, code)
            if up_to_iso and any(_encode_permuted(fr, p) < code for p in perms):
                continue
            yield fr


# --- closure report -----------------------------------------------------------

@dataclass(frozen=True)
class ClosureViolation:
    operation: str
    sources: tuple[Frame, ...]
    witness: Frame
    detail: str

    def to_dict(self) -> dict:
        return {
            "operation": self.operation,
            "sources": [frame_to_dict(fr) for fr in self.sources],
            "witness": frame_to_dict(self.witness),
            "detail": self.detail,
        }


@dataclass(frozen=True)
class ClosureReport:
    size_bound: int
    member_count: int
    subframe_violations: tuple[ClosureViolation, ...]
    image_violations: tuple[ClosureViolation, ...]
    union_violations: tuple[ClosureViolation, ...]

    @property
    def closed(self) -> bool:
        return not (self.subframe_violations or self.image_violations
                    or self.union_violations)

    def to_dict(self) -> dict:
        return {
            "size_bound": self.size_bound,
            "members_within_bound": self.member_count,
            "generated_subframes": {
                "closed": not self.subframe_violations,
                "violations": [v.to_dict() for v in self.subframe_violations],
            },
            "bounded_morphic_images": {
                "closed": not self.image_violations,
                "violations": [v.to_dict() for v in self.image_violations],
            },
            "disjoint_unions": {
                "closed": not self.union_violations,
                "violations": [v.to_dict() for v in self.union_violations],
            },
            "ultrafilter_extensions_of_complement": {
                "closed": True,
                "note": "finite ultrafilter extensions are isomorphic to their "
                        "frames, so this holds vacuously",
            },
            "closed": self.closed,
        }

    def render_text(self) -> str:
        lines = [f"members within bound {self.size_bound}: {self.member_count}"]
        for name, violations in [
            ("generated subframes", self.subframe_violations),
            ("bounded-morphic images", self.image_violations),
            ("disjoint unions", self.union_violations),
        ]:
            if violations:
                lines.append(f"{name}: NOT closed ({len(violations)} violation(s))")
                for v in violations:
                    lines.append(f"  {v.detail}")
            else:
                lines.append(f"{name}: closed within bound")
        lines.append("ultrafilter extensions of complement: closed (vacuous at "
                     "finite scale)")
        lines.append(f"verdict: {'closed' if self.closed else 'not closed'} "
                     f"within bound {self.size_bound}")
        return "\n".join(lines)


def closure_report(c: FrameClass, size_bound: int,
                   limits: Limits = DEFAULT_LIMITS) -> ClosureReport:
    """Check the class against generated subframes, surjective bounded-morphic
    images, and binary disjoint unions, all within the size bound."""
    if size_bound < 1:
        raise InvalidInputError("size bound must be positive")
    universe = list(enumerate_frames(size_bound, up_to_iso=True, limits=limits))
    members = [fr for fr in universe if c.contains(fr)]

    subframe_violations = []
    seen = set()
    for fr in members:
        for seeds in range(1, 1 << fr.n):
            sub, _ = generated_subframe(fr, seeds)
            if not c.contains(sub):
                key = (canonical_encoding(fr), canonical_encoding(sub))
                if key not in seen:
                    seen.add(key)
                    subframe_violations.append(ClosureViolation(
                        "generated_subframe", (fr,), sub,
                        f"subframe generated by worlds {bit_list(seeds)} of a "
                        f"member leaves the class"))

    image_violations = []
    seen = set()
    for fr in members:
        for tgt in universe:
            if not find_bounded_morphisms(fr, tgt, surjective_only=True,
                                          limits=limits):
                continue
            if not c.contains(tgt):
                key = (canonical_encoding(fr), canonical_encoding(tgt))
                if key not in seen:
                    seen.add(key)
                    image_violations.append(ClosureViolation(
                        "bounded_morphic_image", (fr,), tgt,
                        "a surjective bounded-morphic image of a member leaves "
                        "the class"))

    union_violations = []
    seen = set()
    for a, b in itertools.combinations_with_replacement(members, 2):
        if a.n + b.n > size_bound:
            continue
        union, _ = disjoint_union([a, b])
        if not c.contains(union):
            key = canonical_encoding(union)
            if key not in seen:
                seen.add(key)
                union_violations.append(ClosureViolation(
                    "disjoint_union", (a, b), union,
                    "a binary disjoint union of members leaves the class"))

    return ClosureReport(
        size_bound=size_bound,
        member_count=len(members),
        subframe_violations=tuple(subframe_violations),
        image_violations=tuple(image_violations),
        union_violations=tuple(union_violations),
    )


# --- formula search -------------------------------------------------------------

def _formula_key(f: Formula) -> tuple[int, ...]:
    # preorder encoding over the fixed constructor order Var < Bot < Imp < Box
    if isinstance(f, Var):
        return (0, f.index)
    if isinstance(f, Imp):
        return (2,) + _formula_key(f.left) + _formula_key(f.right)
    if isinstance(f, Box):
        return (3,) + _formula_key(f.arg)
    return (1,)


def enumerate_formulas(var_count: int, max_depth: int) -> Iterator[Formula]:
    """Core formulas in canonical order: by node count, then lexicographically
    on the preorder constructor encoding."""
    by_size: list[list[Formula]] = [[]]
    size = 0
    while True:
        size += 1
        batch: list[Formula] = []
        if size == 1:
            batch.extend(Var(i) for i in range(var_count))
            batch.append(BOT)
        else:
            for left_size in range(1, size - 1):
                for left in by_size[left_size]:
                    for right in by_size[size - 1 - left_size]:
                        batch.append(Imp(left, right))
            for arg in by_size[size - 1]:
                if modal_depth(arg) < max_depth:
                    batch.append(Box(arg))
        batch.sort(key=_formula_key)
        by_size.append(batch)
        yield from batch


def search_defining_formula(c: FrameClass, universe_bound: int,
                            formula_depth: int, var_count: int,
                            limits: Limits = DEFAULT_LIMITS) -> Optional[Formula]:
    """Least formula (node count, then canonical order) valid in exactly the
    members of the class among all frames up to the universe bound.

    Returns None when a closure violation inside the bound proves that no
    such formula can exist; raises when the candidate budget runs out
    inconclusively.
    """
    report = closure_report(c, universe_bound, limits)
    if not report.closed:
        return None
    universe = list(enumerate_frames(universe_bound, up_to_iso=True, limits=limits))
    membership = [c.contains(fr) for fr in universe]
    examined = 0
    for candidate in enumerate_formulas(var_count, formula_depth):
        examined += 1
        if examined > limits.max_candidates:
            raise SearchSpaceExceededError(
                f"candidate budget of {limits.max_candidates} formulas exhausted")
        if all(frame_valid(fr, candidate, limits).valid == member
               for fr, member in zip(universe, membership)):
            return candidate
    return None


def frame_class_from_dict(d: dict, limits: Limits = DEFAULT_LIMITS) -> FrameClass:
    """Load ``{"frames": [...]}`` or ``{"fo": "...", "bound": n}``."""
    if "frames" in d:
        return FrameClass.explicit([frame_from_dict(fd, limits) for fd in d["frames"]])
    if "fo" in d:
        try:
            bound = int(d["bound"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"malformed class JSON: {exc}") from exc
        return FrameClass.first_order(parse_fo(d["fo"]), bound)
    raise InvalidInputError("class JSON needs either 'frames' or 'fo'")
