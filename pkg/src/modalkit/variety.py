"""Finitely generated free algebras in varieties generated by finite
frames, level-n canonical frames, and the desk-scale canonicity pipeline.

A variety is presented by finite generator frames; the free algebra on n
generators is carved out of the direct product of one copy of each
generator's complex algebra per assignment of n element values, generated
by the coordinate-projection elements.  Because the generators are finite
frames, this ambient product is finite and the construction terminates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .algebra import (
    ModalAlgebra,
    cf,
    cm,
    decompose_cf_of_power,
)
from .errors import (
    InvalidInputError,
    SearchSpaceExceededError,
    UnsoundPresentationError,
)
from .formula import Formula, render
from .frame import (
    Frame,
    Validity,
    bit_list,
    bits,
    disjoint_union,
    frame_to_dict,
    frame_valid,
    is_isomorphic,
)
from .limits import DEFAULT_LIMITS, Limits

__all__ = [
    "VarietyPresentation", "FreeAlgebraResult", "CanonicityReport",
    "PowerProbeReport", "free_algebra", "canonical_frame_level_n",
    "canonicity_report", "power_commutation_probe",
]


@dataclass(frozen=True)
class VarietyPresentation:
    """Generator frames plus the axioms of the logic they are claimed to model.

    Axiom soundness is a hard precondition: every axiom must be valid in
    every generator frame, so every downstream report concerns a genuine
    logic of the generator class.
    """

    generator_frames: tuple[Frame, ...]
    axioms: tuple[Formula, ...]

    def __post_init__(self):
        if not self.generator_frames:
            raise InvalidInputError("a presentation needs at least one generator frame")
        for axiom in self.axioms:
            for i, fr in enumerate(self.generator_frames):
                if not frame_valid(fr, axiom):
                    raise UnsoundPresentationError(
                        f"axiom {render(axiom)} is not valid in generator frame {i}")


@dataclass(frozen=True)
class FreeAlgebraResult:
    """The n-generated free algebra with its generators and coordinate index.

    ``assignment_index[c]`` records which generator frame and which tuple of
    element values (one per generator) coordinate ``c`` of the ambient
    product came from.
    """

    algebra: ModalAlgebra
    generators: tuple[int, ...]
    assignment_index: tuple[tuple[int, tuple[int, ...]], ...]


def _blockwise_l(coords: Sequence[ModalAlgebra], offsets: Sequence[int], e: int) -> int:
    out = 0
    for alg, off in zip(coords, offsets):
        block = e >> off & alg.top
        out |= alg.l(block) << off
    return out


def free_algebra(pres: VarietyPresentation, n: int,
                 limits: Limits = DEFAULT_LIMITS) -> FreeAlgebraResult:
    """Free algebra on ``n`` generators of the variety generated by the
    complex algebras of the presentation's frames.

    Closure iterates complement, all binary meets, then l to a fixed point;
    elements are ordered by bitset value so atoms and generators come out
    deterministically.
    """
    if n < 0:
        raise InvalidInputError("generator count must be nonnegative")
    if n > limits.max_free_generators:
        raise SearchSpaceExceededError(
            f"{n} generators exceed the cap of {limits.max_free_generators}")
    gen_algebras = [cm(fr) for fr in pres.generator_frames]

    coords: list[ModalAlgebra] = []
    index: list[tuple[int, tuple[int, ...]]] = []
    for gi, alg in enumerate(gen_algebras):
        for assignment in itertools.product(range(alg.size), repeat=n):
            coords.append(alg)
            index.append((gi, assignment))
    total_atoms = sum(alg.atoms for alg in coords)
    if total_atoms > limits.max_atoms:
        raise SearchSpaceExceededError(
            f"ambient product needs {total_atoms} atoms, over the cap of {limits.max_atoms}")

    offsets = []
    offset = 0
    for alg in coords:
        offsets.append(offset)
        offset += alg.atoms
    top = (1 << total_atoms) - 1

    generators = []
    for t in range(n):
        g = 0
        for (gi, assignment), off in zip(index, offsets):
            g |= assignment[t] << off
        generators.append(g)

    closed = {0, top, *generators}
    while True:
        new = {~e & top for e in closed}
        new.update(a & b for a, b in itertools.combinations(closed, 2))
        new.update(_blockwise_l(coords, offsets, e) for e in closed)
        if new <= closed:
            break
        closed |= new

    # the subalgebra's atoms: the meet of all members above each ambient atom
    atom_of: dict[int, int] = {}
    for a in range(total_atoms):
        acc = top
        for e in closed:
            if e >> a & 1:
                acc &= e
        atom_of[a] = acc
    sub_atoms = sorted(set(atom_of.values()))
    if 1 << len(sub_atoms) != len(closed):
        raise AssertionError("closure is not a Boolean subalgebra")

    def convert(e: int) -> int:
        return bits(j for j, atom in enumerate(sub_atoms) if atom & e == atom)

    dia = tuple(
        convert(~_blockwise_l(coords, offsets, ~atom & top) & top)
        for atom in sub_atoms)
    algebra = ModalAlgebra(len(sub_atoms), dia)
    return FreeAlgebraResult(algebra, tuple(convert(g) for g in generators),
                             tuple(index))


def canonical_frame_level_n(pres: VarietyPresentation, n: int,
                            limits: Limits = DEFAULT_LIMITS) -> Frame:
    """Canonical frame of the n-generated free algebra; its worlds play the
    role of maximally consistent sets in n variables."""
    return cf(free_algebra(pres, n, limits).algebra)


@dataclass(frozen=True)
class CanonicityReport:
    n: int
    free_atoms: int
    free_size: int
    frame: Frame
    axioms: tuple[Formula, ...]
    verdicts: tuple[Validity, ...]
    canonical: bool

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "free_algebra": {"atoms": self.free_atoms, "size": self.free_size},
            "canonical_frame": frame_to_dict(self.frame),
            "axioms": [
                {
                    "formula": render(axiom),
                    "valid": verdict.valid,
                    "countermodel": None if verdict.valid else {
                        "valuation": {f"p{v}": bit_list(w)
                                      for v, w in sorted(verdict.valuation.items())},
                        "world": verdict.world,
                    },
                }
                for axiom, verdict in zip(self.axioms, self.verdicts)
            ],
            "canonical_at_level_n": self.canonical,
        }

    def render_text(self) -> str:
        lines = [
            f"free algebra: {self.free_atoms} atoms, {self.free_size} elements",
            f"level-{self.n} canonical frame: {self.frame.n} worlds, "
            f"relation {self.frame.pairs()}",
        ]
        for axiom, verdict in zip(self.axioms, self.verdicts):
            if verdict.valid:
                lines.append(f"axiom {render(axiom)}: valid")
            else:
                val = {f"p{v}": bit_list(w) for v, w in sorted(verdict.valuation.items())}
                lines.append(f"axiom {render(axiom)}: invalid, countermodel "
                             f"valuation {val} at world {verdict.world}")
        status = "canonical" if self.canonical else "not canonical"
        lines.append(f"verdict: {status} at level {self.n}")
        return "\n".join(lines)


def canonicity_report(pres: VarietyPresentation, n: int,
                      limits: Limits = DEFAULT_LIMITS) -> CanonicityReport:
    """Check every axiom on the level-n canonical frame of the presentation."""
    result = free_algebra(pres, n, limits)
    frame = cf(result.algebra)
    verdicts = tuple(frame_valid(frame, axiom, limits) for axiom in pres.axioms)
    return CanonicityReport(
        n=n,
        free_atoms=result.algebra.atoms,
        free_size=result.algebra.size,
        frame=frame,
        axioms=pres.axioms,
        verdicts=verdicts,
        canonical=all(v.valid for v in verdicts),
    )


@dataclass(frozen=True)
class PowerProbeReport:
    n: int
    i_count: int
    power_frame: Frame
    union_frame: Frame
    isomorphism: Optional[tuple[int, ...]]
    axioms: tuple[Formula, ...]
    power_verdicts: tuple[bool, ...]
    union_verdicts: tuple[bool, ...]

    @property
    def isomorphic(self) -> bool:
        return self.isomorphism is not None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "i_count": self.i_count,
            "cf_of_power": frame_to_dict(self.power_frame),
            "union_of_cf_copies": frame_to_dict(self.union_frame),
            "isomorphic": self.isomorphic,
            "isomorphism": list(self.isomorphism) if self.isomorphism else None,
            "axioms": [
                {"formula": render(a), "valid_in_cf_of_power": pv,
                 "valid_in_union": uv}
                for a, pv, uv in zip(self.axioms, self.power_verdicts,
                                     self.union_verdicts)
            ],
            "note": "with a finite index set every ultrafilter is principal, "
                    "so the two constructions agree",
        }

    def render_text(self) -> str:
        lines = [
            f"cf of the {self.i_count}-fold direct power: {self.power_frame.n} worlds",
            f"disjoint union of {self.i_count} copies of cf: {self.union_frame.n} worlds",
            f"isomorphic: {'yes' if self.isomorphic else 'no'}"
            + (f", via {list(self.isomorphism)}" if self.isomorphism else ""),
        ]
        for a, pv, uv in zip(self.axioms, self.power_verdicts, self.union_verdicts):
            lines.append(f"axiom {render(a)}: cf(power) "
                         f"{'valid' if pv else 'invalid'}, union "
                         f"{'valid' if uv else 'invalid'}")
        lines.append("note: with a finite index set every ultrafilter is principal, "
                     "so the two constructions agree")
        return "\n".join(lines)


def power_commutation_probe(pres: VarietyPresentation, n: int, i_count: int,
                            limits: Limits = DEFAULT_LIMITS) -> PowerProbeReport:
    """Compare cf(A^I) with the disjoint union of I copies of cf(A) for the
    level-n free algebra A.  At finite scale the two are isomorphic; the
    divergence the characterizations allow needs a nonprincipal ultrafilter."""
    result = free_algebra(pres, n, limits)
    decomposition = decompose_cf_of_power(result.algebra, i_count, limits)
    union_frame, _ = disjoint_union([cf(result.algebra)] * i_count)
    mapping = is_isomorphic(decomposition.frame, union_frame)
    power_verdicts = tuple(
        frame_valid(decomposition.frame, a, limits).valid for a in pres.axioms)
    union_verdicts = tuple(
        frame_valid(union_frame, a, limits).valid for a in pres.axioms)
    return PowerProbeReport(
        n=n,
        i_count=i_count,
        power_frame=decomposition.frame,
        union_frame=union_frame,
        isomorphism=mapping,
        axioms=pres.axioms,
        power_verdicts=power_verdicts,
        union_verdicts=union_verdicts,
    )
