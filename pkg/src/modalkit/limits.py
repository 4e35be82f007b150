"""Configurable size caps that keep every exhaustive search desk-scale."""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Limits:
    """Caps enforced by the brute-force operations.

    max_worlds bounds frames accepted from external input, max_assignments
    bounds valuation/assignment/map enumerations, max_atoms bounds algebra
    constructions, max_free_generators bounds free-algebra arity, and
    max_candidates bounds formula enumeration in definability searches.
    """

    max_worlds: int = 16
    max_assignments: int = 2 ** 24
    max_atoms: int = 24
    max_free_generators: int = 3
    max_candidates: int = 100_000

    def override(self, **changes) -> "Limits":
        return replace(self, **changes)


DEFAULT_LIMITS = Limits()
