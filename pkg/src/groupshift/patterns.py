"""Patterns, finite window configurations and pattern codings.

Patterns are anchored at the identity: supports are absolute element sets
and occurrence positions are left translates.  Occurrence search skips any
position whose translated support leaves the window.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .groups import Ball, GroupModel, InputError


class EmptySupportError(InputError):
    """Density of a pattern with empty support is undefined."""


@dataclass(frozen=True)
class Pattern:
    """A finite support-to-symbol map, support in canonical element order."""

    support: tuple
    symbols: tuple

    def __post_init__(self):
        if len(self.support) != len(set(self.support)):
            raise InputError("pattern support contains duplicates")
        if len(self.support) != len(self.symbols):
            raise InputError("support and symbols must align")

    def as_dict(self) -> dict:
        return dict(zip(self.support, self.symbols))

    def __len__(self) -> int:
        return len(self.support)


def make_pattern(group: GroupModel, cells: dict) -> Pattern:
    support = tuple(group.sorted_elements(cells))
    return Pattern(support=support, symbols=tuple(cells[g] for g in support))


@dataclass
class WindowConfig:
    """Symbols assigned to every element of the ball B(1, radius)."""

    group: GroupModel
    radius: int
    cells: dict
    alphabet_size: int
    window: Ball = field(default=None, repr=False)

    def __post_init__(self):
        if self.window is None:
            self.window = self.group.ball(radius=self.radius)
        missing = [g for g in self.window.members if g not in self.cells]
        if missing:
            raise InputError(f"window symbol map misses {len(missing)} cells")
        for g, a in self.cells.items():
            if not 0 <= a < self.alphabet_size:
                raise InputError(f"symbol {a} outside alphabet at {g}")

    def __getitem__(self, g) -> int:
        return self.cells[g]

    def __contains__(self, g) -> bool:
        return g in self.cells


def pattern_density(p: Pattern) -> Fraction:
    """Exact fraction of cells carrying symbol 1."""
    if not p.support:
        raise EmptySupportError("density of the empty pattern is undefined")
    ones = sum(1 for a in p.symbols if a == 1)
    return Fraction(ones, len(p.support))


def density_of(cells: dict, subset) -> Fraction:
    subset = list(subset)
    if not subset:
        raise EmptySupportError("density over an empty set is undefined")
    ones = sum(1 for g in subset if cells[g] == 1)
    return Fraction(ones, len(subset))


def interior_and_boundary(group: GroupModel, F, K) -> tuple[frozenset, frozenset]:
    """Split F into K-interior and K-boundary: Int = {g : gK subset of F}."""
    F = frozenset(F)
    K = list(K)
    interior = frozenset(
        g for g in F if all(group.mul(g, k) in F for k in K)
    )
    return interior, F - interior


@dataclass(frozen=True)
class CodingResult:
    consistent: bool
    pattern: Optional[Pattern]
    witness: Optional[tuple[int, int]]


def coding_check(group: GroupModel, tuples) -> CodingResult:
    """Check a pattern coding for consistency.

    ``tuples`` is a sequence of (word, symbol) pairs; words may be strings
    or letter lists.  Returns the codified pattern when consistent, or the
    first witness pair (i, j) with equal words and unequal symbols.
    """
    assigned: dict = {}
    first_index: dict = {}
    for i, (word, symbol) in enumerate(tuples):
        g = group.canonicalize(word)
        if g in assigned and assigned[g] != symbol:
            return CodingResult(False, None, (first_index[g], i))
        if g not in assigned:
            assigned[g] = symbol
            first_index[g] = i
    return CodingResult(True, make_pattern(group, assigned), None)


def pattern_occurrences(x: WindowConfig, p: Pattern) -> list:
    """Positions g inside the window where the translated pattern matches.

    Positions whose translated support exits the window are skipped.
    """
    group = x.group
    out = []
    for g in x.window.members:
        ok = True
        for h, a in zip(p.support, p.symbols):
            gh = group.mul(g, h)
            if gh not in x.cells or x.cells[gh] != a:
                ok = False
                break
        if ok:
            out.append(g)
    return out
