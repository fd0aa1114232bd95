"""Asymmetric Lovász local lemma machinery.

Three things live here: an exact verifier for the condition
mu(A) <= x(A) * prod_{B in Gamma(A)} (1 - x(B)), a deterministic
resampling construction, and the mechanical re-derivations of the two
numeric constants used by the coloring constructions (C = 17 and the
2^19 |S|^2 alphabet bound).

All comparisons are exact: probabilities and weights are elements of
Q(sqrt(2)) (see :mod:`groupshift.exact`), never floats.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .exact import Quad, half_power_of_two, sqrt2_power
from .groups import InputError


class NonterminatingInstanceError(RuntimeError):
    """Resampling exceeded its cap; carries the resample log."""

    def __init__(self, message: str, trace: list):
        super().__init__(message)
        self.trace = trace


@dataclass(frozen=True)
class BadEvent:
    """A bad event: support, exact probability and weight, and predicate.

    ``violated`` receives the full assignment mapping and must only read
    the support variables.  It may be None for verify-only instances.
    """

    id: tuple
    support: tuple
    probability: Quad
    weight: Quad
    violated: Optional[Callable[[dict], bool]] = None


@dataclass
class LLLInstance:
    variables: tuple
    alphabet: dict
    events: list[BadEvent] = field(default_factory=list)

    def __post_init__(self):
        varset = set(self.variables)
        for e in self.events:
            if not set(e.support) <= varset:
                raise InputError(f"event {e.id} has support outside variables")


@dataclass
class Verdict:
    holds: bool
    margins: dict  # event id -> Quad (rhs - mu)


def verify_condition(inst: LLLInstance) -> Verdict:
    """Exact check of the asymmetric condition for every event.

    Gamma(A) is derived from supports: all events sharing at least one
    variable with A (excluding A itself).  Since weights repeat across
    events, neighbor counts are taken per weight class and the product
    collapses to a few exact powers.
    """
    for e in inst.events:
        w = e.weight
        if not (Quad.of(0) < w < Quad.of(1)):
            raise InputError(f"event {e.id} has weight outside (0,1)")

    classes: dict[Quad, int] = {}
    for e in inst.events:
        if e.weight not in classes:
            classes[e.weight] = len(classes)
    n_classes = len(classes)
    weights = sorted(classes, key=classes.get)

    # Per variable, one bitmask of incident events per weight class.
    var_masks: dict = {v: [0] * n_classes for v in inst.variables}
    for i, e in enumerate(inst.events):
        k = classes[e.weight]
        bit = 1 << i
        for v in e.support:
            var_masks[v][k] |= bit

    one = Quad.of(1)
    pow_cache: dict[tuple[int, int], Quad] = {}

    def base_power(k: int, count: int) -> Quad:
        key = (k, count)
        if key not in pow_cache:
            pow_cache[key] = (one - weights[k]) ** count
        return pow_cache[key]

    margins: dict = {}
    holds = True
    for i, e in enumerate(inst.events):
        masks = [0] * n_classes
        for v in e.support:
            vm = var_masks[v]
            for k in range(n_classes):
                masks[k] |= vm[k]
        masks[classes[e.weight]] &= ~(1 << i)
        rhs = e.weight
        for k in range(n_classes):
            count = masks[k].bit_count()
            if count:
                rhs = rhs * base_power(k, count)
        margin = rhs - e.probability
        margins[e.id] = margin
        if margin.sign() < 0:
            holds = False
    return Verdict(holds=holds, margins=margins)


@dataclass
class ResampleRun:
    assignment: dict
    trace: list  # event ids in resample order
    seed: int

    @property
    def resamples(self) -> int:
        return len(self.trace)


def resample(inst: LLLInstance, seed: int, cap: int = 10 ** 6) -> ResampleRun:
    """Moser-Tardos style resampling, deterministic given the seed.

    Samples every variable uniformly, then repeatedly resamples the
    support of the least-id violated event until none is violated.
    """
    rng = random.Random(seed)
    assignment = {v: rng.randrange(inst.alphabet[v]) for v in inst.variables}
    events = sorted(inst.events, key=lambda e: e.id)
    trace: list = []
    while True:
        culprit = None
        for e in events:
            if e.violated(assignment):
                culprit = e
                break
        if culprit is None:
            break
        if len(trace) >= cap:
            raise NonterminatingInstanceError(
                f"resample cap {cap} exceeded", trace
            )
        trace.append(culprit.id)
        for v in culprit.support:
            assignment[v] = rng.randrange(inst.alphabet[v])
    for e in events:  # post-hoc certification, independent of search order
        assert not e.violated(assignment)
    return ResampleRun(assignment=assignment, trace=trace, seed=seed)


def audit_event_probability(inst: LLLInstance, event: BadEvent,
                            budget_bits: int = 24) -> Optional[Fraction]:
    """Exhaustively recount an event's probability when small enough.

    Returns None when the support state space exceeds 2**budget_bits.
    """
    sizes = [inst.alphabet[v] for v in event.support]
    total = 1
    for s in sizes:
        total *= s
        if total > 2 ** budget_bits:
            return None
    sub = {}
    bad = 0

    def rec(i: int):
        nonlocal bad
        if i == len(event.support):
            if event.violated(sub):
                bad += 1
            return
        v = event.support[i]
        for a in range(sizes[i]):
            sub[v] = a
            rec(i + 1)
        del sub[v]

    rec(0)
    return Fraction(bad, total)


def check_aperiodic_constant(c: int) -> bool:
    """Exact test of 16*C * 2^(C/2) / (2^(C/2) - 1)^2 <= 1."""
    if c < 1:
        raise InputError("constant must be positive")
    t = sqrt2_power(c)
    return Quad.of(16 * c) * t <= (t - Quad.of(1)) ** 2


def aperiodic_constant_scan(c_max: int) -> int:
    """Least C <= c_max satisfying the 2-coloring inequality."""
    if c_max < 1:
        raise InputError("c_max must be positive")
    for c in range(1, c_max + 1):
        if check_aperiodic_constant(c):
            return c
    raise InputError(f"no admissible constant up to {c_max}")


def geometric_derivative_partial(n: int) -> Fraction:
    """Partial sum of sum_{j>=1} j * 2^-j (limit 2), exact."""
    return sum((Fraction(j, 2 ** j) for j in range(1, n + 1)), Fraction(0))


def squarefree_alphabet_bound(s: int) -> int:
    """Least admissible alphabet size for square-free coloring: 2^19 s^2.

    The exponent 16 = 8 * sum_{j>=1} j 2^-j comes from the closed form of
    the geometric-derivative series, evaluated exactly.
    """
    if s < 1:
        raise InputError("generator count must be positive")
    series = Fraction(2)  # sum_{j>=1} j * 2^-j
    exponent = 8 * series
    assert exponent.denominator == 1
    return 8 * s * s * 2 ** int(exponent)


def two_coloring_weight(c: int, n: int) -> Quad:
    """Exact 2^(-C n / 2)."""
    return half_power_of_two(c * n)


def two_coloring_probability(c: int, n: int) -> Quad:
    """Exact 2^(-C n)."""
    return Quad(Fraction(1, 2 ** (c * n)))
