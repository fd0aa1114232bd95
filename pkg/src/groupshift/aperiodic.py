"""The two aperiodicity constructions.

First, the 2-coloring event family with the distinct-neighborhood
property: test sets T_i with T_i and s_i T_i disjoint, |T_i| = C*i, and
one bad event per (level n, position g) asserting equality of the two
translated restrictions.  Second, square-free vertex colorings of Cayley
graphs: odd-path enumeration, vertex-square detection and the conjugation
walk that turns a nontrivial stabilizer element into a square witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .exact import Quad
from .groups import Ball, GroupModel, InputError, Letter, ResourceLimitError
from .lll import (
    BadEvent,
    LLLInstance,
    two_coloring_probability,
    two_coloring_weight,
)
from .patterns import WindowConfig


@dataclass(frozen=True)
class TSets:
    """Test sets for the 2-coloring family: one (s_i, T_i) per level."""

    c: int
    entries: tuple  # tuple of (s_i, T_i tuple), index i starting at 1

    def level(self, i: int) -> tuple:
        if not 1 <= i <= len(self.entries):
            raise InputError(f"no T-set at level {i}")
        return self.entries[i - 1]

    @property
    def levels(self) -> int:
        return len(self.entries)


def build_t_sets(group: GroupModel, c: int, i_max: int,
                 scan_cap: int = 10 ** 5) -> TSets:
    """Greedy construction of the test sets in BFS order.

    s_i is the i-th non-identity element of the BFS enumeration.  T_i is
    filled greedily with elements t keeping T_i and s_i T_i disjoint:
    admit t when t is not in s_i T_i, s_i t is not in T_i and t != s_i t.
    """
    if c < 1 or i_max < 1:
        raise InputError("C and i_max must be positive")
    identity = group.identity()
    s_list = []
    for g in group.bfs_stream(cap=scan_cap):
        if g != identity:
            s_list.append(g)
        if len(s_list) >= i_max:
            break
    if len(s_list) < i_max:
        raise ResourceLimitError(f"enumeration exhausted before i={i_max}")

    entries = []
    for i, s in enumerate(s_list, start=1):
        target = c * i
        t_set: list = []
        t_frozen: set = set()
        shifted: set = set()  # s * T_i
        for t in group.bfs_stream(cap=scan_cap):
            st = group.mul(s, t)
            if t in shifted or st in t_frozen or st == t:
                continue
            t_set.append(t)
            t_frozen.add(t)
            shifted.add(st)
            if len(t_set) == target:
                break
        if len(t_set) < target:
            raise ResourceLimitError(
                f"window exhausted before |T_{i}| = {target}"
            )
        entries.append((s, tuple(t_set)))
    return TSets(c=c, entries=tuple(entries))


def check_t_sets(group: GroupModel, tsets: TSets) -> None:
    """Re-verify both defining invariants by direct set arithmetic."""
    for i in range(1, tsets.levels + 1):
        s, t = tsets.level(i)
        if len(t) != tsets.c * i:
            raise InputError(f"|T_{i}| != C*{i}")
        shifted = {group.mul(s, x) for x in t}
        if shifted & set(t):
            raise InputError(f"T_{i} meets s_{i} T_{i}")


def build_2coloring_instance(group: GroupModel, window_radius: int,
                             tsets: TSets, n_max: int) -> LLLInstance:
    """Binary variables on the window; one event per fitting (n, g).

    The event for (n, g) is violated when the restriction to g T_n equals
    the restriction to g s_n T_n under t -> s_n t; probability 2^(-C n),
    weight 2^(-C n / 2).
    """
    if n_max > tsets.levels:
        raise InputError("n_max exceeds available T-set levels")
    window = group.ball(radius=window_radius)
    members = set(window.members)
    index = {g: i for i, g in enumerate(window.members)}
    events: list[BadEvent] = []
    for n in range(1, n_max + 1):
        s, t_set = tsets.level(n)
        for g in window.members:
            pairs = []
            fits = True
            for t in t_set:
                u = group.mul(g, t)
                v = group.mul(g, group.mul(s, t))
                if u not in members or v not in members:
                    fits = False
                    break
                pairs.append((u, v))
            if not fits:
                continue
            support = tuple(dict.fromkeys(
                [p for pair in pairs for p in pair]
            ))
            pairs = tuple(pairs)
            events.append(BadEvent(
                id=(n, index[g]),
                support=support,
                probability=two_coloring_probability(tsets.c, n),
                weight=two_coloring_weight(tsets.c, n),
                violated=lambda a, pairs=pairs: all(
                    a[u] == a[v] for u, v in pairs
                ),
            ))
    return LLLInstance(
        variables=window.members,
        alphabet={g: 2 for g in window.members},
        events=events,
    )


@dataclass
class DistinctNeighborhoodReport:
    violations: list  # (n, g) pairs with equal restrictions
    checked: int

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_distinct_neighborhood(x: WindowConfig, tsets: TSets,
                                 n_max: int) -> DistinctNeighborhoodReport:
    """Exhaustive check of x|gT_n != x|g s_n T_n over all fitting (n, g)."""
    group = x.group
    violations = []
    checked = 0
    for n in range(1, min(n_max, tsets.levels) + 1):
        s, t_set = tsets.level(n)
        for g in x.window.members:
            pairs = []
            fits = True
            for t in t_set:
                u = group.mul(g, t)
                v = group.mul(g, group.mul(s, t))
                if u not in x.cells or v not in x.cells:
                    fits = False
                    break
                pairs.append((u, v))
            if not fits:
                continue
            checked += 1
            if all(x.cells[u] == x.cells[v] for u, v in pairs):
                violations.append((n, g))
    return DistinctNeighborhoodReport(violations=violations, checked=checked)


@dataclass(frozen=True)
class PathWindow:
    """A Cayley-graph window: vertices plus symmetric adjacency."""

    vertices: tuple
    adjacency: dict

    @classmethod
    def from_ball(cls, group: GroupModel, radius: int) -> "PathWindow":
        ball = group.ball(radius=radius)
        members = set(ball.members)
        adjacency = {}
        for g in ball.members:
            adjacency[g] = tuple(
                h for h in group.neighbors(g) if h in members
            )
        return cls(vertices=ball.members, adjacency=adjacency)

    def edge_count(self) -> int:
        return sum(len(v) for v in self.adjacency.values()) // 2


def enumerate_odd_paths(w: PathWindow, max_half_length: int,
                        budget: int = 10 ** 6) -> Iterator[tuple]:
    """Simple paths of odd edge-length <= 2*max_half_length - 1.

    Each path is emitted exactly once up to direction reversal (the end
    with the smaller vertex index comes first).  Raises ResourceLimitError
    when the budget is exceeded.
    """
    index = {v: i for i, v in enumerate(w.vertices)}
    max_vertices = 2 * max_half_length
    emitted = 0
    path: list = []
    on_path: set = set()

    def extend() -> Iterator[tuple]:
        nonlocal emitted
        if len(path) % 2 == 0 and index[path[0]] < index[path[-1]]:
            emitted += 1
            if emitted > budget:
                raise ResourceLimitError(
                    f"odd-path budget {budget} exceeded after {emitted - 1}"
                )
            yield tuple(path)
        if len(path) == max_vertices:
            return
        for nxt in w.adjacency[path[-1]]:
            if nxt in on_path:
                continue
            path.append(nxt)
            on_path.add(nxt)
            yield from extend()
            path.pop()
            on_path.remove(nxt)

    for start in w.vertices:
        path = [start]
        on_path = {start}
        yield from extend()


def is_vertex_square(coloring: dict, path: tuple) -> bool:
    """True when the color sequence is a square under the half shift."""
    n = len(path) // 2
    return all(coloring[path[i]] == coloring[path[i + n]] for i in range(n))


def find_vertex_square(coloring: dict, w: PathWindow,
                       max_half_length: int) -> Optional[tuple]:
    """First enumerated odd path that is a vertex square, or None."""
    for path in enumerate_odd_paths(w, max_half_length):
        if is_vertex_square(coloring, path):
            return path
    return None


def build_squarefree_instance(w: PathWindow, alphabet_size: int,
                              max_half_length: int, generator_count: int,
                              budget: int = 10 ** 6) -> LLLInstance:
    """One event per odd path: probability |A|^-n, weight (8|S|^2)^-n."""
    if alphabet_size < 2:
        raise InputError("alphabet must have at least 2 symbols")
    index = {v: i for i, v in enumerate(w.vertices)}
    base = 8 * generator_count * generator_count
    events = []
    for k, path in enumerate(enumerate_odd_paths(w, max_half_length, budget)):
        n = len(path) // 2
        events.append(BadEvent(
            id=(n, k),
            support=tuple(dict.fromkeys(path)),
            probability=Quad(Fraction(1, alphabet_size ** n)),
            weight=Quad(Fraction(1, base ** n)),
            violated=lambda a, path=path, n=n: all(
                a[path[i]] == a[path[i + n]] for i in range(n)
            ),
        ))
    return LLLInstance(
        variables=w.vertices,
        alphabet={v: alphabet_size for v in w.vertices},
        events=events,
    )


def path_dependency_counts(w: PathWindow, max_half_length: int,
                           budget: int = 10 ** 6) -> list[dict]:
    """For each odd path, count odd paths of each half-length sharing a vertex.

    Returns a list aligned with enumeration order; entry k maps j to the
    number of length-(2j-1) paths sharing at least one vertex with path k
    (excluding the path itself at its own level).
    """
    paths = list(enumerate_odd_paths(w, max_half_length, budget))
    masks_by_level: dict[int, dict] = {}
    for k, path in enumerate(paths):
        n = len(path) // 2
        level = masks_by_level.setdefault(n, {})
        for v in set(path):
            level[v] = level.get(v, 0) | (1 << k)
    counts = []
    for k, path in enumerate(paths):
        n = len(path) // 2
        row = {}
        for j, level in masks_by_level.items():
            mask = 0
            for v in set(path):
                mask |= level.get(v, 0)
            if j == n:
                mask &= ~(1 << k)
            row[j] = mask.bit_count()
        counts.append(row)
    return counts


@dataclass(frozen=True)
class WitnessPath:
    """Conjugation walk certifying aperiodicity for one group element.

    trivial is True iff the input word equals the identity.  Otherwise
    ``vertices`` is the walk v_0 .. v_{2n-1} built from the minimal
    conjugate word w (g = u w u^-1), asserted to be a simple path.
    """

    trivial: bool
    word: tuple = ()          # letters of w
    conjugator: tuple = ()    # letters of u
    vertices: tuple = ()


def witness_path(group: GroupModel, g_word, node_cap: int = 10 ** 5
                 ) -> WitnessPath:
    """Search g = u w u^-1 with |w| minimal and emit the witness walk.

    The conjugacy class of g is explored by BFS over generator
    conjugations, restricted to elements of word length at most
    2*|g_word| + 2; the minimum over that closure gives w.  Raises
    ResourceLimitError when the closure exceeds the node cap before the
    search completes.
    """
    letters = group.parse_word(g_word) if isinstance(g_word, str) else list(g_word)
    g = group.evaluate(letters)
    if g == group.identity():
        return WitnessPath(trivial=True)

    bound = 2 * len(letters) + 2
    seen: dict = {g: ()}  # conjugate -> conjugator letters u
    queue = [g]
    while queue:
        if len(seen) > node_cap:
            raise ResourceLimitError(
                "conjugacy search exceeded node cap before certifying "
                "minimality within the length bound"
            )
        cur = queue.pop(0)
        u = seen[cur]
        for label in group.labels:
            for exp in (1, -1):
                s = group.gen(label, exp)
                conj = group.mul(group.mul(group.inv(s), cur), s)
                if conj in seen or group.length(conj) > bound:
                    continue
                seen[conj] = u + ((label, exp),)
                queue.append(conj)

    best = min(seen, key=group.canonical_key)
    u_letters = seen[best]
    w_letters = group.geodesic(best)
    n = len(w_letters)
    assert n > 0  # identity was handled above

    prefixes = [group.identity()]
    for label, exp in w_letters:
        prefixes.append(group.mul(prefixes[-1], group.gen(label, exp)))
    # Walk: v_0 = 1, v_i = w_1..w_i (i <= n), v_{n+i} = w * w_1..w_i.
    vertices = list(prefixes[: n + 1])
    for i in range(1, n):
        vertices.append(group.mul(best, prefixes[i]))
    if len(set(vertices)) != len(vertices):
        raise AssertionError("witness walk revisits a vertex")
    return WitnessPath(
        trivial=False,
        word=tuple(w_letters),
        conjugator=tuple(u_letters),
        vertices=tuple(vertices),
    )
