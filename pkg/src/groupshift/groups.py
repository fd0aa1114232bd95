"""Concrete group models with decidable word problem.

Four families are built in: integer lattices Z^d, free groups, the free
product Z/2 * Z/3 and the discrete Heisenberg group.  Each one exposes a
canonical form with O(word length) canonicalization, plus the Cayley-graph
machinery (balls, neighbors, BFS enumeration) that the rest of the library
is built on.

Elements are opaque hashable canonical forms (tuples); all operations on
them go through their :class:`GroupModel`.  Values are immutable and safe
to share between threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator


class InputError(ValueError):
    """Malformed user input (unknown label, bad spec string, ...)."""


class ResourceLimitError(RuntimeError):
    """A configured resource cap (ball size, BFS budget) was exceeded."""


#: A single letter of a word: (generator label, +1 or -1).
Letter = tuple[str, int]

DEFAULT_BALL_CAP = 10 ** 6

_TOKEN_RE = re.compile(r"([A-Za-z][0-9]*)(\^-?[0-9]+|'|⁻¹|⁻1)?")


def format_word(letters: list[Letter]) -> str:
    """Render a word as space-separated ``label^k`` tokens ('' = identity)."""
    runs: list[tuple[str, int]] = []
    for label, exp in letters:
        if runs and runs[-1][0] == label:
            runs[-1] = (label, runs[-1][1] + exp)
            if runs[-1][1] == 0:
                runs.pop()
        else:
            runs.append((label, exp))
    parts = []
    for label, exp in runs:
        parts.append(label if exp == 1 else f"{label}^{exp}")
    return " ".join(parts)


@dataclass(frozen=True)
class Ball:
    """A word-metric ball; ``members`` are in deterministic BFS order."""

    center: tuple
    radius: int
    members: tuple

    def __contains__(self, g) -> bool:
        return g in self._member_set

    @property
    def _member_set(self):
        if not hasattr(self, "_cached_set"):
            object.__setattr__(self, "_cached_set", frozenset(self.members))
        return self._cached_set

    def __len__(self) -> int:
        return len(self.members)


class GroupModel:
    """Base class: canonical forms plus Cayley-graph operations."""

    spec: str
    labels: list[str]
    #: labels accepted in words but not part of the generating set S
    extra_labels: list[str] = []

    # --- kind-specific primitives -------------------------------------
    def identity(self):
        raise NotImplementedError

    def gen(self, label: str, exp: int = 1):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def length(self, g) -> int:
        raise NotImplementedError

    def geodesic(self, g) -> list[Letter]:
        """A shortest generator word evaluating to g."""
        raise NotImplementedError

    # --- word handling -------------------------------------------------
    def parse_word(self, text: str) -> list[Letter]:
        letters: list[Letter] = []
        known = set(self.labels) | set(self.extra_labels)
        for chunk in text.replace(",", " ").split():
            pos = 0
            while pos < len(chunk):
                m = _TOKEN_RE.match(chunk, pos)
                if m is None:
                    raise InputError(f"cannot parse word at {chunk[pos:]!r}")
                label, mark = m.group(1), m.group(2)
                if label not in known:
                    raise InputError(f"unknown generator label {label!r}")
                if mark is None:
                    exp = 1
                elif mark.startswith("^"):
                    exp = int(mark[1:])
                else:
                    exp = -1
                sign = 1 if exp >= 0 else -1
                letters.extend([(label, sign)] * abs(exp))
                pos = m.end()
        return letters

    def evaluate(self, letters: list[Letter]):
        g = self.identity()
        for label, exp in letters:
            g = self.mul(g, self.gen(label, exp))
        return g

    def canonicalize(self, word) -> tuple:
        """Canonical form of a word (string or letter list)."""
        if isinstance(word, str):
            word = self.parse_word(word)
        return self.evaluate(word)

    def element_word(self, g) -> str:
        return format_word(self.geodesic(g))

    # --- Cayley graph --------------------------------------------------
    def step_elements(self) -> list:
        """Generator steps g -> g*s in deterministic order, deduplicated."""
        cached = getattr(self, "_step_cache", None)
        if cached is None:
            cached = []
            for label in self.labels:
                for exp in (1, -1):
                    s = self.gen(label, exp)
                    if s not in cached and s != self.identity():
                        cached.append(s)
            self._step_cache = cached
        return cached

    def neighbors(self, g) -> list:
        out = []
        for s in self.step_elements():
            h = self.mul(g, s)
            if h != g and h not in out:
                out.append(h)
        return out

    def ball(self, center=None, radius: int = 0, cap: int = DEFAULT_BALL_CAP) -> Ball:
        if center is None:
            center = self.identity()
        order = [center]
        seen = {center}
        frontier = [center]
        for _ in range(radius):
            nxt = []
            for g in frontier:
                for h in self.neighbors(g):
                    if h not in seen:
                        seen.add(h)
                        order.append(h)
                        nxt.append(h)
                        if len(order) > cap:
                            raise ResourceLimitError(
                                f"ball of radius {radius} exceeds cap {cap}"
                            )
            frontier = nxt
        return Ball(center=center, radius=radius, members=tuple(order))

    def bfs_stream(self, cap: int = DEFAULT_BALL_CAP) -> Iterator:
        """Elements of G in BFS order from the identity (up to cap)."""
        order = [self.identity()]
        seen = {self.identity()}
        idx = 0
        count = 0
        while idx < len(order):
            g = order[idx]
            idx += 1
            count += 1
            if count > cap:
                raise ResourceLimitError(f"BFS enumeration exceeds cap {cap}")
            yield g
            for h in self.neighbors(g):
                if h not in seen:
                    seen.add(h)
                    order.append(h)

    def distance(self, g, h) -> int:
        return self.length(self.mul(self.inv(g), h))

    def canonical_key(self, g):
        """Deterministic total order: (word length, canonical form)."""
        return (self.length(g), g)

    def sorted_elements(self, elements) -> list:
        return sorted(elements, key=self.canonical_key)

    def __repr__(self) -> str:
        return f"<GroupModel {self.spec}>"


class IntegerLattice(GroupModel):
    def __init__(self, d: int):
        if d < 1:
            raise InputError("lattice dimension must be positive")
        self.d = d
        self.spec = f"z^{d}" if d > 1 else "z"
        if d <= 3:
            self.labels = ["x", "y", "z"][:d]
        else:
            self.labels = [f"x{i + 1}" for i in range(d)]

    def identity(self):
        return (0,) * self.d

    def gen(self, label, exp=1):
        try:
            i = self.labels.index(label)
        except ValueError:
            raise InputError(f"unknown generator label {label!r}") from None
        v = [0] * self.d
        v[i] = exp
        return tuple(v)

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def length(self, g):
        return sum(abs(x) for x in g)

    def geodesic(self, g):
        letters: list[Letter] = []
        for label, coord in zip(self.labels, g):
            sign = 1 if coord >= 0 else -1
            letters.extend([(label, sign)] * abs(coord))
        return letters


class FreeGroup(GroupModel):
    _ALPHABET = "abcdefghijkl"

    def __init__(self, rank: int):
        if not 1 <= rank <= len(self._ALPHABET):
            raise InputError("free group rank must be between 1 and 12")
        self.rank = rank
        self.spec = f"free:{rank}"
        self.labels = list(self._ALPHABET[:rank])

    def identity(self):
        return ()

    def gen(self, label, exp=1):
        try:
            i = self.labels.index(label)
        except ValueError:
            raise InputError(f"unknown generator label {label!r}") from None
        return ((i + 1) * (1 if exp >= 0 else -1),) * abs(exp) if exp != 0 else ()

    def mul(self, a, b):
        out = list(a)
        for s in b:
            if out and out[-1] == -s:
                out.pop()
            else:
                out.append(s)
        return tuple(out)

    def inv(self, a):
        return tuple(-s for s in reversed(a))

    def length(self, g):
        return len(g)

    def geodesic(self, g):
        return [(self.labels[abs(s) - 1], 1 if s > 0 else -1) for s in g]


class FreeProductZ2Z3(GroupModel):
    """Z/2 * Z/3 with a of order 2 and b of order 3.

    Canonical form: an alternating tuple of syllables 'a', 'b', 'B' where
    'B' stands for b^2 = b^-1.  Each syllable costs one generator step.
    """

    def __init__(self):
        self.spec = "z2*z3"
        self.labels = ["a", "b"]

    def identity(self):
        return ()

    def gen(self, label, exp=1):
        if label == "a":
            return ("a",) if exp % 2 else ()
        if label == "b":
            e = exp % 3
            return () if e == 0 else (("b",) if e == 1 else ("B",))
        raise InputError(f"unknown generator label {label!r}")

    @staticmethod
    def _is_b_type(s: str) -> bool:
        return s in ("b", "B")

    def mul(self, a, b):
        out = list(a)
        for s in b:
            while True:
                if not out:
                    out.append(s)
                    break
                top = out[-1]
                if self._is_b_type(top) != self._is_b_type(s):
                    out.append(s)
                    break
                if not self._is_b_type(s):  # a * a = e
                    out.pop()
                    break
                e = (1 if top == "b" else 2) + (1 if s == "b" else 2)
                out.pop()
                e %= 3
                if e == 0:
                    break
                s = "b" if e == 1 else "B"
                # loop again: merged syllable may cancel further
        return tuple(out)

    def inv(self, a):
        table = {"a": "a", "b": "B", "B": "b"}
        return tuple(table[s] for s in reversed(a))

    def length(self, g):
        return len(g)

    def geodesic(self, g):
        out: list[Letter] = []
        for s in g:
            if s == "a":
                out.append(("a", 1))
            elif s == "b":
                out.append(("b", 1))
            else:
                out.append(("b", -1))
        return out


class DiscreteHeisenberg(GroupModel):
    """The integer Heisenberg group, generated by x and y.

    Canonical form is the exponent triple (a, b, c) of the normal form
    x^a y^b z^c where z = x y x^-1 y^-1 is central.  The label z is
    accepted in words as a shorthand but is not a generator of the metric.
    Word lengths have no simple closed form; they are computed by BFS and
    cached on the model instance.
    """

    extra_labels = ["z"]

    def __init__(self, bfs_cap: int = DEFAULT_BALL_CAP):
        self.spec = "heisenberg"
        self.labels = ["x", "y"]
        self.bfs_cap = bfs_cap
        self._dist: dict = {(0, 0, 0): 0}
        self._parent: dict = {(0, 0, 0): None}
        self._frontier: list = [(0, 0, 0)]

    def identity(self):
        return (0, 0, 0)

    def gen(self, label, exp=1):
        if label == "x":
            return self._from_mat((exp, 0, 0))
        if label == "y":
            return self._from_mat((0, exp, 0))
        if label == "z":
            return self._from_mat((0, 0, exp))
        raise InputError(f"unknown generator label {label!r}")

    @staticmethod
    def _to_mat(t):
        a, b, c = t
        return (a, b, c + a * b)

    @staticmethod
    def _from_mat(m):
        a, b, g = m
        return (a, b, g - a * b)

    def mul(self, p, q):
        a1, b1, g1 = self._to_mat(p)
        a2, b2, g2 = self._to_mat(q)
        return self._from_mat((a1 + a2, b1 + b2, g1 + g2 + a1 * b2))

    def inv(self, p):
        a, b, g = self._to_mat(p)
        return self._from_mat((-a, -b, a * b - g))

    def _extend_bfs(self, target) -> bool:
        while target not in self._dist:
            if not self._frontier:
                return False
            if len(self._dist) > self.bfs_cap:
                raise ResourceLimitError(
                    f"Heisenberg BFS exceeds cap {self.bfs_cap}"
                )
            nxt = []
            for g in self._frontier:
                d = self._dist[g]
                for s in self.step_elements():
                    h = self.mul(g, s)
                    if h not in self._dist:
                        self._dist[h] = d + 1
                        self._parent[h] = (g, s)
                        nxt.append(h)
            self._frontier = nxt
        return True

    def length(self, g):
        if not self._extend_bfs(g):
            raise ResourceLimitError("element unreachable within BFS budget")
        return self._dist[g]

    def geodesic(self, g):
        self.length(g)
        letters: list[Letter] = []
        cur = g
        while self._parent[cur] is not None:
            prev, step = self._parent[cur]
            if step == self.gen("x"):
                letters.append(("x", 1))
            elif step == self.gen("x", -1):
                letters.append(("x", -1))
            elif step == self.gen("y"):
                letters.append(("y", 1))
            else:
                letters.append(("y", -1))
            cur = prev
        letters.reverse()
        return letters

    def element_word(self, g):
        a, b, c = g
        letters: list[Letter] = []
        letters.extend([("x", 1 if a >= 0 else -1)] * abs(a))
        letters.extend([("y", 1 if b >= 0 else -1)] * abs(b))
        letters.extend([("z", 1 if c >= 0 else -1)] * abs(c))
        return format_word(letters)


_SPEC_RE = re.compile(r"^z\^([0-9]+)$")


def parse_group_spec(spec: str) -> GroupModel:
    """Build a group model from a CLI spec string.

    Accepted forms: ``z``, ``z^d``, ``free:k``, ``z2*z3``, ``heisenberg``.
    """
    s = spec.strip().lower()
    if s == "z":
        return IntegerLattice(1)
    m = _SPEC_RE.match(s)
    if m:
        return IntegerLattice(int(m.group(1)))
    if s.startswith("free:"):
        try:
            rank = int(s.split(":", 1)[1])
        except ValueError:
            raise InputError(f"bad free-group spec {spec!r}") from None
        return FreeGroup(rank)
    if s in ("z2*z3", "z2xz3"):
        return FreeProductZ2Z3()
    if s == "heisenberg":
        return DiscreteHeisenberg()
    raise InputError(f"unknown group spec {spec!r}")
