"""Constructing one graph of a joint-degree instance.

Two constructions are provided.  ``simple_realize`` places the class-pair
edges first and then repairs degrees inside each class by moving neighbors
from over-full to under-full vertices.  ``balanced_realize`` grows the graph
one edge at a time while every class keeps its degrees within one of each
other; it never merges-then-splits components, so a connected seed stays
connected.
"""

from __future__ import annotations

import random
from collections import Counter
from typing import Callable, Iterable, Iterator, TypeVar

from .core import JdmInstance, LabeledGraph, require_feasible

T = TypeVar("T")


class SeedError(ValueError):
    """A seed graph exceeds the quotas or is not degree-balanced."""


class BuildState:
    """Partial graph plus per-class degree histograms and pair counts."""

    def __init__(self, inst: JdmInstance, graph: LabeledGraph | None = None, rng: random.Random | None = None):
        self.inst = inst
        self.graph = graph.copy() if graph is not None else LabeledGraph.empty(inst)
        self.rng = rng
        self.last_case: str | None = None
        k = inst.k
        self.realized = [[0] * k for _ in range(k)]
        for u, v in self.graph.edges():
            self._count(u, v, +1)
        self.histograms = [Counter(self.graph.degree(v) for v in inst.members(c)) for c in range(k)]

    def _count(self, u: int, v: int, delta: int) -> None:
        cu, cv = self.inst.class_of[u], self.inst.class_of[v]
        self.realized[cu][cv] += delta
        if cu != cv:
            self.realized[cv][cu] += delta

    def _bump(self, v: int, delta: int) -> None:
        hist = self.histograms[self.inst.class_of[v]]
        d = self.graph.degree(v)
        hist[d - delta] -= 1
        if not hist[d - delta]:
            del hist[d - delta]
        hist[d] += 1

    def add(self, u: int, v: int) -> None:
        self.graph.add_edge(u, v)
        self._count(u, v, +1)
        self._bump(u, +1)
        self._bump(v, +1)

    def remove(self, u: int, v: int) -> None:
        self.graph.remove_edge(u, v)
        self._count(u, v, -1)
        self._bump(u, -1)
        self._bump(v, -1)

    def quota_left(self, i: int, j: int) -> int:
        return self.inst.matrix[i][j] - self.realized[i][j]

    def low(self, c: int) -> list[int]:
        """Vertices of class ``c`` at the minimum degree."""
        lo = min(self.histograms[c])
        return [v for v in self.inst.members(c) if self.graph.degree(v) == lo]

    def high(self, c: int) -> list[int]:
        """Vertices of class ``c`` at the maximum degree; empty when all degrees agree."""
        hist = self.histograms[c]
        lo, hi = min(hist), max(hist)
        if lo == hi:
            return []
        return [v for v in self.inst.members(c) if self.graph.degree(v) == hi]

    def is_balanced(self) -> bool:
        return all(max(h) - min(h) <= 1 for h in self.histograms)

    def within_quotas(self) -> bool:
        k = self.inst.k
        return all(self.realized[i][j] <= self.inst.matrix[i][j] for i in range(k) for j in range(k))

    def next_unsatisfied(self) -> tuple[int, int] | None:
        k = self.inst.k
        for i in range(k):
            for j in range(i, k):
                if self.realized[i][j] < self.inst.matrix[i][j]:
                    return i, j
        return None

    def residual(self) -> int:
        k = self.inst.k
        return sum(self.quota_left(i, j) for i in range(k) for j in range(i, k))

    def _pick(self, candidates: Iterable[T]) -> T | None:
        if self.rng is None:
            return next(iter(candidates), None)
        pool = list(candidates)
        return self.rng.choice(pool) if pool else None


def _non_adjacent(g: LabeledGraph, left: list[int], right: list[int]) -> Iterator[tuple[int, int]]:
    for u in left:
        for v in right:
            if u != v and not g.has_edge(u, v):
                yield u, v


def _donor_neighbor(state: BuildState, src: int, dst: int) -> int:
    """A neighbor ``x`` of ``src`` with ``x != dst`` and ``dst x`` absent."""
    g = state.graph
    x = state._pick(x for x in g.neighbors(src) if x != dst and not g.has_edge(dst, x))
    if x is None:
        raise AssertionError(f"no neighbor of {src} is free for {dst}")
    return x


def add_edge_balanced(state: BuildState, i: int, j: int) -> BuildState:
    """Add one edge between classes ``i`` and ``j`` keeping every class balanced.

    The cases are tried in a fixed order (A1, A2, A2', A3 for distinct classes,
    B1, B2, B3 for one class); each rewiring step moves an edge endpoint
    between two vertices of the same class, so no other pair count changes.
    """
    if state.quota_left(i, j) <= 0:
        raise AssertionError(f"no quota left for pair ({i},{j})")
    if i > j:
        i, j = j, i
    g = state.graph
    if i != j:
        ni, nj, mi, mj = state.low(i), state.low(j), state.high(i), state.high(j)
        pair = state._pick(_non_adjacent(g, ni, nj))
        if pair is not None:
            state.add(*pair)
            state.last_case = "A1"
            return state
        pair = state._pick(_non_adjacent(g, ni, mj))
        if pair is not None:
            u, v = pair
            v2 = state._pick(nj)
            x = _donor_neighbor(state, v, v2)
            state.remove(v, x)
            state.add(u, v)
            state.add(v2, x)
            state.last_case = "A2"
            return state
        pair = state._pick(_non_adjacent(g, mi, nj))
        if pair is not None:
            u, v = pair
            u2 = state._pick(ni)
            x = _donor_neighbor(state, u, u2)
            state.remove(u, x)
            state.add(u, v)
            state.add(u2, x)
            state.last_case = "A2'"
            return state
        pair = state._pick(_non_adjacent(g, mi, mj))
        if pair is None:
            raise AssertionError(f"no non-adjacent pair between classes {i} and {j}")
        u, v = pair
        u2, v2 = state._pick(ni), state._pick(nj)
        x = _donor_neighbor(state, u, u2)
        y = _donor_neighbor(state, v, v2)
        state.remove(u, x)
        state.remove(v, y)
        state.add(u2, x)
        state.add(u, v)
        state.add(v2, y)
        state.last_case = "A3"
        return state

    ni, mi = state.low(i), state.high(i)
    pair = state._pick((u, v) for u, v in _non_adjacent(g, ni, ni) if u < v)
    if pair is not None:
        state.add(*pair)
        state.last_case = "B1"
        return state
    pair = state._pick(_non_adjacent(g, ni, mi))
    if pair is not None:
        u, v = pair
        if len(ni) == 1:
            state.add(u, v)
            state.last_case = "B2"
        else:
            v2 = state._pick(w for w in ni if w != u)
            x = _donor_neighbor(state, v, v2)
            state.remove(v, x)
            state.add(v2, x)
            state.add(u, v)
            state.last_case = "B2'"
        return state
    pair = state._pick((u, v) for u, v in _non_adjacent(g, mi, mi) if u < v)
    if pair is None:
        raise AssertionError(f"no non-adjacent pair inside class {i}")
    u, v = pair
    if len(ni) == 1:
        w = ni[0]
        x = _donor_neighbor(state, u, w)
        state.remove(u, x)
        state.add(w, x)
        state.add(u, v)
        state.last_case = "B3"
    else:
        w = state._pick(ni)
        w2 = state._pick(z for z in ni if z != w)
        x = _donor_neighbor(state, u, w)
        y = _donor_neighbor(state, v, w2)
        state.remove(u, x)
        state.remove(v, y)
        state.add(w, x)
        state.add(u, v)
        state.add(w2, y)
        state.last_case = "B3'"
    return state


def grow_balanced(state: BuildState, on_step: Callable[[BuildState], None] | None = None) -> int:
    """Run ``add_edge_balanced`` until every quota is met; returns the step count."""
    steps = 0
    while (pair := state.next_unsatisfied()) is not None:
        add_edge_balanced(state, *pair)
        steps += 1
        if on_step is not None:
            on_step(state)
    return steps


def balanced_realize(
    inst: JdmInstance,
    seed: LabeledGraph | None = None,
    *,
    rng: random.Random | None = None,
    on_step: Callable[[BuildState], None] | None = None,
) -> LabeledGraph:
    """Realize ``inst`` with the balanced degree algorithm.

    ``seed`` (optional) is a starting subgraph that must respect every pair
    quota and be degree-balanced inside each class; if it is connected the
    result is connected.  ``rng`` switches tie-breaking from smallest vertex
    to uniformly random among qualifying choices.
    """
    require_feasible(inst)
    if seed is not None and seed.class_sizes != inst.class_sizes:
        raise SeedError("seed graph has a different class layout")
    state = BuildState(inst, seed, rng)
    if not state.within_quotas():
        raise SeedError("seed graph exceeds a pair quota")
    if not state.is_balanced():
        raise SeedError("seed graph is not degree-balanced within every class")
    expected = state.residual()
    steps = grow_balanced(state, on_step)
    assert steps == expected
    return state.graph


def simple_realize(inst: JdmInstance) -> LabeledGraph:
    """Place every class-pair quota greedily, then equalize degrees inside classes."""
    require_feasible(inst)
    g = LabeledGraph.empty(inst)
    k = inst.k
    for i in range(k):
        members = list(inst.members(i))
        need = inst.matrix[i][i]
        for a, u in enumerate(members):
            for v in members[a + 1:]:
                if need == 0:
                    break
                g.add_edge(u, v)
                need -= 1
    for i in range(k):
        for j in range(i + 1, k):
            need = inst.matrix[i][j]
            for u in inst.members(i):
                for v in inst.members(j):
                    if need == 0:
                        break
                    g.add_edge(u, v)
                    need -= 1

    for c in range(k):
        target = inst.class_degrees[c]
        members = list(inst.members(c))
        while True:
            under = next((u for u in members if g.degree(u) < target), None)
            if under is None:
                break
            over = next(v for v in members if g.degree(v) > target)
            moves = min(target - g.degree(under), g.degree(over) - target)
            movable = [x for x in g.neighbors(over) if x != under and not g.has_edge(under, x)]
            for x in movable[:moves]:
                g.remove_edge(over, x)
                g.add_edge(under, x)
    return g
