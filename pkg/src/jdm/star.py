"""Wildcard joint-degree instances and the perfect-matching reduction.

A wildcard entry leaves the number of edges between two classes free.  The
integer entries are realized first with the balanced degree algorithm (on the
matrix with wildcards read as zero); the leftover degree of every vertex is
then filled with edges on wildcard class pairs only, by solving a degree
problem with forbidden pairs as a perfect matching in a gadget graph.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Sequence

from .core import InstanceError, JdmInstance, LabeledGraph, _check_symmetric, _validate_shape
from .realizer import BuildState, grow_balanced

WILDCARD = "*"


class NotRealizedError(ValueError):
    """The method found no realization (this does not prove none exists)."""


@dataclass(frozen=True)
class StarInstance:
    """Like ``JdmInstance`` but matrix entries may be ``WILDCARD``."""

    class_sizes: tuple[int, ...]
    class_degrees: tuple[int, ...]
    matrix: tuple[tuple[int | str, ...], ...]
    names: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "class_sizes", tuple(self.class_sizes))
        object.__setattr__(self, "class_degrees", tuple(self.class_degrees))
        object.__setattr__(self, "matrix", tuple(tuple(row) for row in self.matrix))
        if self.names is not None:
            object.__setattr__(self, "names", tuple(self.names))
        _validate_shape(self.class_sizes, self.class_degrees, self.matrix, self.names)
        for i, row in enumerate(self.matrix):
            for j, entry in enumerate(row):
                if entry != WILDCARD and (not isinstance(entry, int) or entry < 0):
                    raise InstanceError(f"matrix entry ({i},{j}) = {entry!r} is neither '*' nor a non-negative integer")
        _check_symmetric(self.matrix)

    @property
    def k(self) -> int:
        return len(self.class_sizes)

    @property
    def n(self) -> int:
        return sum(self.class_sizes)

    def is_wild(self, i: int, j: int) -> bool:
        return self.matrix[i][j] == WILDCARD

    def zero_filled(self) -> JdmInstance:
        """The integer part, with wildcards replaced by 0."""
        m = [[0 if e == WILDCARD else e for e in row] for row in self.matrix]
        return JdmInstance(self.class_sizes, self.class_degrees, m, self.names)


@dataclass(frozen=True)
class ForbiddenDegreeProblem:
    """Realize ``residuals`` on vertices ``0..n-1`` avoiding every pair in ``forbidden``."""

    residuals: tuple[int, ...]
    forbidden: frozenset[tuple[int, int]]

    @property
    def n(self) -> int:
        return len(self.residuals)


@dataclass
class GadgetGraph:
    """Slot vertices ``("v", i, j)`` and degree enforcers ``("u", i, t)``."""

    labels: list[tuple[str, int, int]]
    edges: list[tuple[int, int]]

    @property
    def n_vertices(self) -> int:
        return len(self.labels)

    @cached_property
    def index(self) -> dict[tuple[str, int, int], int]:
        return {lab: pos for pos, lab in enumerate(self.labels)}


def build_matching_gadget(p: ForbiddenDegreeProblem) -> GadgetGraph:
    n = p.n
    for i, r in enumerate(p.residuals):
        if r < 0 or r >= max(n, 1):
            raise NotRealizedError(f"residual degree {r} at vertex {i} is outside 0..{n - 1}")
    # slot v(i, j) sits at i*(n-1) + (j if j < i else j-1); enforcers follow
    labels = [("v", i, j) for i in range(n) for j in range(n) if j != i]
    slot = lambda i, j: i * (n - 1) + (j if j < i else j - 1)  # noqa: E731
    edges = [(slot(i, j), slot(j, i)) for i, j in combinations(range(n), 2) if (i, j) not in p.forbidden]
    for i in range(n):
        first = len(labels)
        count = n - p.residuals[i] - 1
        labels.extend(("u", i, t) for t in range(count))
        row = range(i * (n - 1), (i + 1) * (n - 1))
        edges.extend((v, first + t) for v in row for t in range(count))
    return GadgetGraph(labels, edges)


def maximum_matching(n: int, edges: Sequence[tuple[int, int]], *, stop_on_exposed: bool = False) -> list[int]:
    """Maximum-cardinality matching in a general graph (Edmonds' blossom method).

    Returns ``mate`` with ``mate[v] == -1`` for exposed vertices.  With
    ``stop_on_exposed`` the search returns as soon as some vertex is proven
    unmatchable, which is all a perfect-matching test needs.
    """
    adj: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    mate = [-1] * n
    for v in range(n):
        if mate[v] == -1:
            for w in adj[v]:
                if mate[w] == -1:
                    mate[v], mate[w] = w, v
                    break

    for root in range(n):
        if mate[root] != -1:
            continue
        end, parent = _augmenting_path(root, adj, mate)
        if end == -1:
            if stop_on_exposed:
                return mate
            continue
        v = end
        while v != -1:
            pv = parent[v]
            nxt = mate[pv]
            mate[v], mate[pv] = pv, v
            v = nxt
    return mate


def _augmenting_path(root: int, adj: list[list[int]], mate: list[int]) -> tuple[int, list[int]]:
    n = len(adj)
    used = [False] * n
    parent = [-1] * n
    base = list(range(n))
    used[root] = True
    queue = deque([root])

    def lca(a: int, b: int) -> int:
        seen = [False] * n
        while True:
            a = base[a]
            seen[a] = True
            if mate[a] == -1:
                break
            a = parent[mate[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[mate[b]]

    def mark_path(v: int, b: int, child: int, blossom: list[bool]) -> None:
        while base[v] != b:
            blossom[base[v]] = blossom[base[mate[v]]] = True
            parent[v] = child
            child = mate[v]
            v = parent[mate[v]]

    while queue:
        v = queue.popleft()
        for to in adj[v]:
            if base[v] == base[to] or mate[v] == to:
                continue
            if to == root or (mate[to] != -1 and parent[mate[to]] != -1):
                cur = lca(v, to)
                blossom = [False] * n
                mark_path(v, cur, to, blossom)
                mark_path(to, cur, v, blossom)
                for i in range(n):
                    if blossom[base[i]]:
                        base[i] = cur
                        if not used[i]:
                            used[i] = True
                            queue.append(i)
            elif parent[to] == -1:
                parent[to] = v
                if mate[to] == -1:
                    return to, parent
                used[mate[to]] = True
                queue.append(mate[to])
    return -1, parent


def perfect_matching(n: int, edges: Sequence[tuple[int, int]]) -> list[tuple[int, int]] | None:
    """A perfect matching as sorted pairs, or ``None`` if none exists."""
    if n % 2:
        return None
    mate = maximum_matching(n, edges, stop_on_exposed=True)
    if any(m == -1 for m in mate):
        return None
    return [(v, mate[v]) for v in range(n) if v < mate[v]]


def solve_forbidden_degree(p: ForbiddenDegreeProblem) -> list[tuple[int, int]] | None:
    """Edges realizing the residual degrees, or ``None`` when the gadget has no perfect matching."""
    if sum(p.residuals) % 2:
        return None
    try:
        gadget = build_matching_gadget(p)
    except NotRealizedError:
        return None
    matching = perfect_matching(gadget.n_vertices, gadget.edges)
    if matching is None:
        return None
    out = []
    for a, b in matching:
        la, lb = gadget.labels[a], gadget.labels[b]
        if la[0] == "v" and lb[0] == "v":
            out.append((min(la[1], lb[1]), max(la[1], lb[1])))
    return sorted(out)


def realize_star(inst: StarInstance) -> LabeledGraph:
    """Realize an instance with wildcard entries, or raise ``NotRealizedError``."""
    base = inst.zero_filled()
    n = inst.class_sizes
    for i in range(inst.k):
        if not inst.is_wild(i, i) and inst.matrix[i][i] > n[i] * (n[i] - 1) // 2:
            raise NotRealizedError(f"d_ii = {inst.matrix[i][i]} exceeds the pairs inside class {i}")
        for j in range(i + 1, inst.k):
            if not inst.is_wild(i, j) and inst.matrix[i][j] > n[i] * n[j]:
                raise NotRealizedError(f"d_ij = {inst.matrix[i][j]} exceeds the pairs between classes {i} and {j}")

    state = BuildState(base)
    grow_balanced(state)
    h = state.graph

    residuals = tuple(base.degree_of(v) - h.degree(v) for v in range(h.n))
    if any(r < 0 for r in residuals):
        raise NotRealizedError("integer entries already exceed some class degree")
    if sum(residuals) % 2:
        raise NotRealizedError("residual degree sum is odd")
    cls = base.class_of
    forbidden = frozenset(
        (u, v) for u, v in combinations(range(h.n), 2) if not inst.is_wild(cls[u], cls[v])
    )
    extra = solve_forbidden_degree(ForbiddenDegreeProblem(residuals, forbidden))
    if extra is None:
        raise NotRealizedError("no realization found by this method: the matching gadget has no perfect matching")
    g = h.copy()
    for u, v in extra:
        g.add_edge(u, v)
    return g
