"""Instances, labeled graphs, feasibility predicates and JDM extraction.

Vertices are plain integers laid out class by class: class ``c`` owns the
contiguous range ``offsets[c] .. offsets[c] + n_c - 1``.  Integer order is
therefore the lexicographic ``(class_index, offset)`` order, which every
"pick any" step in the package uses to break ties.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import accumulate
from typing import Iterable, Sequence


class InstanceError(ValueError):
    """Malformed instance: wrong shapes, negative or asymmetric entries."""


class FeasibilityError(ValueError):
    """The instance violates a necessary realizability condition."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def _offsets(sizes: Sequence[int]) -> tuple[int, ...]:
    return (0, *accumulate(sizes))


def _class_index(sizes: Sequence[int]) -> tuple[int, ...]:
    return tuple(c for c, size in enumerate(sizes) for _ in range(size))


@dataclass(frozen=True)
class JdmInstance:
    """A joint-degree instance: class sizes, per-class degree, edge-count matrix."""

    class_sizes: tuple[int, ...]
    class_degrees: tuple[int, ...]
    matrix: tuple[tuple[int, ...], ...]
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
                if not isinstance(entry, int) or entry < 0:
                    raise InstanceError(f"matrix entry ({i},{j}) = {entry!r} is not a non-negative integer")
        _check_symmetric(self.matrix)

    @property
    def k(self) -> int:
        return len(self.class_sizes)

    @property
    def n(self) -> int:
        return sum(self.class_sizes)

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        return _offsets(self.class_sizes)

    @cached_property
    def class_of(self) -> tuple[int, ...]:
        return _class_index(self.class_sizes)

    def members(self, c: int) -> range:
        return range(self.offsets[c], self.offsets[c + 1])

    def vertex(self, c: int, offset: int) -> int:
        if not 0 <= offset < self.class_sizes[c]:
            raise IndexError(f"offset {offset} out of range for class {c}")
        return self.offsets[c] + offset

    def vertex_id(self, v: int) -> tuple[int, int]:
        c = self.class_of[v]
        return c, v - self.offsets[c]

    def class_name(self, c: int) -> str:
        return self.names[c] if self.names else f"V{c}"

    def degree_of(self, v: int) -> int:
        return self.class_degrees[self.class_of[v]]

    def total_edges(self) -> int:
        return sum(self.matrix[i][j] for i in range(self.k) for j in range(i, self.k))


def _validate_shape(sizes, degrees, matrix, names) -> None:
    k = len(sizes)
    if k < 1:
        raise InstanceError("an instance needs at least one class")
    if len(degrees) != k:
        raise InstanceError(f"expected {k} class degrees, got {len(degrees)}")
    if len(matrix) != k or any(len(row) != k for row in matrix):
        raise InstanceError(f"matrix must be {k}x{k}")
    if names is not None and (len(names) != k or len(set(names)) != k):
        raise InstanceError("class names must be distinct, one per class")
    for i, size in enumerate(sizes):
        if not isinstance(size, int) or size < 1:
            raise InstanceError(f"class {i} size {size!r} must be a positive integer")
    for i, deg in enumerate(degrees):
        if not isinstance(deg, int) or deg < 0:
            raise InstanceError(f"class {i} degree {deg!r} must be a non-negative integer")


def _check_symmetric(matrix) -> None:
    k = len(matrix)
    for i in range(k):
        for j in range(i + 1, k):
            if matrix[i][j] != matrix[j][i]:
                raise InstanceError(
                    f"matrix is not symmetric: cell ({i},{j}) = {matrix[i][j]!r} "
                    f"but cell ({j},{i}) = {matrix[j][i]!r}"
                )


class LabeledGraph:
    """Simple undirected graph on class-tagged integer vertices.

    Two graphs compare equal iff they share the class layout and edge set.
    """

    __hash__ = None  # mutable

    def __init__(self, class_sizes: Sequence[int], edges: Iterable[tuple[int, int]] = ()):
        self.class_sizes = tuple(class_sizes)
        self.offsets = _offsets(self.class_sizes)
        self.class_of = _class_index(self.class_sizes)
        self.adj: list[set[int]] = [set() for _ in range(self.offsets[-1])]
        for u, v in edges:
            self.add_edge(u, v)

    @classmethod
    def empty(cls, inst: JdmInstance) -> "LabeledGraph":
        return cls(inst.class_sizes)

    @property
    def n(self) -> int:
        return len(self.adj)

    def members(self, c: int) -> range:
        return range(self.offsets[c], self.offsets[c + 1])

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        if v in self.adj[u]:
            raise ValueError(f"edge ({u},{v}) already present")
        self.adj[u].add(v)
        self.adj[v].add(u)

    def remove_edge(self, u: int, v: int) -> None:
        if v not in self.adj[u]:
            raise ValueError(f"edge ({u},{v}) not present")
        self.adj[u].discard(v)
        self.adj[v].discard(u)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def neighbors(self, v: int) -> list[int]:
        return sorted(self.adj[v])

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in sorted(self.adj[u]) if u < v]

    def num_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def key(self) -> tuple[tuple[int, int], ...]:
        """Canonical hashable form: the sorted edge tuple."""
        return tuple(self.edges())

    def copy(self) -> "LabeledGraph":
        g = LabeledGraph.__new__(LabeledGraph)
        g.class_sizes, g.offsets, g.class_of = self.class_sizes, self.offsets, self.class_of
        g.adj = [set(a) for a in self.adj]
        return g

    def components(self) -> list[list[int]]:
        return connected_components(self.n, self.adj)

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def check_simple(self) -> None:
        for u, nbrs in enumerate(self.adj):
            if u in nbrs:
                raise AssertionError(f"self-loop at {u}")
            for v in nbrs:
                if u not in self.adj[v]:
                    raise AssertionError(f"asymmetric adjacency {u}->{v}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return self.class_sizes == other.class_sizes and self.adj == other.adj

    def __repr__(self) -> str:
        return f"LabeledGraph(class_sizes={self.class_sizes}, edges={self.edges()})"


def connected_components(n: int, adj: Sequence[Iterable[int]], alive: Sequence[bool] | None = None) -> list[list[int]]:
    """Components in order of smallest vertex; ``alive`` restricts to an induced subgraph."""
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s] or (alive is not None and not alive[s]):
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if not seen[w] and (alive is None or alive[w]):
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


@dataclass(frozen=True)
class JdmSummary:
    """Realized per-class degree multisets and class-pair edge counts of a graph."""

    class_sizes: tuple[int, ...]
    degrees: tuple[tuple[int, ...], ...]
    matrix: tuple[tuple[int, ...], ...]

    def is_class_regular(self) -> bool:
        return all(len(set(ds)) <= 1 for ds in self.degrees)

    def to_instance(self, names: Sequence[str] | None = None) -> JdmInstance:
        if not self.is_class_regular():
            raise ValueError("graph is not class-regular; no single degree per class")
        return JdmInstance(self.class_sizes, tuple(ds[0] for ds in self.degrees), self.matrix, names)


def check_degree_feasibility(inst: JdmInstance) -> bool:
    return not _degree_violations(inst)


def check_matrix_feasibility(inst: JdmInstance) -> bool:
    return not _matrix_violations(inst)


def _degree_violations(inst: JdmInstance) -> list[str]:
    out = []
    for i in range(inst.k):
        stubs = 2 * inst.matrix[i][i] + sum(inst.matrix[i][j] for j in range(inst.k) if j != i)
        need = inst.class_sizes[i] * inst.class_degrees[i]
        if stubs != need:
            out.append(
                f"degree feasibility fails for class {inst.class_name(i)}: "
                f"2*d_ii + sum_(j!=i) d_ij = {stubs} != |V_i|*d(V_i) = {need}"
            )
    return out


def _matrix_violations(inst: JdmInstance) -> list[str]:
    out = []
    n = inst.class_sizes
    for i in range(inst.k):
        if inst.matrix[i][i] > n[i] * (n[i] - 1) // 2:
            out.append(
                f"matrix feasibility fails for class {inst.class_name(i)}: "
                f"d_ii = {inst.matrix[i][i]} > {n[i] * (n[i] - 1) // 2}"
            )
        for j in range(i + 1, inst.k):
            if inst.matrix[i][j] > n[i] * n[j]:
                out.append(
                    f"matrix feasibility fails for classes {inst.class_name(i)},{inst.class_name(j)}: "
                    f"d_ij = {inst.matrix[i][j]} > {n[i] * n[j]}"
                )
    return out


def feasibility_violations(inst: JdmInstance) -> list[str]:
    return _degree_violations(inst) + _matrix_violations(inst)


def require_feasible(inst: JdmInstance) -> None:
    violations = feasibility_violations(inst)
    if violations:
        raise FeasibilityError(violations)


def extract_jdm(g: LabeledGraph) -> JdmSummary:
    k = len(g.class_sizes)
    counts = [[0] * k for _ in range(k)]
    for u, v in g.edges():
        cu, cv = g.class_of[u], g.class_of[v]
        counts[cu][cv] += 1
        if cu != cv:
            counts[cv][cu] += 1
    degrees = tuple(tuple(sorted(g.degree(v) for v in g.members(c))) for c in range(k))
    return JdmSummary(g.class_sizes, degrees, tuple(map(tuple, counts)))


def validate_realization(g: LabeledGraph, inst: JdmInstance) -> bool:
    """True iff ``g`` has the prescribed class degrees and class-pair edge counts."""
    if g.class_sizes != inst.class_sizes:
        raise ValueError(f"graph classes {g.class_sizes} do not match instance classes {inst.class_sizes}")
    for v in range(g.n):
        if g.degree(v) != inst.class_degrees[g.class_of[v]]:
            return False
    return extract_jdm(g).matrix == inst.matrix


def regroup_by_degree(n: int, edges: Iterable[tuple[int, int]]) -> tuple[JdmInstance, LabeledGraph]:
    """Partition an arbitrary graph's vertices by degree.

    Returns the extracted instance and the graph relabeled into class layout
    (classes ordered by ascending degree, vertices in original order within a
    class).  The instance is feasible by construction.
    """
    edges = list(edges)
    deg = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    order = sorted(range(n), key=lambda v: (deg[v], v))
    relabel = {old: new for new, old in enumerate(order)}
    distinct = sorted(set(deg))
    sizes = [sum(1 for d in deg if d == value) for value in distinct]
    g = LabeledGraph(sizes, [(relabel[u], relabel[v]) for u, v in edges])
    return extract_jdm(g).to_instance(), g
