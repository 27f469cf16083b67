"""Connected realizations and certificates of their non-existence.

Pipeline: contract each class to the fewest components it can have, search
for a spanning tree of the contracted instance that respects the capped
pair counts, expand that tree back over all vertices, balance the degrees
inside each class, and finish with the balanced degree algorithm seeded by
the tree.  When the tree search gets stuck it returns a class family and a
grouping of it whose collapsed weighted graph cannot carry a spanning tree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

from .core import JdmInstance, LabeledGraph, connected_components, require_feasible
from .realizer import balanced_realize


@dataclass(frozen=True)
class ContractedInstance:
    sizes: tuple[int, ...]
    matrix: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.sizes)

    @property
    def n(self) -> int:
        return sum(self.sizes)

    def class_of(self) -> list[int]:
        return [c for c, s in enumerate(self.sizes) for _ in range(s)]

    def offsets(self) -> list[int]:
        out = [0]
        for s in self.sizes:
            out.append(out[-1] + s)
        return out


@dataclass(frozen=True)
class ValidTree:
    contracted: ContractedInstance
    edges: tuple[tuple[int, int], ...]
    iterations: int = 0
    max_depth: int = 0


@dataclass(frozen=True)
class Certificate:
    """A class family and a partition of it into groups (class indices)."""

    family: tuple[int, ...]
    groups: tuple[tuple[int, ...], ...]
    iterations: int = field(default=0, compare=False)


@dataclass
class CertificateReport:
    """The collapsed weighted graph of a certificate and its tree-capacity inequality."""

    nodes: list[str]
    edges: list[tuple[str, str, int]]
    total_weight: int
    required: int
    connected: bool

    @property
    def refutes(self) -> bool:
        return not self.connected or self.total_weight < self.required


def contract(inst: JdmInstance) -> ContractedInstance:
    sizes = tuple(max(1, n - inst.matrix[i][i]) for i, n in enumerate(inst.class_sizes))
    k = inst.k
    matrix = tuple(
        tuple(0 if i == j else min(sizes[i] * sizes[j], inst.matrix[i][j]) for j in range(k))
        for i in range(k)
    )
    return ContractedInstance(sizes, matrix)


def _bridges(adj: list[set[int]], alive: list[bool]) -> set[tuple[int, int]]:
    """Bridges (as ``(min, max)`` pairs) of the subgraph induced by ``alive``."""
    n = len(adj)
    disc = [-1] * n
    low = [0] * n
    out: set[tuple[int, int]] = set()
    clock = 0
    for root in range(n):
        if not alive[root] or disc[root] != -1:
            continue
        disc[root] = low[root] = clock
        clock += 1
        stack = [(root, -1, iter(sorted(adj[root])))]
        while stack:
            u, parent, it = stack[-1]
            advanced = False
            for w in it:
                if not alive[w] or w == parent:
                    continue
                if disc[w] == -1:
                    disc[w] = low[w] = clock
                    clock += 1
                    stack.append((w, u, iter(sorted(adj[w]))))
                    advanced = True
                    break
                low[u] = min(low[u], disc[w])
            if advanced:
                continue
            stack.pop()
            if parent != -1:
                low[parent] = min(low[parent], low[u])
                if low[u] > disc[parent]:
                    out.add((min(u, parent), max(u, parent)))
    return out


class _TreeSearch:
    """Mutable working state of the valid tree construction."""

    def __init__(self, c: ContractedInstance):
        self.c = c
        self.cls = c.class_of()
        self.offsets = c.offsets()
        self.N = c.n
        self.adj: list[set[int]] = [set() for _ in range(self.N)]
        self.count = [[0] * c.k for _ in range(c.k)]
        self.removed: list[frozenset[int]] = []

    def members(self, c: int) -> range:
        return range(self.offsets[c], self.offsets[c + 1])

    def can_add(self, a: int, b: int) -> bool:
        ca, cb = self.cls[a], self.cls[b]
        return ca != cb and b not in self.adj[a] and self.count[ca][cb] < self.c.matrix[ca][cb]

    def add(self, a: int, b: int) -> None:
        assert self.can_add(a, b), (a, b)
        self.adj[a].add(b)
        self.adj[b].add(a)
        ca, cb = self.cls[a], self.cls[b]
        self.count[ca][cb] += 1
        self.count[cb][ca] += 1

    def remove(self, a: int, b: int) -> None:
        self.adj[a].remove(b)
        self.adj[b].remove(a)
        ca, cb = self.cls[a], self.cls[b]
        self.count[ca][cb] -= 1
        self.count[cb][ca] -= 1

    def num_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(self.N) for b in sorted(self.adj[a]) if a < b]

    def alive(self) -> list[bool]:
        gone = set().union(*self.removed) if self.removed else set()
        return [self.cls[v] not in gone for v in range(self.N)]

    def greedy_start(self) -> None:
        """Kruskal-style scan, then pad with any quota-respecting edges."""
        parent = list(range(self.N))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in combinations(range(self.N), 2):
            if self.can_add(a, b) and find(a) != find(b):
                parent[find(a)] = find(b)
                self.add(a, b)
        for a, b in combinations(range(self.N), 2):
            if self.num_edges() >= self.N - 1:
                break
            if self.can_add(a, b):
                self.add(a, b)

    def check(self) -> None:
        assert self.num_edges() == self.N - 1
        k = self.c.k
        assert all(self.count[i][j] <= self.c.matrix[i][j] for i in range(k) for j in range(k))


def _shortfall_certificate(s: _TreeSearch) -> Certificate:
    """Certificate when fewer than ``N - 1`` valid edges exist at all.

    Every quota is used up, so no positive cap joins classes lying in
    different forest components; grouping classes by component (merged when
    a class straddles) yields isolated group vertices.  With a single group
    the empty family works instead: its weight is the total capacity.
    """
    parent = list(range(s.c.k))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for comp in connected_components(s.N, s.adj):
        classes = sorted({s.cls[v] for v in comp})
        for other in classes[1:]:
            parent[find(other)] = find(classes[0])
    groups: dict[int, list[int]] = {}
    for ci in range(s.c.k):
        groups.setdefault(find(ci), []).append(ci)
    if len(groups) < 2:
        return Certificate((), ())
    return Certificate(tuple(range(s.c.k)), tuple(sorted(tuple(g) for g in groups.values())))


def valid_tree_construction(c: ContractedInstance) -> ValidTree | Certificate:
    """Find a spanning tree on the contracted vertices within the pair caps.

    Returns a ``Certificate`` when no such tree exists.  Each iteration tries,
    in order: joining two components with a fresh edge (Case 1), rewiring at a
    class that touches a cycle and two components (Case 2), emitting the
    certificate when no class straddles components (Case 3), or descending by
    deleting every straddling class (Case 4).
    """
    s = _TreeSearch(c)
    N = s.N
    if N == 1:
        return ValidTree(c, ())
    s.greedy_start()
    if s.num_edges() < N - 1:
        return _shortfall_certificate(s)
    limit = 2 * c.k * N
    iterations = max_depth = 0
    while len(connected_components(N, s.adj)) > 1:
        iterations += 1
        if iterations > 10 * limit + 100:
            raise RuntimeError("valid tree construction did not terminate")
        s.check()
        alive = s.alive()
        comps = connected_components(N, s.adj, alive)
        comp_of = {v: ci for ci, comp in enumerate(comps) for v in comp}
        straddling = [
            ci for ci in range(c.k)
            if len({comp_of[v] for v in s.members(ci) if alive[v]}) >= 2
        ]
        bridges = _bridges(s.adj, alive)
        cycle_edges = [
            (a, b) for a in range(N) if alive[a]
            for b in sorted(s.adj[a]) if a < b and alive[b] and (a, b) not in bridges
        ]
        on_cycle = sorted({v for e in cycle_edges for v in e})
        cycle_classes = {s.cls[v] for v in on_cycle}

        joining = next(
            (
                (a, b) for a, b in combinations(range(N), 2)
                if alive[a] and alive[b] and comp_of[a] != comp_of[b] and s.can_add(a, b)
            ),
            None,
        )
        if joining is not None:
            # Case 1: the new edge is a bridge, so a non-bridge edge is still on a cycle
            assert cycle_edges, "disconnected working graph with no cycle"
            s.add(*joining)
            s.remove(*cycle_edges[0])
            if s.removed:
                s.removed.pop()
            continue

        hub = next((ci for ci in straddling if ci in cycle_classes), None)
        if hub is not None:
            # Case 2
            u = next(v for v in on_cycle if s.cls[v] == hub)
            v = next(w for w in s.members(hub) if alive[w] and comp_of[w] != comp_of[u])
            x = next(w for w in sorted(s.adj[u]) if alive[w] and (min(u, w), max(u, w)) not in bridges)
            y = next((w for w in sorted(s.adj[v]) if alive[w]), None)
            s.remove(x, u)
            if y is not None:
                s.remove(y, v)
                s.add(y, u)
            s.add(x, v)
            if s.removed:
                s.removed.pop()
            continue

        if not straddling:
            # Case 3
            groups = []
            for comp in comps:
                classes = tuple(sorted({s.cls[v] for v in comp}))
                assert all(alive[w] and comp_of[w] == comp_of[comp[0]] for ci in classes for w in s.members(ci))
                groups.append(classes)
            family = tuple(sorted(ci for g in groups for ci in g))
            return Certificate(family, tuple(sorted(groups)), iterations)

        # Case 4
        s.removed.append(frozenset(straddling))
        max_depth = max(max_depth, len(s.removed))
        assert len(s.removed) <= c.k

    s.check()
    return ValidTree(c, tuple(s.edges()), iterations, max_depth)


def expand_tree(t: ValidTree, inst: JdmInstance) -> LabeledGraph:
    """Lift a contracted tree to a spanning tree on all vertices.

    Contracted vertex ``t`` of class ``i`` becomes vertex ``(i, t)``; the
    remaining vertices of the class hang off ``(i, 0)`` as a path.
    """
    c = t.contracted
    coffsets = c.offsets()
    cls = c.class_of()
    g = LabeledGraph.empty(inst)
    for a, b in t.edges:
        ca, cb = cls[a], cls[b]
        g.add_edge(inst.vertex(ca, a - coffsets[ca]), inst.vertex(cb, b - coffsets[cb]))
    for i in range(inst.k):
        prev = inst.vertex(i, 0)
        for off in range(c.sizes[i], inst.class_sizes[i]):
            cur = inst.vertex(i, off)
            g.add_edge(prev, cur)
            prev = cur
    return g


def _path_neighbor(g: LabeledGraph, u: int, v: int) -> int:
    """The neighbor of ``u`` on the unique tree path from ``u`` to ``v``."""
    parent = {v: v}
    frontier = [v]
    while u not in parent:
        nxt = []
        for a in frontier:
            for b in g.adj[a]:
                if b not in parent:
                    parent[b] = a
                    nxt.append(b)
        frontier = nxt
    return parent[u]


def balance_tree(tree: LabeledGraph, inst: JdmInstance, stats: dict | None = None) -> LabeledGraph:
    """Equalize degrees inside each class by moving leaves of subtrees.

    Moving any neighbor of ``u`` other than the one toward ``v`` over to ``v``
    keeps the graph a tree and leaves every class-pair count unchanged.
    """
    g = tree.copy()
    passes = [0] * inst.k
    for c in range(inst.k):
        members = list(inst.members(c))
        avg = sum(g.degree(v) for v in members) / len(members)
        hi_target, lo_target = math.ceil(avg), math.floor(avg)
        while True:
            u = max(members, key=lambda w: (g.degree(w), -w))
            v = min(members, key=lambda w: (g.degree(w), w))
            if g.degree(u) - g.degree(v) <= 1:
                break
            passes[c] += 1
            while g.degree(u) - g.degree(v) > 1 and (g.degree(u) > hi_target or g.degree(v) < lo_target):
                keep = _path_neighbor(g, u, v)
                x = next(w for w in g.neighbors(u) if w != keep)
                g.remove_edge(u, x)
                g.add_edge(v, x)
    if stats is not None:
        stats["passes"] = passes
    return g


def realize_connected(inst: JdmInstance) -> LabeledGraph | Certificate:
    require_feasible(inst)
    result = valid_tree_construction(contract(inst))
    if isinstance(result, Certificate):
        return result
    tree = balance_tree(expand_tree(result, inst), inst)
    return balanced_realize(inst, tree)


def certificate_report(inst: JdmInstance | ContractedInstance, cert: Certificate) -> CertificateReport:
    """Build the collapsed weighted graph for ``cert`` over the contraction of ``inst``."""
    c = inst if isinstance(inst, ContractedInstance) else contract(inst)
    family = set(cert.family)
    if len(family) != len(cert.family) or any(not 0 <= x < c.k for x in family):
        raise ValueError("certificate family must be distinct class indices")
    flat = [x for grp in cert.groups for x in grp]
    if sorted(flat) != sorted(family) or any(not grp for grp in cert.groups):
        raise ValueError("certificate groups must partition the family into non-empty groups")
    outside = [j for j in range(c.k) if j not in family]
    D = c.matrix
    nodes = [f"A{a}" for a in range(len(cert.groups))] + [f"u{j}" for j in outside]
    edges: list[tuple[str, str, int]] = []
    for a, b in combinations(range(len(cert.groups)), 2):
        if any(D[x][y] > 0 for x in cert.groups[a] for y in cert.groups[b]):
            edges.append((f"A{a}", f"A{b}", 1))
    for a, grp in enumerate(cert.groups):
        for j in outside:
            cap = sum(D[x][j] for x in grp)
            if cap > 0:
                edges.append((f"A{a}", f"u{j}", min(c.sizes[j], cap)))
    for i, j in combinations(outside, 2):
        if D[i][j] > 0:
            edges.append((f"u{i}", f"u{j}", D[i][j]))
    index = {name: pos for pos, name in enumerate(nodes)}
    adj = [set() for _ in nodes]
    for a, b, _ in edges:
        adj[index[a]].add(index[b])
        adj[index[b]].add(index[a])
    connected = len(connected_components(len(nodes), adj)) <= 1
    required = len(cert.groups) + sum(c.sizes[j] for j in outside) - 1
    return CertificateReport(nodes, edges, sum(w for _, _, w in edges), required, connected)


def verify_certificate(inst: JdmInstance | ContractedInstance, cert: Certificate) -> bool:
    """True iff ``cert`` proves that ``inst`` has no connected realization."""
    return certificate_report(inst, cert).refutes
