"""Independent brute-force oracles and instance grids shared by the tests.

Nothing here calls into the algorithms under test except the data model.
"""

from __future__ import annotations

import random
from itertools import combinations, permutations, product

from jdm.core import JdmInstance, LabeledGraph, regroup_by_degree


def compositions(n: int, k: int):
    if k == 1:
        yield (n,)
        return
    for first in range(1, n - k + 2):
        for rest in compositions(n - first, k - 1):
            yield (first, *rest)


def _matrices(sizes, degrees, slack):
    """Symmetric matrices meeting the degree equations, entries up to cap + slack."""
    k = len(sizes)
    caps = {}
    for i in range(k):
        caps[i, i] = sizes[i] * (sizes[i] - 1) // 2 + slack
        for j in range(i + 1, k):
            caps[i, j] = sizes[i] * sizes[j] + slack
    off = [(i, j) for i in range(k) for j in range(i + 1, k)]
    for values in product(*(range(caps[p] + 1) for p in off)):
        m = [[0] * k for _ in range(k)]
        for (i, j), x in zip(off, values):
            m[i][j] = m[j][i] = x
        ok = True
        for i in range(k):
            rest = sizes[i] * degrees[i] - sum(m[i][j] for j in range(k) if j != i)
            if rest < 0 or rest % 2 or rest // 2 > caps[i, i]:
                ok = False
                break
            m[i][i] = rest // 2
        if ok:
            yield m


def small_instances(max_n: int = 8, max_k: int = 3, max_degree: int = 4, slack: int = 1):
    """Exhaustive grid of instances that satisfy degree feasibility.

    Classes are listed with ``(size, degree)`` non-decreasing, which removes
    relabelings of the same instance.  ``slack`` lets matrix entries exceed
    their caps, so matrix-infeasible instances are included.
    """
    for n in range(1, max_n + 1):
        for k in range(1, max_k + 1):
            for sizes in compositions(n, k):
                for degrees in product(range(min(max_degree, n - 1) + 1), repeat=k):
                    keys = list(zip(sizes, degrees))
                    if keys != sorted(keys):
                        continue
                    for m in _matrices(sizes, degrees, slack):
                        yield JdmInstance(sizes, degrees, m)


def degree_infeasible_variants(inst: JdmInstance):
    """Instances one unit off the degree equations (diagonal +-1)."""
    for i in range(inst.k):
        for delta in (-1, 1):
            m = [list(r) for r in inst.matrix]
            if m[i][i] + delta < 0:
                continue
            m[i][i] += delta
            yield JdmInstance(inst.class_sizes, inst.class_degrees, m)


def all_graphs_on(inst: JdmInstance):
    """Every simple graph on the instance's vertex set (tiny n only)."""
    pairs = list(combinations(range(inst.n), 2))
    for mask in range(1 << len(pairs)):
        yield LabeledGraph(inst.class_sizes, [p for b, p in enumerate(pairs) if mask >> b & 1])


def brute_realizations(inst: JdmInstance):
    """Realizations by filtering every graph; independent of the pruned enumerator."""
    for g in all_graphs_on(inst):
        ok = all(g.degree(v) == inst.degree_of(v) for v in range(g.n))
        if ok:
            counts = {}
            for a, b in g.edges():
                key = tuple(sorted((inst.class_of[a], inst.class_of[b])))
                counts[key] = counts.get(key, 0) + 1
            if all(counts.get((i, j), 0) == inst.matrix[i][j] for i in range(inst.k) for j in range(i, inst.k)):
                yield g


def has_perfect_matching_brute(n: int, edges) -> bool:
    adj = [set() for _ in range(n)]
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    free = set(range(n))

    def go() -> bool:
        if not free:
            return True
        v = min(free)
        free.discard(v)
        for w in sorted(adj[v]):
            if w in free:
                free.discard(w)
                if go():
                    return True
                free.add(w)
        free.add(v)
        return False

    return go()


def random_class_regular(rng: random.Random, n: int, p: float):
    """G(n, p) regrouped by degree: a feasible instance and one realization of it."""
    edges = [(a, b) for a, b in combinations(range(n), 2) if rng.random() < p]
    return regroup_by_degree(n, edges)


def max_matching_size_brute(n: int, edges) -> int:
    """Largest matching by trying every edge subset in decreasing size (tiny graphs only)."""
    edges = list(edges)
    best = 0

    def go(start: int, used: frozenset, size: int) -> None:
        nonlocal best
        best = max(best, size)
        if size + (n - len(used)) // 2 <= best:
            return
        for pos in range(start, len(edges)):
            a, b = edges[pos]
            if a not in used and b not in used:
                go(pos + 1, used | {a, b}, size + 1)

    go(0, frozenset(), 0)
    return best


def star_realizable_brute(sizes, degrees, star_matrix) -> bool:
    """Whether some simple graph meets the degrees and every integer entry (tiny n only)."""
    inst = JdmInstance(sizes, degrees, [[0] * len(sizes) for _ in sizes])
    k = len(sizes)
    for g in all_graphs_on(inst):
        if any(g.degree(v) != degrees[inst.class_of[v]] for v in range(g.n)):
            continue
        counts = [[0] * k for _ in range(k)]
        for a, b in g.edges():
            i, j = sorted((inst.class_of[a], inst.class_of[b]))
            counts[i][j] += 1
        if all(star_matrix[i][j] == "*" or counts[i][j] == star_matrix[i][j] for i in range(k) for j in range(i, k)):
            return True
    return False


def graphs_up_to_isomorphism(n: int):
    """One edge list per isomorphism class on ``n`` vertices, with its automorphisms (n <= 6)."""
    pairs = list(combinations(range(n), 2))
    where = {p: i for i, p in enumerate(pairs)}
    perms = list(permutations(range(n)))

    def image(q, mask):
        out = 0
        for i, (a, b) in enumerate(pairs):
            if mask >> i & 1:
                x, y = q[a], q[b]
                out |= 1 << where[(x, y) if x < y else (y, x)]
        return out

    seen = set()
    for mask in range(1 << len(pairs)):
        if mask in seen:
            continue
        images = [image(q, mask) for q in perms]
        seen.update(images)
        autos = [q for q, m in zip(perms, images) if m == mask]
        yield [p for i, p in enumerate(pairs) if mask >> i & 1], autos


def achievable_degree_sequences(n: int, edges) -> set:
    """Degree sequences of all spanning subgraphs of the given edge set."""
    reach = {(0,) * n}
    for a, b in edges:
        grown = set()
        for seq in reach:
            s = list(seq)
            s[a] += 1
            s[b] += 1
            grown.add(tuple(s))
        reach |= grown
    return reach
