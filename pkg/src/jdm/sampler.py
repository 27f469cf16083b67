"""Edge-switch Markov chain on the realizations of a joint-degree instance.

A legal switch ``[uv, u'v' | uv', u'v]`` takes two same-class vertices ``u``
and ``u'`` and exchanges their partners ``v`` and ``v'``.  Degrees and every
class-pair count are unchanged, so the chain never leaves the realization
set.  Proposals are uniform over *distinct* switches (distinct resulting
graphs) and a Metropolis correction makes the uniform distribution
stationary.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import mean
from typing import NamedTuple, Sequence

from .core import JdmInstance, LabeledGraph, extract_jdm, validate_realization

Edge = tuple[int, int]


def _e(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


class SwitchMove(NamedTuple):
    """Remove ``u v`` and ``u2 v2``, add ``u v2`` and ``u2 v``; ``u`` and ``u2`` share a class.

    A plain int tuple, so large move lists stay cheap and untracked by the cycle collector.
    """

    u: int
    u2: int
    v: int
    v2: int

    def removed(self) -> tuple[Edge, Edge]:
        return tuple(sorted((_e(self.u, self.v), _e(self.u2, self.v2))))

    def added(self) -> tuple[Edge, Edge]:
        return tuple(sorted((_e(self.u, self.v2), _e(self.u2, self.v))))

    def key(self) -> tuple[tuple[Edge, Edge], tuple[Edge, Edge]]:
        return self.removed(), self.added()

    def is_legal(self, g: LabeledGraph) -> bool:
        u, u2, v, v2 = self.u, self.u2, self.v, self.v2
        return (
            len({u, u2, v, v2}) == 4
            and g.class_of[u] == g.class_of[u2]
            and g.has_edge(u, v) and g.has_edge(u2, v2)
            and not g.has_edge(u, v2) and not g.has_edge(u2, v)
        )

    def apply_in_place(self, g: LabeledGraph) -> None:
        if not self.is_legal(g):
            raise ValueError(f"{self} is not a legal switch on this graph")
        g.remove_edge(self.u, self.v)
        g.remove_edge(self.u2, self.v2)
        g.add_edge(self.u, self.v2)
        g.add_edge(self.u2, self.v)

    def apply(self, g: LabeledGraph) -> LabeledGraph:
        out = g.copy()
        self.apply_in_place(out)
        return out

    def inverse(self) -> "SwitchMove":
        return SwitchMove(self.u, self.u2, self.v2, self.v)


def enumerate_legal_switches(g: LabeledGraph) -> list[SwitchMove]:
    """All distinct legal switches of ``g``, one representative each.

    Quartic scan over ordered same-class pairs ``(u, u2)`` and their private
    neighbors. A switch whose other endpoints ``v, v2`` also share a class is
    reachable from both pivot pairs; only the pair with the smaller minimum is
    kept, so no deduplication table is needed. Order depends only on the edge set.
    """
    class_of = g.class_of
    found: list[SwitchMove] = []
    for c in range(len(g.class_sizes)):
        members = g.members(c)
        ordered = {u: sorted(g.adj[u]) for u in members}
        for u in members:
            nu = g.adj[u]
            for u2 in members:
                if u2 <= u:
                    continue
                nu2 = g.adj[u2]
                only_u = [v for v in ordered[u] if v not in nu2 and v != u2]
                if not only_u:
                    continue
                only_u2 = [v2 for v2 in ordered[u2] if v2 not in nu and v2 != u]
                for v in only_u:
                    cv = class_of[v]
                    for v2 in only_u2:
                        if class_of[v2] == cv and min(v, v2) < u:
                            continue
                        found.append(SwitchMove(u, u2, v, v2))
    return found


def count_legal_switches(g: LabeledGraph) -> int:
    return len(enumerate_legal_switches(g))


@dataclass
class ChainState:
    graph: LabeledGraph
    rng: random.Random
    seed: int | None = None
    switches: list[SwitchMove] = field(default_factory=list)
    proposed: int = 0
    accepted: int = 0
    memo: dict | None = None

    @classmethod
    def start(cls, g: LabeledGraph, seed: int | None, *, memoize: bool = True) -> "ChainState":
        state = cls(g.copy(), random.Random(seed), seed, memo={} if memoize else None)
        state.switches = state._switches_of(state.graph)
        return state

    @property
    def ell(self) -> int:
        return len(self.switches)

    def _switches_of(self, g: LabeledGraph) -> list[SwitchMove]:
        if self.memo is None:
            return enumerate_legal_switches(g)
        key = g.key()
        if key not in self.memo:
            self.memo[key] = enumerate_legal_switches(g)
        return self.memo[key]


def mcmc_step(state: ChainState) -> ChainState:
    """One lazy Metropolis step; mutates and returns ``state``."""
    if state.rng.random() < 0.5 or not state.switches:
        return state
    move = state.switches[state.rng.randrange(len(state.switches))]
    proposal = move.apply(state.graph)
    proposal_switches = state._switches_of(proposal)
    state.proposed += 1
    ell, ell2 = len(state.switches), len(proposal_switches)
    if state.rng.random() < ell / (ell + ell2):
        state.graph = proposal
        state.switches = proposal_switches
        state.accepted += 1
    return state


@dataclass
class ChainResult:
    graph: LabeledGraph
    histogram: Counter | None
    metadata: dict


def run_chain(
    g0: LabeledGraph,
    steps: int,
    seed: int | None,
    *,
    histogram: bool = False,
    inst: JdmInstance | None = None,
    memoize: bool = True,
) -> ChainResult:
    """Run the chain for ``steps`` steps from ``g0``.

    ``g0`` must realize ``inst`` (or, when ``inst`` is omitted, be class-regular).
    The histogram, when requested, counts the state after each step keyed by
    the canonical edge tuple.
    """
    if inst is None:
        summary = extract_jdm(g0)
        if not summary.is_class_regular():
            raise ValueError("starting graph is not class-regular")
    elif not validate_realization(g0, inst):
        raise ValueError("starting graph does not realize the instance")
    if steps < 0:
        raise ValueError("steps must be non-negative")
    state = ChainState.start(g0, seed, memoize=memoize)
    hist: Counter | None = Counter() if histogram else None
    ells = [state.ell]
    for _ in range(steps):
        mcmc_step(state)
        ells.append(state.ell)
        if hist is not None:
            hist[state.graph.key()] += 1
    meta = {
        "seed": seed,
        "steps": steps,
        "proposed": state.proposed,
        "accepted": state.accepted,
        "acceptance_rate": state.accepted / state.proposed if state.proposed else 0.0,
        "ell_min": min(ells),
        "ell_max": max(ells),
        "ell_mean": mean(ells),
    }
    return ChainResult(state.graph, hist, meta)


def merge_histograms(histograms: Sequence[Counter]) -> Counter:
    total: Counter = Counter()
    for h in histograms:
        total.update(h)
    return total


def transition_probabilities(states: Sequence[LabeledGraph]) -> dict:
    """Exact transition probabilities ``P[(x, y)]`` between canonical keys of ``states``."""
    ell = {g.key(): count_legal_switches(g) for g in states}
    P: dict = {}
    for g in states:
        x = g.key()
        moves = enumerate_legal_switches(g)
        stay = Fraction(1, 2)
        for move in moves:
            y = move.apply(g).key()
            p = Fraction(1, 2) * Fraction(1, ell[x]) * Fraction(ell[x], ell[x] + ell[y])
            P[x, y] = P.get((x, y), 0) + p
            stay += Fraction(1, 2) * Fraction(1, ell[x]) - p
        if not moves:
            stay = Fraction(1)
        P[x, x] = P.get((x, x), 0) + stay
    return P


def total_variation(hist: Counter, support_size: int) -> float:
    """TV distance between the empirical distribution of ``hist`` and uniform over ``support_size`` states."""
    total = sum(hist.values())
    seen = sum(abs(c / total - 1 / support_size) for c in hist.values())
    unseen = (support_size - len(hist)) / support_size
    return 0.5 * (seen + unseen)


# -- switch paths ---------------------------------------------------------

class SymmetricDifferenceView:
    """Edge kinds of the working graph relative to a target.

    straight: in the graph only; squiggly: in the target only;
    dashed: in both; dotted: in neither.
    """

    def __init__(self, g: LabeledGraph, target: LabeledGraph):
        self.g = g
        self.target = target

    def kind(self, a: int, b: int) -> str:
        in_g, in_t = self.g.has_edge(a, b), self.target.has_edge(a, b)
        if in_g and in_t:
            return "dashed"
        if in_g:
            return "straight"
        if in_t:
            return "squiggly"
        return "dotted"

    def straight(self, a: int) -> list[int]:
        return sorted(self.g.adj[a] - self.target.adj[a])

    def squiggly(self, a: int) -> list[int]:
        return sorted(self.target.adj[a] - self.g.adj[a])

    def size(self) -> int:
        return sum(len(self.g.adj[a] ^ self.target.adj[a]) for a in range(self.g.n)) // 2

    def pairing_node(self) -> tuple[int, int, int] | None:
        """Smallest ``(x, s, q)`` with ``xs`` straight, ``xq`` squiggly, ``s`` and ``q`` in one class."""
        cls = self.g.class_of
        for x in range(self.g.n):
            squig = self.squiggly(x)
            if not squig:
                continue
            for s in self.straight(x):
                for q in squig:
                    if cls[s] == cls[q]:
                        return x, s, q
        return None


class SwitchPathError(RuntimeError):
    pass


# (kind of qw, kind of sw) selecting the exchange at a pairing node
_ON_GRAPH = frozenset({("straight", "squiggly"), ("straight", "dotted"), ("dashed", "squiggly")})
_ON_TARGET = frozenset({("straight", "dashed"), ("dotted", "squiggly")})


class _PathBuilder:
    def __init__(self, g0: LabeledGraph, g1: LabeledGraph, budget: int | None):
        self.g = g0.copy()
        self.t = g1.copy()
        self.view = SymmetricDifferenceView(self.g, self.t)
        self.forward: list[SwitchMove] = []
        self.tail: list[SwitchMove] = []
        self.budget = budget
        self.rounds: list[tuple[int, int]] = []
        self.size = self.view.size()

    def _track(self, move: SwitchMove) -> None:
        # each of the four toggled pairs flips its membership in the symmetric difference
        g, t = self.g, self.t
        for a, b in ((move.u, move.v), (move.u2, move.v2), (move.u, move.v2), (move.u2, move.v)):
            self.size += -1 if g.has_edge(a, b) != t.has_edge(a, b) else 1

    def on_graph(self, move: SwitchMove) -> None:
        self._track(move)
        move.apply_in_place(self.g)
        self.forward.append(move)
        self._check_budget()

    def on_target(self, move: SwitchMove) -> None:
        self._track(move)
        move.apply_in_place(self.t)
        self.tail.append(move.inverse())
        self._check_budget()

    def _check_budget(self) -> None:
        if self.budget is not None and len(self.forward) + len(self.tail) > self.budget:
            raise SwitchPathError(f"switch path exceeded budget {self.budget}")

    def case1(self, x: int, s: int, q: int) -> None:
        """Pairing node ``x``: ``xs`` straight, ``xq`` squiggly, ``s`` and ``q`` in one class."""
        view = self.view
        for w in range(self.g.n):
            if w in (x, s, q):
                continue
            qw, sw = view.kind(q, w), view.kind(s, w)
            if (qw, sw) in _ON_GRAPH:
                # 1a / 1b: exchange in the working graph
                self.on_graph(SwitchMove(s, q, x, w))
                return
            if (qw, sw) in _ON_TARGET:
                # 1c: exchange in the target, undo at the end
                self.on_target(SwitchMove(q, s, x, w))
                return
        raise SwitchPathError(f"pairing node {x} admits no exchange")

    def case2(self) -> tuple[int, int, int, int]:
        """No pairing node: create one; returns ``(x, v, u, w)`` for the follow-up."""
        g, t, view, cls = self.g, self.t, self.view, self.g.class_of
        x = u = y = v = None
        for a in range(g.n):
            for b in view.squiggly(a):
                for c in range(g.n):
                    if c in (a, b) or cls[c] != cls[a]:
                        continue
                    for d in view.straight(c):
                        if cls[d] == cls[b] and d not in (a, b):
                            x, u, y, v = a, b, c, d
                            break
                    if x is not None:
                        break
                if x is not None:
                    break
            if x is not None:
                break
        if x is None:
            raise SwitchPathError("no squiggly/straight pair for the rewiring step")
        if view.kind(x, v) == "dotted":
            w = next(w for w in g.neighbors(x) if w != y and not g.has_edge(y, w))
            self.on_graph(SwitchMove(x, y, w, v))
        else:
            w = next(w for w in t.neighbors(y) if w != x and not t.has_edge(x, w))
            self.on_target(SwitchMove(y, x, w, v))
        return x, v, u, w

    def run(self) -> list[SwitchMove]:
        while self.size:
            before = self.size
            found = self.view.pairing_node()
            if found is not None:
                self.case1(*found)
            else:
                x, v, u, w = self.case2()
                self.case1(x, v, u)
                if self.size >= before:
                    follow = self._pairing_at(w) or self.view.pairing_node()
                    if follow is None:
                        raise SwitchPathError("rewiring left no pairing node")
                    self.case1(*follow)
            after = self.size
            self.rounds.append((before, after))
            if after >= before:
                raise SwitchPathError(f"symmetric difference did not shrink ({before} -> {after})")
        assert self.g == self.t
        return self.forward + self.tail[::-1]

    def _pairing_at(self, x: int) -> tuple[int, int, int] | None:
        cls = self.g.class_of
        for s in self.view.straight(x):
            for q in self.view.squiggly(x):
                if cls[s] == cls[q]:
                    return x, s, q
        return None


def switch_path(g0: LabeledGraph, g1: LabeledGraph, *, budget: int | None = None) -> list[SwitchMove]:
    """Legal switches turning ``g0`` into ``g1``; both must realize the same instance."""
    summary = extract_jdm(g0)
    if g0.class_sizes != g1.class_sizes or summary != extract_jdm(g1):
        raise ValueError("graphs do not realize the same instance")
    if not summary.is_class_regular():
        raise ValueError("graphs are not class-regular")
    return _PathBuilder(g0, g1, budget).run()


def path_budget(g0: LabeledGraph, g1: LabeledGraph) -> int:
    """Generous step budget ``5 |E(X)| + 10`` for the symmetric difference ``X``."""
    return 5 * SymmetricDifferenceView(g0, g1).size() + 10


# -- brute force realization set ------------------------------------------

class EnumerationCapError(ValueError):
    pass


def enumerate_omega(inst: JdmInstance, cap: int = 10, limit: int | None = None) -> list[LabeledGraph]:
    """Every realization of ``inst`` (or the first ``limit``), by pruned backtracking over vertex pairs."""
    n = inst.n
    if n > cap:
        raise EnumerationCapError(f"instance has {n} vertices, above the enumeration cap {cap}")
    k = inst.k
    cls = inst.class_of
    target = [inst.class_degrees[cls[v]] for v in range(n)]
    D = inst.matrix
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    deg = [0] * n
    free_v = [n - 1] * n
    count = [[0] * k for _ in range(k)]
    free_c = [[0] * k for _ in range(k)]
    for a, b in pairs:
        free_c[cls[a]][cls[b]] += 1
        if cls[a] != cls[b]:
            free_c[cls[b]][cls[a]] += 1
    if any(t > n - 1 for t in target) or any(D[i][j] > free_c[i][j] for i in range(k) for j in range(k)):
        return []
    chosen: list[Edge] = []
    out: list[LabeledGraph] = []

    def release(a, b, ca, cb, delta):
        free_v[a] += delta
        free_v[b] += delta
        free_c[ca][cb] += delta
        if ca != cb:
            free_c[cb][ca] += delta

    def bump(a, b, ca, cb, delta):
        deg[a] += delta
        deg[b] += delta
        count[ca][cb] += delta
        if ca != cb:
            count[cb][ca] += delta

    def walk(p: int) -> bool:
        if p == len(pairs):
            out.append(LabeledGraph(inst.class_sizes, chosen))
            return limit is not None and len(out) >= limit
        a, b = pairs[p]
        ca, cb = cls[a], cls[b]
        release(a, b, ca, cb, -1)
        if deg[a] < target[a] and deg[b] < target[b] and count[ca][cb] < D[ca][cb]:
            bump(a, b, ca, cb, +1)
            chosen.append((a, b))
            if walk(p + 1):
                return True
            chosen.pop()
            bump(a, b, ca, cb, -1)
        if (
            target[a] - deg[a] <= free_v[a]
            and target[b] - deg[b] <= free_v[b]
            and D[ca][cb] - count[ca][cb] <= free_c[ca][cb]
        ):
            if walk(p + 1):
                return True
        release(a, b, ca, cb, +1)
        return False

    walk(0)
    return out
