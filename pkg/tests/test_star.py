import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jdm.core import InstanceError, LabeledGraph
from jdm.realizer import BuildState, grow_balanced
from jdm.star import (
    ForbiddenDegreeProblem,
    NotRealizedError,
    StarInstance,
    build_matching_gadget,
    maximum_matching,
    perfect_matching,
    realize_star,
    solve_forbidden_degree,
)

from oracles import has_perfect_matching_brute, max_matching_size_brute, random_class_regular, star_realizable_brute


def check_star_output(g: LabeledGraph, inst: StarInstance) -> None:
    g.check_simple()
    cls = g.class_of
    for v in range(g.n):
        assert g.degree(v) == inst.class_degrees[cls[v]]
    counts = {}
    for a, b in g.edges():
        key = tuple(sorted((cls[a], cls[b])))
        counts[key] = counts.get(key, 0) + 1
    for i in range(inst.k):
        for j in range(i, inst.k):
            if not inst.is_wild(i, j):
                assert counts.get((i, j), 0) == inst.matrix[i][j]


class TestStarInstance:
    def test_wildcards_must_mirror(self):
        with pytest.raises(InstanceError):
            StarInstance([1, 1], [1, 1], [["*", "*"], [1, "*"]])

    def test_rejects_bad_entries(self):
        with pytest.raises(InstanceError):
            StarInstance([2], [1], [["?"]])

    def test_zero_filled(self):
        inst = StarInstance([2, 2], [1, 1], [[0, "*"], ["*", 0]])
        assert inst.zero_filled().matrix == ((0, 0), (0, 0))


class TestRealizeStar:
    def test_cross_perfect_matching(self):
        inst = StarInstance([2, 2], [1, 1], [[0, "*"], ["*", 0]])
        g = realize_star(inst)
        check_star_output(g, inst)
        assert all(g.class_of[a] != g.class_of[b] for a, b in g.edges()) and g.num_edges() == 2

    def test_single_edge(self):
        g = realize_star(StarInstance([1, 1], [1, 1], [["*", "*"], ["*", "*"]]))
        assert g.key() == ((0, 1),)

    def test_odd_degree_sum(self):
        with pytest.raises(NotRealizedError, match="odd"):
            realize_star(StarInstance([3], [1], [["*"]]))

    def test_integer_entry_above_cap(self):
        with pytest.raises(NotRealizedError):
            realize_star(StarInstance([2, 2], [2, 2], [["*", 5], [5, "*"]]))

    def test_mixed_integer_and_wild(self):
        inst = StarInstance([2, 2, 2], [2, 2, 2], [[1, 1, "*"], [1, 1, "*"], ["*", "*", "*"]])
        check_star_output(realize_star(inst), inst)


class TestGadget:
    def test_one_free_pair(self):
        gadget = build_matching_gadget(ForbiddenDegreeProblem((1, 1), frozenset()))
        assert gadget.labels == [("v", 0, 1), ("v", 1, 0)]
        assert gadget.edges == [(0, 1)]
        assert perfect_matching(2, gadget.edges) == [(0, 1)]

    def test_forbidden_unique_pair(self):
        gadget = build_matching_gadget(ForbiddenDegreeProblem((1, 1), frozenset({(0, 1)})))
        assert gadget.edges == []
        assert perfect_matching(gadget.n_vertices, gadget.edges) is None

    def test_zero_residuals_use_enforcers(self):
        gadget = build_matching_gadget(ForbiddenDegreeProblem((0, 0), frozenset()))
        assert gadget.n_vertices == 4
        index = gadget.index
        pm = perfect_matching(gadget.n_vertices, gadget.edges)
        assert sorted(pm) == sorted(
            tuple(sorted((index["v", i, 1 - i], index["u", i, 0]))) for i in range(2)
        )

    def test_residual_too_large(self):
        with pytest.raises(NotRealizedError):
            build_matching_gadget(ForbiddenDegreeProblem((2, 1), frozenset()))
        assert solve_forbidden_degree(ForbiddenDegreeProblem((2, 1, 1), frozenset({(0, 1)}))) is None


class TestMatching:
    def test_four_cycle(self):
        assert len(perfect_matching(4, [(0, 1), (1, 2), (2, 3), (3, 0)])) == 2

    def test_triangle(self):
        assert perfect_matching(3, [(0, 1), (1, 2), (0, 2)]) is None

    def test_two_triangles_joined(self):
        edges = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]
        assert has_perfect_matching_brute(6, edges)
        pm = perfect_matching(6, edges)
        assert pm is not None and sorted(v for e in pm for v in e) == list(range(6))
        assert all(e in edges or e[::-1] in edges for e in pm)

    def test_blossom_needed_after_greedy(self):
        # greedy start matches 1-2; augmenting 0 -> 5 needs the odd cycle 1-2-3
        edges = [(1, 2), (0, 1), (2, 3), (1, 3), (3, 4), (4, 5)]
        assert perfect_matching(6, edges) is not None


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 9), st.floats(0, 1), st.integers(0, 2**32 - 1))
def test_maximum_matching_matches_brute_force(n, p, seed):
    rng = random.Random(seed)
    edges = [(a, b) for a, b in combinations(range(n), 2) if rng.random() < p]
    mate = maximum_matching(n, edges)
    eset = set(edges)
    for v, m in enumerate(mate):
        if m != -1:
            assert mate[m] == v and ((v, m) in eset or (m, v) in eset)
    assert sum(m != -1 for m in mate) // 2 == max_matching_size_brute(n, edges)
    assert (perfect_matching(n, edges) is not None) == has_perfect_matching_brute(n, edges)


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 7), st.floats(0, 1), st.floats(0, 0.7), st.integers(0, 2**32 - 1))
def test_realize_star_on_realizable_instances(n, p, wild, seed):
    rng = random.Random(seed)
    inst, _ = random_class_regular(rng, n, p)
    m = [list(row) for row in inst.matrix]
    for i in range(inst.k):
        for j in range(i, inst.k):
            if rng.random() < wild:
                m[i][j] = m[j][i] = "*"
    star = StarInstance(inst.class_sizes, inst.class_degrees, m)
    g = realize_star(star)
    check_star_output(g, star)
    base = BuildState(star.zero_filled())
    grow_balanced(base)
    assert base.is_balanced()


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(1, 2), min_size=1, max_size=3), st.data())
def test_realize_star_agrees_with_brute_force(sizes, data):
    k = len(sizes)
    degrees = [data.draw(st.integers(0, sum(sizes) - 1)) for _ in sizes]
    m = [[0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i, k):
            cap = sizes[i] * (sizes[i] - 1) // 2 if i == j else sizes[i] * sizes[j]
            m[i][j] = m[j][i] = data.draw(st.one_of(st.just("*"), st.integers(0, cap)))
    star = StarInstance(sizes, degrees, m)
    try:
        g = realize_star(star)
    except NotRealizedError:
        assert not star_realizable_brute(sizes, degrees, m)
    else:
        check_star_output(g, star)
