import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jdm.core import FeasibilityError, JdmInstance, LabeledGraph, validate_realization
from jdm.realizer import BuildState, SeedError, add_edge_balanced, balanced_realize, simple_realize
from jdm.sampler import enumerate_omega

from oracles import brute_realizations, random_class_regular

TRIANGLE = JdmInstance([3], [2], [[3]])
MIXED = JdmInstance([2, 2], [2, 1], [[1, 2], [2, 0]])
TWO_REGULAR_6 = JdmInstance([6], [2], [[6]])


def _keys(graphs):
    return {g.key() for g in graphs}


class TestSimple:
    def test_triangle(self):
        assert simple_realize(TRIANGLE).key() == ((0, 1), (0, 2), (1, 2))

    def test_mixed_is_in_omega(self):
        g = simple_realize(MIXED)
        assert g.key() in _keys(brute_realizations(MIXED))

    def test_infeasible_raises(self):
        with pytest.raises(FeasibilityError, match="degree"):
            simple_realize(JdmInstance([3], [1], [[2]]))


class TestBalanced:
    def test_triangle(self):
        assert balanced_realize(TRIANGLE).key() == ((0, 1), (0, 2), (1, 2))

    def test_two_regular_member_of_omega(self):
        omega = enumerate_omega(TWO_REGULAR_6)
        assert len(omega) == 70
        assert balanced_realize(TWO_REGULAR_6).key() in _keys(omega)

    def test_seeded_by_spanning_tree_stays_connected(self):
        tree = LabeledGraph([2, 2], [(0, 2), (1, 3), (0, 1)])
        g = balanced_realize(MIXED, tree)
        assert validate_realization(g, MIXED) and g.is_connected()
        assert g.key() in _keys(brute_realizations(MIXED))

    def test_bad_seeds(self):
        with pytest.raises(SeedError):
            balanced_realize(MIXED, LabeledGraph([2, 2], [(0, 2), (0, 3), (1, 2)]))
        star = LabeledGraph([4], [(0, 1), (0, 2), (0, 3)])
        with pytest.raises(SeedError, match="balanced"):
            balanced_realize(JdmInstance([4], [3], [[6]]), star)

    def test_deterministic(self):
        inst, _ = random_class_regular(random.Random(11), 16, 0.3)
        assert balanced_realize(inst) == balanced_realize(inst)

    def test_first_step_on_empty_graph_is_a1(self):
        state = BuildState(MIXED)
        add_edge_balanced(state, 0, 1)
        assert state.last_case == "A1"
        assert state.graph.key() == ((0, 2),)


class TestScriptedCases:
    def test_a2_rewires_off_a_high_vertex(self):
        # classes {a}, {b, c, d}, {e}; every N_0 x N_1 pair already adjacent
        inst = JdmInstance([1, 3, 1], [2, 2, 2], [[0, 2, 0], [2, 1, 2], [0, 2, 0]])
        seed = LabeledGraph(inst.class_sizes, [(0, 1), (2, 3), (2, 4), (3, 4)])
        state = BuildState(inst, seed)
        before = [row[:] for row in state.realized]
        add_edge_balanced(state, 0, 1)
        assert state.last_case == "A2"
        assert state.graph.key() == ((0, 1), (0, 2), (1, 3), (2, 4), (3, 4))
        before[0][1] += 1
        before[1][0] += 1
        assert state.realized == before
        assert state.is_balanced() and state.graph.is_connected()
        assert validate_realization(state.graph, inst)

    def test_b3_single_low_vertex(self):
        # class 0 = {w, p, q} with w adjacent to both p and q; only p-q is free
        inst = JdmInstance([3, 2], [4, 3], [[3, 6], [6, 0]])
        seed = LabeledGraph(inst.class_sizes, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4)])
        state = BuildState(inst, seed)
        assert state.low(0) == [0] and state.high(0) == [1, 2]
        edges_before = state.graph.num_edges()
        add_edge_balanced(state, 0, 0)
        assert state.last_case == "B3"
        assert state.realized[0][0] == 3 and state.realized[0][1] == 4
        assert state.graph.num_edges() == edges_before + 1
        assert state.graph.key() == ((0, 1), (0, 2), (0, 3), (1, 2), (1, 4), (2, 3), (2, 4))
        assert state.is_balanced()

    def test_a2_prime_mirrors_a2(self):
        inst = JdmInstance([3, 1, 1], [2, 2, 2], [[1, 2, 2], [2, 0, 0], [2, 0, 0]])
        seed = LabeledGraph(inst.class_sizes, [(0, 3), (1, 2), (1, 4), (2, 4)])
        state = BuildState(inst, seed)
        add_edge_balanced(state, 0, 1)
        assert state.last_case == "A2'"
        assert state.graph.key() == ((0, 2), (0, 3), (1, 3), (1, 4), (2, 4))
        assert validate_realization(state.graph, inst)

    def test_a3_two_donors(self):
        # every pair touching a low vertex is taken; only the high-high pair is free
        inst = JdmInstance([2, 2, 4], [4, 4, 2], [[0, 4, 4], [4, 0, 4], [4, 4, 0]])
        seed = LabeledGraph(inst.class_sizes, [(0, 2), (0, 3), (1, 2), (1, 4), (1, 5), (3, 6), (3, 7)])
        state = BuildState(inst, seed)
        add_edge_balanced(state, 0, 1)
        assert state.last_case == "A3"
        assert state.graph.key() == ((0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 5), (2, 6), (3, 7))
        assert state.realized[0][1] == 4 and state.realized[0][2] == 2 and state.realized[1][2] == 2
        assert state.is_balanced()

    def test_b3_prime_two_low_vertices(self):
        inst = JdmInstance([4, 4], [4, 1], [[6, 4], [4, 0]])
        seed = LabeledGraph(inst.class_sizes, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 4), (2, 5), (3, 6), (3, 7)])
        state = BuildState(inst, seed)
        add_edge_balanced(state, 0, 0)
        assert state.last_case == "B3'"
        g = state.graph
        assert g.key() == ((0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 6), (2, 3), (2, 5), (3, 7))
        assert validate_realization(g, inst)

    def test_quota_exhausted_is_a_caller_bug(self):
        with pytest.raises(AssertionError):
            add_edge_balanced(BuildState(TRIANGLE, LabeledGraph([3], [(0, 1), (1, 2), (0, 2)])), 0, 0)


def _instrumented_build(inst, rng=None):
    cases = []
    comps = []

    def on_step(state):
        assert state.is_balanced()
        assert state.within_quotas()
        cases.append(state.last_case)
        comps.append(len(state.graph.components()))

    g = balanced_realize(inst, rng=rng, on_step=on_step)
    assert all(a >= b for a, b in zip(comps, comps[1:]))
    return g, cases


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 20), st.floats(0.05, 0.9), st.integers(0, 2**32 - 1), st.booleans())
def test_balanced_build_invariants(n, p, seed, randomized):
    inst, _ = random_class_regular(random.Random(seed), n, p)
    g, cases = _instrumented_build(inst, random.Random(seed) if randomized else None)
    assert len(cases) == inst.total_edges()
    g.check_simple()
    assert validate_realization(g, inst)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 20), st.floats(0.05, 0.9), st.integers(0, 2**32 - 1))
def test_simple_realize_valid(n, p, seed):
    inst, _ = random_class_regular(random.Random(seed), n, p)
    g = simple_realize(inst)
    g.check_simple()
    assert validate_realization(g, inst)


def test_random_builds_reach_the_rewiring_cases():
    seen = set()
    rng = random.Random(5)
    for _ in range(300):
        inst, _ = random_class_regular(rng, rng.randint(4, 24), rng.uniform(0.1, 0.9))
        seen.update(_instrumented_build(inst)[1])
    assert {"A1", "A2", "B1", "B2", "B2'"} <= seen
