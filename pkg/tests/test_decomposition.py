import random

import pytest
from hypothesis import given, settings, strategies as st

from laddertw.decomposition import (Budget, TreeDecomposition, degeneracy, elimination_width, exact_treewidth,
                                    lower_bound, max_clique, min_fill_ordering, minor_min_width,
                                    ordering_to_decomposition, upper_bound_heuristic, validate)
from laddertw.errors import StructuralError, TreewidthUnknown
from laddertw.graph import build_graph

from families import complete, cycle, grid, petersen, random_connected_graph, random_tree
from oracles import naive_treewidth, subset_dp_treewidth


@st.composite
def small_graphs(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return build_graph(chosen, vertices=range(n))


def test_oracles_agree_with_each_other():
    rng = random.Random(5)
    for _ in range(60):
        g = random_connected_graph(rng.randint(1, 7), rng.random(), rng)
        assert naive_treewidth(g) == subset_dp_treewidth(g)


@given(small_graphs())
@settings(max_examples=150, deadline=None)
def test_engine_matches_naive_oracle(g):
    width, td = exact_treewidth(g)
    assert width == naive_treewidth(g)
    assert validate(g, td).ok and td.width == width


def test_engine_matches_subset_dp_on_larger_graphs():
    rng = random.Random(11)
    for _ in range(25):
        g = random_connected_graph(rng.randint(9, 12), rng.choice((0.2, 0.35, 0.5)), rng)
        assert exact_treewidth(g).width == subset_dp_treewidth(g)


@pytest.mark.parametrize("g, tw", [
    (complete(1), 0), (complete(5), 4), (cycle(7), 2), (grid(2, 6), 2), (grid(3, 3), 3),
    (grid(4, 4), 4), (petersen(), 4), (random_tree(12, random.Random(1)), 1),
])
def test_known_widths(g, tw):
    width, td = exact_treewidth(g)
    assert width == tw
    assert validate(g, td).ok


def test_disconnected_graph_witness_is_a_tree():
    g = build_graph([(0, 1), (1, 2), (2, 0), (3, 4)], vertices=[5])
    width, td = exact_treewidth(g)
    assert width == 2 and validate(g, td).ok


def test_empty_graph():
    assert exact_treewidth(build_graph([])).width == -1


def test_bounds_sandwich():
    rng = random.Random(3)
    for _ in range(40):
        g = random_connected_graph(rng.randint(2, 9), rng.random(), rng)
        tw = exact_treewidth(g).width
        assert max(degeneracy(g), minor_min_width(g), len(max_clique(g)) - 1) <= tw
        assert lower_bound(g) <= tw <= upper_bound_heuristic(g).width


def test_ordering_decomposition_matches_elimination_width():
    g = petersen()
    order = min_fill_ordering(g)
    td = ordering_to_decomposition(g, order)
    assert validate(g, td).ok
    assert td.width == elimination_width(g, order)


def test_budget_exceeded_reports_bounds():
    g = random_connected_graph(24, 0.35, random.Random(2))
    with pytest.raises(TreewidthUnknown) as info:
        exact_treewidth(g, Budget(max_states=5))
    assert info.value.lower <= info.value.upper


def test_budget_from_env(monkeypatch):
    monkeypatch.setenv("LADDERTW_MAX_SECONDS", "2.5")
    monkeypatch.setenv("LADDERTW_MAX_STATES", "100")
    assert Budget.from_env() == Budget(2.5, 100)
    monkeypatch.delenv("LADDERTW_MAX_SECONDS")
    monkeypatch.delenv("LADDERTW_MAX_STATES")
    assert Budget.from_env() == Budget(None, None)


class TestValidate:
    g = cycle(4)
    good = TreeDecomposition([{0, 1, 2}, {0, 2, 3}], [(0, 1)])

    def test_good(self):
        assert validate(self.g, self.good).ok

    def test_missing_vertex(self):
        td = TreeDecomposition([{0, 1, 2}, {0, 2}], [(0, 1)])
        rep = validate(self.g, td)
        assert [(v.axiom, v.witness) for v in rep.violations if v.axiom == "tw1"] == [("tw1", 3)]

    def test_missing_edge(self):
        td = TreeDecomposition([{0, 1, 2}, {2, 3}, {0, 2}], [(0, 1), (0, 2)])
        rep = validate(self.g, td)
        assert [(v.axiom, v.witness) for v in rep.violations] == [("tw2", (0, 3))]

    def test_running_intersection(self):
        td = TreeDecomposition([{0, 1}, {1, 2}, {2, 3, 0}], [(0, 1), (1, 2)])
        rep = validate(self.g, td)
        assert [(v.axiom, v.witness) for v in rep.violations] == [("tw3", 0)]

    def test_every_violation_reported(self):
        td = TreeDecomposition([{0, 1}, {1, 2}, {0, 7}], [(0, 1), (1, 2)])
        axioms = {v.axiom for v in validate(self.g, td).violations}
        assert axioms == {"tw1", "tw2", "tw3"}

    def test_cycle_in_bag_graph(self):
        td = TreeDecomposition([{0, 1, 2}, {0, 2, 3}, {0, 2}], [(0, 1), (1, 2), (2, 0)])
        with pytest.raises(StructuralError) as info:
            validate(self.g, td)
        assert info.value.witness == (2, 0)

    def test_disconnected_bag_graph(self):
        td = TreeDecomposition([{0, 1, 2}, {0, 2, 3}, {1}], [(0, 1)])
        with pytest.raises(StructuralError) as info:
            validate(self.g, td)
        assert info.value.witness == (2,)


def test_decomposition_helpers():
    td = TreeDecomposition([{1, 2}, {2, 3}], [(0, 1)])
    td2, i = td.add_bag({3, 4}, 1)
    assert i == 2 and td2.tree_edges[-1] == (1, 2)
    assert td2.width == 1
    assert td2.replace(3, 2).bags[1] == frozenset({2})
    assert td2.find_bag({3, 4}) == 2
