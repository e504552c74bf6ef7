import random

import pytest

from laddertw.decomposition import exact_treewidth, validate
from laddertw.errors import PreconditionError
from laddertw.graph import build_graph
from laddertw.ladder import (Ladder, classify, extend_decomposition_pointed, extend_decomposition_square,
                             find_ladders, is_ladder, ladder_violations, lengthen, pointed_extension, shorten,
                             square_extension)

from families import complete, grid
from planted import plant, planted_suite, square_fixture


def apex_ladder(k):
    """Ladder of length k with one apex joined to all four corners (tw 3 for k >= 2)."""
    L = Ladder(range(k + 1), range(k + 1, 2 * k + 2))
    apex = 2 * k + 2
    return build_graph(sorted(L.grid_edges()) + [(apex, c) for c in L.cornerpoints]), L


def test_ladder_shape():
    L = Ladder([0, 1, 2], [3, 4, 5])
    assert L.length == 2
    assert L.cornerpoints == (0, 3, 2, 5)
    assert L.squares() == [(0, 3, 1, 4), (1, 4, 2, 5)]
    assert len(L.grid_edges()) == 7


def test_grid_alone_is_one_ladder():
    ladders = find_ladders(grid(2, 5))
    assert len(ladders) == 1 and ladders[0].length == 4


def test_chord_breaks_induced_ladder():
    g = build_graph(grid(2, 5).edges() + [(0, 6)])
    assert not is_ladder(g, Ladder(range(5), range(5, 10)))
    assert [L.vertices for L in find_ladders(g)] == [frozenset({1, 2, 3, 4, 6, 7, 8, 9})]


def test_interior_attachment_is_rejected():
    g, L = apex_ladder(3)
    h = build_graph(g.edges() + [(1, 8)])
    assert any(v.startswith("boundary") for v in ladder_violations(h, L))


def test_detection_is_canonical_and_maximal():
    g, L = apex_ladder(4)
    found = find_ladders(g)
    assert found == [L.canonical()]
    assert find_ladders(g, min_length=5) == []


def test_circular_ladder():
    k = 6
    edges = [(i, (i + 1) % k) for i in range(k)] + [(k + i, k + (i + 1) % k) for i in range(k)]
    edges += [(i, k + i) for i in range(k)]
    ladders = find_ladders(build_graph(edges))
    assert ladders and all(L.length == 4 for L in ladders)


def test_classification():
    g, L = apex_ladder(3)
    cls = classify(g, L)
    assert not cls.disconnecting and cls.tw3_certified and cls.degree2_cornerpoints == ()
    g2, L2 = plant(random.Random(0), 3, 3, "disconnecting")
    assert classify(g2, L2).disconnecting


def test_shorten_and_lengthen_keep_corners():
    g, L = apex_ladder(6)
    g2, L2 = shorten(g, L, 2)
    assert L2.length == 2 and L2.cornerpoints == L.cornerpoints and is_ladder(g2, L2)
    g3, L3 = lengthen(g2, L2, 3)
    assert L3.length == 5 and L3.cornerpoints == L.cornerpoints and is_ladder(g3, L3)
    assert max(g3.vertices()) > max(g.vertices())
    with pytest.raises(PreconditionError):
        shorten(g, L, 0)
    with pytest.raises(PreconditionError):
        shorten(g, L, 7)


def test_preconditions_checked():
    with pytest.raises(PreconditionError):
        shorten(complete(4), Ladder([0, 1], [2, 3]), 1)


def test_square_extension_chains():
    g, td, L, idx = square_fixture()
    for step in range(3):
        ext = square_extension(g, td, L, idx)
        assert validate(ext.graph, ext.decomposition).ok
        assert ext.ladder.length == L.length + 1 and is_ladder(ext.graph, ext.ladder)
        assert ext.decomposition.width == 4
        g, td, L, idx = ext


def test_square_extension_needs_square_bag():
    g, L = apex_ladder(2)
    _, td = exact_treewidth(g)
    missing = next((i for i, b in enumerate(td.bags) if not any(set(s) <= b for s in L.squares())), None)
    if missing is not None:
        with pytest.raises(PreconditionError):
            extend_decomposition_square(g, td, L, missing)


def test_pointed_extension_keeps_width():
    for g, L in planted_suite(4, 15, range(1, 5), range(3, 8), "degree2", dense=4):
        width, td = exact_treewidth(g)
        g2, td2 = extend_decomposition_pointed(g, td, L)
        assert validate(g2, td2).ok
        assert td2.width == width
        assert g2.n == g.n + 2


def test_pointed_extension_requires_degree2_corner():
    g, L = apex_ladder(2)
    _, td = exact_treewidth(g)
    with pytest.raises(PreconditionError):
        extend_decomposition_pointed(g, td, L)


def independent_ladder_check(g, L):
    """Containment conditions checked straight from the definitions."""
    top, bottom = list(L.top), list(L.bottom)
    k = len(top) - 1
    grid_edges = {frozenset(e) for e in zip(top, top[1:])} | {frozenset(e) for e in zip(bottom, bottom[1:])}
    grid_edges |= {frozenset(e) for e in zip(top, bottom)}
    vs = set(top) | set(bottom)
    induced = {frozenset((u, v)) for u in vs for v in g.neighbors(u) if v in vs}
    corners = {top[0], top[k], bottom[0], bottom[k]}
    boundary_ok = all(set(g.neighbors(u)) <= vs for u in vs - corners)
    return len(vs) == 2 * (k + 1) and induced == grid_edges and boundary_ok


def test_apex_over_short_grid():
    g, L = apex_ladder(3)
    assert [x.length for x in find_ladders(g)] == [3]


def test_detected_ladders_pass_independent_check():
    for g, _ in planted_suite(12, 20, range(1, 7), range(2, 9)):
        for L in find_ladders(g):
            assert independent_ladder_check(g, L)


def test_disconnection_agrees_on_all_squares():
    for g, L in planted_suite(13, 10, range(2, 6), range(2, 8), "disconnecting"):
        assert classify(g, L).disconnecting


def test_lengthen_then_shorten_is_isomorphic():
    import networkx as nx
    from laddertw.plotting import to_networkx
    for g, L in planted_suite(14, 10, range(1, 6), range(2, 7)):
        g2, L2 = lengthen(g, L, 3)
        g3, L3 = shorten(g2, L2, L.length)
        assert nx.is_isomorphic(to_networkx(g3), to_networkx(g))
        g4, _ = shorten(g2, L2, L.length + 1)
        g5, _ = lengthen(g, L, 1)
        assert nx.is_isomorphic(to_networkx(g4), to_networkx(g5))


def test_pointed_extension_iterates():
    g, L = planted_suite(15, 1, [2], [5], "degree2", dense=4)[0]
    width, td = exact_treewidth(g)
    for step in range(4):
        g, td, L, _ = pointed_extension(g, td, L)
        assert L.length == 3 + step and is_ladder(g, L)
        assert validate(g, td).ok and td.width == width
    assert exact_treewidth(g).width == width


def test_observation_bound_on_fixtures():
    for g, L in planted_suite(16, 15, range(2, 6), range(2, 8)):
        assert exact_treewidth(g).width >= 3
