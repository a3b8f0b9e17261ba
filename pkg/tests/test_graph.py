import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _corpus import brute_balanced_order, from_nx
from tropmwis.errors import InvalidInput, SizeCapExceeded
from tropmwis.graph import (Separation, all_independent_sets, balanced_separation,
                            balanced_separation_order, build_graph, connected_components,
                            disjoint_union, gen_clique, gen_cycle, gen_grid, gen_path,
                            gen_subdivided_clique, is_balanced_for, is_independent_set,
                            neighborhood, separation_violation)


@st.composite
def small_graphs(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return build_graph(n, [p for p, k in zip(pairs, keep) if k])


def test_build_path():
    G = build_graph(3, [(0, 1), (1, 2)])
    assert G.edges == ((0, 1), (1, 2))
    assert G.neighbors(1) == (0, 2)


def test_build_dedups():
    G = build_graph(3, [(0, 1), (0, 1)])
    assert G.edge_count == 1 and G.degree(2) == 0


def test_build_rejects_loop_and_range():
    with pytest.raises(InvalidInput):
        build_graph(2, [(0, 0)])
    with pytest.raises(InvalidInput):
        build_graph(2, [(0, 2)])


def test_neighborhood_examples():
    P3 = gen_path(3)
    assert neighborhood(P3, {1}) == {0, 2}
    assert neighborhood(P3, {0, 2}) == {1}
    assert neighborhood(P3, set(), closed=True) == frozenset()
    assert neighborhood(P3, {0}, closed=True) == {0, 1}


def test_independence_examples():
    C4 = gen_cycle(4)
    assert is_independent_set(C4, {0, 2})
    assert not is_independent_set(C4, {0, 1})
    assert is_independent_set(C4, set())


def test_components_examples():
    assert connected_components(gen_path(3)) == [frozenset({0, 1, 2})]
    assert len(connected_components(build_graph(2, []))) == 2
    sizes = sorted(len(c) for c in connected_components(disjoint_union(gen_clique(3), gen_clique(2))))
    assert sizes == [2, 3]


def test_grid_examples():
    assert nx.is_isomorphic(nx.Graph(list(gen_grid(2, 2).edges)), nx.cycle_graph(4))
    G = gen_grid(3, 3)
    assert (G.n, G.edge_count, G.max_degree) == (9, 12, 4)
    assert gen_grid(1, 5).edges == gen_path(5).edges


def test_subdivided_clique_examples():
    C6 = gen_subdivided_clique(3)
    assert nx.is_isomorphic(nx.Graph(list(C6.edges)), nx.cycle_graph(6))
    G = gen_subdivided_clique(4)
    assert (G.n, G.edge_count) == (10, 12)
    assert nx.is_isomorphic(nx.Graph(list(gen_subdivided_clique(2).edges)), nx.path_graph(3))


def test_independent_sets_of_p3():
    assert sorted(map(sorted, all_independent_sets(gen_path(3)))) == [[], [0], [0, 2], [1], [2]]


# balanced separations; values checked against the networkx brute force in _corpus

def test_balanced_order_examples():
    G = gen_grid(3, 3)
    assert balanced_separation_order(G, G.vertices()) == 2
    K4 = gen_clique(4)
    assert balanced_separation_order(K4, K4.vertices()) == 2
    # a path on three vertices needs its middle vertex: S = {} leaves all of X on one side
    P3 = gen_path(3)
    assert balanced_separation_order(P3, P3.vertices()) == 1
    assert brute_balanced_order(P3, 3) == 1


def test_balanced_order_matches_brute_force_on_grids():
    for k, want in ((3, 2), (4, 3)):
        G = gen_grid(k, k)
        assert balanced_separation_order(G, G.vertices()) == want == brute_balanced_order(G, want)


def test_balanced_separation_degenerate_and_cap():
    with pytest.raises(InvalidInput):
        balanced_separation_order(gen_path(3), {0})
    with pytest.raises(SizeCapExceeded):
        balanced_separation_order(gen_grid(5, 5), range(25))


@settings(max_examples=60, deadline=None)
@given(small_graphs(7), st.data())
def test_balanced_separation_is_valid(G, data):
    X = data.draw(st.sets(st.integers(0, G.n - 1), min_size=min(2, G.n), max_size=G.n))
    if len(X) < 2:
        return
    sep = balanced_separation(G, X)
    assert separation_violation(G, sep) is None
    assert is_balanced_for(sep, frozenset(X))


def test_separation_violation_reports():
    P3 = gen_path(3)
    assert separation_violation(P3, Separation(frozenset({0}), frozenset(), frozenset({1, 2})))
    assert separation_violation(P3, Separation(frozenset({0}), frozenset({1}), frozenset({2}))) is None


@settings(max_examples=40, deadline=None)
@given(small_graphs(8))
def test_independent_sets_match_networkx(G):
    H = nx.Graph()
    H.add_nodes_from(range(G.n))
    H.add_edges_from(G.edges)
    comp = nx.complement(H)
    cliques = {frozenset(c) for c in nx.enumerate_all_cliques(comp)} | {frozenset()}
    assert set(all_independent_sets(G)) == cliques


def test_from_nx_roundtrip():
    G = from_nx(nx.petersen_graph())
    assert (G.n, G.edge_count, G.max_degree) == (10, 15, 3)
