import pytest

from tropmwis.errors import InvalidInput
from tropmwis.graph import build_graph, gen_clique, gen_path
from tropmwis.minors import (InducedMinorModel, cluster_degree, gen_cluster_expander,
                             induced_minor_violation, low_degree_minor_model, quotient_graph,
                             random_expander, spectral_certificate, validate_induced_minor_model)


def _model(*clusters):
    return InducedMinorModel(tuple(frozenset(c) for c in clusters))


def test_model_examples():
    P3, P2 = gen_path(3), gen_path(2)
    assert not validate_induced_minor_model(P3, P2, _model({0}, {2}))
    assert validate_induced_minor_model(P3, P2, _model({0}, {1}))
    assert "connectivity" in induced_minor_violation(P3, P2, _model({0, 2}, {1}))
    assert "disjointness" in induced_minor_violation(P3, P2, _model({0, 1}, {1}))
    # clusters touching where H has no edge
    assert "adjacency" in induced_minor_violation(P3, build_graph(2, []), _model({0}, {1}))


@pytest.mark.parametrize("w,d", [(8, 2), (12, 3), (16, 4), (9, 3)])
def test_cluster_expander_structure(w, d):
    G, model = gen_cluster_expander(w, d, seed=0)
    base = quotient_graph(G, model)
    assert validate_induced_minor_model(G, base, model)
    assert G.n == d * base.n
    for c in model.clusters:
        assert len(c) == d
        assert cluster_degree(G, c) == d - 1  # every cluster is a clique
    # degree grows by at most a factor d + 1 over the base
    assert G.max_degree <= (d + 1) * base.max_degree


def test_cluster_expander_examples():
    G, model = gen_cluster_expander(8, 2, seed=3)
    assert G.n == 8 and len(model) == 4
    K8, m = gen_cluster_expander(4, 8, seed=0)
    assert K8.edges == gen_clique(8).edges and len(m) == 1
    with pytest.raises(InvalidInput):
        gen_cluster_expander(0, 2)


def test_expander_is_seeded():
    assert random_expander(10, 5) == random_expander(10, 5)
    base, _ = random_expander(10, 5)
    ok, lam2 = spectral_certificate(base, 3)
    assert ok and lam2 < 3


def test_low_degree_singletons_unchanged():
    P3, P2 = gen_path(3), gen_path(2)
    m = _model({0}, {1})
    assert low_degree_minor_model(P3, P2, m) == m


def test_low_degree_star_with_pendant_path():
    # star centre 0, leaves 1..5; pendant path 5 - 6 - 7
    G = build_graph(8, [(0, i) for i in range(1, 6)] + [(5, 6), (6, 7)])
    H = gen_path(2)
    m = _model({0, 1, 2, 3, 4, 5}, {6})
    assert validate_induced_minor_model(G, H, m)
    out = low_degree_minor_model(G, H, m)
    assert validate_induced_minor_model(G, H, out)
    assert all(cluster_degree(G, c) <= H.max_degree for c in out.clusters)
    assert 5 in out.clusters[0]


def test_low_degree_rejects_invalid_model():
    with pytest.raises(InvalidInput):
        low_degree_minor_model(gen_path(3), gen_path(2), _model({0}, {2}))
