import pytest
from hypothesis import given, settings

from test_circuit import random_circuits
from test_graph import small_graphs
from tropmwis.circuit import monomials
from tropmwis.compilers import compile_treewidth
from tropmwis.decomposition import (TreedepthForest, heuristic_tree_decomposition,
                                    heuristic_treedepth_forest)
from tropmwis.errors import CircuitError, InvalidInput
from tropmwis.formats import (read_circuit, read_family, read_forest, read_graph, read_model,
                              read_text, read_tree_decomposition, write_circuit, write_family,
                              write_forest, write_graph, write_model, write_tree_decomposition)
from tropmwis.graph import gen_grid, gen_path
from tropmwis.minors import gen_cluster_expander


@settings(max_examples=60, deadline=None)
@given(small_graphs(9))
def test_graph_round_trip(G):
    text = write_graph(G)
    assert read_graph(text) == G and write_graph(read_graph(text)) == text


def test_graph_rejects_bad_input():
    with pytest.raises(InvalidInput):
        read_graph("p is 3 2\ne 0 1\n")  # edge count mismatch
    with pytest.raises(InvalidInput):
        read_graph("e 0 1\n")
    with pytest.raises(InvalidInput):
        read_graph("p is 2 1\ne 0 x\n")


def test_comments_and_blank_lines():
    assert read_graph("# path\n\np is 2 1\n  e 0 1\n") == gen_path(2)


def test_decomposition_and_forest_round_trip():
    G = gen_grid(3, 4)
    T = heuristic_tree_decomposition(G, 0)
    text = write_tree_decomposition(T, G.n)
    T2, n = read_tree_decomposition(text)
    assert n == G.n and T2 == T and write_tree_decomposition(T2, n) == text
    F = heuristic_treedepth_forest(G)
    assert read_forest(write_forest(F), G.n) == F
    assert read_forest("r 1\nc 1 0\nc 1 2\n") == TreedepthForest((1, None, 1))
    with pytest.raises(InvalidInput):
        read_forest("r 0\n", 2)
    with pytest.raises(InvalidInput):
        read_tree_decomposition("s td 2 2 3\nb 0 0 1\n0 1\n")


@settings(max_examples=80, deadline=None)
@given(random_circuits())
def test_circuit_round_trip(C):
    text = write_circuit(C)
    C2 = read_circuit(text)
    assert C2 == C and write_circuit(C2) == text


def test_circuit_examples():
    C = compile_treewidth(gen_path(3), heuristic_tree_decomposition(gen_path(3)))
    assert monomials(read_circuit(write_circuit(C))).monomials == monomials(C).monomials
    E = read_circuit("o none\n")
    assert E.is_empty and write_circuit(E) == "o none\n"
    with pytest.raises(CircuitError):
        read_circuit("c 0 5\no 0\n")  # constants other than 0
    with pytest.raises(CircuitError):
        read_circuit("v 1 0\no 1\n")  # ids must start at 0
    with pytest.raises(InvalidInput):
        read_circuit("v 0 0\n")


def test_family_and_model_round_trip():
    sets = [frozenset({3, 1}), frozenset(), frozenset({0})]
    text = write_family(sets)
    assert text == "1 3\n-\n0\n" and read_family(text) == sets
    _, m = gen_cluster_expander(8, 2, seed=0)
    assert read_model(write_model(m)) == m
    with pytest.raises(InvalidInput):
        read_model("f 1 0\n")


def test_read_text_missing(tmp_path):
    with pytest.raises(InvalidInput):
        read_text(tmp_path / "nope.txt")
