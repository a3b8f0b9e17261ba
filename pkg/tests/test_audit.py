import math

import mpmath
import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _corpus import atlas_connected, from_nx
from test_graph import small_graphs
from tropmwis.audit import (BoundQuery, audit_circuit, audit_formula, bound_gates,
                            check_extraction, cosupport_masks, drop_top_branch, extract_separators,
                            formula_separators, is_typical)
from tropmwis.circuit import (MAX, PLUS, VAR, Gate, TropicalCircuit, computes, support,
                              validate_circuit)
from tropmwis.compilers import compile_bruteforce, compile_treedepth, compile_treewidth
from tropmwis.decomposition import (exact_treedepth_small, exact_treewidth_small,
                                    heuristic_tree_decomposition)
from tropmwis.errors import InvalidInput
from tropmwis.graph import (balanced_separation_order, build_graph, gen_cycle, gen_grid, gen_path,
                            is_independent_set)
from tropmwis.hitting import hits_all


def test_extract_needs_two_vertices():
    C = validate_circuit([Gate(VAR, 0)], 0)
    with pytest.raises(InvalidInput):
        extract_separators(C, build_graph(1, []))


def test_extract_on_exact_3x3():
    G = gen_grid(3, 3)
    C = compile_treewidth(G, exact_treewidth_small(G)[1])
    fam = extract_separators(C, G)
    k = balanced_separation_order(G, G.vertices())
    assert k == 2
    assert all(len(s) >= k for s in fam.separators)
    assert len(fam) <= C.size
    assert check_extraction(G, fam) == []


def test_targets_contain_separators_for_correct_circuits():
    G = gen_grid(4, 4)
    C = compile_treewidth(G, heuristic_tree_decomposition(G, 0))
    for e in extract_separators(C, G).entries:
        assert e.separator <= e.target


def test_audit_consistent_on_correct_4x4():
    G = gen_grid(4, 4)
    rep = audit_circuit(compile_treewidth(G, heuristic_tree_decomposition(G, 0)), G)
    assert rep.verdict == "consistent" and rep.counterexample is None


def test_audit_refutes_broken_3x3():
    G = gen_grid(3, 3)
    C = compile_treewidth(G, exact_treewidth_small(G)[1])
    rep = audit_circuit(drop_top_branch(C, seed=1), G)
    assert rep.verdict == "refuted"
    cx = rep.counterexample
    I = frozenset(cx["independent_set"])
    assert is_independent_set(G, I) and hits_all(G, rep.targets, I)
    assert not computes(drop_top_branch(C, seed=1), I)
    assert cx["circuit_value"] < cx["oracle_value"] == len(I)


def test_audit_empty_family():
    rep = audit_circuit(TropicalCircuit((), None), gen_path(3))
    assert rep.verdict == "consistent" and "empty family" in rep.flags
    assert rep.to_json()["separators"] == []


def test_audit_json_fields():
    G = gen_grid(3, 3)
    rep = audit_circuit(compile_treewidth(G, heuristic_tree_decomposition(G, 0)), G).to_json()
    for key in ("verdict", "separators", "counterexample", "bound_context", "timings"):
        assert key in rep
    assert rep["bound_context"]["x_size"] == 9


# formulas

def _max_pair():
    # o = max(x0 + x2, x1) over P3
    return validate_circuit([Gate(VAR, 0), Gate(VAR, 2), Gate(PLUS, 0, 1), Gate(VAR, 1),
                             Gate(MAX, 2, 3)], 4)


def test_formula_separator_examples():
    G = gen_path(3)
    F = _max_pair()
    sep = formula_separators(F, G).sep
    assert sep[4] == frozenset()  # Sup(o) = V
    assert sep[2] == support(F, 4) - support(F, 2) == {1}
    assert sep[0] == sep[1] == sep[2]
    diamond = validate_circuit([Gate(VAR, 0), Gate(PLUS, 0, 0)], 1)
    with pytest.raises(InvalidInput):
        formula_separators(diamond, G)


def _recompute_ok(F, G, smap):
    """Check the three defining equations gate by gate from the map itself."""
    V = frozenset(G.vertices())
    assert smap.sep[F.output] == V - support(F, F.output)
    for i, sep in smap.sep.items():
        g = F.gates[i]
        if g.kind in (MAX, PLUS):
            for c in (g.a, g.b):
                want = sep if g.kind == PLUS else (sep | support(F, i)) - support(F, c)
                assert smap.sep[c] == want


def test_formula_separator_equations_small_atlas():
    for G in atlas_connected(6):
        F = compile_treedepth(G, exact_treedepth_small(G)[1])
        _recompute_ok(F, G, formula_separators(F, G))


def test_typical_examples():
    G = gen_path(3)
    no_plus = validate_circuit([Gate(VAR, 0), Gate(VAR, 1), Gate(MAX, 0, 1)], 2)
    assert is_typical(no_plus, G, set()) and is_typical(no_plus, G, {0, 2})
    P7 = gen_path(7)
    F = compile_treedepth(P7, exact_treedepth_small(P7)[1])
    assert not is_typical(F, P7, set())
    assert is_typical(F, P7, {0, 2, 4, 6})


def test_audit_formula_examples():
    T = from_nx(nx.balanced_tree(2, 2))
    F = compile_treedepth(T, exact_treedepth_small(T)[1])
    assert audit_formula(F, T).verdict == "consistent"
    P7 = gen_path(7)
    F = compile_treedepth(P7, exact_treedepth_small(P7)[1])
    rep = audit_formula(drop_top_branch(F, seed=0), P7)
    assert rep.verdict == "refuted"
    assert not computes(drop_top_branch(F, seed=0), rep.counterexample["independent_set"])
    E = build_graph(3, [])
    rep = audit_formula(compile_bruteforce(E), E)
    assert rep.verdict == "inconclusive" and rep.flags[0].startswith("skipped")


def test_audit_formula_fallback_family():
    G = gen_path(9)
    F = compile_treedepth(G, exact_treedepth_small(G)[1])
    rep = audit_formula(drop_top_branch(F, seed=0), G)
    assert rep.verdict == "refuted"
    assert rep.counterexample["family"] == "circuit-extraction"


def test_cosupport_of_formula_matches_separators():
    G = gen_cycle(6)
    F = compile_treedepth(G, exact_treedepth_small(G)[1])
    co = cosupport_masks(F)
    smap = formula_separators(F, G)
    sup = F.support_masks
    for i, sep in smap.sep.items():
        rest = {v for v in G.vertices() if not (sup[i] | co[i]) >> v & 1}
        assert rest == sep


@settings(max_examples=40, deadline=None)
@given(small_graphs(8), st.integers(0, 20))
def test_correct_circuits_never_refuted(G, seed):
    if G.n < 2:
        return
    for C in (compile_treewidth(G, heuristic_tree_decomposition(G, seed)), compile_bruteforce(G)):
        fam = extract_separators(C, G)
        assert check_extraction(G, fam) == []
        assert audit_circuit(C, G, seed=seed).verdict != "refuted"
    F = compile_treedepth(G, exact_treedepth_small(G)[1])
    assert audit_formula(F, G, seed=seed).verdict != "refuted"


@settings(max_examples=40, deadline=None)
@given(small_graphs(8), st.integers(0, 20))
def test_refutations_are_validated(G, seed):
    if G.n < 2:
        return
    C = drop_top_branch(compile_treewidth(G, heuristic_tree_decomposition(G, seed)), seed)
    if C is None or C.is_empty:
        return
    rep = audit_circuit(C, G, seed=seed)
    if rep.verdict == "refuted":
        I = frozenset(rep.counterexample["independent_set"])
        assert hits_all(G, rep.targets, I) and not computes(C, I)


# bounds

def test_bound_examples():
    b = bound_gates(BoundQuery("treewidth-circuit", 5000, 4))
    assert b.k == 1250 and b.value >= mpmath.mpf(10) ** 21
    assert float(b.value) == pytest.approx(math.exp(1250 / 24) / 6, rel=1e-12)
    b = bound_gates(BoundQuery("td-formula", 24, 2))
    assert b.vacuous and float(b.value) == pytest.approx(math.e / 12)
    b = bound_gates(BoundQuery("minor-circuit", 122880, 4, value_is_k=True))
    assert float(b.value) == pytest.approx(math.exp(7) / 30)
    b = bound_gates(BoundQuery("minor-circuit", 4 * 122880, 4))
    assert b.k == 122880
    with pytest.raises(InvalidInput):
        bound_gates(BoundQuery("treewidth-circuit", 0, 4))
    with pytest.raises(InvalidInput):
        bound_gates(BoundQuery("clique-width", 10, 4))
