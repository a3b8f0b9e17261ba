"""Tropical (max-plus) circuits for maximum weight independent set: compilers from
tree decompositions and treedepth forests, verification against exact oracles,
separator extraction, independent hitting sets, and executable lower-bound audits."""

__version__ = "0.1.0"

from .audit import (AuditReport, BoundQuery, audit_circuit, audit_formula, bound_gates,
                    extract_separators, formula_separators, is_typical)
from .circuit import BOTTOM, CircuitBuilder, TropicalCircuit, evaluate, monomials, validate_circuit
from .compilers import compile_bruteforce, compile_cluster_expander, compile_treedepth, compile_treewidth
from .graph import Graph, build_graph, gen_cycle, gen_grid, gen_path
from .hitting import SetFamily, hit_family_exact, hit_family_moser_tardos, uniform_independent_set
from .verify import mwis_oracle, verify_mwis_circuit

__all__ = [
    "AuditReport", "BoundQuery", "audit_circuit", "audit_formula", "bound_gates",
    "extract_separators", "formula_separators", "is_typical",
    "BOTTOM", "CircuitBuilder", "TropicalCircuit", "evaluate", "monomials", "validate_circuit",
    "compile_bruteforce", "compile_cluster_expander", "compile_treedepth", "compile_treewidth",
    "Graph", "build_graph", "gen_cycle", "gen_grid", "gen_path",
    "SetFamily", "hit_family_exact", "hit_family_moser_tardos", "uniform_independent_set",
    "mwis_oracle", "verify_mwis_circuit",
]
