"""Compilers from graphs and their decompositions to MWIS-circuits and MWIS-formulas."""
from __future__ import annotations

from .circuit import VAR, CircuitBuilder, Gate, TropicalCircuit
from .config import caps
from .decomposition import (TreeDecomposition, TreedepthForest, validate_tree_decomposition,
                            validate_treedepth_forest)
from .errors import SizeCapExceeded
from .graph import Graph, components_mask, iter_bits, popcount, to_mask
from .minors import gen_cluster_expander, quotient_graph


def compile_treewidth(G: Graph, T: TreeDecomposition) -> TropicalCircuit:
    """MWIS-circuit by dynamic programming over a nice version of ``T``.

    Every table cell is indexed by an independent subset ``S`` of the current
    bag and computes the best weight of the vertices already forgotten below,
    compatible with ``S``.  Bag vertices are paid for only when forgotten, so a
    join is a plain sum of the two child cells.
    """
    validate_tree_decomposition(G, T)
    b = CircuitBuilder(share=True)
    if G.n == 0:
        return b.build(b.zero())
    masks = G.masks
    bags = [to_mask(bag) for bag in T.bags]
    adj = T.tree_adjacency()

    def forget(table, v):
        bit = 1 << v
        out = {}
        for S, g in table.items():
            if S & bit:
                continue
            if S | bit in table:
                g = b.max(g, b.plus(b.var(v), table[S | bit]))
            out[S] = g
        return out

    def introduce(table, v):
        bit = 1 << v
        out = dict(table)
        for S, g in table.items():
            if not masks[v] & S:
                out[S | bit] = g
        return out

    def move(table, src, dst):
        for v in iter_bits(src & ~dst):
            table = forget(table, v)
        for v in iter_bits(dst & ~src):
            table = introduce(table, v)
        return table

    order, parent = [0], {0: None}
    for t in order:
        for c in adj[t]:
            if c not in parent:
                parent[c] = t
                order.append(c)
    tables = {}
    for t in reversed(order):
        kids = [c for c in adj[t] if parent.get(c) == t]
        if not kids:
            tables[t] = move({0: b.zero()}, 0, bags[t])
            continue
        moved = [move(tables.pop(c), bags[c], bags[t]) for c in kids]
        tables[t] = {S: b.plus_all([m[S] for m in moved]) for S in moved[0]}
    final = move(tables.pop(0), bags[0], 0)
    return b.build(final[0])


def compile_treedepth(G: Graph, F: TreedepthForest) -> TropicalCircuit:
    """MWIS-formula by branching along the forest.

    At vertex ``v`` with chosen ancestors ``A`` the formula is
    ``max(exclude, v + include)`` where both branches sum the formulas of the
    child subtrees; the include branch is omitted when ``v`` neighbours ``A``.
    """
    validate_treedepth_forest(G, F)
    b = CircuitBuilder(share=False)
    masks = G.masks
    kids = F.children

    def sub(v, chosen):
        excl = b.plus_all([sub(c, chosen) for c in kids[v]])
        if masks[v] & chosen:
            return excl
        inner = b.plus_all([sub(c, chosen | 1 << v) for c in kids[v]])
        return b.max(excl, b.plus(b.var(v), inner))

    return b.build(b.plus_all([sub(r, 0) for r in F.roots]))


def compile_bruteforce(G: Graph, cap: int | None = None) -> TropicalCircuit:
    """MWIS-formula from ``MWIS(G) = max(MWIS(G - v), v + MWIS(G - N[v]))``.

    Components are summed separately; ``v`` is a vertex of maximum degree in
    the current subgraph, lowest id first.
    """
    cap = caps().bruteforce if cap is None else cap
    if G.n > cap:
        raise SizeCapExceeded("compile_bruteforce", G.n, cap)
    b = CircuitBuilder(share=False)
    masks = G.masks

    def rec(S):
        if not S:
            return b.zero()
        comps = components_mask(G, S)
        if len(comps) > 1:
            return b.plus_all([rec(c) for c in comps])
        v = max(iter_bits(S), key=lambda u: (popcount(masks[u] & S), -u))
        excl = rec(S & ~(1 << v))
        incl = b.plus(b.var(v), rec(S & ~masks[v] & ~(1 << v)))
        return b.max(excl, incl)

    return b.build(rec(G.full_mask))


def substitute_leaves(C: TropicalCircuit, replace) -> TropicalCircuit:
    """Replace every variable leaf ``v`` by a fresh max-chain over ``replace[v]``."""
    b = CircuitBuilder(share=False)
    index = {}
    for i, g in enumerate(C.gates):
        if g.kind == VAR:
            index[i] = b.max_all([b.var(u) for u in sorted(replace[g.a])])
        elif g.kind in ("m", "p"):
            index[i] = b._add(Gate(g.kind, index[g.a], index[g.b]))
        else:
            index[i] = b.zero()
    return b.build(index[C.output])


def compile_cluster_expander(w: int, d: int, seed: int = 0) -> tuple[Graph, TropicalCircuit]:
    """G_{w,d} together with its MWIS-formula: the brute-force formula of the
    base expander with each leaf replaced by a max over its cluster."""
    G, model = gen_cluster_expander(w, d, seed)
    base = quotient_graph(G, model)
    formula = compile_bruteforce(base)
    return G, substitute_leaves(formula, model.clusters)
