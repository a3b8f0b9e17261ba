"""Tree decompositions, treedepth forests, and small exact width oracles."""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property

from .config import caps
from .errors import DecompositionError, InvalidInput, SizeCapExceeded
from .graph import Graph, components_mask, from_mask, iter_bits, popcount, to_mask


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple  # bags[i] is a frozenset of graph vertices
    edges: tuple  # tree edges between bag ids

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def tree_adjacency(self) -> list:
        adj = [[] for _ in self.bags]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        for a in adj:
            a.sort()
        return adj


@dataclass(frozen=True)
class TreedepthForest:
    parent: tuple  # parent[v] is a vertex or None for roots

    @property
    def roots(self) -> tuple:
        return tuple(v for v, p in enumerate(self.parent) if p is None)

    @cached_property
    def children(self) -> tuple:
        kids = [[] for _ in self.parent]
        for v, p in enumerate(self.parent):
            if p is not None:
                kids[p].append(v)
        return tuple(tuple(k) for k in kids)

    def ancestors(self, v: int) -> list:
        out = []
        p = self.parent[v]
        while p is not None:
            out.append(p)
            p = self.parent[p]
        return out

    @cached_property
    def depth(self) -> int:
        """Largest number of vertices on a root-to-leaf path."""
        best = 0
        level = {}
        for v in self._topological():
            p = self.parent[v]
            level[v] = 1 if p is None else level[p] + 1
            best = max(best, level[v])
        return best

    def _topological(self) -> list:
        order = list(self.roots)
        i = 0
        while i < len(order):
            order.extend(self.children[order[i]])
            i += 1
        return order


# -- validation ----------------------------------------------------------------

def validate_tree_decomposition(G: Graph, T: TreeDecomposition) -> int:
    """Width of ``T`` after checking it is a tree decomposition of ``G``.

    Raises DecompositionError naming the violated condition and a witness.
    """
    nb = len(T.bags)
    if nb == 0:
        if G.n == 0:
            return -1
        raise DecompositionError("cover", 0, "vertex 0 is in no bag")
    for i, j in T.edges:
        if not (0 <= i < nb and 0 <= j < nb) or i == j:
            raise DecompositionError("tree", (i, j), f"bad tree edge {(i, j)}")
    if len(T.edges) != nb - 1 or len(_tree_components(nb, T.edges)) != 1:
        raise DecompositionError("tree", None, "bag graph is not a tree")
    for b in T.bags:
        G.check_vertices(b)
    covered = frozenset().union(*T.bags)
    for v in G.vertices():
        if v not in covered:
            raise DecompositionError("cover", v, f"vertex {v} is in no bag")
    for u, v in G.edges:
        if not any(u in b and v in b for b in T.bags):
            raise DecompositionError("edge", (u, v), f"edge {{{u}, {v}}} is not covered by any bag")
    for v in G.vertices():
        holding = [i for i, b in enumerate(T.bags) if v in b]
        sub = [(i, j) for i, j in T.edges if v in T.bags[i] and v in T.bags[j]]
        if len(_tree_components(nb, sub, holding)) != 1:
            raise DecompositionError(
                "connectivity", v, f"bags containing vertex {v} do not induce a connected subtree")
    return T.width


def _tree_components(n, edges, nodes=None):
    nodes = list(range(n)) if nodes is None else list(nodes)
    parent = {x: x for x in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in edges:
        if i in parent and j in parent:
            parent[find(i)] = find(j)
    return {find(x) for x in nodes}


def validate_treedepth_forest(G: Graph, F: TreedepthForest) -> int:
    """Depth of ``F`` after checking every edge joins an ancestor-descendant pair."""
    if len(F.parent) != G.n:
        raise DecompositionError("size", None,
                                 f"forest has {len(F.parent)} vertices, graph has {G.n}")
    for v, p in enumerate(F.parent):
        if p is not None and not 0 <= p < G.n:
            raise DecompositionError("forest", v, f"parent {p} of vertex {v} out of range")
    if len(F._topological()) != G.n:
        raise DecompositionError("forest", None, "parent links contain a cycle")
    for u, v in G.edges:
        if u not in F.ancestors(v) and v not in F.ancestors(u):
            raise DecompositionError(
                "ancestry", (u, v), f"edge {{{u}, {v}}} is not an ancestor-descendant pair")
    return F.depth


# -- elimination orders --------------------------------------------------------

def decomposition_from_elimination_order(G: Graph, order) -> TreeDecomposition:
    """Tree decomposition whose bags are ``{v} + later neighbours`` in the filled graph."""
    pos = {v: i for i, v in enumerate(order)}
    if sorted(pos) != list(G.vertices()):
        raise InvalidInput("elimination order must be a permutation of the vertices")
    if G.n == 0:
        return TreeDecomposition((), ())
    adj = [set(a) for a in G.adj]
    bags = []
    higher = []
    for v in order:
        later = {u for u in adj[v] if pos[u] > pos[v]}
        bags.append(frozenset(later | {v}))
        higher.append(later)
        for a in later:
            adj[a] |= later - {a}
    edges = []
    roots = []
    for i, v in enumerate(order):
        if higher[i]:
            nxt = min(higher[i], key=pos.__getitem__)
            edges.append((i, pos[nxt]))
        else:
            roots.append(i)
    # separate trees share no vertices, so chaining their roots is harmless
    edges += [(roots[k], roots[k + 1]) for k in range(len(roots) - 1)]
    return TreeDecomposition(tuple(bags), tuple(edges))


def min_fill_order(G: Graph, seed: int | None = None) -> list:
    """Greedy min-fill elimination order; ties go to the lowest id unless seeded."""
    rng = random.Random(seed) if seed is not None else None
    adj = {v: set(G.adj[v]) for v in G.vertices()}
    order = []
    while adj:
        best = None
        ties = []
        for v in sorted(adj):
            nb = list(adj[v])
            fill = sum(1 for i, a in enumerate(nb) for b in nb[i + 1:] if b not in adj[a])
            key = (fill, len(nb))
            if best is None or key < best:
                best, ties = key, [v]
            elif key == best:
                ties.append(v)
        v = ties[0] if rng is None else rng.choice(ties)
        nb = adj.pop(v)
        for a in nb:
            adj[a].discard(v)
            adj[a] |= nb - {a}
        order.append(v)
    return order


def heuristic_tree_decomposition(G: Graph, seed: int | None = None) -> TreeDecomposition:
    """Valid (not necessarily optimal) decomposition from a min-fill elimination."""
    return decomposition_from_elimination_order(G, min_fill_order(G, seed))


def treewidth_lower_bound(G: Graph) -> int:
    """Minor-min-width lower bound: contract a min-degree vertex into its lowest-degree neighbour."""
    adj = {v: set(G.adj[v]) for v in G.vertices()}
    lb = 0
    while len(adj) > 1:
        v = min(adj, key=lambda x: (len(adj[x]), x))
        lb = max(lb, len(adj[v]))
        if not adj[v]:
            del adj[v]
            continue
        u = min(adj[v], key=lambda x: (len(adj[x]), x))
        for a in adj.pop(v):
            adj[a].discard(v)
            if a != u:
                adj[a].add(u)
                adj[u].add(a)
    return lb


# -- exact oracles -------------------------------------------------------------

def exact_treewidth_small(G: Graph, cap: int | None = None) -> tuple[int, TreeDecomposition]:
    """Exact treewidth by dynamic programming over eliminated-vertex subsets.

    TW(S) = min over v in S of max(TW(S - v), |Q(S - v, v)|), where Q(S, v) are
    the uneliminated vertices reachable from v through S.  Returns the width
    together with a witnessing decomposition.
    """
    cap = caps().treewidth if cap is None else cap
    if G.n > cap:
        raise SizeCapExceeded("exact_treewidth_small", G.n, cap)
    if G.n == 0:
        return -1, TreeDecomposition((), ())
    masks = G.masks
    full = G.full_mask

    def q_size(S, v):
        seen = 1 << v
        frontier = 1 << v
        reach = 0
        while frontier:
            grow = 0
            for u in iter_bits(frontier):
                grow |= masks[u]
            grow &= ~seen
            seen |= grow
            reach |= grow & ~S
            frontier = grow & S
        return popcount(reach)

    best = {0: -1}
    choice = {}
    for size in range(1, G.n + 1):
        for S in _subsets_of_size(G.n, size):
            val = None
            for v in iter_bits(S):
                rest = S & ~(1 << v)
                cand = max(best[rest], q_size(rest, v))
                if val is None or cand < val:
                    val, pick = cand, v
            best[S] = val
            choice[S] = pick
    order = []
    S = full
    while S:
        v = choice[S]
        order.append(v)
        S &= ~(1 << v)
    order.reverse()
    td = decomposition_from_elimination_order(G, order)
    return best[full], td


def _subsets_of_size(n, k):
    from itertools import combinations
    for combo in combinations(range(n), k):
        yield to_mask(combo)


class _TreedepthSolver:
    """Memoised exact treedepth of induced subgraphs ``G[S]``."""

    def __init__(self, G: Graph):
        self.G = G
        self.memo = {0: (0, None)}

    def td(self, S: int) -> int:
        hit = self.memo.get(S)
        if hit is not None:
            return hit[0]
        comps = components_mask(self.G, S)
        if len(comps) > 1:
            val = max(self.td(c) for c in comps)
            self.memo[S] = (val, None)
            return val
        val = None
        for v in iter_bits(S):
            cand = 1 + self.td(S & ~(1 << v))
            if val is None or cand < val:
                val, root = cand, v
                if val == 1:
                    break
        self.memo[S] = (val, root)
        return val

    def forest(self, S: int, parent: list, above=None):
        for comp in components_mask(self.G, S):
            self.td(comp)
            root = self.memo[comp][1]
            parent[root] = above
            self.forest(comp & ~(1 << root), parent, root)


_SOLVERS = {}


def _solver(G: Graph) -> _TreedepthSolver:
    s = _SOLVERS.get(G)
    if s is None:
        if len(_SOLVERS) > 64:
            _SOLVERS.clear()
        s = _SOLVERS[G] = _TreedepthSolver(G)
    return s


def treedepth_of(G: Graph, within=None, cap: int | None = None) -> int:
    """Exact ``td(G[within])`` (whole graph by default), memoised per graph."""
    cap = caps().treedepth if cap is None else cap
    mask = G.full_mask if within is None else (within if isinstance(within, int) else to_mask(within))
    size = popcount(mask)
    if size > cap:
        raise SizeCapExceeded("exact_treedepth_small", size, cap)
    return _solver(G).td(mask)


def exact_treedepth_small(G: Graph, cap: int | None = None) -> tuple[int, TreedepthForest]:
    """Exact treedepth via td(connected G) = 1 + min_v td(G - v), plus a witnessing forest."""
    depth = treedepth_of(G, cap=cap)
    parent = [None] * G.n
    _solver(G).forest(G.full_mask, parent)
    return depth, TreedepthForest(tuple(parent))


def dfs_forest(G: Graph) -> TreedepthForest:
    """A DFS forest; every edge of G joins an ancestor-descendant pair in it."""
    parent = [None] * G.n
    seen = [False] * G.n
    for r in G.vertices():
        if seen[r]:
            continue
        seen[r] = True
        stack = [(r, iter(G.neighbors(r)))]
        while stack:
            v, it = stack[-1]
            for u in it:
                if not seen[u]:
                    seen[u] = True
                    parent[u] = v
                    stack.append((u, iter(G.neighbors(u))))
                    break
            else:
                stack.pop()
    return TreedepthForest(tuple(parent))


def heuristic_treedepth_forest(G: Graph) -> TreedepthForest:
    """Exact forest when small enough, otherwise recursive min-fill-separator splitting."""
    if G.n <= caps().treedepth:
        return exact_treedepth_small(G)[1]
    parent = [None] * G.n
    _split_forest(G, G.full_mask, parent, None)
    return TreedepthForest(tuple(parent))


def _split_forest(G, S, parent, above):
    for comp in components_mask(G, S):
        sub, ids = G.induced(from_mask(comp))
        T = heuristic_tree_decomposition(sub)
        # bag minimising the largest remaining component
        best = None
        for bag in T.bags:
            rest = comp & ~to_mask(ids[v] for v in bag)
            worst = max((popcount(c) for c in components_mask(G, rest)), default=0)
            key = (worst, len(bag))
            if best is None or key < best[0]:
                best = (key, sorted(ids[v] for v in bag))
        chain = best[1]
        prev = above
        for v in chain:
            parent[v] = prev
            prev = v
        _split_forest(G, comp & ~to_mask(chain), parent, prev)
