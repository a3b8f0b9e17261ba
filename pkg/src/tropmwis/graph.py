"""Undirected simple graphs over vertices ``0..n-1`` and basic set operations.

Vertex sets are plain ``frozenset`` objects.  Most exact routines work on
bitmasks internally (bit ``v`` set iff vertex ``v`` is a member); the
``Graph.masks`` table gives the neighbourhood of every vertex in that form.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator

from .config import caps
from .errors import InvalidInput, SizeCapExceeded

VertexSet = frozenset


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple  # adj[v] is a frozenset of neighbours of v

    @property
    def vertex_count(self) -> int:
        return self.n

    def vertices(self) -> range:
        return range(self.n)

    def neighbors(self, v: int) -> tuple:
        return tuple(sorted(self.adj[v]))

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    @cached_property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    @cached_property
    def edges(self) -> tuple:
        """Edges as sorted pairs ``(u, v)`` with ``u < v``, in lexicographic order."""
        return tuple((u, v) for u in range(self.n) for v in sorted(self.adj[u]) if u < v)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def masks(self) -> tuple:
        return tuple(sum(1 << u for u in a) for a in self.adj)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def check_vertices(self, vs: Iterable[int]) -> frozenset:
        out = frozenset(vs)
        for v in out:
            if not isinstance(v, int) or not 0 <= v < self.n:
                raise InvalidInput(f"vertex {v!r} out of range for a graph on {self.n} vertices")
        return out

    def induced(self, keep: Iterable[int]) -> tuple[Graph, tuple]:
        """``G[keep]`` relabelled to ``0..|keep|-1`` plus the list of original ids."""
        order = tuple(sorted(self.check_vertices(keep)))
        index = {v: i for i, v in enumerate(order)}
        edges = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return build_graph(len(order), edges), order

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count})"


def build_graph(n: int, edges: Iterable) -> Graph:
    """Simple graph on ``n`` vertices; repeated edges are merged, loops rejected."""
    if n < 0:
        raise InvalidInput("vertex count must be nonnegative")
    adj = [set() for _ in range(n)]
    for e in edges:
        u, v = e
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidInput(f"edge {(u, v)} has an endpoint outside 0..{n - 1}")
        if u == v:
            raise InvalidInput(f"self-loop at vertex {u}")
        adj[u].add(v)
        adj[v].add(u)
    return Graph(n, tuple(frozenset(a) for a in adj))


def to_mask(vs: Iterable[int]) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def from_mask(mask: int) -> frozenset:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return frozenset(out)


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def neighborhood(G: Graph, X: Iterable[int], closed: bool = False) -> frozenset:
    """``N(X)`` (neighbours minus ``X``) or, with ``closed``, ``N[X] = N(X) | X``."""
    X = G.check_vertices(X)
    out = set()
    for v in X:
        out |= G.adj[v]
    if closed:
        return frozenset(out | X)
    return frozenset(out - X)


def neighborhood_mask(G: Graph, mask: int) -> int:
    """Open neighbourhood of a bitmask vertex set, as a bitmask."""
    out = 0
    masks = G.masks
    for v in iter_bits(mask):
        out |= masks[v]
    return out & ~mask


def is_independent_set(G: Graph, I: Iterable[int]) -> bool:
    I = G.check_vertices(I)
    return all(not (G.adj[v] & I) for v in I)


def is_independent_mask(G: Graph, mask: int) -> bool:
    masks = G.masks
    return all(not (masks[v] & mask) for v in iter_bits(mask))


def components_mask(G: Graph, mask: int) -> list:
    """Connected components of ``G[mask]`` as bitmasks, ordered by least vertex."""
    masks = G.masks
    comps = []
    rest = mask
    while rest:
        seed = rest & -rest
        comp = seed
        frontier = seed
        while frontier:
            grow = 0
            for v in iter_bits(frontier):
                grow |= masks[v]
            frontier = grow & rest & ~comp
            comp |= frontier
        comps.append(comp)
        rest &= ~comp
    return comps


def connected_components(G: Graph, within: Iterable[int] | None = None) -> list:
    """Vertex sets of the connected components, ordered by least vertex."""
    mask = G.full_mask if within is None else to_mask(G.check_vertices(within))
    return [from_mask(c) for c in components_mask(G, mask)]


def is_connected_mask(G: Graph, mask: int) -> bool:
    return mask != 0 and len(components_mask(G, mask)) == 1


def independent_set_masks(G: Graph, within: int | None = None) -> list:
    """All independent sets of ``G[within]`` as bitmasks, including the empty set."""
    masks = G.masks
    out = []

    def rec(avail, chosen):
        if not avail:
            out.append(chosen)
            return
        low = avail & -avail
        v = low.bit_length() - 1
        rec(avail & ~low, chosen)
        rec(avail & ~low & ~masks[v], chosen | low)

    rec(G.full_mask if within is None else within, 0)
    return out


def all_independent_sets(G: Graph) -> list:
    return [from_mask(m) for m in independent_set_masks(G)]


# -- generators ----------------------------------------------------------------

def gen_grid(rows: int, cols: int) -> Graph:
    """``rows x cols`` grid; vertex ``(r, c)`` has id ``r * cols + c``."""
    if rows < 1 or cols < 1:
        raise InvalidInput("grid dimensions must be positive")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return build_graph(rows * cols, edges)


def gen_path(n: int) -> Graph:
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def gen_cycle(n: int) -> Graph:
    if n < 3:
        raise InvalidInput("a cycle needs at least 3 vertices")
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def gen_clique(n: int) -> Graph:
    return build_graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def gen_subdivided_clique(n: int) -> Graph:
    """``K_n`` with every edge subdivided once; subdivision vertices follow ``0..n-1``."""
    if n < 2:
        raise InvalidInput("subdivided clique needs n >= 2")
    edges = []
    nxt = n
    for u in range(n):
        for v in range(u + 1, n):
            edges += [(u, nxt), (nxt, v)]
            nxt += 1
    return build_graph(nxt, edges)


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    off = 0
    for g in graphs:
        edges += [(u + off, v + off) for u, v in g.edges]
        off += g.n
    return build_graph(off, edges)


# -- separations -----------------------------------------------------------------

@dataclass(frozen=True)
class Separation:
    a: frozenset
    s: frozenset
    b: frozenset

    @property
    def order(self) -> int:
        return len(self.s)


def separation_violation(G: Graph, sep: Separation) -> str | None:
    """Reason why ``sep`` is not a separation of ``G``, or None."""
    a, s, b = sep.a, sep.s, sep.b
    if a & s or a & b or s & b:
        return "parts are not pairwise disjoint"
    if a | s | b != frozenset(G.vertices()):
        return "parts do not cover V(G)"
    for u in a:
        hit = G.adj[u] & b
        if hit:
            return f"edge {{{u}, {min(hit)}}} joins A and B"
    return None


def is_balanced_for(sep: Separation, X: frozenset) -> bool:
    """Both sides carry at most ``2|X|/3`` of ``X`` (checked in exact integers)."""
    return 3 * len(sep.a & X) <= 2 * len(X) and 3 * len(sep.b & X) <= 2 * len(X)


def _split_components(weights: list, total: int, size: int):
    """Indices of components forming side A so both sides hold <= 2|X|/3, or None."""
    # reachable[s] = indices achieving X-weight s on side A
    reachable = {0: ()}
    for i, w in enumerate(weights):
        for s, picked in sorted(reachable.items()):
            if s + w not in reachable:
                reachable[s + w] = picked + (i,)
    for s in sorted(reachable):
        if 3 * s <= 2 * size and 3 * (total - s) <= 2 * size:
            return reachable[s]
    return None


def balanced_separation(G: Graph, X, cap: int | None = None) -> Separation:
    """A minimum-order separation balanced for ``X``, found exhaustively.

    Candidate separators are tried by increasing size in lexicographic order;
    the components of ``G - S`` are then grouped into the two sides.
    """
    X = G.check_vertices(X)
    if len(X) < 2:
        raise InvalidInput("balanced separations need |X| >= 2")
    cap = caps().balanced_separation if cap is None else cap
    if G.n > cap:
        raise SizeCapExceeded("balanced_separation_order", G.n, cap)
    xmask = to_mask(X)
    size = len(X)
    for k in range(G.n + 1):
        for S in combinations(range(G.n), k):
            smask = to_mask(S)
            comps = components_mask(G, G.full_mask & ~smask)
            weights = [popcount(c & xmask) for c in comps]
            side = _split_components(weights, sum(weights), size)
            if side is None:
                continue
            amask = 0
            for i in side:
                amask |= comps[i]
            bmask = G.full_mask & ~smask & ~amask
            return Separation(from_mask(amask), frozenset(S), from_mask(bmask))
    raise AssertionError("unreachable: S = V is always balanced")


def balanced_separation_order(G: Graph, X, cap: int | None = None) -> int:
    """Minimum order of a separation of ``G`` balanced for ``X``."""
    return balanced_separation(G, X, cap).order
