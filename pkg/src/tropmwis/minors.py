"""Induced minor models, cluster degree reduction, and the clustered expander family."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import networkx as nx
import numpy as np

from .errors import GenerationError, InvalidInput
from .graph import Graph, build_graph, gen_clique, is_connected_mask, to_mask


@dataclass(frozen=True)
class InducedMinorModel:
    clusters: tuple  # clusters[h] is the frozenset of G-vertices assigned to pattern vertex h

    def __len__(self):
        return len(self.clusters)

    def owner(self) -> dict:
        """Map from G-vertex to the pattern vertex whose cluster holds it."""
        return {v: h for h, c in enumerate(self.clusters) for v in c}


def quotient_graph(G: Graph, model: InducedMinorModel) -> Graph:
    """Pattern graph realised by the clusters: ``h ~ h'`` iff some G-edge joins them."""
    own = model.owner()
    edges = {tuple(sorted((own[u], own[v]))) for u, v in G.edges
             if u in own and v in own and own[u] != own[v]}
    return build_graph(len(model.clusters), sorted(edges))


def induced_minor_violation(G: Graph, H: Graph, model: InducedMinorModel) -> str | None:
    """Name of the first violated model condition, or None if ``model`` is valid."""
    if len(model.clusters) != H.n:
        return f"model has {len(model.clusters)} clusters but H has {H.n} vertices"
    seen = set()
    for h, c in enumerate(model.clusters):
        if not c:
            return f"cluster of {h} is empty"
        for v in c:
            if not 0 <= v < G.n:
                return f"cluster of {h} contains vertex {v} outside G"
        if seen & c:
            return f"disjointness: cluster of {h} overlaps an earlier cluster at {min(seen & c)}"
        seen |= c
        if not is_connected_mask(G, to_mask(c)):
            return f"connectivity: cluster of {h} does not induce a connected subgraph"
    Q = quotient_graph(G, model)
    for u in range(H.n):
        for v in range(u + 1, H.n):
            if H.has_edge(u, v) != Q.has_edge(u, v):
                if H.has_edge(u, v):
                    return f"adjacency: H-edge {{{u}, {v}}} is not realised between clusters"
                return f"adjacency: clusters of {u} and {v} touch but {{{u}, {v}}} is not an H-edge"
    return None


def validate_induced_minor_model(G: Graph, H: Graph, model: InducedMinorModel) -> bool:
    return induced_minor_violation(G, H, model) is None


def cluster_degree(G: Graph, cluster) -> int:
    return max((len(G.adj[v] & cluster) for v in cluster), default=0)


def low_degree_minor_model(G: Graph, H: Graph, model: InducedMinorModel) -> InducedMinorModel:
    """Shrink every cluster until its internal maximum degree is at most ``max_degree(H)``.

    Each realised H-edge pins one G-edge (the lexicographically least one
    between the two clusters); its endpoints become terminals.  A vertex with
    too many cluster neighbours keeps only the neighbours on one BFS shortest
    path per terminal, and the cluster is cut back to the component holding
    the terminals.
    """
    why = induced_minor_violation(G, H, model)
    if why is not None:
        raise InvalidInput(f"invalid induced minor model: {why}")
    d = H.max_degree
    terminals = [set() for _ in model.clusters]
    for a, b in H.edges:
        ca, cb = model.clusters[a], model.clusters[b]
        u, v = min((u, v) for u in ca for v in G.adj[u] & cb)
        terminals[a].add(u)
        terminals[b].add(v)
    clusters = []
    for h, cluster in enumerate(model.clusters):
        if not terminals[h]:
            terminals[h].add(min(cluster))
        clusters.append(frozenset(_prune_cluster(G, set(cluster), terminals[h], d)))
    return InducedMinorModel(tuple(clusters))


def _prune_cluster(G, cluster, terms, d):
    while True:
        over = [v for v in sorted(cluster) if len(G.adj[v] & cluster) > d]
        if not over:
            return cluster
        u = over[0]
        keep = _shortest_path_first_steps(G, cluster, u, terms)
        drop = (G.adj[u] & cluster) - keep
        cluster -= drop
        cluster &= _component_of(G, cluster, u)


def _shortest_path_first_steps(G, cluster, src, terms):
    """First hops of one BFS shortest path from ``src`` to each terminal inside ``cluster``."""
    first = {src: None}
    queue = deque([src])
    while queue:
        x = queue.popleft()
        for y in sorted(G.adj[x] & cluster):
            if y not in first:
                first[y] = y if x == src else first[x]
                queue.append(y)
    return {first[t] for t in terms if t != src}


def _component_of(G, cluster, v):
    seen = {v}
    stack = [v]
    while stack:
        x = stack.pop()
        for y in G.adj[x] & cluster:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


# -- the clustered expander ------------------------------------------------------

SPECTRAL_SLACK = 1.1
MAX_ATTEMPTS = 200


def _base_degree(m):
    deg = min(3, m - 1)
    if (m * deg) % 2:
        deg += 1
    return deg


def spectral_certificate(base: Graph, deg: int) -> tuple[bool, float]:
    """Second adjacency eigenvalue check ``lambda_2 <= 1.1 * 2 sqrt(deg - 1)``, plus connectivity."""
    if base.n <= 1:
        return True, 0.0
    A = np.zeros((base.n, base.n))
    for u, v in base.edges:
        A[u, v] = A[v, u] = 1.0
    eig = np.sort(np.linalg.eigvalsh(A))[::-1]
    lam2 = float(eig[1])
    bound = SPECTRAL_SLACK * 2.0 * np.sqrt(max(deg - 1, 0))
    ok = lam2 <= bound + 1e-9 and lam2 < deg - 1e-9
    return ok, lam2


def random_expander(m: int, seed: int) -> tuple[Graph, int]:
    """Seeded random regular graph on ``m`` vertices that passes the spectral check.

    Returns the graph and the seed that produced it.
    """
    deg = _base_degree(m)
    for attempt in range(MAX_ATTEMPTS):
        s = seed + attempt
        if m <= 1:
            return build_graph(m, []), s
        nxg = nx.random_regular_graph(deg, m, seed=s)
        base = build_graph(m, nxg.edges())
        if spectral_certificate(base, deg)[0]:
            return base, s
    raise GenerationError(f"no certified {deg}-regular expander on {m} vertices "
                          f"after {MAX_ATTEMPTS} seeds starting at {seed}")


def expand_clusters(base: Graph, d: int) -> tuple[Graph, InducedMinorModel]:
    """Blow every base vertex up into a ``d``-clique, fully joining adjacent clusters."""
    cluster = [range(b * d, (b + 1) * d) for b in range(base.n)]
    edges = [(u, v) for b in range(base.n) for u in cluster[b] for v in cluster[b] if u < v]
    for a, b in base.edges:
        edges += [(u, v) for u in cluster[a] for v in cluster[b]]
    G = build_graph(base.n * d, edges)
    return G, InducedMinorModel(tuple(frozenset(c) for c in cluster))


def gen_cluster_expander(w: int, d: int, seed: int = 0) -> tuple[Graph, InducedMinorModel]:
    """The graph G_{w,d}: a certified expander on ``ceil(w/d)`` vertices with ``d``-clique clusters.

    When ``d > w`` the result is the single cluster ``K_d``.
    """
    if d < 1 or w < 1:
        raise InvalidInput("w and d must be positive")
    if d > w:
        return gen_clique(d), InducedMinorModel((frozenset(range(d)),))
    m = -(-w // d)
    base, _ = random_expander(m, seed)
    return expand_clusters(base, d)
