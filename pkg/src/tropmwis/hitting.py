"""Independent sets hitting a family of vertex sets.

The existence arguments are made constructive with Moser-Tardos style
resampling under the original sampling probabilities.  Resampling is run as a
heuristic with a round cap; ``hit_family_exact`` is the exact fallback.
"""
from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .config import caps
from .errors import InvalidInput, SizeCapExceeded
from .graph import (Graph, components_mask, from_mask, is_independent_set, iter_bits, popcount,
                    to_mask)
from .minors import InducedMinorModel, cluster_degree, induced_minor_violation, quotient_graph


@dataclass(frozen=True)
class SetFamily:
    sets: tuple  # of nonempty frozensets

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(frozenset(s) for s in self.sets))
        for i, s in enumerate(self.sets):
            if not s:
                raise InvalidInput(f"family member {i} is empty")

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    @property
    def k(self) -> int:
        """Smallest member size (0 for the empty family)."""
        return min((len(s) for s in self.sets), default=0)


@dataclass(frozen=True)
class PreconditionReport:
    satisfied: bool
    lhs: int  # 6 |F|
    rhs: float  # e^{k/(6d)}, inf when d == 0
    d: int
    k: int
    empty_family: bool = False


def check_lll_precondition(G: Graph, F: SetFamily) -> PreconditionReport:
    """Evaluate ``6|F| <= e^{k/(6d)}`` with ``d`` the maximum degree and ``k`` the smallest member."""
    d, k = G.max_degree, F.k
    lhs = 6 * len(F)
    if not len(F):
        return PreconditionReport(True, 0, math.inf if d == 0 else math.exp(0), d, 0, True)
    if d == 0:
        return PreconditionReport(True, lhs, math.inf, d, k)
    expo = k / (6 * d)
    rhs = math.exp(expo) if expo < 700 else math.inf
    # compare in log space so huge k does not overflow the decision
    return PreconditionReport(math.log(lhs) <= expo, lhs, rhs, d, k)


@dataclass(frozen=True)
class HittingParams:
    p: Fraction
    x_edge: Fraction
    x_set: Fraction
    max_rounds: int
    seed: int


def hitting_params(G: Graph, F: SetFamily, seed: int = 0,
                   max_rounds: int | None = None) -> HittingParams:
    """Sampling probability ``1/(2d)`` and the Local Lemma weights ``1/(3d^2+1)``, ``1/(5|F|+1)``.

    Degree 0 or 1 graphs use d = 1, i.e. p = 1/2.
    """
    d = max(G.max_degree, 1)
    return HittingParams(Fraction(1, 2 * d), Fraction(1, 3 * d * d + 1),
                         Fraction(1, 5 * len(F) + 1),
                         caps().max_rounds if max_rounds is None else max_rounds, seed)


@dataclass
class HitResult:
    success: bool
    independent_set: frozenset | None
    rounds: int = 0
    surviving: list = field(default_factory=list)
    method: str = ""

    def to_json(self) -> dict:
        return {
            "success": self.success,
            "independent_set": None if self.independent_set is None else sorted(self.independent_set),
            "rounds": self.rounds,
            "surviving_events": self.surviving,
            "method": self.method,
        }


def hits_all(G: Graph, F, I) -> bool:
    """Validator: ``I`` is independent in G and meets every member of ``F``."""
    I = frozenset(I)
    return is_independent_set(G, I) and all(I & s for s in F)


def _coin(rng, p: Fraction) -> bool:
    return rng.randrange(p.denominator) < p.numerator


def hit_family_moser_tardos(G: Graph, F: SetFamily, params: HittingParams | None = None) -> HitResult:
    """Resample until no edge has both ends selected and every member is hit.

    Events are indexed edges first, then family members; the lowest-index
    violated event is resampled each round.
    """
    if params is None:
        params = hitting_params(G, F)
    for s in F:
        G.check_vertices(s)
    rng = random.Random(params.seed)
    p = params.p
    edges = G.edges
    m = len(edges)
    sets = [sorted(s) for s in F]
    inc_edges = [[] for _ in G.vertices()]
    for i, (u, v) in enumerate(edges):
        inc_edges[u].append(i)
        inc_edges[v].append(i)
    inc_sets = [[] for _ in G.vertices()]
    for j, s in enumerate(sets):
        for v in s:
            inc_sets[v].append(j)

    sel = [_coin(rng, p) for _ in G.vertices()]
    hits = [sum(sel[v] for v in s) for s in sets]

    def violated(e):
        if e < m:
            u, v = edges[e]
            return sel[u] and sel[v]
        return hits[e - m] == 0

    heap = [e for e in range(m + len(sets)) if violated(e)]
    heapq.heapify(heap)
    rounds = 0
    while heap:
        e = heap[0]
        if not violated(e):
            heapq.heappop(heap)
            continue
        if rounds >= params.max_rounds:
            bad = sorted({x for x in heap if violated(x)})
            return HitResult(False, None, rounds, [_event_name(x, m, edges) for x in bad[:20]],
                             "moser-tardos")
        rounds += 1
        scope = edges[e] if e < m else sets[e - m]
        for x in scope:
            new = _coin(rng, p)
            if new == sel[x]:
                continue
            sel[x] = new
            delta = 1 if new else -1
            for j in inc_sets[x]:
                hits[j] += delta
                if hits[j] == 0:
                    heapq.heappush(heap, m + j)
            if new:
                for i in inc_edges[x]:
                    if violated(i):
                        heapq.heappush(heap, i)
    I = frozenset(v for v in G.vertices() if sel[v])
    if not hits_all(G, F, I):
        raise AssertionError("resampling reported success on an invalid hitting set")
    return HitResult(True, I, rounds, [], "moser-tardos")


def _event_name(e, m, edges):
    return {"edge": list(edges[e])} if e < m else {"set": e - m}


def hit_family_exact(G: Graph, F: SetFamily, cap: int | None = None) -> frozenset | None:
    """An independent set meeting every member, or None when none exists.

    Branches on the unhit member with the fewest usable vertices; the i-th
    branch picks its i-th candidate and bans the earlier ones.
    """
    cap = caps().hitting_exact if cap is None else cap
    if G.n > cap:
        raise SizeCapExceeded("hit_family_exact", G.n, cap)
    sets = sorted({to_mask(G.check_vertices(s)) for s in F})
    masks = G.masks

    def search(chosen, banned, todo):
        if not todo:
            return chosen
        best = None
        for s in todo:
            avail = s & ~banned
            if not avail:
                return None
            c = popcount(avail)
            if best is None or c < best[0]:
                best = (c, avail)
        for v in iter_bits(best[1]):
            bit = 1 << v
            rest = [s for s in todo if not s & bit]
            got = search(chosen | bit, banned | bit | masks[v], rest)
            if got is not None:
                return got
            banned |= bit
        return None

    found = search(0, 0, sets)
    return None if found is None else from_mask(found)


# -- uniform independent sets ---------------------------------------------------

class IndependentSetCounter:
    """Exact counts of independent sets of induced subgraphs, memoised on bitmasks."""

    def __init__(self, G: Graph):
        self.G = G
        self.memo = {0: 1}

    def pivot(self, S):
        masks = self.G.masks
        return max(iter_bits(S), key=lambda u: (popcount(masks[u] & S), -u))

    def count(self, S: int) -> int:
        hit = self.memo.get(S)
        if hit is not None:
            return hit
        comps = components_mask(self.G, S)
        if len(comps) > 1:
            total = 1
            for c in comps:
                total *= self.count(c)
        else:
            v = self.pivot(S)
            total = self.count(S & ~(1 << v)) + self.count(S & ~self.G.masks[v] & ~(1 << v))
        self.memo[S] = total
        return total

    def sample(self, S: int, rng: random.Random) -> int:
        out = 0
        stack = [S]
        while stack:
            S = stack.pop()
            if not S:
                continue
            comps = components_mask(self.G, S)
            if len(comps) > 1:
                stack += comps
                continue
            v = self.pivot(S)
            with_v = S & ~self.G.masks[v] & ~(1 << v)
            if rng.randrange(self.count(S)) < self.count(with_v):
                out |= 1 << v
                stack.append(with_v)
            else:
                stack.append(S & ~(1 << v))
        return out


def _check_uniform_cap(G, mask, cap):
    cap = caps().uniform_is if cap is None else cap
    for c in components_mask(G, mask):
        if popcount(c) > cap:
            raise SizeCapExceeded("uniform_independent_set", popcount(c), cap)


def uniform_independent_set(G: Graph, seed=0, cap: int | None = None) -> frozenset:
    """Exactly uniform random independent set (count, then sample proportionally).

    ``seed`` may be an int or a ``random.Random`` instance.
    """
    _check_uniform_cap(G, G.full_mask, cap)
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    return from_mask(IndependentSetCounter(G).sample(G.full_mask, rng))


def vertex_marginals(G: Graph, cap: int | None = None) -> list:
    """Exact ``Pr[v in I]`` as Fractions for I uniform over the independent sets of G."""
    _check_uniform_cap(G, G.full_mask, cap)
    counter = IndependentSetCounter(G)
    total = counter.count(G.full_mask)
    return [Fraction(counter.count(G.full_mask & ~G.masks[v] & ~(1 << v)), total)
            for v in G.vertices()]


# -- cluster variant -------------------------------------------------------------

@dataclass(frozen=True)
class NormalizedFamily:
    family: SetFamily  # surviving members, in original order
    clusters_hit: tuple  # per original member, number of clusters it meets
    emptied: tuple  # indices of original members left with no cluster vertex


def family_normalize(F, model: InducedMinorModel) -> NormalizedFamily:
    """Keep only the least vertex of every cluster a member meets; drop non-cluster vertices."""
    own = model.owner()
    kept, counts, emptied = [], [], []
    for i, s in enumerate(F):
        first = {}
        for v in sorted(s):
            if v in own:
                first.setdefault(own[v], v)
        counts.append(len(first))
        if first:
            kept.append(frozenset(first.values()))
        else:
            emptied.append(i)
    return NormalizedFamily(SetFamily(tuple(kept)), tuple(counts), tuple(emptied))


def cluster_params(G: Graph, model: InducedMinorModel):
    """Degree bound d (pattern and in-cluster degrees) and cluster probability ``1/(4 d 2^d)``."""
    H = quotient_graph(G, model)
    d = max(H.max_degree, max((cluster_degree(G, c) for c in model.clusters), default=0), 1)
    return d, Fraction(1, 4 * d * 2 ** d)


def hit_clusters(G: Graph, model: InducedMinorModel, F: SetFamily, seed: int = 0,
                 max_rounds: int | None = None, cap: int | None = None) -> HitResult:
    """Two-stage resampling: select clusters with probability ``1/(4 d 2^d)``, then draw a
    uniform independent set inside each selected cluster.

    Bad events are pattern edges with both clusters selected and members left
    unhit.  Members must already be normalised (only cluster vertices, at most
    one per cluster).
    """
    H = quotient_graph(G, model)
    why = induced_minor_violation(G, H, model)
    if why is not None:
        raise InvalidInput(f"invalid induced minor model: {why}")
    own = model.owner()
    for i, s in enumerate(F):
        seen = set()
        for v in s:
            if v not in own:
                raise InvalidInput(f"member {i}: vertex {v} lies in no cluster; normalise first")
            if own[v] in seen:
                raise InvalidInput(f"member {i} has two vertices in cluster {own[v]}; normalise first")
            seen.add(own[v])
    max_rounds = caps().max_rounds if max_rounds is None else max_rounds
    d, p = cluster_params(G, model)
    rng = random.Random(seed)
    cmask = [to_mask(c) for c in model.clusters]
    for c in cmask:
        _check_uniform_cap(G, c, cap)
    counter = IndependentSetCounter(G)
    chosen = [False] * len(model.clusters)
    inner = [0] * len(model.clusters)

    def draw(h):
        chosen[h] = _coin(rng, p)
        inner[h] = counter.sample(cmask[h], rng)

    for h in range(len(model.clusters)):
        draw(h)
    sets = [sorted(s) for s in F]
    scopes = [sorted({own[v] for v in s}) for s in sets]
    edges = H.edges

    def first_bad():
        for i, (a, b) in enumerate(edges):
            if chosen[a] and chosen[b]:
                return ("edge", i)
        for j, s in enumerate(sets):
            if not any(chosen[own[v]] and inner[own[v]] >> v & 1 for v in s):
                return ("set", j)
        return None

    rounds = 0
    while True:
        bad = first_bad()
        if bad is None:
            break
        if rounds >= max_rounds:
            return HitResult(False, None, rounds, [{bad[0]: bad[1]}], "cluster")
        rounds += 1
        for h in (edges[bad[1]] if bad[0] == "edge" else scopes[bad[1]]):
            draw(h)
    I = 0
    for h in range(len(model.clusters)):
        if chosen[h]:
            I |= inner[h]
    I = from_mask(I)
    if not hits_all(G, F, I):
        raise AssertionError("cluster resampling produced an invalid hitting set")
    return HitResult(True, I, rounds, [], "cluster")
