"""Ground-truth MWIS values and certification of MWIS-circuits."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .circuit import BOTTOM, TropicalCircuit, evaluate, is_bottom, monomial_masks
from .config import caps
from .errors import InvalidInput, SizeCapExceeded
from .graph import (Graph, components_mask, from_mask, independent_set_masks, iter_bits,
                    popcount, to_mask)


def mwis_oracle(G: Graph, w, cap: int | None = None):
    """Exact ``(value, witness)`` of a maximum weight independent set, the empty set included.

    Branch and bound over bitmasks with component splitting and memoisation.
    Vertices of weight <= 0 or minus infinity are never useful and are dropped.
    """
    cap = caps().mwis_oracle if cap is None else cap
    if G.n > cap:
        raise SizeCapExceeded("mwis_oracle", G.n, cap)
    if len(w) < G.n:
        raise InvalidInput(f"weight vector has {len(w)} entries, graph has {G.n} vertices")
    weight = [w[v] for v in G.vertices()]
    useful = to_mask(v for v in G.vertices() if not is_bottom(weight[v]) and weight[v] > 0)
    masks = G.masks
    memo = {0: (0, 0)}

    def best(S):
        hit = memo.get(S)
        if hit is not None:
            return hit
        comps = components_mask(G, S)
        if len(comps) > 1:
            val, pick = 0, 0
            for c in comps:
                cv, cp = best(c)
                val += cv
                pick |= cp
        else:
            v = max(iter_bits(S), key=lambda u: (popcount(masks[u] & S), -u))
            val, pick = best(S & ~(1 << v))
            iv, ip = best(S & ~masks[v] & ~(1 << v))
            if iv + weight[v] > val:
                val, pick = iv + weight[v], ip | 1 << v
        memo[S] = (val, pick)
        return val, pick

    val, pick = best(useful)
    return val, from_mask(pick)


@dataclass
class Verdict:
    status: str  # "certified", "consistent", "refuted" or "inconclusive"
    mode: str
    defect: str | None = None  # "illegal", "nonmultilinear" or "missing"
    defect_set: frozenset | None = None
    weights: list | None = None
    circuit_value: object = None
    oracle_value: object = None
    trials: int = 0
    seed: int | None = None
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "mode": self.mode,
            "defect": self.defect,
            "defect_set": None if self.defect_set is None else sorted(self.defect_set),
            "weights": None if self.weights is None else [_jsonable(x) for x in self.weights],
            "circuit_value": _jsonable(self.circuit_value),
            "oracle_value": _jsonable(self.oracle_value),
            "trials": self.trials,
            "seed": self.seed,
            "notes": list(self.notes),
        }


def _jsonable(x):
    if x is None:
        return None
    if is_bottom(x):
        return "-inf"
    if isinstance(x, (int, float)):
        return x
    return str(x)


def counterexample_weights(C: TropicalCircuit, G: Graph, I, defect: str) -> list:
    """Weights exposing a defect found symbolically.

    ``missing`` independent set I: 1 on I, -1 elsewhere.  ``illegal`` monomial
    support I (or a squared vertex, ``nonmultilinear``): 1 on I, 0 elsewhere.
    """
    I = G.check_vertices(I)
    if defect == "missing":
        return [1 if v in I else -1 for v in G.vertices()]
    if defect in ("illegal", "nonmultilinear"):
        return [1 if v in I else 0 for v in G.vertices()]
    raise InvalidInput(f"unknown defect kind {defect!r}")


def _certify_defect(C, G, verdict):
    w = counterexample_weights(C, G, verdict.defect_set, verdict.defect)
    verdict.weights = w
    verdict.circuit_value = evaluate(C, w)
    verdict.oracle_value = mwis_oracle(G, w)[0]
    return verdict


def verify_symbolic(C: TropicalCircuit, G: Graph, cap: int | None = None) -> Verdict:
    ms, violated, truncated, witness = monomial_masks(C, cap=cap)
    if truncated:
        return Verdict("inconclusive", "symbolic", notes=["monomial cap exceeded"])
    for m in ms:
        if m >> G.n:
            raise InvalidInput(f"circuit uses vertex {m.bit_length() - 1} outside the graph")
    if violated:
        return _certify_defect(C, G, Verdict("refuted", "symbolic", "nonmultilinear",
                                             frozenset([witness])))
    masks = G.masks
    for m in sorted(ms):
        if any(masks[v] & m for v in iter_bits(m)):
            return _certify_defect(C, G, Verdict("refuted", "symbolic", "illegal", from_mask(m)))
    for I in independent_set_masks(G):
        if I not in ms:
            return _certify_defect(C, G, Verdict("refuted", "symbolic", "missing", from_mask(I)))
    return Verdict("certified", "symbolic")


PATTERNS = ("indicator", "plus_minus", "integer", "bottom")


def trial_weights(n: int, pattern: str, rng: random.Random) -> list:
    """One weight vector of the given pattern family."""
    if pattern == "indicator":
        return [rng.randint(0, 1) for _ in range(n)]
    if pattern == "plus_minus":
        return [rng.choice((1, -1)) for _ in range(n)]
    if pattern == "integer":
        return [rng.randint(-5, 5) for _ in range(n)]
    if pattern == "bottom":
        return [BOTTOM if rng.random() < 0.3 else rng.randint(-5, 5) for _ in range(n)]
    raise InvalidInput(f"unknown weight pattern {pattern!r}")


def verify_randomized(C: TropicalCircuit, G: Graph, trials: int = 200, seed: int = 0) -> Verdict:
    """Compare evaluation with the oracle on seeded vectors from the four pattern families.

    A pass is reported as ``consistent``; sampling never certifies.
    """
    rng = random.Random(seed)
    for t in range(trials):
        w = trial_weights(G.n, PATTERNS[t % len(PATTERNS)], rng)
        got = evaluate(C, w)
        want = mwis_oracle(G, w)[0]
        if got != want:
            return Verdict("refuted", "randomized", weights=w, circuit_value=got,
                           oracle_value=want, trials=t + 1, seed=seed)
    return Verdict("consistent", "randomized", trials=trials, seed=seed)


def verify_mwis_circuit(C: TropicalCircuit, G: Graph, mode: str = "symbolic",
                        trials: int = 200, seed: int = 0) -> Verdict:
    if mode == "symbolic":
        return verify_symbolic(C, G)
    if mode == "randomized":
        return verify_randomized(C, G, trials, seed)
    raise InvalidInput(f"unknown verification mode {mode!r}")
