"""Executable lower-bound machinery: separator families extracted from circuits
and formulas, audits that search for independent sets a circuit misses, and
closed-form gate lower bounds."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

import mpmath

from .circuit import MAX, PLUS, TropicalCircuit, computes, evaluate, is_formula, restrict_gate_neg_inf
from .config import caps
from .decomposition import treedepth_of
from .errors import InvalidInput
from .graph import (Graph, Separation, components_mask, from_mask, is_balanced_for,
                    neighborhood_mask, popcount, separation_violation, to_mask)
from .hitting import (SetFamily, hit_family_exact, hit_family_moser_tardos, hits_all,
                      hitting_params)
from .verify import mwis_oracle


@dataclass(frozen=True)
class SeparatorEntry:
    separator: frozenset
    gate: int  # index of the chosen gate in the circuit of that iteration
    iteration: int
    support: frozenset  # Sup of the chosen gate (residual: of the residual output)
    target: frozenset  # V - (Sup(v) | cosup(v)): what the audit asks a hitter to meet
    residual: bool = False

    def separation(self, G: Graph) -> Separation:
        """``(Sup(v), N(Sup(v)), V - N[Sup(v)])``."""
        rest = frozenset(G.vertices()) - self.support - self.separator
        return Separation(self.support, self.separator, rest)


@dataclass(frozen=True)
class SeparatorFamily:
    entries: tuple
    x: frozenset
    residual_included: bool

    @property
    def separators(self) -> list:
        return [e.separator for e in self.entries]

    @property
    def targets(self) -> list:
        return [e.target for e in self.entries]

    def __len__(self):
        return len(self.entries)


def _x_mask(G, X):
    X = frozenset(G.vertices()) if X is None else G.check_vertices(X)
    if len(X) < 2:
        raise InvalidInput("separator extraction needs |X| >= 2")
    return X, to_mask(X)


def cosupport_masks(C: TropicalCircuit) -> dict:
    """For every reachable gate, the union of sibling supports along all paths to the output.

    Every monomial whose derivation passes through ``g`` has its support inside
    ``Sup(g) | cosup(g)``.
    """
    if C.is_empty:
        return {}
    sup = C.support_masks
    co = {C.output: 0}
    for i in sorted(C.reachable, reverse=True):
        g = C.gates[i]
        if g.kind == MAX:
            for c in (g.a, g.b):
                co[c] = co.get(c, 0) | co[i]
        elif g.kind == PLUS:
            co[g.a] = co.get(g.a, 0) | co[i] | sup[g.b]
            co[g.b] = co.get(g.b, 0) | co[i] | sup[g.a]
    return co


def extract_separators(C: TropicalCircuit, G: Graph, X=None) -> SeparatorFamily:
    """Peel off gates whose support holds between |X|/3 and 2|X|/3 of ``X``.

    While the output support holds more than 2|X|/3 of X, walk down from the
    output into the child with the larger share of X (lower index on ties),
    stop at the first gate within the bound, record the open neighbourhood of
    its support, and force that gate to minus infinity.  A nonempty residual
    circuit contributes the neighbourhood of its output support as a final,
    flagged entry.

    Each entry also carries a target ``V - (Sup(v) | cosup(v))``.  It contains
    the separator whenever plus gates are product-disjoint, and an independent
    set meeting it is not derived through ``v`` whatever the circuit is.
    """
    X, xm = _x_mask(G, X)
    size = len(X)

    def heavy(sup):
        return 3 * popcount(sup & xm) > 2 * size

    entries = []
    cur = C
    it = 0
    while not cur.is_empty and heavy(cur.support_masks[cur.output]):
        sup = cur.support_masks
        g = cur.output
        while heavy(sup[g]):
            gate = cur.gates[g]
            a, b = gate.a, gate.b
            ka, kb = popcount(sup[a] & xm), popcount(sup[b] & xm)
            g = a if (ka, -a) >= (kb, -b) else b
        co = cosupport_masks(cur)[g]
        entries.append(SeparatorEntry(from_mask(neighborhood_mask(G, sup[g])), g, it,
                                      from_mask(sup[g]), from_mask(G.full_mask & ~(sup[g] | co))))
        cur = restrict_gate_neg_inf(cur, g)
        it += 1
    residual = not cur.is_empty
    if residual:
        s = cur.support_masks[cur.output]
        entries.append(SeparatorEntry(from_mask(neighborhood_mask(G, s)), cur.output, it,
                                      from_mask(s), from_mask(G.full_mask & ~s), residual=True))
    return SeparatorFamily(tuple(entries), X, residual)


def check_extraction(G: Graph, fam: SeparatorFamily) -> list:
    """Problems with non-residual entries: window, separation and balance. Empty when sound."""
    problems = []
    size = len(fam.x)
    for e in fam.entries:
        if e.residual:
            continue
        k = len(e.support & fam.x)
        if not (size <= 3 * k <= 2 * size):
            problems.append(f"iteration {e.iteration}: |Sup & X| = {k} outside [|X|/3, 2|X|/3]")
        sep = e.separation(G)
        why = separation_violation(G, sep)
        if why:
            problems.append(f"iteration {e.iteration}: not a separation ({why})")
        elif not is_balanced_for(sep, fam.x):
            problems.append(f"iteration {e.iteration}: separation not balanced for X")
    return problems


@dataclass
class AuditReport:
    verdict: str  # "consistent", "refuted" or "inconclusive"
    separators: list
    context: dict
    counterexample: dict | None = None
    flags: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    targets: list | None = None  # sets the hitter was asked to meet, when not the separators

    @property
    def smallest_separator(self) -> int | None:
        return min((len(s) for s in self.separators), default=None)

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict,
            "separators": [sorted(s) for s in self.separators],
            "smallest_separator": self.smallest_separator,
            "bound_context": self.context,
            "counterexample": self.counterexample,
            "flags": list(self.flags),
            "timings": dict(self.timings),
        }
        if self.targets is not None:
            out["targets"] = [sorted(s) for s in self.targets]
        return out


def _find_hitter(G, sets, seed, max_rounds, flags):
    """``(I, proved_none)`` for the family ``sets``."""
    if not sets:
        return frozenset(), False
    if any(not s for s in sets):
        flags.append("family has an empty member; no independent set can hit it")
        return None, True
    fam = SetFamily(tuple(sets))
    if G.n <= caps().hitting_exact:
        I = hit_family_exact(G, fam)
        return I, I is None
    res = hit_family_moser_tardos(G, fam, hitting_params(G, fam, seed, max_rounds))
    flags.append(f"moser-tardos used ({res.rounds} resamplings)")
    return res.independent_set, False


def certify_missing(C: TropicalCircuit, G: Graph, I, sets) -> dict | None:
    """Counterexample record when ``I`` is independent, hits ``sets`` and is not computed by ``C``.

    Non-computation is checked by monomial membership; the weights 1 on I and
    -1 elsewhere are recorded with the circuit and oracle values they give.
    """
    I = frozenset(I)
    if not hits_all(G, sets, I) or computes(C, I):
        return None
    w = [1 if v in I else -1 for v in G.vertices()]
    out = {
        "independent_set": sorted(I),
        "weights": w,
        "circuit_value": _num(evaluate(C, w)),
        "expected_value": len(I),
        "method": "monomial-membership",
    }
    if G.n <= caps().mwis_oracle:
        out["oracle_value"] = _num(mwis_oracle(G, w)[0])
    return out


def _num(x):
    return x if isinstance(x, (int, float)) else str(x)


def _search(C, G, sets, seed, max_rounds, flags):
    """``(verdict, counterexample)`` for one family."""
    I, proved_none = _find_hitter(G, sets, seed, max_rounds, flags)
    if I is None:
        return ("consistent" if proved_none else "inconclusive"), None
    cert = certify_missing(C, G, I, sets)
    if cert is None:
        flags.append(f"hitting set {sorted(I)} is computed by the circuit; "
                     "the circuit is not a partial MWIS-circuit or the premise fails")
        return "inconclusive", None
    return "refuted", cert


def audit_circuit(C: TropicalCircuit, G: Graph, X=None, seed: int = 0,
                  max_rounds: int | None = None) -> AuditReport:
    """Extract separators and look for an independent set meeting every target.

    ``refuted`` carries a machine-checked independent set the circuit does not
    compute; ``consistent`` means exact search proved no such hitter exists.
    """
    t0 = time.perf_counter()
    fam = extract_separators(C, G, X)
    timings = {"extract": time.perf_counter() - t0}
    sets = fam.separators
    context = {
        "d": G.max_degree,
        "k": min((len(s) for s in sets), default=None),
        "x_size": len(fam.x),
        "family_size": len(sets),
        "residual_included": fam.residual_included,
        "gates": C.size,
    }
    flags = []
    if not sets:
        flags.append("empty family")
        return AuditReport("consistent", [], context, None, flags, timings, [])
    t0 = time.perf_counter()
    verdict, cert = _search(C, G, fam.targets, seed, max_rounds, flags)
    timings["search"] = time.perf_counter() - t0
    if verdict == "consistent":
        flags.append("exact search: no independent set hits every target")
    return AuditReport(verdict, sets, context, cert, flags, timings, fam.targets)


@dataclass(frozen=True)
class FormulaSeparatorMap:
    sep: dict  # gate index -> frozenset
    sup: dict  # gate index -> frozenset


def formula_separators(Fm: TropicalCircuit, G: Graph) -> FormulaSeparatorMap:
    """Top-down separators: ``V - Sup(o)`` at the output, inherited through sums,
    and ``Sep(p) | Sup(p) - Sup(g)`` below a max gate ``p``."""
    if not is_formula(Fm):
        raise InvalidInput("formula_separators needs a formula (fan-out at most 1)")
    if Fm.is_empty:
        return FormulaSeparatorMap({}, {})
    sup = Fm.support_masks
    sep = {Fm.output: G.full_mask & ~sup[Fm.output]}
    for i in sorted(Fm.reachable, reverse=True):
        g = Fm.gates[i]
        if g.kind == PLUS:
            sep[g.a] = sep[g.b] = sep[i]
        elif g.kind == MAX:
            for c in (g.a, g.b):
                sep[c] = (sep[i] | sup[i]) & ~sup[c]
    return FormulaSeparatorMap({i: from_mask(s) for i, s in sep.items()},
                               {i: from_mask(sup[i]) for i in sep})


def is_typical(Fm: TropicalCircuit, G: Graph, I) -> bool:
    """``I`` meets a maximum-treedepth component of ``G[Sup(g)]`` for every sum gate
    ``g`` with ``td(G[Sup(g)]) >= td(G)/2``."""
    I = to_mask(G.check_vertices(I))
    td = treedepth_of(G)
    sup = Fm.support_masks
    for i in sorted(Fm.reachable):
        if Fm.gates[i].kind != PLUS:
            continue
        t = treedepth_of(G, sup[i])
        if 2 * t < td:
            continue
        if not any(c & I and treedepth_of(G, c) == t for c in components_mask(G, sup[i])):
            return False
    return True


def formula_family(Fm: TropicalCircuit, G: Graph, td: int) -> list:
    """Separators and supports of size at least ``td/2``, deduplicated in gate order."""
    smap = formula_separators(Fm, G)
    seen, out = set(), []
    for i in sorted(smap.sep):
        for s in (smap.sep[i], smap.sup[i]):
            if 2 * len(s) >= td and s not in seen:
                seen.add(s)
                out.append(s)
    return out


def audit_formula(Fm: TropicalCircuit, G: Graph, seed: int = 0,
                  max_rounds: int | None = None) -> AuditReport:
    """Audit a formula with the family of big separators and big supports.

    When that family has no hitter, the circuit extraction family of the same
    formula is tried as well, since small graphs often leave the typical-set
    family unhittable.  Both routes end in monomial-membership validation.
    """
    if not is_formula(Fm):
        raise InvalidInput("audit_formula needs a formula (fan-out at most 1)")
    t0 = time.perf_counter()
    td = treedepth_of(G)
    context = {"d": G.max_degree, "td": td, "gates": Fm.size}
    if td < 2:
        return AuditReport("inconclusive", [], context, None,
                           ["skipped: td(G) < 2, the separator family needs td(G) >= 2"],
                           {"extract": time.perf_counter() - t0})
    sets = formula_family(Fm, G, td)
    context["k"] = min((len(s) for s in sets), default=None)
    context["family_size"] = len(sets)
    timings = {"extract": time.perf_counter() - t0}
    flags = []
    targets = list(sets)
    t0 = time.perf_counter()
    if not sets:
        flags.append("empty family")
        verdict, cert = "consistent", None
    else:
        verdict, cert = _search(Fm, G, sets, seed, max_rounds, flags)
    if cert is not None:
        cert["family"] = "formula"
        cert["typical"] = is_typical(Fm, G, cert["independent_set"])
    elif G.n >= 2 and not Fm.is_empty:
        fam = extract_separators(Fm, G)
        if fam.entries:
            v2, cert = _search(Fm, G, fam.targets, seed, max_rounds, flags)
            if cert is not None:
                cert["family"] = "circuit-extraction"
                targets = list(fam.targets)
                flags.append("formula family gave no refutation; circuit extraction family did")
                verdict = v2
            elif v2 == "inconclusive":
                verdict = "inconclusive"
    timings["search"] = time.perf_counter() - t0
    return AuditReport(verdict, sets, context, cert, flags, timings, targets)


def drop_top_branch(C: TropicalCircuit, seed: int = 0) -> TropicalCircuit | None:
    """Corrupt a circuit: walk down through sum gates at random to the first max
    gate and force one of its children (chosen at random) to minus infinity."""
    rng = random.Random(seed)
    if C.is_empty:
        return None
    g = C.output
    while C.gates[g].kind == PLUS:
        gate = C.gates[g]
        g = rng.choice((gate.a, gate.b))
    gate = C.gates[g]
    if gate.kind != MAX:
        return None
    return restrict_gate_neg_inf(C, rng.choice((gate.a, gate.b)))


# -- closed-form bounds ----------------------------------------------------------

BOUND_KINDS = ("treewidth-circuit", "minor-circuit", "treedepth-formula")
_ALIASES = {"tw-circuit": "treewidth-circuit", "td-formula": "treedepth-formula"}


@dataclass(frozen=True)
class BoundQuery:
    kind: str
    value: int  # treewidth, k, or treedepth depending on kind
    d: int
    value_is_k: bool = False  # minor-circuit: value is k rather than a treewidth


@dataclass(frozen=True)
class BoundResult:
    kind: str
    value: mpmath.mpf
    formula: str
    exponent: mpmath.mpf
    k: int | None
    k_derivation: str

    @property
    def log10(self) -> float:
        return float(mpmath.log10(self.value))

    @property
    def vacuous(self) -> bool:
        return self.value < 1

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "bound": float(self.value),
            "bound_str": mpmath.nstr(self.value, 15),
            "log10_bound": self.log10,
            "exponent": float(self.exponent),
            "formula": self.formula,
            "k": self.k,
            "k_derivation": self.k_derivation,
            "vacuous": bool(self.vacuous),
        }


def bound_gates(q: BoundQuery, dps: int = 50) -> BoundResult:
    """Gate lower bound in ``dps``-digit arithmetic.

    * treewidth-circuit: ``k = floor(tw/4)``, bound ``e^{k/(6d)}/6``;
    * minor-circuit: ``k`` (or ``floor(tw/4)``), bound ``e^{7k/(120 d 4^d)}/30``;
    * treedepth-formula: bound ``e^{t/(12d)}/12``.
    """
    kind = _ALIASES.get(q.kind, q.kind)
    if kind not in BOUND_KINDS:
        raise InvalidInput(f"unknown bound kind {q.kind!r}")
    if q.value <= 0 or q.d <= 0:
        raise InvalidInput("bound parameters must be positive")
    with mpmath.workdps(dps):
        d = mpmath.mpf(q.d)
        if kind == "treewidth-circuit":
            k = q.value // 4
            expo = mpmath.mpf(k) / (6 * d)
            val = mpmath.exp(expo) / 6
            return BoundResult(kind, val, "e^(k/(6d))/6", expo, k, f"k = floor(tw/4) = {k}")
        if kind == "minor-circuit":
            k = q.value if q.value_is_k else q.value // 4
            how = "k given" if q.value_is_k else f"k = floor(tw/4) = {k}"
            expo = 7 * mpmath.mpf(k) / (120 * d * mpmath.power(4, d))
            val = mpmath.exp(expo) / 30
            return BoundResult(kind, val, "e^(7k/(120 d 4^d))/30", expo, k, how)
        expo = mpmath.mpf(q.value) / (12 * d)
        val = mpmath.exp(expo) / 12
        return BoundResult(kind, val, "e^(t/(12d))/12", expo, None, "t = treedepth")
