"""Tropical (max, +) circuits: the gate DAG, its evaluation and its polynomial.

A circuit is a tuple of gates in topological order (children always have
smaller indices than their parents) plus an output index.  Gates are

* ``Gate("v", vertex)``  variable leaf,
* ``Gate("z")``          the constant 0,
* ``Gate("m", a, b)``    max of gates ``a`` and ``b``,
* ``Gate("p", a, b)``    sum of gates ``a`` and ``b``.

``BOTTOM`` stands for minus infinity.  It is an exact symbol, never a float,
so evaluation over integer weights stays integer-exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

from .config import caps
from .errors import CircuitError, InvalidInput
from .graph import from_mask, to_mask

VAR, ZERO, MAX, PLUS = "v", "z", "m", "p"


class _Bottom:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "BOTTOM"

    def __str__(self):
        return "-inf"

    def __reduce__(self):
        return (_Bottom, ())


BOTTOM = _Bottom()


def is_bottom(x) -> bool:
    return x is BOTTOM or (isinstance(x, float) and x == float("-inf"))


class Gate(NamedTuple):
    kind: str
    a: int | None = None
    b: int | None = None


class TropicalCircuit:
    """Immutable validated circuit.  ``output is None`` encodes the empty polynomial."""

    def __init__(self, gates, output):
        self.gates = tuple(gates)
        self.output = output

    def __len__(self):
        return len(self.gates)

    def __eq__(self, other):
        return (isinstance(other, TropicalCircuit)
                and self.gates == other.gates and self.output == other.output)

    def __hash__(self):
        return hash((self.gates, self.output))

    def __repr__(self):
        return f"TropicalCircuit(size={self.size}, output={self.output})"

    @property
    def is_empty(self) -> bool:
        return self.output is None

    @property
    def size(self) -> int:
        """Total number of gates, leaves included."""
        return len(self.gates)

    @cached_property
    def nonleaf_count(self) -> int:
        return sum(1 for g in self.gates if g.kind in (MAX, PLUS))

    @cached_property
    def fanout(self) -> tuple:
        out = [0] * len(self.gates)
        for g in self.gates:
            if g.kind in (MAX, PLUS):
                out[g.a] += 1
                out[g.b] += 1
        return tuple(out)

    @cached_property
    def reachable(self) -> frozenset:
        if self.output is None:
            return frozenset()
        seen = {self.output}
        stack = [self.output]
        while stack:
            g = self.gates[stack.pop()]
            if g.kind in (MAX, PLUS):
                for c in (g.a, g.b):
                    if c not in seen:
                        seen.add(c)
                        stack.append(c)
        return frozenset(seen)

    @cached_property
    def support_masks(self) -> tuple:
        """Variables reachable from each gate, as bitmasks."""
        sup = []
        for g in self.gates:
            if g.kind == VAR:
                sup.append(1 << g.a)
            elif g.kind == ZERO:
                sup.append(0)
            else:
                sup.append(sup[g.a] | sup[g.b])
        return tuple(sup)

    def stats(self) -> dict:
        fo = self.fanout
        return {
            "gates": self.size,
            "nonleaf_gates": self.nonleaf_count,
            "max_gates": sum(1 for g in self.gates if g.kind == MAX),
            "plus_gates": sum(1 for g in self.gates if g.kind == PLUS),
            "max_fanout": max(fo, default=0),
            "is_formula": is_formula(self),
        }


def validate_circuit(gates, output) -> TropicalCircuit:
    """Check labels, references and acyclicity; gates must be listed children-first."""
    checked = []
    for i, g in enumerate(gates):
        g = Gate(*g)
        if g.kind == VAR:
            if not isinstance(g.a, int) or g.a < 0 or g.b is not None:
                raise CircuitError(i, f"bad variable label {g.a!r}")
        elif g.kind == ZERO:
            if g.a is not None or g.b is not None:
                raise CircuitError(i, "constant gate takes no arguments")
        elif g.kind in (MAX, PLUS):
            for c in (g.a, g.b):
                if not isinstance(c, int):
                    raise CircuitError(i, f"fan-in-2 gate needs two children, got {c!r}")
                if c == i:
                    raise CircuitError(i, "cycle: gate references itself")
                if c < 0 or c >= len(gates):
                    raise CircuitError(i, f"dangling reference to gate {c}")
                if c > i:
                    raise CircuitError(i, f"cycle or forward reference to gate {c}")
        else:
            raise CircuitError(i, f"unknown gate label {g.kind!r}")
        checked.append(g)
    if output is not None and not (isinstance(output, int) and 0 <= output < len(checked)):
        raise CircuitError(output, "output gate does not exist")
    return TropicalCircuit(checked, output)


def evaluate(C: TropicalCircuit, w):
    """Value of the output gate under weights ``w`` (sequence or mapping vertex -> value)."""
    if C.is_empty:
        return BOTTOM
    live = C.reachable
    vals = [None] * len(C.gates)
    for i, g in enumerate(C.gates):
        if i not in live:
            continue
        k = g.kind
        if k == VAR:
            try:
                x = w[g.a]
            except (IndexError, KeyError):
                x = None
            if x is None:
                raise InvalidInput(f"no weight for vertex {g.a}")
            vals[i] = BOTTOM if is_bottom(x) else x
        elif k == ZERO:
            vals[i] = 0
        else:
            x, y = vals[g.a], vals[g.b]
            if k == MAX:
                vals[i] = y if x is BOTTOM else x if y is BOTTOM else max(x, y)
            else:
                vals[i] = BOTTOM if x is BOTTOM or y is BOTTOM else x + y
    return vals[C.output]


def support(C: TropicalCircuit, g: int | None = None) -> frozenset:
    """Variables of the polynomial at gate ``g`` (the output by default)."""
    if g is None:
        if C.is_empty:
            return frozenset()
        g = C.output
    return from_mask(C.support_masks[g])


def is_formula(C: TropicalCircuit) -> bool:
    fo = C.fanout
    return all(f <= 1 for f in fo) and (C.is_empty or fo[C.output] == 0)


def _emit(C, keep_root, resolve):
    """Rebuild the gates reachable from ``keep_root`` with children passed through ``resolve``."""
    need = set()
    stack = [keep_root]
    while stack:
        i = stack.pop()
        if i in need:
            continue
        need.add(i)
        g = C.gates[i]
        if g.kind in (MAX, PLUS):
            stack += [resolve(g.a), resolve(g.b)]
    index = {}
    gates = []
    for i in sorted(need):
        g = C.gates[i]
        if g.kind in (MAX, PLUS):
            g = Gate(g.kind, index[resolve(g.a)], index[resolve(g.b)])
        index[i] = len(gates)
        gates.append(g)
    return TropicalCircuit(gates, index[keep_root])


def restrict_gate_neg_inf(C: TropicalCircuit, g: int) -> TropicalCircuit:
    """Circuit for the polynomial obtained by forcing gate ``g`` to minus infinity.

    Bottom is folded away (``max(bot, x) = x``, ``bot + x = bot``) and dead gates
    are dropped, so the result never mentions bottom.  If the output itself
    collapses, the empty circuit (``is_empty``) is returned.
    """
    if not 0 <= g < len(C.gates):
        raise InvalidInput(f"no gate {g}")
    if C.is_empty:
        return C
    alias = list(range(len(C.gates)))
    dead = [False] * len(C.gates)
    for i, gate in enumerate(C.gates):
        if i == g:
            dead[i] = True
            continue
        if gate.kind not in (MAX, PLUS):
            continue
        a, b = alias[gate.a], alias[gate.b]
        da, db = dead[gate.a], dead[gate.b]
        if gate.kind == PLUS:
            dead[i] = da or db
        elif da and db:
            dead[i] = True
        elif da:
            alias[i] = b
        elif db or a == b:
            alias[i] = a
    if dead[C.output]:
        return TropicalCircuit((), None)
    return _emit(C, alias[C.output], alias.__getitem__)


def prune(C: TropicalCircuit) -> TropicalCircuit:
    """Drop gates not reachable from the output."""
    if C.is_empty:
        return C
    return _emit(C, C.output, lambda i: i)


@dataclass(frozen=True)
class MonomialSet:
    monomials: frozenset  # of frozensets; frozenset() is the constant-0 monomial
    multilinearity_violated: bool = False
    truncated: bool = False
    square_witness: int | None = None  # a vertex occurring squared, when violated

    def __len__(self):
        return len(self.monomials)

    def __contains__(self, item):
        return frozenset(item) in self.monomials


def monomial_masks(C: TropicalCircuit, g: int | None = None, cap: int | None = None):
    """Bottom-up monomial sets as bitmasks: ``(set, violated, truncated, witness)``."""
    cap = caps().monomials if cap is None else cap
    if C.is_empty:
        return frozenset(), False, False, None
    root = C.output if g is None else g
    need = _below(C, root)
    sets = {}
    violated = False
    witness = None
    for i in sorted(need):
        gate = C.gates[i]
        if gate.kind == VAR:
            s = {1 << gate.a}
        elif gate.kind == ZERO:
            s = {0}
        elif gate.kind == MAX:
            s = sets[gate.a] | sets[gate.b]
        else:
            s = set()
            for x in sets[gate.a]:
                for y in sets[gate.b]:
                    if x & y:
                        if not violated:
                            violated = True
                            witness = (x & y & -(x & y)).bit_length() - 1
                    s.add(x | y)
                if len(s) > cap:
                    return frozenset(), violated, True, witness
        if len(s) > cap:
            return frozenset(), violated, True, witness
        sets[i] = s
    return frozenset(sets[root]), violated, False, witness


def monomials(C: TropicalCircuit, g: int | None = None, cap: int | None = None) -> MonomialSet:
    """The tropical polynomial at gate ``g`` as a set of vertex sets.

    Coefficients are not tracked (max-plus addition is idempotent).  Exceeding
    ``cap`` monomials at any gate aborts with ``truncated`` set.
    """
    ms, violated, truncated, witness = monomial_masks(C, g, cap)
    return MonomialSet(frozenset(from_mask(m) for m in ms), violated, truncated, witness)


def _below(C, root):
    seen = {root}
    stack = [root]
    while stack:
        gate = C.gates[stack.pop()]
        if gate.kind in (MAX, PLUS):
            for c in (gate.a, gate.b):
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
    return seen


def computes(C: TropicalCircuit, I) -> bool:
    """Whether the output polynomial contains the multilinear monomial ``prod_{v in I} v``.

    Only monomials inside ``I`` are tracked, so this stays cheap for small ``I``
    even when the full monomial set is huge.
    """
    if C.is_empty:
        return False
    target = to_mask(I)
    sets = {}
    for i in sorted(C.reachable):
        gate = C.gates[i]
        if gate.kind == VAR:
            bit = 1 << gate.a
            s = {bit} if bit & target else set()
        elif gate.kind == ZERO:
            s = {0}
        elif gate.kind == MAX:
            s = sets[gate.a] | sets[gate.b]
        else:
            s = {x | y for x in sets[gate.a] for y in sets[gate.b] if not x & y}
        sets[i] = s
    return target in sets[C.output]


def wrap_nonneg(C: TropicalCircuit) -> TropicalCircuit:
    """Replace every variable leaf ``x`` by ``max(x, 0)`` (two extra gates per leaf)."""
    if C.is_empty:
        return C
    gates = []
    index = {}
    for i, g in enumerate(C.gates):
        if g.kind == VAR:
            gates.append(g)
            gates.append(Gate(ZERO))
            gates.append(Gate(MAX, len(gates) - 2, len(gates) - 1))
        elif g.kind == ZERO:
            gates.append(g)
        else:
            gates.append(Gate(g.kind, index[g.a], index[g.b]))
        index[i] = len(gates) - 1
    return TropicalCircuit(gates, index[C.output])


class CircuitBuilder:
    """Incremental construction of circuits for the compilers.

    With ``share=True`` structurally equal gates are hash-consed, producing a
    DAG.  With ``share=False`` every call makes a fresh gate, so a caller that
    uses every gate at most once obtains a formula.  ``plus`` with a constant-0
    operand returns the other operand (0 is the multiplicative unit).
    """

    def __init__(self, share: bool = True):
        self.share = share
        self.gates = []
        self._cache = {}

    def _add(self, gate):
        if self.share:
            hit = self._cache.get(gate)
            if hit is not None:
                return hit
            self._cache[gate] = len(self.gates)
        self.gates.append(gate)
        return len(self.gates) - 1

    def var(self, v: int) -> int:
        return self._add(Gate(VAR, v))

    def zero(self) -> int:
        return self._add(Gate(ZERO))

    def max(self, a: int, b: int) -> int:
        if self.share and a == b:
            return a
        return self._add(Gate(MAX, a, b))

    def plus(self, a: int, b: int) -> int:
        if self.gates[a].kind == ZERO:
            return b
        if self.gates[b].kind == ZERO:
            return a
        return self._add(Gate(PLUS, a, b))

    def max_all(self, items) -> int:
        return self._balanced(list(items), self.max)

    def plus_all(self, items) -> int:
        items = list(items)
        if not items:
            return self.zero()
        return self._balanced(items, self.plus)

    def _balanced(self, items, op):
        if not items:
            raise InvalidInput("empty operand list")
        if len(items) == 1:
            return items[0]
        mid = (len(items) + 1) // 2
        return op(self._balanced(items[:mid], op), self._balanced(items[mid:], op))

    def build(self, output: int) -> TropicalCircuit:
        return prune(TropicalCircuit(self.gates, output))
