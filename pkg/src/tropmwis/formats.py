"""Plain-text formats for graphs, decompositions, forests, circuits, set families and minor models.

Every writer emits one record per line with a trailing newline; every reader
accepts exactly what the writer emits (plus blank lines and ``#`` comments), so
write(read(text)) == text for canonical files.
"""
from __future__ import annotations

from pathlib import Path

from .circuit import MAX, PLUS, VAR, ZERO, Gate, TropicalCircuit, validate_circuit
from .decomposition import TreeDecomposition, TreedepthForest
from .errors import CircuitError, InvalidInput
from .graph import Graph, build_graph
from .minors import InducedMinorModel


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield no, line.split()


def _ints(tok, no):
    try:
        return [int(t) for t in tok]
    except ValueError:
        raise InvalidInput(f"line {no}: expected integers, got {' '.join(tok)!r}") from None


# -- graph ------------------------------------------------------------------------

def write_graph(G: Graph) -> str:
    out = [f"p is {G.n} {G.edge_count}"]
    out += [f"e {u} {v}" for u, v in G.edges]
    return "\n".join(out) + "\n"


def read_graph(text: str) -> Graph:
    n = m = None
    edges = []
    for no, tok in _lines(text):
        if tok[0] == "p":
            if len(tok) != 4 or tok[1] != "is" or n is not None:
                raise InvalidInput(f"line {no}: bad header")
            n, m = _ints(tok[2:], no)
        elif tok[0] == "e":
            if n is None or len(tok) != 3:
                raise InvalidInput(f"line {no}: edge before header or malformed")
            edges.append(tuple(_ints(tok[1:], no)))
        else:
            raise InvalidInput(f"line {no}: unknown record {tok[0]!r}")
    if n is None:
        raise InvalidInput("missing 'p is' header")
    G = build_graph(n, edges)
    if G.edge_count != m:
        raise InvalidInput(f"header announces {m} edges, found {G.edge_count} distinct")
    return G


# -- tree decomposition -----------------------------------------------------------

def write_tree_decomposition(T: TreeDecomposition, n: int) -> str:
    out = [f"s td {len(T.bags)} {T.width + 1} {n}"]
    for i, bag in enumerate(T.bags):
        out.append(" ".join(["b", str(i)] + [str(v) for v in sorted(bag)]))
    out += [f"{i} {j}" for i, j in T.edges]
    return "\n".join(out) + "\n"


def read_tree_decomposition(text: str) -> tuple[TreeDecomposition, int]:
    """``(T, n)``; bag ids are 0-based like the vertices."""
    header = None
    bags = {}
    edges = []
    for no, tok in _lines(text):
        if tok[0] == "s":
            if len(tok) != 5 or tok[1] != "td" or header is not None:
                raise InvalidInput(f"line {no}: bad header")
            header = _ints(tok[2:], no)
        elif tok[0] == "b":
            ids = _ints(tok[1:], no)
            if not ids or ids[0] in bags:
                raise InvalidInput(f"line {no}: missing or repeated bag id")
            bags[ids[0]] = frozenset(ids[1:])
        else:
            e = _ints(tok, no)
            if len(e) != 2:
                raise InvalidInput(f"line {no}: tree edge needs two bag ids")
            edges.append(tuple(e))
    if header is None:
        raise InvalidInput("missing 's td' header")
    nbags, _, n = header
    if sorted(bags) != list(range(nbags)):
        raise InvalidInput(f"expected bags 0..{nbags - 1}")
    for i, j in edges:
        if not (0 <= i < nbags and 0 <= j < nbags):
            raise InvalidInput(f"tree edge {i} {j} names a missing bag")
    return TreeDecomposition(tuple(bags[i] for i in range(nbags)), tuple(edges)), n


# -- treedepth forest -------------------------------------------------------------

def write_forest(F: TreedepthForest) -> str:
    out = [f"r {v}" for v in F.roots]
    out += [f"c {p} {v}" for v, p in enumerate(F.parent) if p is not None]
    return "\n".join(out) + "\n"


def read_forest(text: str, n: int | None = None) -> TreedepthForest:
    """Vertex count is ``n`` when given, else one more than the largest id mentioned."""
    parent = {}
    for no, tok in _lines(text):
        vals = _ints(tok[1:], no)
        if tok[0] == "r" and len(vals) == 1:
            v, p = vals[0], None
        elif tok[0] == "c" and len(vals) == 2:
            p, v = vals
        else:
            raise InvalidInput(f"line {no}: expected 'r v' or 'c parent child'")
        if v in parent:
            raise InvalidInput(f"line {no}: vertex {v} listed twice")
        parent[v] = p
    size = n if n is not None else 1 + max(
        [v for v in parent] + [p for p in parent.values() if p is not None], default=-1)
    missing = [v for v in range(size) if v not in parent]
    if missing or any(v >= size for v in parent):
        raise InvalidInput(f"forest must list every vertex 0..{size - 1} exactly once")
    return TreedepthForest(tuple(parent[v] for v in range(size)))


# -- circuit ----------------------------------------------------------------------

def write_circuit(C: TropicalCircuit) -> str:
    out = []
    for i, g in enumerate(C.gates):
        if g.kind == VAR:
            out.append(f"v {i} {g.a}")
        elif g.kind == ZERO:
            out.append(f"z {i}")
        else:
            out.append(f"{g.kind} {i} {g.a} {g.b}")
    out.append("o none" if C.output is None else f"o {C.output}")
    return "\n".join(out) + "\n"


_ARITY = {VAR: 2, ZERO: 1, MAX: 3, PLUS: 3}


def read_circuit(text: str) -> TropicalCircuit:
    """Parse and validate; only the constant 0 (``z``) is accepted."""
    gates = []
    output = False
    for no, tok in _lines(text):
        kind = tok[0]
        if output is not False:
            raise InvalidInput(f"line {no}: content after the output line")
        if kind == "o":
            if len(tok) != 2:
                raise InvalidInput(f"line {no}: output line takes one id")
            output = None if tok[1] == "none" else _ints(tok[1:], no)[0]
            continue
        if kind not in _ARITY:
            raise CircuitError(len(gates), f"line {no}: unknown gate label {kind!r}"
                               " (only v, z, m, p; constants other than 0 are rejected)")
        vals = _ints(tok[1:], no)
        if len(vals) != _ARITY[kind]:
            raise CircuitError(len(gates), f"line {no}: wrong number of fields for {kind!r}")
        if vals[0] != len(gates):
            raise CircuitError(vals[0], f"line {no}: gate ids must ascend from 0 without gaps")
        gates.append(Gate(kind, *vals[1:]))
    if output is False:
        raise InvalidInput("missing output line 'o <id>'")
    return validate_circuit(gates, output)


# -- set families and minor models -----------------------------------------------

def write_family(sets) -> str:
    return "".join((" ".join(str(v) for v in sorted(s)) or "-") + "\n" for s in sets)


def read_family(text: str) -> list:
    """One set per line; a line with only ``-`` is the empty set."""
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        out.append(frozenset() if line == "-" else frozenset(_ints(line.split(), no)))
    return out


def write_model(model: InducedMinorModel) -> str:
    return "".join(" ".join(["f", str(h)] + [str(v) for v in sorted(c)]) + "\n"
                   for h, c in enumerate(model.clusters))


def read_model(text: str) -> InducedMinorModel:
    clusters = {}
    for no, tok in _lines(text):
        if tok[0] != "f":
            raise InvalidInput(f"line {no}: expected 'f <h> <v...>'")
        vals = _ints(tok[1:], no)
        if not vals or vals[0] in clusters:
            raise InvalidInput(f"line {no}: missing or repeated pattern vertex")
        clusters[vals[0]] = frozenset(vals[1:])
    if sorted(clusters) != list(range(len(clusters))):
        raise InvalidInput("pattern vertices must be 0..h-1")
    return InducedMinorModel(tuple(clusters[h] for h in range(len(clusters))))


def read_text(path) -> str:
    p = Path(path)
    if not p.is_file():
        raise InvalidInput(f"no such file: {path}")
    return p.read_text()
