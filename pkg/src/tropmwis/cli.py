"""Command-line front end.

    tropmwis gen grid 3 3 -o g.txt
    tropmwis gen td --graph g.txt -o g.td
    tropmwis compile --mode tw --graph g.txt --decomposition g.td -o c.txt
    tropmwis verify --graph g.txt --circuit c.txt --mode symbolic
    tropmwis audit circuit --graph g.txt --circuit c.txt
    tropmwis bound tw-circuit --tw 5000 --d 4
    tropmwis bench --config bench.json --out results/

Every command prints a JSON report (or writes it with ``--report``).  Exit code
0 on success, 2 when an audit or verification refutes the circuit, 1 on errors.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from . import formats
from .audit import BoundQuery, audit_circuit, audit_formula, bound_gates
from .bench import bench_suite, rows_to_csv
from .circuit import BOTTOM, evaluate, is_formula
from .compilers import compile_bruteforce, compile_cluster_expander, compile_treedepth, compile_treewidth
from .decomposition import (exact_treedepth_small, exact_treewidth_small, heuristic_tree_decomposition,
                            heuristic_treedepth_forest)
from .errors import InvalidInput
from .graph import gen_clique, gen_cycle, gen_grid, gen_path, gen_subdivided_clique
from .hitting import (SetFamily, check_lll_precondition, family_normalize, hit_clusters,
                      hit_family_exact, hit_family_moser_tardos, hitting_params)
from .minors import gen_cluster_expander
from .verify import verify_mwis_circuit

SCHEMA = 1
REFUTED_EXIT = 2


class UsageError(InvalidInput):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class ExperimentPlan:
    kind: str
    inputs: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    output: str | None = None
    report: str | None = None
    timings: bool = True
    argv: list = field(default_factory=list)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tropmwis", description="Tropical MWIS circuits: compile, verify, audit, bound.")
    p.add_argument("--version", action="version", version=f"tropmwis {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--report", help="write the JSON report here instead of stdout")
    common.add_argument("--no-timings", action="store_true", help="omit timings (byte-stable reports)")
    common.add_argument("--seed", type=int, default=0)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", parents=[common], help="generate graphs, decompositions, forests")
    g.add_argument("family", choices=["grid", "path", "cycle", "clique", "subdivided-clique",
                                      "expander", "td", "forest"])
    g.add_argument("sizes", nargs="*", type=int)
    g.add_argument("--graph", help="input graph (td, forest)")
    g.add_argument("--exact", action="store_true", help="exact decomposition/forest (small graphs)")
    g.add_argument("--model", help="expander: also write the cluster model here")
    g.add_argument("-o", "--output", required=True)

    c = sub.add_parser("compile", parents=[common], help="compile an MWIS-circuit")
    c.add_argument("--mode", required=True, choices=["tw", "td", "brute", "expander"])
    c.add_argument("--graph")
    c.add_argument("--decomposition")
    c.add_argument("--forest")
    c.add_argument("--w", type=int)
    c.add_argument("--d", type=int)
    c.add_argument("--graph-out", help="expander: write the generated graph here")
    c.add_argument("-o", "--output", required=True)

    e = sub.add_parser("eval", parents=[common], help="evaluate a circuit")
    e.add_argument("--circuit", required=True)
    e.add_argument("--weights", required=True, help="comma-separated, '-inf' allowed")

    v = sub.add_parser("verify", parents=[common], help="check a circuit against the MWIS oracle")
    v.add_argument("--circuit", required=True)
    v.add_argument("--graph", required=True)
    v.add_argument("--mode", choices=["symbolic", "randomized"], default="symbolic")
    v.add_argument("--trials", type=int, default=200)

    a = sub.add_parser("audit", parents=[common], help="separator-based audit")
    a.add_argument("target", choices=["circuit", "formula"])
    a.add_argument("--circuit", required=True)
    a.add_argument("--graph", required=True)
    a.add_argument("--x", help="comma-separated vertex set X (circuit audits; default V)")
    a.add_argument("--max-rounds", type=int)

    h = sub.add_parser("hit", parents=[common], help="find an independent set hitting a family")
    h.add_argument("--graph", required=True)
    h.add_argument("--family", required=True)
    h.add_argument("--mode", choices=["mt", "exact", "cluster"], default="mt")
    h.add_argument("--model", help="cluster mode: induced minor model file")
    h.add_argument("--max-rounds", type=int)

    b = sub.add_parser("bound", parents=[common], help="closed-form gate lower bounds")
    b.add_argument("kind", choices=["tw-circuit", "minor-circuit", "td-formula"])
    b.add_argument("--tw", type=int)
    b.add_argument("--k", type=int)
    b.add_argument("--td", type=int)
    b.add_argument("--d", type=int, required=True)

    s = sub.add_parser("bench", parents=[common], help="size table, CSV and figure")
    s.add_argument("--config", help="JSON config; omitted means an empty suite")
    s.add_argument("--out", required=True, help="output directory")
    return p


_GEN_ARITY = {"grid": 2, "path": 1, "cycle": 1, "clique": 1, "subdivided-clique": 1,
              "expander": 2, "td": 0, "forest": 0}


def _need_file(path, flag):
    if path is None:
        raise UsageError(f"{flag} is required")
    if not Path(path).is_file():
        raise UsageError(f"{flag}: no such file {path}")
    return path


def parse_invocation(argv) -> ExperimentPlan:
    argv = list(argv)
    ns = build_parser().parse_args(argv)
    plan = ExperimentPlan(ns.command, report=ns.report, timings=not ns.no_timings, argv=argv)
    plan.params["seed"] = ns.seed
    cmd = ns.command
    if cmd == "gen":
        want = _GEN_ARITY[ns.family]
        if len(ns.sizes) != want:
            raise UsageError(f"gen {ns.family} takes {want} size argument(s)")
        if any(x < 0 for x in ns.sizes) or (ns.family == "expander" and min(ns.sizes) < 1):
            raise UsageError("sizes out of range")
        plan.kind = f"gen-{ns.family}"
        plan.params.update(sizes=ns.sizes, exact=ns.exact)
        if ns.family in ("td", "forest"):
            plan.inputs["graph"] = _need_file(ns.graph, "--graph")
        plan.params["model"] = ns.model
        plan.output = ns.output
    elif cmd == "compile":
        plan.params["mode"] = ns.mode
        if ns.mode == "expander":
            if ns.w is None or ns.d is None or ns.w < 1 or ns.d < 1:
                raise UsageError("compile --mode expander needs positive --w and --d")
            plan.params.update(w=ns.w, d=ns.d, graph_out=ns.graph_out)
        else:
            plan.inputs["graph"] = _need_file(ns.graph, "--graph")
            if ns.decomposition:
                plan.inputs["decomposition"] = _need_file(ns.decomposition, "--decomposition")
            if ns.forest:
                plan.inputs["forest"] = _need_file(ns.forest, "--forest")
        plan.output = ns.output
    elif cmd == "eval":
        plan.inputs["circuit"] = _need_file(ns.circuit, "--circuit")
        plan.params["weights"] = _parse_weights(ns.weights)
    elif cmd == "verify":
        plan.inputs["circuit"] = _need_file(ns.circuit, "--circuit")
        plan.inputs["graph"] = _need_file(ns.graph, "--graph")
        if ns.trials < 1:
            raise UsageError("--trials must be positive")
        plan.params.update(mode=ns.mode, trials=ns.trials)
    elif cmd == "audit":
        plan.kind = f"audit-{ns.target}"
        plan.inputs["circuit"] = _need_file(ns.circuit, "--circuit")
        plan.inputs["graph"] = _need_file(ns.graph, "--graph")
        plan.params.update(x=None if ns.x is None else _parse_ints(ns.x, "--x"),
                           max_rounds=ns.max_rounds)
        if ns.target == "formula" and ns.x is not None:
            raise UsageError("--x applies to circuit audits only")
    elif cmd == "hit":
        plan.inputs["graph"] = _need_file(ns.graph, "--graph")
        plan.inputs["family"] = _need_file(ns.family, "--family")
        if ns.mode == "cluster":
            plan.inputs["model"] = _need_file(ns.model, "--model")
        if ns.max_rounds is not None and ns.max_rounds < 0:
            raise UsageError("--max-rounds must be non-negative")
        plan.params.update(mode=ns.mode, max_rounds=ns.max_rounds)
    elif cmd == "bound":
        value = {"tw-circuit": ns.tw, "td-formula": ns.td}.get(ns.kind)
        is_k = False
        if ns.kind == "minor-circuit":
            if (ns.k is None) == (ns.tw is None):
                raise UsageError("bound minor-circuit takes exactly one of --k, --tw")
            value, is_k = (ns.k, True) if ns.k is not None else (ns.tw, False)
        if value is None:
            raise UsageError(f"bound {ns.kind} needs --{'tw' if ns.kind == 'tw-circuit' else 'td'}")
        if value <= 0 or ns.d <= 0:
            raise UsageError("bound parameters must be positive")
        plan.params.update(kind=ns.kind, value=value, d=ns.d, value_is_k=is_k)
    elif cmd == "bench":
        if ns.config is not None:
            plan.inputs["config"] = _need_file(ns.config, "--config")
        plan.output = ns.out
    return plan


def _parse_ints(text, flag):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"{flag}: expected comma-separated integers") from None


def _parse_weights(text):
    out = []
    for t in text.split(","):
        t = t.strip()
        if t in ("-inf", "bottom"):
            out.append(BOTTOM)
            continue
        try:
            out.append(int(t))
        except ValueError:
            try:
                out.append(float(t))
            except ValueError:
                raise UsageError(f"--weights: bad entry {t!r}") from None
    return out


def _load(plan, key, reader):
    return reader(formats.read_text(plan.inputs[key]))


def _write(path, text):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(text)


def _jsonable(x):
    if x is BOTTOM:
        return "-inf"
    return x


def execute(plan: ExperimentPlan) -> tuple[dict, int]:
    """Run the plan; returns ``(report, exit_code)``."""
    t0 = time.perf_counter()
    seed = plan.params["seed"]
    results, code = _dispatch(plan, seed)
    report = {
        "schema": SCHEMA,
        "version": __version__,
        "command": plan.argv,
        "kind": plan.kind,
        "seed": seed,
        "results": results,
    }
    if plan.timings:
        report["timings"] = {"total": time.perf_counter() - t0}
    else:
        _strip_timings(report)
    return report, code


def _strip_timings(obj):
    if isinstance(obj, dict):
        obj.pop("timings", None)
        for v in obj.values():
            _strip_timings(v)
    elif isinstance(obj, list):
        for v in obj:
            _strip_timings(v)


def _dispatch(plan, seed):
    kind = plan.kind
    if kind.startswith("gen-"):
        return _gen(plan, kind[4:], seed), 0
    if kind == "compile":
        return _compile(plan, seed), 0
    if kind == "eval":
        C = _load(plan, "circuit", formats.read_circuit)
        val = evaluate(C, plan.params["weights"])
        return {"value": _jsonable(val), "gates": C.size}, 0
    if kind == "verify":
        C = _load(plan, "circuit", formats.read_circuit)
        G = _load(plan, "graph", formats.read_graph)
        v = verify_mwis_circuit(C, G, plan.params["mode"], plan.params["trials"], seed)
        return v.to_json(), REFUTED_EXIT if v.status == "refuted" else 0
    if kind in ("audit-circuit", "audit-formula"):
        C = _load(plan, "circuit", formats.read_circuit)
        G = _load(plan, "graph", formats.read_graph)
        if kind == "audit-circuit":
            rep = audit_circuit(C, G, plan.params["x"], seed, plan.params["max_rounds"])
        else:
            rep = audit_formula(C, G, seed, plan.params["max_rounds"])
        return rep.to_json(), REFUTED_EXIT if rep.verdict == "refuted" else 0
    if kind == "hit":
        return _hit(plan, seed), 0
    if kind == "bound":
        q = BoundQuery(plan.params["kind"], plan.params["value"], plan.params["d"],
                       plan.params["value_is_k"])
        return bound_gates(q).to_json(), 0
    if kind == "bench":
        return _bench(plan), 0
    raise UsageError(f"unknown command {kind}")


def _gen(plan, fam, seed):
    sizes = plan.params["sizes"]
    if fam in ("td", "forest"):
        G = _load(plan, "graph", formats.read_graph)
        if fam == "td":
            if plan.params["exact"]:
                _, T = exact_treewidth_small(G)
            else:
                T = heuristic_tree_decomposition(G, seed)
            _write(plan.output, formats.write_tree_decomposition(T, G.n))
            return {"bags": len(T.bags), "width": T.width, "output": plan.output}
        F = exact_treedepth_small(G)[1] if plan.params["exact"] else heuristic_treedepth_forest(G)
        _write(plan.output, formats.write_forest(F))
        return {"depth": F.depth, "output": plan.output}
    model = None
    if fam == "grid":
        G = gen_grid(*sizes)
    elif fam == "path":
        G = gen_path(*sizes)
    elif fam == "cycle":
        G = gen_cycle(*sizes)
    elif fam == "clique":
        G = gen_clique(*sizes)
    elif fam == "subdivided-clique":
        G = gen_subdivided_clique(*sizes)
    else:
        G, model = gen_cluster_expander(sizes[0], sizes[1], seed)
    _write(plan.output, formats.write_graph(G))
    out = {"n": G.n, "m": G.edge_count, "max_degree": G.max_degree, "output": plan.output}
    if model is not None and plan.params.get("model"):
        _write(plan.params["model"], formats.write_model(model))
        out["model"] = plan.params["model"]
    return out


def _compile(plan, seed):
    mode = plan.params["mode"]
    out = {"mode": mode}
    if mode == "expander":
        G, C = compile_cluster_expander(plan.params["w"], plan.params["d"], seed)
        if plan.params.get("graph_out"):
            _write(plan.params["graph_out"], formats.write_graph(G))
            out["graph"] = plan.params["graph_out"]
    else:
        G = _load(plan, "graph", formats.read_graph)
        if mode == "tw":
            if "decomposition" in plan.inputs:
                T, _ = _load(plan, "decomposition", formats.read_tree_decomposition)
            else:
                T = heuristic_tree_decomposition(G, seed)
            out["width"] = T.width
            C = compile_treewidth(G, T)
        elif mode == "td":
            F = (_load(plan, "forest", lambda t: formats.read_forest(t, G.n))
                 if "forest" in plan.inputs else heuristic_treedepth_forest(G))
            out["depth"] = F.depth
            C = compile_treedepth(G, F)
        else:
            C = compile_bruteforce(G)
    _write(plan.output, formats.write_circuit(C))
    out.update(C.stats())
    out["is_formula"] = is_formula(C)
    out["output"] = plan.output
    return out


def _hit(plan, seed):
    G = _load(plan, "graph", formats.read_graph)
    sets = _load(plan, "family", formats.read_family)
    mode = plan.params["mode"]
    if any(not s for s in sets):
        return {"success": False, "independent_set": None, "method": mode,
                "note": "family has an empty member"}
    for s in sets:
        G.check_vertices(s)
    fam = SetFamily(tuple(sets))
    pre = check_lll_precondition(G, fam)
    out = {"precondition": {"satisfied": pre.satisfied, "lhs": pre.lhs, "rhs": pre.rhs,
                            "d": pre.d, "k": pre.k}}
    if mode == "exact":
        I = hit_family_exact(G, fam)
        out.update(success=I is not None, independent_set=None if I is None else sorted(I),
                   method="exact")
    elif mode == "mt":
        out.update(hit_family_moser_tardos(G, fam, hitting_params(G, fam, seed,
                                                                  plan.params["max_rounds"])).to_json())
    else:
        model = _load(plan, "model", formats.read_model)
        norm = family_normalize(fam, model)
        out["normalized"] = {"clusters_hit": list(norm.clusters_hit), "emptied": list(norm.emptied)}
        if norm.emptied:
            out.update(success=False, independent_set=None, method="cluster",
                       note="a member meets no cluster")
        else:
            res = hit_clusters(G, model, norm.family, seed, plan.params["max_rounds"])
            out.update(res.to_json())
    if isinstance(out["precondition"]["rhs"], float) and out["precondition"]["rhs"] == float("inf"):
        out["precondition"]["rhs"] = "inf"
    return out


def _bench(plan):
    cfg = {}
    if "config" in plan.inputs:
        try:
            cfg = json.loads(formats.read_text(plan.inputs["config"]))
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"bench config is not valid JSON: {exc}") from None
    cfg.setdefault("seed", plan.params["seed"])
    rows, timings = bench_suite(cfg)
    out = Path(plan.output)
    out.mkdir(parents=True, exist_ok=True)
    _write(out / "table.csv", rows_to_csv(rows))
    from .plotting import plot_bench
    plot_bench(rows, out / "sizes.png")
    return {"rows": rows, "table": str(out / "table.csv"), "figure": str(out / "sizes.png"),
            "timings": timings}


def _dump(report) -> str:
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=False, default=str) + "\n"


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        plan = parse_invocation(argv)
        report, code = execute(plan)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (InvalidInput, RuntimeError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = _dump(report)
    if plan.report:
        _write(plan.report, text)
    else:
        sys.stdout.write(text)
    if plan.kind == "bench":
        _write(Path(plan.output) / "report.json", text)
    return code
