"""Size benchmark: compiled circuit sizes next to the closed-form lower bounds."""
from __future__ import annotations

import csv
import hashlib
import io
import time

from .audit import BoundQuery, bound_gates
from .compilers import compile_cluster_expander, compile_treedepth, compile_treewidth
from .config import caps
from .decomposition import (exact_treewidth_small, heuristic_tree_decomposition,
                            heuristic_treedepth_forest, treewidth_lower_bound)
from .errors import InvalidInput
from .graph import gen_grid

COLUMNS = ("family", "params", "n", "m", "max_degree", "tw_used", "tw_source", "tw_width",
           "tw_size", "td_depth", "td_size", "formula_size", "size_limit", "within_limit",
           "bound", "ratio", "error")

TD_MAX_N = 25  # treedepth formulas grow like n 2^depth; skip the column above this


def derive_seed(seed: int, label: str) -> int:
    """Stable 64-bit per-subtask seed."""
    h = hashlib.blake2b(f"{seed}:{label}".encode(), digest_size=8)
    return int.from_bytes(h.digest(), "big")


def _pair(x):
    a, b = x
    return int(a), int(b)


def parse_config(cfg: dict) -> dict:
    if not isinstance(cfg, dict):
        raise InvalidInput("bench config must be a JSON object")
    unknown = set(cfg) - {"seed", "grids", "expanders", "td_max_n"}
    if unknown:
        raise InvalidInput(f"unknown bench config keys: {sorted(unknown)}")
    out = {"seed": int(cfg.get("seed", 0)), "td_max_n": int(cfg.get("td_max_n", TD_MAX_N))}
    grids = cfg.get("grids", [])
    if isinstance(grids, dict):  # {"min": 2, "max": 6} means square grids
        grids = [[k, k] for k in range(int(grids["min"]), int(grids["max"]) + 1)]
    try:
        # a bare integer k means the k x k grid
        out["grids"] = [(int(g), int(g)) if isinstance(g, int) else _pair(g) for g in grids]
        out["expanders"] = [_pair(e) for e in cfg.get("expanders", [])]
    except (TypeError, ValueError, KeyError):
        raise InvalidInput("bench config: grids and expanders must be lists of integer pairs") from None
    for r, c in out["grids"]:
        if r < 1 or c < 1:
            raise InvalidInput(f"bad grid size {r}x{c}")
    for w, d in out["expanders"]:
        if w < 1 or d < 1:
            raise InvalidInput(f"bad expander parameters w={w}, d={d}")
    return out


def _grid_row(r, c, seed, td_max_n):
    G = gen_grid(r, c)
    row = {"family": "grid", "params": f"{r}x{c}", "n": G.n, "m": G.edge_count,
           "max_degree": G.max_degree}
    if G.n <= caps().treewidth:
        tw, T = exact_treewidth_small(G)
        row["tw_source"] = "exact"
    else:
        T = heuristic_tree_decomposition(G, seed)
        tw = treewidth_lower_bound(G)
        row["tw_source"] = "lower-bound"
    row["tw_used"] = tw
    row["tw_width"] = T.width
    row["tw_size"] = compile_treewidth(G, T).size
    if G.n <= td_max_n:
        F = heuristic_treedepth_forest(G)
        row["td_depth"] = F.depth
        row["td_size"] = compile_treedepth(G, F).size
    if tw >= 1 and G.max_degree >= 1:
        b = bound_gates(BoundQuery("treewidth-circuit", tw, G.max_degree))
        row["bound"] = float(b.value)
        row["ratio"] = row["tw_size"] / float(b.value)
    return row


def _expander_row(w, d, seed):
    G, Fm = compile_cluster_expander(w, d, seed)
    limit = 3 * d * 2 ** (w / d)
    return {"family": "expander", "params": f"w={w},d={d}", "n": G.n, "m": G.edge_count,
            "max_degree": G.max_degree, "formula_size": Fm.size, "size_limit": limit,
            "within_limit": Fm.size <= limit}


def bench_suite(cfg: dict) -> tuple[list, dict]:
    """``(rows, timings)``; a failing instance records its error and the suite moves on."""
    cfg = parse_config(cfg)
    rows, timings = [], {}
    jobs = [("grid", g) for g in cfg["grids"]] + [("expander", e) for e in cfg["expanders"]]
    for fam, p in jobs:
        label = f"{fam}-{p[0]}-{p[1]}"
        s = derive_seed(cfg["seed"], label)
        t0 = time.perf_counter()
        try:
            row = _grid_row(*p, s, cfg["td_max_n"]) if fam == "grid" else _expander_row(*p, s)
        except Exception as exc:  # recorded per instance
            row = {"family": fam, "params": f"{p[0]},{p[1]}", "error": f"{type(exc).__name__}: {exc}"}
        timings[label] = time.perf_counter() - t0
        rows.append({k: row.get(k) for k in COLUMNS})
    return rows, timings


def rows_to_csv(rows: list) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: ("" if r.get(k) is None else _fmt(r[k])) for k in COLUMNS})
    return buf.getvalue()


def _fmt(x):
    if isinstance(x, float):
        return f"{x:.6g}"
    return x
