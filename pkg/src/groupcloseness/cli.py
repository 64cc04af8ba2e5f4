"""Command-line entry point: ``gcm <subcommand> ...``.

Exit status: 0 ok, 2 usage error, 3 capacity exceeded, 4 unreadable input.
Wall times cover the algorithm call only, not loading.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import dataclass

from .baselines import degree_group, greedy_reference, overlap_report, topk_group
from .bitgreedy import DEFAULT_MEMORY_CAP, bit_greedy_pp
from .errors import CapacityError, DisconnectedGraphError, GraphFormatError, UndefinedMeasureError
from .exact import DEFAULT_BUDGET, exact_group_enumeration, export_ilp
from .graph import Graph, largest_connected_component, read_edge_list
from .greedy import GroupResult, default_threads, group_closeness, greedy_pp
from .topk import run_top_k

EXIT_USAGE = 2
EXIT_CAPACITY = 3
EXIT_PARSE = 4

ALGORITHMS = ("greedy++", "bitgreedy++", "greedy-ref", "exact", "degree", "topk")

REPORT_FIELDS = [
    "graph", "n", "m", "algorithm", "k", "group", "distance_sum", "score",
    "wall_time_s", "visited", "skipped", "evaluated", "peak_memory_bytes",
]
TRACE_FIELDS = ["iteration", "node_label", "gain", "evaluated", "skipped", "visited"]
TOPK_FIELDS = ["rank", "node_label", "closeness", "distance_sum"]
OVERLAP_FIELDS = ["k", "overlap_topk_pct", "overlap_degree_pct"]
BENCH_FIELDS = [
    "algorithm", "k", "wall_time_s", "distance_sum", "score", "visited", "skipped",
    "evaluated", "peak_memory_bytes", "speedup",
]


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    input: str
    algorithm: str = "greedy++"
    k: int = 10
    threads: int = 1
    lazy: bool = True
    memory_cap: int = DEFAULT_MEMORY_CAP
    output_format: str = "json"
    seed: int | None = None  # accepted for interface stability; every algorithm here is deterministic
    budget: int = DEFAULT_BUDGET

    def validate(self):
        if self.algorithm not in ALGORITHMS:
            raise UsageError(f"unknown algorithm {self.algorithm!r}; choose from {', '.join(ALGORITHMS)}")
        if self.k < 1:
            raise UsageError("k must be >= 1")
        if self.threads < 1:
            raise UsageError("threads must be >= 1")


def load_graph(path: str, log=None) -> Graph:
    log = log or sys.stderr
    g = read_edge_list(path)
    lcc = largest_connected_component(g)
    if lcc.n < g.n:
        print(f"warning: graph is disconnected; using the largest component "
              f"({lcc.n} of {g.n} nodes, {lcc.m} of {g.m} edges)", file=log)
    return lcc


def _plain_group_result(g: Graph, group: list[int], algorithm: str) -> GroupResult:
    total, _ = group_closeness(g, group)
    return GroupResult(list(group), total, g.n, algorithm)


def solve(g: Graph, cfg: RunConfig) -> tuple[GroupResult, float]:
    """Run the configured algorithm; returns the result and its wall time in seconds."""
    if cfg.k >= g.n:
        raise UsageError(f"k={cfg.k} must be below the node count {g.n}")
    t0 = time.perf_counter()
    if cfg.algorithm == "greedy++":
        res = greedy_pp(g, cfg.k, lazy=cfg.lazy, threads=cfg.threads)
    elif cfg.algorithm == "bitgreedy++":
        res = bit_greedy_pp(g, cfg.k, lazy=cfg.lazy, memory_cap=cfg.memory_cap)
    elif cfg.algorithm == "greedy-ref":
        res = greedy_reference(g, cfg.k)
    elif cfg.algorithm == "exact":
        ex = exact_group_enumeration(g, cfg.k, budget=cfg.budget)
        res = GroupResult(list(ex.group), ex.distance_sum, g.n, "exact")
    elif cfg.algorithm == "degree":
        res = _plain_group_result(g, degree_group(g, cfg.k), "degree")
    else:
        res = _plain_group_result(g, topk_group(g, cfg.k), "topk")
    return res, time.perf_counter() - t0


def report(g: Graph, res: GroupResult, wall: float, name: str) -> dict:
    counted = bool(res.gain_trace)
    return {
        "graph": name,
        "n": g.n,
        "m": g.m,
        "algorithm": res.algorithm,
        "k": res.k,
        "group": [g.label(v) for v in res.group],
        "distance_sum": res.distance_sum,
        "score": float(res.score),
        "wall_time_s": round(wall, 6),
        "visited": res.total_visited() if counted else None,
        "skipped": res.total_skipped() if counted else None,
        "evaluated": res.total_evaluated() if counted else None,
        "peak_memory_bytes": res.peak_memory_bytes,
    }


def _csv_value(v):
    if v is None:
        return ""
    if isinstance(v, list):
        return " ".join(str(x) for x in v)
    return v


def write_rows(rows: list[dict], fields: list[str], fmt: str, out) -> None:
    if fmt == "json":
        json.dump(rows if len(rows) != 1 else rows[0], out, indent=2)
        out.write("\n")
    elif fmt == "csv":
        w = csv.DictWriter(out, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({f: _csv_value(r.get(f)) for f in fields})
    else:
        for r in rows:
            for f in fields:
                out.write(f"{f}: {_csv_value(r.get(f))}\n")
            if len(rows) > 1:
                out.write("\n")


def trace_rows(g: Graph, res: GroupResult) -> list[dict]:
    return [
        {"iteration": t.iteration, "node_label": g.label(t.node),
         "gain": "" if t.gain is None else t.gain, "evaluated": t.evaluated,
         "skipped": t.skipped, "visited": t.visited}
        for t in res.gain_trace
    ]


def _ks(text: str) -> list[int]:
    try:
        ks = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad k list {text!r}") from None
    if not ks or min(ks) < 1:
        raise UsageError("k values must be >= 1")
    return ks


def cmd_group_closeness(args, out) -> int:
    cfg = RunConfig(args.input, args.algo, args.k, args.threads, not args.no_lazy,
                    args.memory_cap, args.format, args.seed, args.budget)
    cfg.validate()
    g = load_graph(cfg.input)
    res, wall = solve(g, cfg)
    write_rows([report(g, res, wall, args.input)], REPORT_FIELDS, cfg.output_format, out)
    if args.trace:
        with open(args.trace, "w", newline="") as fh:
            write_rows(trace_rows(g, res), TRACE_FIELDS, "csv", fh)
    return 0


def cmd_top_k(args, out) -> int:
    if args.k < 1:
        raise UsageError("k must be >= 1")
    g = load_graph(args.input)
    if args.k > g.n:
        raise UsageError(f"k={args.k} exceeds node count {g.n}")
    state = run_top_k(g, args.k)
    rows = [
        {"rank": i + 1, "node_label": g.label(v), "closeness": float(c),
         "distance_sum": (g.n - 1) * c.denominator // c.numerator}
        for i, (v, c) in enumerate(state.ranking())
    ]
    write_rows(rows, TOPK_FIELDS, args.format, out)
    return 0


def cmd_exact(args, out) -> int:
    args.algo = "exact"
    args.threads, args.no_lazy, args.memory_cap, args.trace, args.seed = 1, False, DEFAULT_MEMORY_CAP, None, None
    return cmd_group_closeness(args, out)


def cmd_export_ilp(args, out) -> int:
    if args.k < 1:
        raise UsageError("k must be >= 1")
    g = load_graph(args.input)
    if args.k > g.n:
        raise UsageError(f"k={args.k} exceeds node count {g.n}")
    if args.output in (None, "-"):
        export_ilp(g, args.k, out, n_cap=args.n_cap)
    else:
        with open(args.output, "wb") as fh:
            export_ilp(g, args.k, fh, n_cap=args.n_cap)
    return 0


def cmd_overlap(args, out) -> int:
    ks = _ks(args.k)
    g = load_graph(args.input)
    if max(ks) >= g.n:
        raise UsageError(f"k={max(ks)} must be below the node count {g.n}")
    rows = [r.row() for r in overlap_report(g, ks)]
    write_rows(rows, OVERLAP_FIELDS, args.format, out)
    return 0


def cmd_bench(args, out) -> int:
    algos = [a for a in args.algos.split(",") if a]
    ks = _ks(args.ks)
    for a in algos:
        RunConfig(args.input, a, ks[0], args.threads).validate()
    g = load_graph(args.input)
    rows = []
    for k in ks:
        base_time = None
        sums = {}
        for a in algos:
            cfg = RunConfig(args.input, a, k, args.threads, not args.no_lazy, args.memory_cap)
            res, wall = solve(g, cfg)
            r = report(g, res, wall, args.input)
            base_time = wall if base_time is None else base_time
            r["speedup"] = round(base_time / wall, 4) if wall > 0 else ""
            rows.append(r)
            sums[a] = res.distance_sum
        greedy_sums = {a: s for a, s in sums.items() if a in ("greedy++", "bitgreedy++", "greedy-ref")}
        if args.check_objective and len(set(greedy_sums.values())) > 1:
            print(f"error: greedy variants disagree at k={k}: {greedy_sums}", file=sys.stderr)
            write_rows(rows, BENCH_FIELDS, "csv", out)
            return 1
    write_rows(rows, BENCH_FIELDS, "csv", out)
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gcm", description="Group closeness maximisation on unweighted graphs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, fmt=True):
        sp.add_argument("input", help="edge list, one 'u v' pair per line")
        if fmt:
            sp.add_argument("--format", choices=["json", "csv", "text"], default="json")

    gc = sub.add_parser("group-closeness", help="compute a group of size k")
    common(gc)
    gc.add_argument("--algo", default="greedy++", choices=ALGORITHMS)
    gc.add_argument("-k", type=int, required=True)
    gc.add_argument("--threads", type=int, default=default_threads())
    gc.add_argument("--no-lazy", action="store_true", help="re-evaluate every candidate each round")
    gc.add_argument("--memory-cap", type=int, default=DEFAULT_MEMORY_CAP, help="bytes, bit-parallel solver")
    gc.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max subsets for --algo exact")
    gc.add_argument("--trace", help="write the per-iteration trace as CSV to this file")
    gc.add_argument("--seed", type=int, help="reserved; all algorithms are deterministic")
    gc.set_defaults(func=cmd_group_closeness)

    tk = sub.add_parser("top-k", help="k nodes of highest closeness")
    common(tk)
    tk.add_argument("-k", type=int, required=True)
    tk.set_defaults(func=cmd_top_k)

    ex = sub.add_parser("exact", help="optimal group by exhaustive enumeration")
    common(ex)
    ex.add_argument("-k", type=int, required=True)
    ex.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    ex.set_defaults(func=cmd_exact)

    il = sub.add_parser("export-ilp", help="write the ILP in CPLEX LP format")
    common(il, fmt=False)
    il.add_argument("-k", type=int, required=True)
    il.add_argument("-o", "--output", help="output file (default stdout)")
    il.add_argument("--n-cap", type=int, default=5000)
    il.set_defaults(func=cmd_export_ilp)

    ov = sub.add_parser("overlap", help="overlap of the greedy group with top-k closeness/degree")
    common(ov)
    ov.add_argument("-k", required=True, help="k or comma-separated list of k")
    ov.set_defaults(func=cmd_overlap)

    be = sub.add_parser("bench", help="time algorithms over several k (CSV)")
    be.add_argument("input")
    be.add_argument("--algos", default="greedy++")
    be.add_argument("--ks", default="10")
    be.add_argument("--threads", type=int, default=default_threads())
    be.add_argument("--no-lazy", action="store_true")
    be.add_argument("--memory-cap", type=int, default=DEFAULT_MEMORY_CAP)
    be.add_argument("--check-objective", action="store_true",
                    help="fail if greedy variants report different distance sums")
    be.set_defaults(func=cmd_bench)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as e:
        print(f"capacity exceeded: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    except (GraphFormatError, OSError, UnicodeDecodeError) as e:
        print(f"cannot read input: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (ValueError, UndefinedMeasureError, DisconnectedGraphError) as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
