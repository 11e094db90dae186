"""Command-line front end: encode, solve, verify, bench.

Exit codes: 0 success, 1 usage error or failed verification, 2 unreadable
or malformed graph input, 3 resource limit hit.
"""

from __future__ import annotations

import argparse
import json
import os
import signal
import subprocess
import sys
import tempfile
import time

from . import encoder, gismo, oracle
from .graph import Graph, GraphParseError, parse_graph_file
from .satcore import write_dimacs

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_RESOURCE = 3

DEFAULT_BUDGET = 5000
DEFAULT_TIME_LIMIT = 3600.0
DEFAULT_MEM_LIMIT_MB = 4096


class UsageError(Exception):
    pass


class ResourceLimitError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; usage errors are 1 here
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> _Parser:
    p = _Parser(prog="gicsat", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, with_k=True):
        sp.add_argument("graph", help="path to the input graph")
        if with_k:
            sp.add_argument("--k", type=int, required=True,
                            help="maximum number of simultaneous failures")
        sp.add_argument("--format", choices=("edgelist", "mtx"), default=None,
                        help="input format (default: inferred from extension)")

    enc = sub.add_parser("encode", help="emit DIMACS CNF plus a JSON sidecar")
    common(enc)
    enc.add_argument("--output", required=True, help="DIMACS output path")

    sol = sub.add_parser("solve", help="compute a sensor placement")
    common(sol)
    sol.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                     help="conflict budget per definability query")
    sol.add_argument("--order", default="input",
                     help="group order: input, deg-desc, deg-asc, random, "
                          "or an explicit comma-separated label list")
    sol.add_argument("--seed", type=int, default=None)
    sol.add_argument("--inner", choices=gismo.INNER_ORDERS, default="y-first")
    sol.add_argument("--output", default=None, help="also write the JSON record here")
    sol.add_argument("--timing", action="store_true",
                     help="include wall-clock seconds in the record "
                          "(off by default so identical runs emit identical bytes)")
    sol.add_argument("--time-limit", type=float, default=None, metavar="SECONDS")
    sol.add_argument("--mem-limit", type=int, default=None, metavar="MB")

    ver = sub.add_parser("verify", help="check a sensor set against the graph")
    common(ver)
    ver.add_argument("--sensors", required=True,
                     help="comma-separated node labels")

    ben = sub.add_parser("bench", help="run a manifest of graphs and score PAR-2")
    ben.add_argument("manifest", help="file listing one graph path per line")
    ben.add_argument("--k", default="1", help="comma-separated k values")
    ben.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    ben.add_argument("--time-limit", type=float, default=DEFAULT_TIME_LIMIT,
                     metavar="SECONDS")
    ben.add_argument("--mem-limit", type=int, default=DEFAULT_MEM_LIMIT_MB,
                     metavar="MB")
    ben.add_argument("--format", choices=("edgelist", "mtx"), default=None)
    ben.add_argument("--output", default=None, help="write the report JSON here")
    return p


def _load_graph(path: str, fmt: str | None) -> Graph:
    try:
        return parse_graph_file(path, fmt)
    except OSError as exc:
        raise GraphParseError(f"cannot read {path}: {exc}") from exc


def _check_k(g: Graph, k: int) -> None:
    if not 1 <= k <= g.n:
        raise UsageError(f"--k must be between 1 and the node count {g.n}, got {k}")


def _apply_limits(time_limit: float | None, mem_limit_mb: int | None):
    """Arm per-run limits; returns a restore callable for in-process callers."""
    restores = []
    if mem_limit_mb is not None:
        import resource
        limit = mem_limit_mb * 1024 * 1024
        try:
            old = resource.getrlimit(resource.RLIMIT_AS)
            resource.setrlimit(resource.RLIMIT_AS, (limit, old[1]))
            restores.append(lambda: resource.setrlimit(resource.RLIMIT_AS, old))
        except (ValueError, OSError):
            pass  # refusing to lower a hard limit is not fatal
    if time_limit is not None:
        def on_alarm(signum, frame):
            raise ResourceLimitError("time limit exceeded")
        previous = signal.signal(signal.SIGALRM, on_alarm)
        signal.setitimer(signal.ITIMER_REAL, time_limit)
        def disarm():
            signal.setitimer(signal.ITIMER_REAL, 0)
            signal.signal(signal.SIGALRM, previous)
        restores.append(disarm)

    def restore():
        for fn in reversed(restores):
            fn()
    return restore


def _parse_order(text: str, g: Graph) -> str | tuple[int, ...]:
    if text in gismo.ORDER_KEYWORDS:
        return text
    labels = [t for t in text.split(",") if t]
    try:
        return tuple(g.index_of(lab) for lab in labels)
    except KeyError as exc:
        raise UsageError(f"--order: {exc.args[0]}") from exc


def cmd_encode(args) -> int:
    g = _load_graph(args.graph, args.format)
    _check_k(g, args.k)
    inst = encoder.encode_instance(g, args.k)
    groups = [(g.labels[v], *inst.partition.group_of(v)) for v in range(g.n)]
    with open(args.output, "w", encoding="utf-8") as fp:
        write_dimacs(inst.formula, fp,
                     comments=[f"graph {os.path.basename(args.graph)} "
                               f"n {g.n} m {g.m} k {args.k}"],
                     groups=groups)
    sidecar = {
        "graph": os.path.basename(args.graph),
        "n": g.n,
        "m": g.m,
        "k": args.k,
        "num_vars": inst.formula.num_vars,
        "num_clauses": len(inst.formula),
        "detection_clauses": inst.detection_clauses,
        "cardinality_clauses": inst.cardinality_clauses,
        "aux_vars": len(inst.varmap.aux),
        "vars": {g.labels[v]: {"x": inst.varmap.x[v], "y": inst.varmap.y[v]}
                 for v in range(g.n)},
    }
    sidecar_path = os.path.splitext(args.output)[0] + ".json"
    with open(sidecar_path, "w", encoding="utf-8") as fp:
        fp.write(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    print(f"wrote {args.output} and {sidecar_path}: "
          f"{inst.formula.num_vars} vars, {len(inst.formula)} clauses")
    return EXIT_OK


def solve_record(graph_path: str, g: Graph, k: int, cfg: gismo.GismoConfig,
                 timing: bool = False) -> dict:
    """Run the full pipeline and assemble the machine-readable record."""
    start = time.monotonic()
    inst = encoder.encode_instance(g, k)
    result = gismo.run_gismo(inst, cfg)
    elapsed = time.monotonic() - start
    record = {
        "graph": os.path.basename(graph_path),
        "n": g.n,
        "m": g.m,
        "k": k,
        "config": {
            "budget": cfg.budget,
            "order": (cfg.order if isinstance(cfg.order, str)
                      else [g.labels[v] for v in cfg.order]),
            "seed": cfg.seed,
            "inner": cfg.inner_order,
            "engine": cfg.engine,
        },
        "sensor_count": len(result.sensor_set),
        "sensors": [g.labels[v] for v in sorted(result.sensor_set)],
        "queries": result.total_queries,
        "conflicts": result.total_conflicts,
        "budget_exhaustions": result.budget_exhaustions,
    }
    if timing:
        record["wall_seconds"] = elapsed
    return record


def cmd_solve(args) -> int:
    restore = _apply_limits(args.time_limit, args.mem_limit)
    try:
        g = _load_graph(args.graph, args.format)
        _check_k(g, args.k)
        cfg = gismo.GismoConfig(budget=args.budget,
                                order=_parse_order(args.order, g),
                                seed=args.seed, inner_order=args.inner)
        record = solve_record(args.graph, g, args.k, cfg, timing=args.timing)
    finally:
        restore()
    text = json.dumps(record, indent=2, sort_keys=True) + "\n"
    sys.stdout.write(text)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fp:
            fp.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    g = _load_graph(args.graph, args.format)
    _check_k(g, args.k)
    try:
        sensors = [g.index_of(t) for t in args.sensors.split(",") if t]
    except KeyError as exc:
        raise UsageError(f"--sensors: {exc.args[0]}") from exc

    collision = oracle.find_signature_collision(g, sensors, args.k)
    if collision is not None:
        u, w = collision
        print(f"FAIL: failure sets {{{_labels(g, u)}}} and {{{_labels(g, w)}}} "
              f"have identical signatures")
        return EXIT_USAGE
    print(f"PASS: {{{_labels(g, sensors)}}} identifies all failure sets "
          f"of size <= {args.k}")

    # cross-check against the CNF truth table when small enough to enumerate
    if oracle.failure_set_count(g.n, args.k) <= 4096:
        inst = encoder.encode_instance(g, args.k)
        ok = oracle.is_gis_bruteforce(inst, set(sensors))
        print(f"truth-table cross-check: {'PASS' if ok else 'FAIL'}")
        if not ok:
            return EXIT_USAGE
    return EXIT_OK


def _labels(g: Graph, nodes) -> str:
    return ",".join(g.labels[v] for v in sorted(nodes))


def par2_score(records: list[dict], time_limit: float) -> float:
    """Penalized average runtime: unsolved runs count twice the limit."""
    if not records:
        return 0.0
    total = sum(r["wall_seconds"] if r["status"] == "solved" else 2 * time_limit
                for r in records)
    return total / len(records)


def _bench_one(graph_path: str, fmt: str | None, k: int, budget: int,
               time_limit: float, mem_limit: int, tag: str) -> dict:
    record = {"instance": os.path.basename(graph_path), "k": k, "method": tag,
              "n": None, "m": None, "status": None, "wall_seconds": None,
              "sensor_count": None, "queries": None, "conflicts": None,
              "budget_exhaustions": None, "verified": None}
    try:
        g = _load_graph(graph_path, fmt)
        record["n"], record["m"] = g.n, g.m
    except GraphParseError as exc:
        record["status"] = "encode-fail"
        record["error"] = str(exc)
        return record

    fd, out_path = tempfile.mkstemp(prefix="gicsat-bench-", suffix=".json")
    os.close(fd)
    cmd = [sys.executable, "-m", "gicsat", "solve", graph_path,
           "--k", str(k), "--budget", str(budget),
           "--mem-limit", str(mem_limit), "--output", out_path]
    if fmt:
        cmd += ["--format", fmt]
    start = time.monotonic()
    try:
        proc = subprocess.run(cmd, capture_output=True, text=True,
                              timeout=time_limit)
    except subprocess.TimeoutExpired:
        record["status"] = "timeout"
        record["wall_seconds"] = time_limit
        os.remove(out_path)
        return record
    finally:
        elapsed = time.monotonic() - start
    record["wall_seconds"] = elapsed
    if proc.returncode == EXIT_RESOURCE:
        record["status"] = ("memout" if "memory" in proc.stderr.lower()
                            else "timeout")
        os.remove(out_path)
        return record
    if proc.returncode != EXIT_OK:
        record["status"] = "encode-fail"
        record["error"] = proc.stderr.strip()
        os.remove(out_path)
        return record
    with open(out_path, "r", encoding="utf-8") as fp:
        solved = json.load(fp)
    os.remove(out_path)
    record["status"] = "solved"
    record["sensor_count"] = solved["sensor_count"]
    record["queries"] = solved["queries"]
    record["conflicts"] = solved["conflicts"]
    record["budget_exhaustions"] = solved["budget_exhaustions"]
    try:
        sensors = [g.index_of(lab) for lab in solved["sensors"]]
        record["verified"] = oracle.is_gics(g, sensors, k, max_subsets=200_000)
    except oracle.EnumerationBudgetError:
        record["verified"] = None  # beyond desk-scale verification
    return record


def cmd_bench(args) -> int:
    try:
        ks = [int(t) for t in str(args.k).split(",") if t]
    except ValueError:
        raise UsageError(f"--k: expected comma-separated integers, got {args.k!r}")
    if not ks or any(k < 1 for k in ks):
        raise UsageError("--k values must be positive")
    base = os.path.dirname(os.path.abspath(args.manifest))
    try:
        with open(args.manifest, "r", encoding="utf-8") as fp:
            paths = [line.strip() for line in fp
                     if line.strip() and not line.startswith("#")]
    except OSError as exc:
        raise GraphParseError(f"cannot read manifest: {exc}")
    paths = [p if os.path.isabs(p) else os.path.join(base, p) for p in paths]

    records = []
    for path in paths:
        for k in ks:
            rec = _bench_one(path, args.format, k, args.budget,
                             args.time_limit, args.mem_limit, tag="gismo-bundled")
            records.append(rec)
            print(f"{rec['instance']} k={k}: {rec['status']}"
                  + (f" |S|={rec['sensor_count']}"
                     if rec["status"] == "solved" else ""))

    ratios: dict[str, dict[str, float]] = {}
    for path in paths:
        try:
            g = _load_graph(path, args.format)
        except GraphParseError:
            continue
        counts = {}
        for k in sorted(set(ks) | {1}):
            if k > g.n:
                continue
            counts[k] = len(encoder.encode_instance(g, k).formula)
        if 1 in counts:
            ratios[os.path.basename(path)] = {
                str(k): counts[k] / counts[1] for k in counts}

    report = {
        "records": records,
        "par2": par2_score(records, args.time_limit),
        "par2_by_k": {str(k): par2_score([r for r in records if r["k"] == k],
                                         args.time_limit) for k in ks},
        "time_limit": args.time_limit,
        "clause_ratio_vs_k": ratios,
    }
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    sys.stdout.write(text)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fp:
            fp.write(text)
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handler = {"encode": cmd_encode, "solve": cmd_solve,
               "verify": cmd_verify, "bench": cmd_bench}[args.command]
    try:
        return handler(args)
    except UsageError as exc:
        sys.stderr.write(f"gicsat: error: {exc}\n")
        return EXIT_USAGE
    except GraphParseError as exc:
        sys.stderr.write(f"gicsat: parse error: {exc}\n")
        return EXIT_PARSE
    except ResourceLimitError as exc:
        sys.stderr.write(f"gicsat: resource limit: {exc}\n")
        return EXIT_RESOURCE
    except MemoryError:
        sys.stderr.write("gicsat: resource limit: memory limit exceeded\n")
        return EXIT_RESOURCE
    except OSError as exc:
        sys.stderr.write(f"gicsat: i/o error: {exc}\n")
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
