"""Command-line interface.

Subcommands cover the library surface: ``generate`` writes random graphs,
``stats`` reports community/boundary statistics, ``reduce`` writes a reduced
instance, ``solve`` minimizes exactly or through a MaxSAT solver, ``qaoa``
runs the simulator, ``pipeline`` times the full reduction on one graph, and
``bench`` sweeps ensembles into CSV.  Shared flags (seed, format, caps,
solver command, jobs) are accepted by every subcommand.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .community import detect_multilevel, refine_boundary, score_g, read_membership
from .errors import ParameterError
from .graphs import (
    Graph,
    maxcut_to_qubo,
    random_erdos_renyi,
    random_regular,
    read_graph,
    write_graph,
)
from .polynomial import PuboPolynomial
from .reducer import (
    DEFAULT_BOUNDARY_CAP,
    ReducedInstance,
    lift_solution,
    reduce_core_fixed,
    reduce_exact,
)
from .solvers import (
    CSV_HEADER,
    DEFAULT_BRUTE_CAP,
    PipelineConfig,
    brute_force_min,
    classical_pipeline,
)

STATS_HEADER = (
    "graph,n,m,num_communities,mean_community_size,"
    "b_baseline,b_refined,reduction_baseline,reduction_refined"
)


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    parser.add_argument(
        "--format", choices=("json", "csv"), default="json", help="output format"
    )
    parser.add_argument("--jobs", type=int, default=1, help="parallel workers")
    parser.add_argument("--solver-cmd", default=None, help="external MaxSAT command")
    parser.add_argument(
        "--boundary-cap", type=int, default=DEFAULT_BOUNDARY_CAP,
        help="max community boundary size for quenching",
    )
    parser.add_argument(
        "--brute-cap", type=int, default=DEFAULT_BRUTE_CAP,
        help="max variables for exact enumeration",
    )
    parser.add_argument(
        "--qaoa-cap", type=int, default=24, help="max qubits for statevectors"
    )
    parser.add_argument(
        "--caps", default=None,
        help="override all caps as BOUNDARY,BRUTE,QAOA (or one value for all)",
    )


def _apply_caps(args) -> None:
    if getattr(args, "caps", None) is None:
        return
    parts = [tok.strip() for tok in args.caps.split(",")]
    try:
        values = [int(tok) for tok in parts]
    except ValueError as exc:
        raise ParameterError(f"--caps expects integers, got {args.caps!r}") from exc
    if len(values) == 1:
        values = values * 3
    if len(values) != 3:
        raise ParameterError("--caps takes one value or BOUNDARY,BRUTE,QAOA")
    args.boundary_cap, args.brute_cap, args.qaoa_cap = values


def _make_graph(args) -> Graph:
    if args.graph is not None:
        return read_graph(args.graph)
    if args.kind == "regular":
        if args.k is None:
            raise ParameterError("--kind regular needs --k")
        return random_regular(args.n, args.k, args.seed)
    if args.kind in ("er", "erdos"):
        if args.p is None:
            raise ParameterError(f"--kind {args.kind} needs --p")
        return random_erdos_renyi(args.n, args.p, args.seed)
    raise ParameterError("give --graph FILE or --kind with --n")


def _add_graph_source(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--graph", default=None, help="path to a graph file")
    parser.add_argument("--kind", choices=("regular", "er", "erdos"), default=None)
    parser.add_argument("--n", type=int, default=None, help="vertex count")
    parser.add_argument("--k", type=int, default=None, help="regular degree")
    parser.add_argument("--p", type=float, default=None, help="edge probability")


def _load_poly(args) -> PuboPolynomial:
    if args.poly is not None:
        return PuboPolynomial.load(args.poly)
    return maxcut_to_qubo(_make_graph(args))


def _emit(args, payload: dict, csv_line: str | None = None, header: str | None = None):
    if args.format == "csv" and csv_line is not None:
        if header:
            print(header)
        print(csv_line)
    else:
        print(json.dumps(payload, indent=2))


def cmd_generate(args) -> int:
    out = Path(args.out)
    if args.count == 1:
        write_graph(_make_graph(args), out)
        print(f"wrote {out}")
        return 0
    out.mkdir(parents=True, exist_ok=True)
    tag = f"{args.kind}_n{args.n}" + (
        f"_k{args.k}" if args.kind == "regular" else f"_p{args.p}"
    )
    for i in range(args.count):
        seed = args.seed + i
        if args.kind == "regular":
            g = random_regular(args.n, args.k, seed)
        else:
            g = random_erdos_renyi(args.n, args.p, seed)
        write_graph(g, out / f"{tag}_s{seed}.txt")
    print(f"wrote {args.count} graphs under {out}")
    return 0


def _stats_row(path: str, seed: int, refine: bool) -> tuple[dict, str]:
    g = read_graph(path)
    base = detect_multilevel(g, seed=seed)
    b_base = int(base.boundary.sum())
    row = {
        "graph": path,
        "n": g.num_vertices,
        "m": g.num_edges,
        "num_communities": base.num_communities,
        "mean_community_size": (
            g.num_vertices / base.num_communities if base.num_communities else 0.0
        ),
        "b_baseline": b_base,
        "b_refined": None,
        "reduction_baseline": (
            (g.num_vertices - b_base) / g.num_vertices if g.num_vertices else 0.0
        ),
        "reduction_refined": None,
    }
    if refine:
        refined = refine_boundary(g, base, seed=seed)
        b_ref = int(refined.boundary.sum())
        row["num_communities"] = refined.num_communities
        row["b_refined"] = b_ref
        row["reduction_refined"] = (
            (g.num_vertices - b_ref) / g.num_vertices if g.num_vertices else 0.0
        )
    csv_line = ",".join(
        "" if row[key] is None else str(row[key])
        for key in (
            "graph", "n", "m", "num_communities", "mean_community_size",
            "b_baseline", "b_refined", "reduction_baseline", "reduction_refined",
        )
    )
    return row, csv_line


def cmd_stats(args) -> int:
    rows = []
    lines = []
    for path in args.graphs:
        row, line = _stats_row(path, args.seed, not args.no_refine)
        rows.append(row)
        lines.append(line)
    if args.format == "csv":
        print(STATS_HEADER)
        for line in lines:
            print(line)
    else:
        print(json.dumps(rows, indent=2))
    return 0


def cmd_reduce(args) -> int:
    g = _make_graph(args)
    poly = maxcut_to_qubo(g)
    if args.membership is not None:
        assignment = read_membership(g, args.membership)
    else:
        assignment = detect_multilevel(g, seed=args.seed)
        if not args.no_refine:
            assignment = refine_boundary(g, assignment, seed=args.seed)
    reducers = {"exact": reduce_exact, "core-fixed": reduce_core_fixed}
    instance = reducers[args.mode](poly, assignment, boundary_cap=args.boundary_cap)
    if args.out:
        instance.save(args.out)
    degree_hist: dict[int, int] = {}
    for term in instance.poly.terms:
        degree_hist[len(term)] = degree_hist.get(len(term), 0) + 1
    payload = {
        "n_original": poly.num_vars,
        "n_reduced": len(instance.var_map),
        "mode": instance.mode,
        "num_communities": assignment.num_communities,
        "score_g": score_g(assignment),
        "degree_histogram": {str(k): v for k, v in sorted(degree_hist.items())},
        "var_map": list(instance.var_map),
        "out": args.out,
    }
    _emit(args, payload)
    return 0


def cmd_solve(args) -> int:
    poly = _load_poly(args)
    if args.solver_cmd is not None:
        from .wcnf import pubo_to_wcnf, run_external_solver

        res = run_external_solver(pubo_to_wcnf(poly), args.solver_cmd, poly)
        energy, spins = res.energy, res.spins
        method = "wcnf"
    else:
        energy, spins = brute_force_min(poly, args.brute_cap)
        method = "oracle"
    payload = {"energy": energy, "spins": spins.tolist(), "method": method}
    _emit(args, payload, csv_line=f"{energy},{''.join('+' if s > 0 else '-' for s in spins)}")
    return 0


def cmd_qaoa(args) -> int:
    from .qaoa import optimize

    if args.input is not None:
        poly = PuboPolynomial.load(args.input)
    elif args.graph is not None:
        poly = maxcut_to_qubo(read_graph(args.graph))
    else:
        raise ParameterError("give --input POLY.json or --graph FILE")
    e_min = None
    if poly.num_vars <= args.brute_cap:
        e_min, _ = brute_force_min(poly, args.brute_cap)
    result = optimize(
        poly,
        p=args.p,
        budget=args.budget,
        starts=args.starts,
        seed=args.seed,
        e_min=e_min if e_min else None,
        cap=args.qaoa_cap,
    )
    if args.trace_out:
        lines = ["eval,expectation"]
        lines += [f"{i},{value!r}" for i, value in enumerate(result.trace)]
        Path(args.trace_out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    payload = {
        "p": args.p,
        "best_expectation": result.expectation,
        "e_min": e_min,
        "best_ratio": result.ratio,
        "best_params": {
            "gammas": result.params.gammas.tolist(),
            "betas": result.params.betas.tolist(),
        },
        "evals_used": result.evals_used,
    }
    _emit(args, payload)
    return 0


def _pipeline_config(args, seed: int, mode: str) -> PipelineConfig:
    return PipelineConfig(
        mode=mode,
        backend=args.backend,
        seed=seed,
        refine=not args.no_refine,
        boundary_cap=args.boundary_cap,
        brute_cap=args.brute_cap,
        solver_cmd=args.solver_cmd,
        qaoa_depth=args.depth,
        qaoa_budget=args.budget,
        qaoa_starts=args.starts,
        qaoa_cap=args.qaoa_cap,
        graph_kind=args.kind or "",
        graph_k=args.k,
    )


def cmd_pipeline(args) -> int:
    g = _make_graph(args)
    report = classical_pipeline(g, _pipeline_config(args, args.seed, args.mode))
    _emit(args, report.to_json_dict(), csv_line=report.to_csv_row(), header=CSV_HEADER)
    return 0


def _bench_one(task) -> str:
    kind, n, k, p, seed, mode, args_dict = task
    if kind == "regular":
        g = random_regular(n, k, seed)
    else:
        g = random_erdos_renyi(n, p, seed)
    ns = argparse.Namespace(**args_dict)
    report = classical_pipeline(g, _pipeline_config(ns, seed, mode))
    return report.to_csv_row()


def cmd_bench(args) -> int:
    sizes = [int(tok) for tok in args.n_list.split(",") if tok]
    modes = args.modes.split(",")
    for mode in modes:
        if mode not in ("exact", "core-fixed"):
            raise ParameterError(f"unknown mode {mode!r} in --modes")
    args_dict = vars(args).copy()
    args_dict.pop("func", None)
    tasks = [
        (args.kind or "regular", n, args.k, args.p, args.seed + i, mode, args_dict)
        for n in sizes
        for mode in modes
        for i in range(args.count)
    ]
    lines = []
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            lines = list(pool.map(_bench_one, tasks))
    else:
        lines = [_bench_one(t) for t in tasks]
    out_lines = [CSV_HEADER] + lines
    if args.out:
        Path(args.out).write_text("\n".join(out_lines) + "\n", encoding="utf-8")
        print(f"wrote {len(lines)} rows to {args.out}")
    else:
        for ln in out_lines:
            print(ln)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qubocut",
        description="divide-and-conquer QUBO reduction toolkit",
    )
    parser.add_argument("--version", action="version", version=f"qubocut {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="write random graph files")
    _add_graph_source(p_gen)
    _common_flags(p_gen)
    p_gen.add_argument("--count", type=int, default=1, help="graphs to write")
    p_gen.add_argument("--out", required=True, help="file (count=1) or directory")
    p_gen.set_defaults(func=cmd_generate)

    p_stats = sub.add_parser("stats", help="community and boundary statistics")
    p_stats.add_argument("graphs", nargs="+", help="graph files")
    p_stats.add_argument("--no-refine", action="store_true")
    _common_flags(p_stats)
    p_stats.set_defaults(func=cmd_stats)

    p_red = sub.add_parser("reduce", help="reduce a graph's QUBO to a boundary PUBO")
    _add_graph_source(p_red)
    _common_flags(p_red)
    p_red.add_argument("--mode", choices=("exact", "core-fixed"), default="exact")
    p_red.add_argument("--membership", default=None, help="reuse a partition file")
    p_red.add_argument("--no-refine", action="store_true")
    p_red.add_argument("--out", default=None, help="write reduced instance JSON")
    p_red.set_defaults(func=cmd_reduce)

    p_solve = sub.add_parser("solve", help="minimize a polynomial or graph exactly")
    _add_graph_source(p_solve)
    _common_flags(p_solve)
    p_solve.add_argument("--poly", default=None, help="polynomial JSON path")
    p_solve.set_defaults(func=cmd_solve)

    p_qaoa = sub.add_parser("qaoa", help="simulate QAOA on a polynomial or graph")
    _common_flags(p_qaoa)
    p_qaoa.add_argument("--input", default=None, help="polynomial JSON path")
    p_qaoa.add_argument("--graph", default=None, help="path to a graph file")
    p_qaoa.add_argument("--p", type=int, default=4, help="circuit depth")
    p_qaoa.add_argument("--budget", type=int, default=10_000)
    p_qaoa.add_argument("--starts", type=int, default=4)
    p_qaoa.add_argument("--trace-out", default=None, help="per-eval CSV path")
    p_qaoa.set_defaults(func=cmd_qaoa)

    p_pipe = sub.add_parser("pipeline", help="run the full reduction pipeline")
    _add_graph_source(p_pipe)
    _common_flags(p_pipe)
    p_pipe.add_argument("--mode", choices=("exact", "core-fixed"), default="exact")
    p_pipe.add_argument("--backend", choices=("oracle", "wcnf", "qaoa"), default="oracle")
    p_pipe.add_argument("--no-refine", action="store_true")
    p_pipe.add_argument("--depth", type=int, default=4)
    p_pipe.add_argument("--budget", type=int, default=10_000)
    p_pipe.add_argument("--starts", type=int, default=4)
    p_pipe.set_defaults(func=cmd_pipeline)

    p_bench = sub.add_parser("bench", help="sweep pipeline runs into CSV")
    _add_graph_source(p_bench)
    _common_flags(p_bench)
    p_bench.add_argument("--n-list", default="12,16,20", help="comma-separated sizes")
    p_bench.add_argument("--count", type=int, default=5, help="seeds per size")
    p_bench.add_argument("--modes", default="exact", help="comma-separated modes")
    p_bench.add_argument("--backend", choices=("oracle", "wcnf", "qaoa"), default="oracle")
    p_bench.add_argument("--no-refine", action="store_true")
    p_bench.add_argument("--depth", type=int, default=4)
    p_bench.add_argument("--budget", type=int, default=10_000)
    p_bench.add_argument("--starts", type=int, default=4)
    p_bench.add_argument("--out", default=None, help="CSV path (default stdout)")
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _apply_caps(args)
        return args.func(args)
    except (ParameterError, ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
