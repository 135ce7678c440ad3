"""Command-line interface.

Subcommands: gen, solve, oracle, export-mip, export-sdpa, experiment,
check.  Exit codes: 0 success, 1 input error, 2 solver non-convergence,
3 I/O error.  Structured results go to files; stdout carries one
machine-parseable summary line per invocation.  The environment variable
QCLAB_SEED supplies a default seed.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .errors import ConvergenceError, InputError, ParseError, RetryError
from .generators import BAConfig, barabasi_albert, plant_quasi_clique, write_instance
from .graph import adjacency, as_vertex_set, edge_density, is_gamma_clique, read_edge_list, write_edge_list
from .lp_io import export_lp
from .mip import build_mip7, build_mip8, build_mip9
from .oracle import max_quasi_clique_bnb, max_quasi_clique_exhaustive
from .sdpa import export_sdpa
from .solver import SolverConfig, recover
from .experiments import (
    ExperimentConfig,
    run_suite,
    write_csv,
    write_meta,
    write_timings_csv,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOCONV = 2
EXIT_IO = 3


class CliParser(argparse.ArgumentParser):
    """argparse variant honoring the exit-code contract (1 on bad input)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


def _default_seed() -> int:
    env = os.environ.get("QCLAB_SEED")
    return int(env) if env else 0


def _load_graph(path: str):
    with open(path) as fh:
        return read_edge_list(fh.read())


def cmd_gen(args) -> int:
    if args.ba:
        if args.m is None:
            raise InputError("--ba requires --m")
        g = barabasi_albert(BAConfig(n=args.n, m=args.m, seed=args.seed))
        with open(args.out + ".edges", "w") as fh:
            fh.write(write_edge_list(g))
        with open(args.out + ".json", "w") as fh:
            json.dump({"model": "ba", "n": args.n, "m": args.m, "seed": args.seed}, fh, sort_keys=True)
            fh.write("\n")
        print(f"n={g.n} m_edges={g.m} planted=0 out={args.out}")
        return EXIT_OK
    for name in ("nc", "p", "rho", "gamma"):
        if getattr(args, name) is None:
            raise InputError(f"planted generation requires --{name}")
    inst = plant_quasi_clique(args.n, args.nc, args.p, args.rho, args.gamma, args.seed, args.mode)
    write_instance(inst, args.out)
    print(f"n={inst.n} m_edges={inst.graph.m} planted={len(inst.planted)} out={args.out}")
    return EXIT_OK


def cmd_solve(args) -> int:
    g = _load_graph(args.graph)
    cfg = SolverConfig(lam=args.lam, max_iter=args.max_iter)
    result = recover(g, args.gamma, cfg, args.strategy)
    payload = {
        "recovered": list(result.recovered_set),
        "eta": len(result.recovered_set),
        "density": float(result.recovered_density),
        "iterations": result.decomposition.iterations,
        "converged": result.decomposition.converged,
        "strategy": result.strategy_used,
        "objective": result.decomposition.objective,
        # the whole vertex set back usually means lambda sits in the
        # keep-everything phase
        "degenerate": len(result.recovered_set) == g.n,
    }
    if args.out_json:
        with open(args.out_json, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    print(
        f"eta={payload['eta']} density={payload['density']:.6g} "
        f"converged={int(payload['converged'])} iterations={payload['iterations']}"
        + (" degenerate=1" if payload["degenerate"] else "")
    )
    return EXIT_OK if result.decomposition.converged else EXIT_NOCONV


def cmd_oracle(args) -> int:
    g = _load_graph(args.graph)
    if args.mode == "exhaustive":
        result = max_quasi_clique_exhaustive(g, args.gamma)
    else:
        result = max_quasi_clique_bnb(g, args.gamma, budget=args.budget)
    payload = {
        "vertices": list(result.vertices),
        "size": result.size,
        "density": float(result.density),
        "certified_optimal": result.certified_optimal,
        "nodes_explored": result.nodes_explored,
    }
    print(json.dumps(payload, sort_keys=True))
    return EXIT_OK


def cmd_export_mip(args) -> int:
    g = _load_graph(args.graph)
    builders = {"7": build_mip7, "8": build_mip8, "9": build_mip9}
    builder = builders[args.model]
    model = builder(g, args.gamma) if args.model != "7" else builder(g, args.gamma, args.nu)
    text = export_lp(model)
    with open(args.out, "w") as fh:
        fh.write(text)
    print(
        f"model=mip{args.model} variables={len(model.variables)} "
        f"constraints={len(model.constraints)} out={args.out}"
    )
    return EXIT_OK


def cmd_export_sdpa(args) -> int:
    g = _load_graph(args.graph)
    a = adjacency(g, with_loops=True)
    lam = args.lam if args.lam is not None else 1.0 / math.sqrt(max(g.n, 1))
    text = export_sdpa(a, lam, args.gamma, args.eta)
    with open(args.out, "w") as fh:
        fh.write(text)
    print(f"n={g.n} eta={args.eta} lambda={lam:.6g} out={args.out}")
    return EXIT_OK


def cmd_experiment(args) -> int:
    cfg = ExperimentConfig.from_json_file(args.config)
    report = run_suite(cfg, jobs=args.jobs)
    out = args.out or cfg.out
    if not out:
        raise InputError("no output path: set --out or the config's 'out' field")
    write_csv(report, out)
    stem = out[:-4] if out.endswith(".csv") else out
    write_timings_csv(report, stem + "_timings.csv")
    write_meta(report, stem + "_meta.json")
    print(f"suite={cfg.suite} rows={len(report.rows)} out={out}")
    return EXIT_OK


def cmd_check(args) -> int:
    g = _load_graph(args.graph)
    vertices = as_vertex_set(
        (int(tok) for tok in args.set.split(",") if tok.strip() != ""), g.n
    )
    density = edge_density(g, vertices)
    verdict = is_gamma_clique(g, vertices, args.gamma)
    print(f"density={float(density):.6g} gamma-clique={str(verdict).lower()}")
    return EXIT_OK


def build_parser() -> CliParser:
    parser = CliParser(prog="qclab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a planted or preferential-attachment instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--nc", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--rho", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--mode", choices=["raw", "density_assured"], default="raw")
    p.add_argument("--ba", action="store_true", help="preferential-attachment graph instead")
    p.add_argument("--m", type=int, help="edges per new node (with --ba)")
    p.add_argument("--out", required=True, help="output stem; writes <out>.edges and <out>.json")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="recover a quasi-clique from a graph file")
    p.add_argument("--graph", required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--strategy", default="unconstrained",
                   help="unconstrained | descending | fixed:<k>")
    p.add_argument("--max-iter", type=int, default=2000)
    p.add_argument("--out-json", default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="exact maximum quasi-clique")
    p.add_argument("--graph", required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--mode", choices=["exhaustive", "bnb"], default="exhaustive")
    p.add_argument("--budget", type=int, default=10**7)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("export-mip", help="write a MIP formulation as an LP file")
    p.add_argument("--graph", required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--model", choices=["7", "8", "9"], required=True)
    p.add_argument("--nu", type=float, default=None, help="big-M for model 7")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export_mip)

    p = sub.add_parser("export-sdpa", help="write the SDP form as sparse SDPA")
    p.add_argument("--graph", required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--eta", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export_sdpa)

    p = sub.add_parser("experiment", help="run an experiment suite from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default=None, help="override the config's output CSV path")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("check", help="report density and the gamma-clique verdict of a set")
    p.add_argument("--graph", required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--set", required=True, help="comma-separated vertex indices")
    p.set_defaults(func=cmd_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (InputError, ParseError, RetryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOCONV
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
