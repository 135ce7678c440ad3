"""Scripted reproduction of the recovery experiment suites.

Five suites: the regularization sweep, the clique-model comparison, the
density-error and size tables, and the preferential-attachment runs.
Every trial is a pure function of (config, grid point, trial index); jobs
may execute in any parallel order and are merged by key, so reports and
CSV output are byte-identical regardless of worker count.

Wall-clock seconds are measured per solve but kept out of the main CSV
(they are the one schedule-dependent quantity); ``write_csv`` can include
them on request and the CLI writes them to a timings sidecar.
"""
from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from ._backend import backend_name
from .errors import InputError
from .generators import plant_quasi_clique, barabasi_albert, BAConfig
from .graph import AdjacencyMatrix, adjacency, is_gamma_clique
from .metrics import (
    density_relative_error,
    frobenius_relative_error,
    planted_block_matrix,
    size_relative_error,
    success,
)
from .oracle import BNB_MAX_N, max_quasi_clique_bnb, max_quasi_clique_exhaustive
from .solver import SolverConfig, binarize, cleanup, recover, solve_nnm1

SUITES = ("lambda_sweep", "clique_recovery", "density_error", "size_table", "ba_random")

ORACLE_EXACT_MAX_N = 14  # stand-in bound for the MIP columns


def _grid(start: float, stop: float, step: float) -> tuple[float, ...]:
    count = int(round((stop - start) / step)) + 1
    return tuple(round(start + step * i, 6) for i in range(count))


@dataclass
class ExperimentConfig:
    suite: str
    trials: int = 10
    base_seed: int = 0
    strategy: str | None = None
    out: str | None = None
    n: int | None = None
    n_c: int | None = None
    rho: float | None = None
    rho_grid: tuple[float, ...] | None = None
    gamma_grid: tuple[float, ...] | None = None
    lambda_grid: tuple[float, ...] | None = None
    n_grid: tuple[int, ...] | None = None
    n_cap: int = 150
    ba_sizes: tuple[tuple[int, int], ...] | None = None
    oracle_budget: int = 10**7
    solver: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.suite not in SUITES:
            raise InputError(f"unknown suite {self.suite!r}; choose from {SUITES}")
        if self.trials < 1:
            raise InputError("trials must be >= 1")

    @classmethod
    def from_json_file(cls, path: str) -> "ExperimentConfig":
        with open(path) as fh:
            data = json.load(fh)
        data = {k: (tuple(tuple(x) if isinstance(x, list) else x for x in v) if isinstance(v, list) else v) for k, v in data.items()}
        return cls(**data)

    def solver_config(self, lam: float | None = None) -> SolverConfig:
        kwargs = dict(self.solver)
        if lam is not None:
            kwargs["lam"] = lam
        return SolverConfig(**kwargs)


@dataclass
class ExperimentReport:
    suite: str
    columns: tuple[str, ...]
    rows: list[dict]
    agg_rows: list[dict]
    provenance: dict

    def aggregates_match(self) -> bool:
        """Recompute every aggregate from its trial rows."""
        group_by = _SUITE_SPECS[self.suite]["group_by"]
        for agg in self.agg_rows:
            key = tuple(agg[c] for c in group_by)
            group = [r for r in self.rows if tuple(r[c] for c in group_by) == key]
            if not group:
                return False
            for col in self.columns:
                if col in group_by or col in ("trial", "agg"):
                    continue
                vals = [r[col] for r in group]
                if all(isinstance(v, (int, float)) for v in vals):
                    mean = sum(vals) / len(vals)
                    if not math.isclose(agg[col], mean, rel_tol=0, abs_tol=1e-12):
                        return False
        return True


def derive_seed(base_seed: int, *key: int) -> int:
    ss = np.random.SeedSequence(entropy=int(base_seed) & (2**64 - 1), spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _q_star_of(decomp, g, tau_r: float) -> AdjacencyMatrix:
    a_star = adjacency(g, with_loops=False)
    q_bin = AdjacencyMatrix(n=g.n, entries=binarize(decomp.Q, tau_r), loops_added=False)
    return cleanup(q_bin, a_star)


# ---------------------------------------------------------------------------
# per-suite trial workers; must stay top-level picklable for process pools

def _trial_lambda_sweep(cfg: ExperimentConfig, point, trial: int) -> list[dict]:
    gi, gamma = point
    n = cfg.n or 50
    n_c = cfg.n_c or 35
    rho = cfg.rho if cfg.rho is not None else 0.2
    lambdas = cfg.lambda_grid or (float(n), 1 / math.sqrt(n), 0.5 / math.sqrt(n), 1.0 / n)
    seed = derive_seed(cfg.base_seed, 0, gi, trial)
    inst = plant_quasi_clique(n, n_c, gamma, rho, gamma, seed)
    planted_m = planted_block_matrix(inst)
    rows = []
    for lam in lambdas:
        t0 = time.perf_counter()
        rec = recover(inst.graph, gamma, cfg.solver_config(lam), cfg.strategy or "unconstrained")
        seconds = time.perf_counter() - t0
        rows.append(
            {
                "gamma": gamma,
                "lambda": float(lam),
                "trial": trial,
                "recovered_size": len(rec.recovered_set),
                "frob_error": frobenius_relative_error(rec.Q_star, planted_m),
                "converged": int(rec.decomposition.converged),
                "seconds": seconds,
                "agg": 0,
            }
        )
    return rows


def _trial_clique_recovery(cfg: ExperimentConfig, point, trial: int) -> list[dict]:
    (gi, gamma), (ri, rho) = point
    n = cfg.n or 100
    n_c = cfg.n_c or 80
    seed = derive_seed(cfg.base_seed, 1, gi, ri, trial)
    inst = plant_quasi_clique(n, n_c, gamma, rho, gamma, seed)
    planted_m = planted_block_matrix(inst)
    rows = []

    t0 = time.perf_counter()
    rec = recover(inst.graph, gamma, cfg.solver_config(), cfg.strategy or "unconstrained")
    sec5 = time.perf_counter() - t0
    frob5 = frobenius_relative_error(rec.Q_star, planted_m)
    ok5 = success(inst, rec.recovered_set) and frob5 == 0.0
    rows.append(
        {
            "gamma": gamma,
            "rho": rho,
            "mode": "nnm5",
            "trial": trial,
            "success": int(ok5),
            "recovered_size": len(rec.recovered_set),
            "frob_error": frob5,
            "seconds": sec5,
            "agg": 0,
        }
    )

    a = adjacency(inst.graph, with_loops=True)
    t0 = time.perf_counter()
    dec1 = solve_nnm1(a, n_c, cfg.solver_config())
    sec1 = time.perf_counter() - t0
    q_star1 = _q_star_of(dec1, inst.graph, cfg.solver_config().round_threshold)
    frob1 = frobenius_relative_error(q_star1, planted_m)
    ok1 = success(inst, dec1.support) and frob1 == 0.0
    rows.append(
        {
            "gamma": gamma,
            "rho": rho,
            "mode": "nnm1",
            "trial": trial,
            "success": int(ok1),
            "recovered_size": len(dec1.support),
            "frob_error": frob1,
            "seconds": sec1,
            "agg": 0,
        }
    )
    return rows


def _trial_density_error(cfg: ExperimentConfig, point, trial: int) -> list[dict]:
    gi, gamma = point
    n = cfg.n or 50
    n_c = cfg.n_c or 40
    rho = cfg.rho if cfg.rho is not None else 0.2
    seed = derive_seed(cfg.base_seed, 2, gi, trial)
    inst = plant_quasi_clique(n, n_c, gamma, rho, gamma, seed)
    planted_m = planted_block_matrix(inst)
    t0 = time.perf_counter()
    rec = recover(inst.graph, gamma, cfg.solver_config(), cfg.strategy or "unconstrained")
    seconds = time.perf_counter() - t0
    if n <= ORACLE_EXACT_MAX_N:
        best = max_quasi_clique_exhaustive(inst.graph, gamma)
        mip_err = density_relative_error(inst.graph, best.vertices, inst.planted)
    else:
        mip_err = "n/a"
    return [
        {
            "n": n,
            "gamma": gamma,
            "trial": trial,
            "density_error": density_relative_error(inst.graph, rec.recovered_set, inst.planted),
            "frob_error": frobenius_relative_error(rec.Q_star, planted_m),
            "mip_error": mip_err,
            "seconds": seconds,
            "agg": 0,
        }
    ]


def _trial_size_table(cfg: ExperimentConfig, point, trial: int) -> list[dict]:
    (ni, n), (gi, gamma) = point
    n_c = int(round(0.8 * n)) if cfg.n_c is None else cfg.n_c
    rho = cfg.rho if cfg.rho is not None else 0.2
    seed = derive_seed(cfg.base_seed, 3, ni, gi, trial)
    inst = plant_quasi_clique(n, n_c, gamma, rho, gamma, seed)
    t0 = time.perf_counter()
    rec = recover(inst.graph, gamma, cfg.solver_config(), cfg.strategy or "unconstrained")
    seconds = time.perf_counter() - t0
    eta = rec.decomposition.eta
    return [
        {
            "n": n,
            "n_c": n_c,
            "gamma": gamma,
            "trial": trial,
            "eta": eta,
            "size_error": size_relative_error(eta, n_c),
            "seconds": seconds,
            "agg": 0,
        }
    ]


def _trial_ba_random(cfg: ExperimentConfig, point, trial: int) -> list[dict]:
    (si, (n, m)), (gi, gamma) = point
    seed = derive_seed(cfg.base_seed, 4, si, gi, trial)
    g = barabasi_albert(BAConfig(n=n, m=m, seed=seed))
    strategy = cfg.strategy or "descending"
    t0 = time.perf_counter()
    rec = recover(g, gamma, cfg.solver_config(), strategy)
    seconds = time.perf_counter() - t0
    if strategy in ("descending", "descending_eta"):
        assert is_gamma_clique(g, rec.recovered_set, gamma)
    if n <= BNB_MAX_N:
        best = max_quasi_clique_bnb(g, gamma, budget=cfg.oracle_budget)
        oracle_size: object = best.size
        certified = int(best.certified_optimal)
    else:
        oracle_size, certified = "n/a", 0
    return [
        {
            "n": n,
            "m": m,
            "gamma": gamma,
            "trial": trial,
            "nnm_size": len(rec.recovered_set),
            "is_gamma_clique": int(is_gamma_clique(g, rec.recovered_set, gamma)),
            "oracle_size": oracle_size,
            "oracle_certified": certified,
            "seconds": seconds,
            "agg": 0,
        }
    ]


_SUITE_SPECS = {
    "lambda_sweep": {
        "worker": _trial_lambda_sweep,
        "columns": ("gamma", "lambda", "trial", "recovered_size", "frob_error", "converged", "seconds", "agg"),
        "group_by": ("gamma", "lambda"),
    },
    "clique_recovery": {
        "worker": _trial_clique_recovery,
        "columns": ("gamma", "rho", "mode", "trial", "success", "recovered_size", "frob_error", "seconds", "agg"),
        "group_by": ("gamma", "rho", "mode"),
    },
    "density_error": {
        "worker": _trial_density_error,
        "columns": ("n", "gamma", "trial", "density_error", "frob_error", "mip_error", "seconds", "agg"),
        "group_by": ("n", "gamma"),
    },
    "size_table": {
        "worker": _trial_size_table,
        "columns": ("n", "n_c", "gamma", "trial", "eta", "size_error", "seconds", "agg"),
        "group_by": ("n", "gamma"),
    },
    "ba_random": {
        "worker": _trial_ba_random,
        "columns": (
            "n", "m", "gamma", "trial", "nnm_size", "is_gamma_clique",
            "oracle_size", "oracle_certified", "seconds", "agg",
        ),
        "group_by": ("n", "m", "gamma"),
    },
}


def _default(value, fallback):
    return fallback if value is None else value


def _points(cfg: ExperimentConfig) -> list:
    if cfg.suite == "lambda_sweep":
        gammas = _default(cfg.gamma_grid, _grid(0.5, 1.0, 0.05))
        return [(gi, g) for gi, g in enumerate(gammas)]
    if cfg.suite == "clique_recovery":
        gammas = _default(cfg.gamma_grid, (1.0, 0.99))
        rhos = _default(cfg.rho_grid, _grid(0.1, 0.5, 0.05))
        return [((gi, g), (ri, r)) for gi, g in enumerate(gammas) for ri, r in enumerate(rhos)]
    if cfg.suite == "density_error":
        gammas = _default(cfg.gamma_grid, _grid(0.6, 1.0, 0.05))
        return [(gi, g) for gi, g in enumerate(gammas)]
    if cfg.suite == "size_table":
        ns = tuple(n for n in _default(cfg.n_grid, (50, 100, 150)) if n <= cfg.n_cap)
        gammas = _default(cfg.gamma_grid, (0.6, 0.7, 0.8, 0.9, 1.0))
        return [((ni, n), (gi, g)) for ni, n in enumerate(ns) for gi, g in enumerate(gammas)]
    if cfg.suite == "ba_random":
        sizes = _default(cfg.ba_sizes, ((50, 15), (100, 30)))
        gammas = _default(cfg.gamma_grid, (0.6, 0.7, 0.8, 0.9, 1.0))
        return [((si, nm), (gi, g)) for si, nm in enumerate(sizes) for gi, g in enumerate(gammas)]
    raise InputError(f"unknown suite {cfg.suite!r}")


def _run_job(args):
    cfg, point, trial = args
    worker = _SUITE_SPECS[cfg.suite]["worker"]
    return worker(cfg, point, trial)


def run_suite(cfg: ExperimentConfig, jobs: int = 1) -> ExperimentReport:
    """Execute a suite; trial scheduling never affects the report."""
    spec = _SUITE_SPECS[cfg.suite]
    points = _points(cfg)
    tasks = [(cfg, point, trial) for point in points for trial in range(cfg.trials)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_job, tasks, chunksize=1))
    else:
        results = [_run_job(t) for t in tasks]

    rows = [row for rows_per_task in results for row in rows_per_task]
    agg_rows = _aggregate(rows, spec["group_by"], spec["columns"])
    provenance = {
        "config": asdict(cfg),
        "version": __version__,
        "backend": backend_name(),
        "suite": cfg.suite,
    }
    return ExperimentReport(
        suite=cfg.suite,
        columns=spec["columns"],
        rows=rows,
        agg_rows=agg_rows,
        provenance=provenance,
    )


def _aggregate(rows: list[dict], group_by: tuple[str, ...], columns: tuple[str, ...]) -> list[dict]:
    groups: dict[tuple, list[dict]] = {}
    order: list[tuple] = []
    for row in rows:
        key = tuple(row[c] for c in group_by)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(row)
    agg_rows = []
    for key in order:
        group = groups[key]
        agg: dict = {c: v for c, v in zip(group_by, key)}
        agg["trial"] = -1
        agg["agg"] = 1
        for col in columns:
            if col in group_by or col in ("trial", "agg"):
                continue
            vals = [r[col] for r in group]
            if all(isinstance(v, (int, float)) for v in vals):
                agg[col] = sum(vals) / len(vals)
            else:
                agg[col] = "n/a"
        agg_rows.append(agg)
    return agg_rows


# suite runners named per operation

def run_lambda_sweep(cfg: ExperimentConfig, jobs: int = 1) -> ExperimentReport:
    return run_suite(cfg, jobs)


def run_clique_recovery(cfg: ExperimentConfig, jobs: int = 1) -> ExperimentReport:
    return run_suite(cfg, jobs)


def run_density_error(cfg: ExperimentConfig, jobs: int = 1) -> ExperimentReport:
    return run_suite(cfg, jobs)


def run_size_table(cfg: ExperimentConfig, jobs: int = 1) -> ExperimentReport:
    return run_suite(cfg, jobs)


def run_ba_random(cfg: ExperimentConfig, jobs: int = 1) -> ExperimentReport:
    return run_suite(cfg, jobs)


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_csv(report: ExperimentReport, include_timing: bool = False) -> str:
    """Deterministic CSV text; trial rows interleaved with their aggregate."""
    columns = tuple(c for c in report.columns if include_timing or c != "seconds")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    spec = _SUITE_SPECS[report.suite]
    group_by = spec["group_by"]
    for agg in report.agg_rows:
        key = tuple(agg[c] for c in group_by)
        for row in report.rows:
            if tuple(row[c] for c in group_by) == key:
                writer.writerow([_format_cell(row.get(c, "")) for c in columns])
        writer.writerow([_format_cell(agg.get(c, "")) for c in columns])
    return buf.getvalue()


def write_csv(report: ExperimentReport, path: str, include_timing: bool = False) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(render_csv(report, include_timing=include_timing))


def write_timings_csv(report: ExperimentReport, path: str) -> None:
    """Wall-clock sidecar; excluded from the determinism contract."""
    spec = _SUITE_SPECS[report.suite]
    cols = tuple(spec["group_by"]) + ("trial", "seconds")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(cols)
        for row in report.rows:
            writer.writerow([_format_cell(row[c]) for c in cols])


def write_meta(report: ExperimentReport, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(report.provenance, fh, indent=2, sort_keys=True)
        fh.write("\n")
