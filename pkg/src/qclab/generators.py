"""Random instance construction with reproducible seeded streams.

Two families: the planted quasi-clique model (a dense Bernoulli block on a
sparse Bernoulli background) and preferential-attachment graphs.  All
randomness flows through counter-based Philox streams keyed by
(seed, stream_id), so identical inputs reproduce identical instances on
any platform and trials can draw from disjoint streams concurrently.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .errors import InputError, RetryError
from .graph import Graph, check_gamma, gamma_fraction, read_edge_list, write_edge_list

DENSITY_ASSURED_MAX_RETRIES = 1000


def rng_stream(seed: int, stream_id: int) -> np.random.Generator:
    """Independent counter-based stream for (seed, stream_id)."""
    ss = np.random.SeedSequence(entropy=int(seed) & (2**64 - 1), spawn_key=(int(stream_id),))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class PlantedInstance:
    """A generated graph together with its planted block and parameters."""

    graph: Graph
    planted: tuple[int, ...]
    n: int
    n_c: int
    p: float
    rho: float
    gamma: float
    seed: int
    mode: str

    def sidecar_dict(self) -> dict:
        return {
            "n": self.n,
            "n_c": self.n_c,
            "p": self.p,
            "rho": self.rho,
            "gamma": self.gamma,
            "seed": self.seed,
            "planted": list(self.planted),
            "mode": self.mode,
        }


@dataclass(frozen=True)
class BAConfig:
    """Preferential-attachment parameters: m edges from every new node."""

    n: int
    m: int
    seed: int

    def __post_init__(self):
        if not 1 <= self.m < self.n:
            raise InputError(f"need 1 <= m < n, got m={self.m}, n={self.n}")


def _pair_list(vertices) -> list[tuple[int, int]]:
    vs = sorted(vertices)
    return [(vs[i], vs[j]) for i in range(len(vs)) for j in range(i + 1, len(vs))]


def _sample_block(planted, p: float, gen: np.random.Generator) -> set[tuple[int, int]]:
    pairs = _pair_list(planted)
    if not pairs:
        return set()
    draws = gen.random(len(pairs))
    return {pair for pair, u in zip(pairs, draws) if u < p}


def plant_quasi_clique(
    n: int,
    n_c: int,
    p: float,
    rho: float,
    gamma,
    seed: int,
    mode: str = "raw",
) -> PlantedInstance:
    """Plant a Bernoulli(p) block of n_c vertices on a Bernoulli(rho)
    background.

    Streams: 0 selects the planted vertices, 1 samples the block, 2 the
    background.  In ``density_assured`` mode the block alone is resampled
    from fresh streams until its realized density reaches gamma; the
    background never moves, so assurance cannot leak diversionary edges.
    """
    if not 0 < n_c <= n:
        raise InputError(f"need 0 < n_c <= n, got n_c={n_c}, n={n}")
    if not 0 <= rho < p <= 1:
        raise InputError(f"need 0 <= rho < p <= 1, got rho={rho}, p={p}")
    gamma_frac = check_gamma(gamma)
    if gamma_frac > gamma_fraction(repr(float(p))):
        raise InputError(f"need gamma <= p, got gamma={gamma}, p={p}")
    if mode not in ("raw", "density_assured"):
        raise InputError(f"unknown mode {mode!r}")

    selector = rng_stream(seed, 0)
    keys = selector.random(n)
    planted = tuple(sorted(int(v) for v in np.argsort(keys)[:n_c]))
    planted_set = set(planted)

    block_edges = _sample_block(planted, p, rng_stream(seed, 1))

    if mode == "density_assured":
        # resample streams start at 3: stream 2 is reserved for the background
        retries = 0
        while len(planted) >= 2 and _block_density(block_edges, n_c) < gamma_frac:
            retries += 1
            if retries > DENSITY_ASSURED_MAX_RETRIES:
                raise RetryError(
                    f"block density never reached {gamma} in "
                    f"{DENSITY_ASSURED_MAX_RETRIES} resamples (p={p})"
                )
            block_edges = _sample_block(planted, p, rng_stream(seed, 2 + retries))

    background_gen = rng_stream(seed, 2)
    edges = set(block_edges)
    bg_pairs = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if not (i in planted_set and j in planted_set)
    ]
    if bg_pairs:
        draws = background_gen.random(len(bg_pairs))
        edges.update(pair for pair, u in zip(bg_pairs, draws) if u < rho)

    graph = Graph(n=n, edges=frozenset(edges))
    return PlantedInstance(
        graph=graph,
        planted=planted,
        n=n,
        n_c=n_c,
        p=float(p),
        rho=float(rho),
        gamma=float(gamma_frac),
        seed=int(seed),
        mode=mode,
    )


def _block_density(block_edges, n_c):
    if n_c <= 1:
        return Fraction(1)
    return Fraction(len(block_edges), comb(n_c, 2))


def barabasi_albert(cfg: BAConfig) -> Graph:
    """Growth graph: start from a complete seed of m vertices, then each
    new node attaches to m distinct existing nodes with probability
    proportional to current degree (weights renormalized after each pick).

    The edge count is exactly C(m, 2) + (n - m) * m.
    """
    n, m = cfg.n, cfg.m
    gen = rng_stream(cfg.seed, 0)
    edges = _pair_list(range(m))
    deg = np.zeros(n)
    deg[:m] = m - 1

    for v in range(m, n):
        weights = deg[:v].copy()
        for _ in range(m):
            total = weights.sum()
            cum = np.cumsum(weights)
            r = gen.random() * total
            target = int(np.searchsorted(cum, r, side="right"))
            if target >= v:  # guard against r landing exactly on total
                target = v - 1
                while weights[target] == 0:
                    target -= 1
            edges.append((target, v))
            weights[target] = 0.0
        for u, w in edges[-m:]:
            deg[u] += 1
            deg[w] += 1

    return Graph.from_edges(n, edges)


def write_instance(inst: PlantedInstance, stem: str) -> tuple[str, str]:
    """Write <stem>.edges and <stem>.json; returns both paths."""
    epath, jpath = stem + ".edges", stem + ".json"
    with open(epath, "w") as fh:
        fh.write(write_edge_list(inst.graph))
    with open(jpath, "w") as fh:
        json.dump(inst.sidecar_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return epath, jpath


def read_instance(stem: str) -> PlantedInstance:
    """Load an instance written by :func:`write_instance`."""
    with open(stem + ".edges") as fh:
        graph = read_edge_list(fh.read())
    with open(stem + ".json") as fh:
        meta = json.load(fh)
    return PlantedInstance(
        graph=graph,
        planted=tuple(meta["planted"]),
        n=meta["n"],
        n_c=meta["n_c"],
        p=meta["p"],
        rho=meta["rho"],
        gamma=meta["gamma"],
        seed=meta["seed"],
        mode=meta["mode"],
    )
