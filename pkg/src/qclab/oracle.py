"""Exact maximum quasi-clique computation at desk scale.

Exhaustive subset enumeration certifies graphs up to 22 vertices; a pruned
depth-first branch and bound extends the reach to the mid-double digits.
Both report exact rational densities and an optimality certificate flag.
Quasi-cliques are not hereditary, so the pruning bound never assumes
subsets of feasible sets are feasible: it only counts achievable edges.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._backend import kernels
from .errors import InputError
from .graph import Graph, check_gamma, edge_density

EXHAUSTIVE_MAX_N = 22
BNB_MAX_N = 64
DEFAULT_NODE_BUDGET = 10**7


@dataclass(frozen=True)
class QuasiClique:
    vertices: tuple[int, ...]
    size: int
    density: Fraction
    gamma: Fraction
    certified_optimal: bool
    nodes_explored: int = 0


def _mask_to_vertices(mask: int) -> tuple[int, ...]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def _adjacency_u64(g: Graph) -> np.ndarray:
    return np.array([m for m in g.neighbor_masks], dtype=np.uint64)


def max_quasi_clique_exhaustive(g: Graph, gamma) -> QuasiClique:
    """Certified optimum by enumerating all 2^n subsets (n <= 22)."""
    frac = check_gamma(gamma)
    if g.n > EXHAUSTIVE_MAX_N:
        raise InputError(f"exhaustive search refuses n={g.n} > {EXHAUSTIVE_MAX_N}")
    size, mask = kernels.exhaustive_max_qc(
        _adjacency_u64(g), g.n, frac.numerator, frac.denominator
    )
    vertices = _mask_to_vertices(int(mask))
    return QuasiClique(
        vertices=vertices,
        size=int(size),
        density=edge_density(g, vertices),
        gamma=frac,
        certified_optimal=True,
        nodes_explored=1 << g.n,
    )


def max_quasi_clique_bnb(
    g: Graph,
    gamma,
    omega_l: int = 1,
    omega_u: int | None = None,
    budget: int = DEFAULT_NODE_BUDGET,
) -> QuasiClique:
    """Branch-and-bound optimum within the size window [omega_l, omega_u].

    ``certified_optimal`` is False when the node budget ran out; the
    best-found set is still returned.
    """
    frac = check_gamma(gamma)
    if g.n > BNB_MAX_N:
        raise InputError(f"branch and bound supports n <= {BNB_MAX_N}, got {g.n}")
    omega_u = g.n if omega_u is None else omega_u
    if not 0 <= omega_l <= omega_u <= g.n:
        raise InputError(f"need 0 <= omega_l <= omega_u <= n, got [{omega_l}, {omega_u}]")
    if budget <= 0:
        raise InputError("node budget must be positive")
    _, mask, nodes, certified = kernels.bnb_max_qc(
        _adjacency_u64(g),
        g.n,
        frac.numerator,
        frac.denominator,
        max(omega_l, 1),
        omega_u,
        budget,
    )
    vertices = _mask_to_vertices(int(mask))
    return QuasiClique(
        vertices=vertices,
        size=len(vertices),
        density=edge_density(g, vertices),
        gamma=frac,
        certified_optimal=bool(certified),
        nodes_explored=int(nodes),
    )
