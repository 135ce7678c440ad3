"""Evaluation formulas for recovery experiments.

The matrix error compares the cleaned, rounded recovery against the
planted block's realized adjacency, both embedded in n x n zero matrices;
recovery counts as a success only when the vertex sets coincide exactly.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .generators import PlantedInstance
from .graph import AdjacencyMatrix, Graph, as_vertex_set, edge_density


@dataclass
class TrialMetrics:
    frobenius_error: float
    size_error: float
    density_error: float
    eta: int
    n_c: int
    success: bool
    solve_seconds: float


def frobenius_relative_error(recovered: AdjacencyMatrix, planted: AdjacencyMatrix) -> float:
    """||recovered - planted||_F / ||planted||_F."""
    if recovered.n != planted.n:
        raise InputError(f"dimension mismatch: {recovered.n} vs {planted.n}")
    denom = float(np.linalg.norm(planted.entries))
    if denom == 0.0:
        raise InputError("planted matrix is zero; relative error undefined")
    return float(np.linalg.norm(recovered.entries - planted.entries)) / denom


def size_relative_error(eta: int, n_c: int) -> float:
    """|eta - n_c| / n_c."""
    if n_c <= 0:
        raise InputError("planted size must be positive")
    return abs(eta - n_c) / n_c


def density_relative_error(g: Graph, recovered, planted) -> float:
    """|d(recovered) - d(planted)| / d(planted) with d = edge_density.

    An empty recovery counts as error 1.
    """
    planted = as_vertex_set(planted, g.n)
    if len(planted) <= 1:
        raise InputError("planted set must have at least 2 vertices")
    d_p = edge_density(g, planted)
    if d_p == 0:
        raise InputError("planted set has zero density; relative error undefined")
    recovered = as_vertex_set(recovered, g.n)
    if not recovered:
        return 1.0
    d_r = edge_density(g, recovered)
    return float(abs(d_r - d_p) / d_p)


def success(instance: PlantedInstance, recovered) -> bool:
    """Exact planted-set recovery: no missing and no extra vertices."""
    recovered = as_vertex_set(recovered, instance.n)
    return recovered == tuple(instance.planted)


def planted_block_matrix(instance: PlantedInstance) -> AdjacencyMatrix:
    """Realized adjacency of the planted block, embedded in an n x n zero
    matrix (no diagonal); the reference operand of the matrix error."""
    n = instance.n
    block = set(instance.planted)
    entries = np.zeros((n, n))
    for u, v in instance.graph.edges:
        if u in block and v in block:
            entries[u, v] = 1.0
            entries[v, u] = 1.0
    return AdjacencyMatrix(n=n, entries=entries, loops_added=False)
