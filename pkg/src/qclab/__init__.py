"""qclab: planted quasi-clique recovery via low-rank plus sparse
matrix decomposition, with exact combinatorial oracles, MIP model export,
and scripted experiment suites."""

from ._backend import COMPILED, backend_name
from .graph import (
    AdjacencyMatrix,
    Graph,
    adjacency,
    as_vertex_set,
    edge_density,
    gamma_fraction,
    is_gamma_clique,
    read_edge_list,
    write_edge_list,
)
from .solver import (
    DecompositionResult,
    RecoveryResult,
    SolverConfig,
    admm_decompose,
    cleanup,
    extract_support,
    recover,
    solve_nnm1,
)

__version__ = "0.1.0"

__all__ = [
    "AdjacencyMatrix",
    "COMPILED",
    "DecompositionResult",
    "Graph",
    "RecoveryResult",
    "SolverConfig",
    "adjacency",
    "admm_decompose",
    "as_vertex_set",
    "backend_name",
    "cleanup",
    "edge_density",
    "extract_support",
    "gamma_fraction",
    "is_gamma_clique",
    "read_edge_list",
    "recover",
    "solve_nnm1",
    "write_edge_list",
    "__version__",
]
