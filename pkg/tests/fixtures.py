"""Shared worked example: a 10-node graph with a planted 0.9-dense block.

The five block vertices are {2, 3, 4, 5, 6} here (the source material
labels vertices 1..10, so its {3, 4, 5, 6, 7} maps down by one).  The
block misses exactly one pair, (2, 5), giving 9 of 10 edges.
"""
import numpy as np

from qclab import Graph

TEN_NODE_EDGES = [
    (0, 1), (0, 7),
    (1, 2), (1, 5),
    (2, 3), (2, 4), (2, 6),
    (3, 4), (3, 5), (3, 6), (3, 7),
    (4, 5), (4, 6),
    (5, 6), (5, 9),
    (7, 8),
    (8, 9),
]

PLANTED_BLOCK = (2, 3, 4, 5, 6)

DEGREES = (2, 3, 4, 5, 4, 5, 4, 3, 2, 2)


def ten_node_graph() -> Graph:
    return Graph.from_edges(10, TEN_NODE_EDGES)


A_STAR = np.array([
    [0, 1, 0, 0, 0, 0, 0, 1, 0, 0],
    [1, 0, 1, 0, 0, 1, 0, 0, 0, 0],
    [0, 1, 0, 1, 1, 0, 1, 0, 0, 0],
    [0, 0, 1, 0, 1, 1, 1, 1, 0, 0],
    [0, 0, 1, 1, 0, 1, 1, 0, 0, 0],
    [0, 1, 0, 1, 1, 0, 1, 0, 0, 1],
    [0, 0, 1, 1, 1, 1, 0, 0, 0, 0],
    [1, 0, 0, 1, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 0, 0, 1, 0, 1],
    [0, 0, 0, 0, 0, 1, 0, 0, 1, 0],
], dtype=float)

A_LOOPED = A_STAR + np.eye(10)

# rank-one block indicator: the rounded decomposition solution
Q_BLOCK = np.zeros((10, 10))
for _u in PLANTED_BLOCK:
    for _v in PLANTED_BLOCK:
        Q_BLOCK[_u, _v] = 1.0

# after cleanup: block adjacency without the missing pair and the diagonal
Q_STAR = np.array([
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 1, 0, 1, 0, 0, 0],
    [0, 0, 1, 0, 1, 1, 1, 0, 0, 0],
    [0, 0, 1, 1, 0, 1, 1, 0, 0, 0],
    [0, 0, 0, 1, 1, 0, 1, 0, 0, 0],
    [0, 0, 1, 1, 1, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
], dtype=float)

LAMBDA_TEN = 1.0 / np.sqrt(10.0)
