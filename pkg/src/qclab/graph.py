"""Simple undirected graphs, edge density, and gamma-clique tests.

Vertices are the integers 0..n-1.  Edges are unordered pairs stored in
canonical (u, v) form with u < v.  Density comparisons are exact rational
arithmetic so that sets sitting exactly on the threshold are classified
correctly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb

import numpy as np

from .errors import InputError, ParseError


def gamma_fraction(gamma) -> Fraction:
    """Turn a density target into an exact fraction.

    Floats are interpreted through their decimal string (0.9 -> 9/10), not
    their binary expansion, so thresholds written as decimals stay exact.
    """
    if isinstance(gamma, Fraction):
        return gamma
    if isinstance(gamma, int):
        return Fraction(gamma)
    if isinstance(gamma, float):
        return Fraction(repr(gamma))
    if isinstance(gamma, str):
        return Fraction(gamma)
    raise InputError(f"cannot interpret density value {gamma!r}")


def check_gamma(gamma) -> Fraction:
    """Validate gamma in (0, 1] and return it as a Fraction."""
    frac = gamma_fraction(gamma)
    if not 0 < frac <= 1:
        raise InputError(f"gamma must lie in (0, 1], got {gamma}")
    return frac


def as_vertex_set(vertices, n=None) -> tuple[int, ...]:
    """Canonicalize an iterable of vertex indices: sorted, unique, in range."""
    members = sorted(int(v) for v in vertices)
    for i, v in enumerate(members):
        if v < 0 or (n is not None and v >= n):
            raise InputError(f"vertex index {v} out of range [0, {n})")
        if i > 0 and members[i - 1] == v:
            raise InputError(f"duplicate vertex index {v}")
    return tuple(members)


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.n < 0:
            raise InputError("vertex count must be non-negative")
        for u, v in self.edges:
            if not 0 <= u < v < self.n:
                raise InputError(f"bad edge ({u}, {v}) for n={self.n}")

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        """Build a graph from an iterable of (u, v) pairs.

        Pairs are normalized to u < v; self-loops and duplicates are
        rejected.
        """
        canonical = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            if u > v:
                u, v = v, u
            if (u, v) in canonical:
                raise InputError(f"duplicate edge ({u}, {v})")
            canonical.add((u, v))
        return cls(n=n, edges=frozenset(canonical))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def sorted_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.edges))

    @cached_property
    def neighbor_masks(self) -> tuple[int, ...]:
        """Adjacency rows as Python-int bitmasks (bit j of mask[i] = edge ij)."""
        masks = [0] * self.n
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return tuple(masks)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return tuple(deg)

    def degree(self, v: int) -> int:
        return self.degrees[v]

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in self.edges


@dataclass(frozen=True)
class AdjacencyMatrix:
    """Dense symmetric adjacency view; entries are 0/1 floats.

    ``loops_added`` marks the unit-diagonal variant used by the
    decomposition solver.
    """

    n: int
    entries: np.ndarray
    loops_added: bool

    def __post_init__(self):
        a = self.entries
        if a.shape != (self.n, self.n):
            raise InputError(f"expected shape ({self.n}, {self.n}), got {a.shape}")
        if not np.array_equal(a, a.T):
            raise InputError("adjacency entries must be symmetric")

    def __eq__(self, other):
        if not isinstance(other, AdjacencyMatrix):
            return NotImplemented
        return (
            self.n == other.n
            and self.loops_added == other.loops_added
            and np.array_equal(self.entries, other.entries)
        )


def adjacency(g: Graph, with_loops: bool = False) -> AdjacencyMatrix:
    """Dense 0/1 adjacency matrix of ``g``; unit diagonal iff ``with_loops``."""
    a = np.zeros((g.n, g.n))
    for u, v in g.edges:
        a[u, v] = 1.0
        a[v, u] = 1.0
    if with_loops:
        np.fill_diagonal(a, 1.0)
    return AdjacencyMatrix(n=g.n, entries=a, loops_added=with_loops)


def induced_edge_count(g: Graph, s: tuple[int, ...]) -> int:
    """Number of edges of ``g`` with both endpoints in ``s``."""
    smask = 0
    for v in s:
        smask |= 1 << v
    masks = g.neighbor_masks
    return sum((masks[v] & smask).bit_count() for v in s) // 2


def edge_density(g: Graph, s) -> Fraction:
    """Induced edge count over C(|s|, 2), as an exact fraction.

    Sets with at most one vertex have density 1 by convention, so
    singletons qualify as gamma-cliques for every gamma.
    """
    s = as_vertex_set(s, g.n)
    if len(s) <= 1:
        return Fraction(1)
    return Fraction(induced_edge_count(g, s), comb(len(s), 2))


def is_gamma_clique(g: Graph, s, gamma) -> bool:
    """Exact test of edge_density(g, s) >= gamma, no floating slack."""
    frac = check_gamma(gamma)
    return edge_density(g, s) >= frac


def write_edge_list(g: Graph) -> str:
    """Canonical edge-list text: header "n m", then sorted "u v" lines."""
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.sorted_edges)
    return "\n".join(lines) + "\n"


def read_edge_list(text: str) -> Graph:
    """Parse the edge-list format written by :func:`write_edge_list`."""
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise ParseError("missing header line 'n m'", line=1)
    header = lines[0].split()
    if len(header) != 2:
        raise ParseError(f"expected header 'n m', got {lines[0]!r}", line=1)
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError:
        raise ParseError(f"non-integer header {lines[0]!r}", line=1) from None
    if n < 0 or m < 0:
        raise ParseError("negative count in header", line=1)

    edges = set()
    lineno = 1
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        parts = raw.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'u v', got {raw!r}", line=lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer endpoint in {raw!r}", line=lineno) from None
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", line=lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"vertex index out of range in {raw!r}", line=lineno)
        if u > v:
            u, v = v, u
        if (u, v) in edges:
            raise ParseError(f"duplicate edge ({u}, {v})", line=lineno)
        edges.add((u, v))
    if len(edges) != m:
        raise ParseError(f"header declares {m} edges, found {len(edges)}", line=lineno)
    return Graph(n=n, edges=frozenset(edges))
