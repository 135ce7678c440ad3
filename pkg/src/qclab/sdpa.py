"""Sparse SDPA (.dat-s) export of the semidefinite form of the
decomposition model, plus a reader and a grammar checker for round trips.

Encoding (dual standard form: max tr(F0 Y), tr(Fk Y) = c_k, Y >= 0):

* block 1: the 2n x 2n PSD matrix [[Z1, Q], [Q^T, Z2]]; Q_ij is read off
  the corner block through entries of weight 1/2 at (i, n + j);
* block 2: a diagonal block holding, in order, the W variables (n^2), the
  two absolute-value slacks (n^2 each), the upper-bound slacks (n^2), and,
  when eta >= 1, one density slack.

Constraint rows, in order: per ordered pair (i, j) the two absolute-value
rows  Q_ij + W_ij - p_ij = A_ij  and  -Q_ij + W_ij - q_ij = -A_ij; the
density row  sum(Q) - r = gamma * eta^2  (omitted for eta = 0); per pair
the bound row  Q_ij + u_ij = 1.  The [0,1] box of the source model is
exported through these upper-bound rows; the lower bounds are not
representable without another n^2 rows and are left to the objective.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, ParseError
from .graph import AdjacencyMatrix, check_gamma


@dataclass(frozen=True)
class SdpaModel:
    """Parsed content of a sparse SDPA file."""

    n_constraints: int
    block_dims: tuple[int, ...]
    rhs: tuple[float, ...]
    entries: tuple[tuple[int, int, int, int, float], ...]  # (mat, block, i, j, value)

    def entry_dict(self) -> dict:
        return {(m, b, i, j): v for m, b, i, j, v in self.entries}


def _fmt(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def build_sdpa_model(a: AdjacencyMatrix, lam: float, gamma, eta: int) -> SdpaModel:
    """Assemble the block structure and coefficient entries of the export."""
    if lam <= 0:
        raise InputError("lam must be positive")
    gamma_f = float(check_gamma(gamma))
    if eta < 0:
        raise InputError("eta must be non-negative")
    n = a.n
    A = a.entries
    n2 = n * n
    has_density = eta >= 1
    m = 2 * n2 + (1 if has_density else 0) + n2
    psd_dim = 2 * n
    lp_dim = 4 * n2 + (1 if has_density else 0)

    def w_slot(i, j):  # 1-based LP positions
        return i * n + j + 1

    def p_slot(i, j):
        return n2 + i * n + j + 1

    def q_slot(i, j):
        return 2 * n2 + i * n + j + 1

    def u_slot(i, j):
        return 3 * n2 + i * n + j + 1

    r_slot = 4 * n2 + 1

    entries = []
    # objective F0 = -(1/2 (tr Z1 + tr Z2) + lam * sum W)
    for d in range(1, psd_dim + 1):
        entries.append((0, 1, d, d, -0.5))
    for i in range(n):
        for j in range(n):
            entries.append((0, 2, w_slot(i, j), w_slot(i, j), -lam))

    rhs = []
    row = 0
    # absolute-value pairs: W_ij - (A_ij - Q_ij) >= 0 and W_ij + (A_ij - Q_ij) >= 0
    for i in range(n):
        for j in range(n):
            row += 1
            entries.append((row, 1, i + 1, n + j + 1, 0.5))
            entries.append((row, 2, w_slot(i, j), w_slot(i, j), 1.0))
            entries.append((row, 2, p_slot(i, j), p_slot(i, j), -1.0))
            rhs.append(float(A[i, j]))
    for i in range(n):
        for j in range(n):
            row += 1
            entries.append((row, 1, i + 1, n + j + 1, -0.5))
            entries.append((row, 2, w_slot(i, j), w_slot(i, j), 1.0))
            entries.append((row, 2, q_slot(i, j), q_slot(i, j), -1.0))
            rhs.append(float(-A[i, j]))
    if has_density:
        row += 1
        for i in range(n):
            for j in range(n):
                entries.append((row, 1, i + 1, n + j + 1, 0.5))
        entries.append((row, 2, r_slot, r_slot, -1.0))
        rhs.append(gamma_f * eta * eta)
    for i in range(n):
        for j in range(n):
            row += 1
            entries.append((row, 1, i + 1, n + j + 1, 0.5))
            entries.append((row, 2, u_slot(i, j), u_slot(i, j), 1.0))
            rhs.append(1.0)

    assert row == m
    return SdpaModel(
        n_constraints=m,
        block_dims=(psd_dim, -lp_dim),
        rhs=tuple(rhs),
        entries=tuple(entries),
    )


def export_sdpa(a: AdjacencyMatrix, lam: float, gamma, eta: int) -> str:
    """Render the model as sparse SDPA text."""
    model = build_sdpa_model(a, lam, gamma, eta)
    lines = [
        f"{model.n_constraints}",
        f"{len(model.block_dims)}",
        " ".join(str(d) for d in model.block_dims),
        " ".join(_fmt(v) for v in model.rhs),
    ]
    for mat, block, i, j, v in model.entries:
        lines.append(f"{mat} {block} {i} {j} {_fmt(v)}")
    return "\n".join(lines) + "\n"


def read_sdpa(text: str) -> SdpaModel:
    """Parse sparse SDPA text back into a model (inverse of export)."""
    lines = [ln for ln in text.splitlines()]
    idx = 0
    while idx < len(lines) and lines[idx][:1] in ('"', "*"):
        idx += 1
    try:
        m = int(lines[idx].split()[0])
        nblocks = int(lines[idx + 1].split()[0])
    except (IndexError, ValueError):
        raise ParseError("bad SDPA header", line=idx + 1) from None
    dims_tokens = lines[idx + 2].replace("{", " ").replace("}", " ").replace(",", " ").replace("(", " ").replace(")", " ").split()
    if len(dims_tokens) != nblocks:
        raise ParseError(f"expected {nblocks} block dims, got {len(dims_tokens)}", line=idx + 3)
    dims = tuple(int(t) for t in dims_tokens)
    rhs_tokens = lines[idx + 3].replace(",", " ").split()
    if len(rhs_tokens) != m:
        raise ParseError(f"expected {m} rhs values, got {len(rhs_tokens)}", line=idx + 4)
    rhs = tuple(float(t) for t in rhs_tokens)
    entries = []
    for lineno in range(idx + 4, len(lines)):
        raw = lines[lineno].strip()
        if not raw:
            continue
        parts = raw.split()
        if len(parts) != 5:
            raise ParseError(f"expected 5 tokens, got {raw!r}", line=lineno + 1)
        mat, block, i, j = (int(p) for p in parts[:4])
        entries.append((mat, block, i, j, float(parts[4])))
    return SdpaModel(n_constraints=m, block_dims=dims, rhs=rhs, entries=tuple(entries))


def validate_sdpa(text: str) -> dict:
    """Grammar and consistency check of sparse SDPA text.

    Verifies header counts, block declarations, and that every entry line
    addresses a declared matrix and an in-range upper-triangle position.
    Returns summary stats; raises ParseError on any violation.
    """
    model = read_sdpa(text)
    if model.n_constraints < 0:
        raise ParseError("negative constraint count")
    for mat, block, i, j, v in model.entries:
        if not 0 <= mat <= model.n_constraints:
            raise ParseError(f"matrix index {mat} outside [0, {model.n_constraints}]")
        if not 1 <= block <= len(model.block_dims):
            raise ParseError(f"block index {block} outside [1, {len(model.block_dims)}]")
        dim = abs(model.block_dims[block - 1])
        if not 1 <= i <= j <= dim:
            raise ParseError(f"entry position ({i}, {j}) invalid for block dim {dim}")
        if model.block_dims[block - 1] < 0 and i != j:
            raise ParseError(f"off-diagonal entry ({i}, {j}) in diagonal block {block}")
        if not np.isfinite(v):
            raise ParseError(f"non-finite coefficient {v}")
    return {
        "constraints": model.n_constraints,
        "blocks": model.block_dims,
        "entries": len(model.entries),
    }
