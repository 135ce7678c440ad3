"""Pure-Python implementations of the combinatorial search kernels.

Same call surface as the compiled module ``qclab._core``; selection happens
in ``qclab._backend``.  Bitmask arguments arrive as uint64 numpy arrays.
"""
from __future__ import annotations

COMPILED = False


def _lex_smaller(a: int, b: int) -> bool:
    # For equal popcounts: sorted vertex list of a precedes that of b iff
    # the lowest differing bit belongs to a.
    d = a ^ b
    low = d & -d
    return bool(a & low)


def exhaustive_max_qc(masks, n, num, den):
    """Exact maximum gamma-quasi-clique by subset enumeration.

    Returns (best_size, best_mask).  Ties on size resolve to the
    lexicographically smallest vertex set.  Edge counts are built by
    dynamic programming over the subset lattice.
    """
    adj = [int(x) for x in masks]
    total = 1 << n
    table = bytearray(total)
    best_k = 0
    best_mask = 0
    for s in range(1, total):
        low = s & -s
        prev = s ^ low
        i = low.bit_length() - 1
        e = table[prev] + (adj[i] & prev).bit_count()
        table[s] = e
        k = s.bit_count()
        if k < best_k:
            continue
        if 2 * den * e >= num * k * (k - 1):
            if k > best_k or (k == best_k and _lex_smaller(s, best_mask)):
                best_k = k
                best_mask = s
    return best_k, best_mask


def bnb_max_qc(masks, n, num, den, omega_l, omega_u, budget):
    """Depth-first branch and bound for the maximum gamma-quasi-clique.

    Branches on vertex inclusion in descending-degree order.  A subtree is
    pruned when no reachable size t can meet the edge requirement even if
    the best candidates were added and fully interconnected.  Returns
    (best_size, best_mask, nodes, certified).
    """
    adj = [int(x) for x in masks]
    degs = [adj[v].bit_count() for v in range(n)]
    order = sorted(range(n), key=lambda v: (-degs[v], v))

    state = {"best_k": max(omega_l - 1, 0), "best_mask": 0, "nodes": 0, "aborted": False}

    def dfs(smask, k, e_s, pos):
        state["nodes"] += 1
        if state["nodes"] > budget:
            state["aborted"] = True
            return
        if pos == n:
            return
        c = n - pos
        t_max = min(k + c, omega_u)
        t_min = max(k, state["best_k"]) + 1
        if t_min > t_max:
            return
        cuts = sorted(
            ((adj[order[j]] & smask).bit_count() for j in range(pos, n)),
            reverse=True,
        )
        reachable = False
        prefix = 0
        for j in range(1, t_max - k + 1):
            prefix += cuts[j - 1]
            t = k + j
            if t < t_min:
                continue
            ub = e_s + prefix + j * (j - 1) // 2
            if 2 * den * ub >= num * t * (t - 1):
                reachable = True
                break
        if not reachable:
            return
        v = order[pos]
        if k < omega_u:
            ns = smask | (1 << v)
            ne = e_s + (adj[v] & smask).bit_count()
            nk = k + 1
            if nk >= omega_l and nk > state["best_k"] and 2 * den * ne >= num * nk * (nk - 1):
                state["best_k"] = nk
                state["best_mask"] = ns
            dfs(ns, nk, ne, pos + 1)
            if state["aborted"]:
                return
        dfs(smask, k, e_s, pos + 1)

    if n > 0:
        dfs(0, 0, 0, 0)
    return state["best_k"], state["best_mask"], state["nodes"], not state["aborted"]
