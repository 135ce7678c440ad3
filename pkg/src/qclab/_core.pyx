# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled combinatorial search kernels: exhaustive subset enumeration
and the branch-and-bound quasi-clique search.

These dominate oracle runtime (tight bit-twiddling loops over up to 2^22
subsets or 10^7 search nodes).  The dense proximal operators are NOT here:
measured against numpy's vectorized kernels, scalar loops lose, so those
stay in ``qclab.prox``.  Mirrors ``qclab._core_py``; both are selected in
``qclab._backend``.
"""
import numpy as np

cimport numpy as cnp

cnp.import_array()

COMPILED = True

cdef extern from *:
    """
    static inline int qc_popcount64(unsigned long long x) {
    #if defined(__GNUC__) || defined(__clang__)
        return __builtin_popcountll(x);
    #else
        int c = 0;
        while (x) { x &= x - 1; c++; }
        return c;
    #endif
    }
    static inline int qc_ctz64(unsigned long long x) {
    #if defined(__GNUC__) || defined(__clang__)
        return __builtin_ctzll(x);
    #else
        int c = 0;
        while (!(x & 1ULL)) { x >>= 1; c++; }
        return c;
    #endif
    }
    """
    int qc_popcount64(unsigned long long x) nogil
    int qc_ctz64(unsigned long long x) nogil


def exhaustive_max_qc(cnp.uint64_t[::1] masks, int n, long long num, long long den):
    cdef unsigned long long total = 1ULL << n
    cdef unsigned long long s, low, prev, best_mask = 0, d
    cdef int i, k, best_k = 0
    cdef long long e
    cdef cnp.uint8_t[::1] table = np.zeros(total, dtype=np.uint8)
    with nogil:
        for s in range(1, total):
            low = s & (~s + 1)
            prev = s ^ low
            i = qc_ctz64(low)
            e = table[prev] + qc_popcount64(masks[i] & prev)
            table[s] = <cnp.uint8_t> e
            k = qc_popcount64(s)
            if k < best_k:
                continue
            if 2 * den * e >= num * <long long> k * (k - 1):
                if k > best_k:
                    best_k = k
                    best_mask = s
                elif k == best_k:
                    d = s ^ best_mask
                    if s & (d & (~d + 1)):
                        best_mask = s
    return best_k, int(best_mask)


cdef struct BnbState:
    long long nodes
    long long budget
    int best_k
    unsigned long long best_mask
    bint aborted


cdef void _bnb_dfs(unsigned long long* adj, int* order, int n, int pos,
                   unsigned long long smask, int k, long long e_s,
                   long long num, long long den, int omega_l, int omega_u,
                   BnbState* st, int* cut_counts) noexcept nogil:
    # cut_counts is shared scratch (n + 2 slots); it is consumed before any
    # recursive call, so children may clobber it freely.
    cdef int t_min, t_max, j, t, v, nk, cv, idx
    cdef long long ub, prefix, ne
    cdef unsigned long long ns
    cdef bint reachable
    st.nodes += 1
    if st.nodes > st.budget:
        st.aborted = True
        return
    if pos == n:
        return
    t_max = k + (n - pos)
    if omega_u < t_max:
        t_max = omega_u
    t_min = (k if k > st.best_k else st.best_k) + 1
    if t_min > t_max:
        return
    # counting sort of candidate cuts to S (values in 0..k)
    for j in range(k + 1):
        cut_counts[j] = 0
    for j in range(pos, n):
        cut_counts[qc_popcount64(adj[order[j]] & smask)] += 1
    reachable = False
    prefix = 0
    idx = k
    cv = cut_counts[idx]
    for t in range(k + 1, t_max + 1):
        while cv == 0 and idx > 0:
            idx -= 1
            cv = cut_counts[idx]
        prefix += idx
        if cv > 0:
            cv -= 1
        j = t - k
        if t >= t_min:
            ub = e_s + prefix + (<long long> j * (j - 1)) // 2
            if 2 * den * ub >= num * <long long> t * (t - 1):
                reachable = True
                break
    if not reachable:
        return
    v = order[pos]
    if k < omega_u:
        ns = smask | (1ULL << v)
        ne = e_s + qc_popcount64(adj[v] & smask)
        nk = k + 1
        if nk >= omega_l and nk > st.best_k and 2 * den * ne >= num * <long long> nk * (nk - 1):
            st.best_k = nk
            st.best_mask = ns
        _bnb_dfs(adj, order, n, pos + 1, ns, nk, ne, num, den,
                 omega_l, omega_u, st, cut_counts)
        if st.aborted:
            return
    _bnb_dfs(adj, order, n, pos + 1, smask, k, e_s, num, den,
             omega_l, omega_u, st, cut_counts)


def bnb_max_qc(cnp.uint64_t[::1] masks, int n, long long num, long long den,
               int omega_l, int omega_u, long long budget):
    cdef int v
    degs = [qc_popcount64(masks[v]) for v in range(n)]
    order = sorted(range(n), key=lambda x: (-degs[x], x))
    cdef cnp.ndarray[cnp.int32_t, ndim=1] order_arr = np.array(order, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] scratch = np.zeros(n + 2, dtype=np.int32)
    cdef int[::1] order_view = order_arr
    cdef int[::1] scratch_view = scratch
    cdef unsigned long long[::1] adj = masks
    cdef BnbState st
    st.nodes = 0
    st.budget = budget
    st.best_k = omega_l - 1 if omega_l > 1 else 0
    st.best_mask = 0
    st.aborted = False
    if n > 0:
        with nogil:
            _bnb_dfs(&adj[0], &order_view[0], n, 0, 0, 0, 0,
                     num, den, omega_l, omega_u, &st, &scratch_view[0])
    return st.best_k, int(st.best_mask), st.nodes, not st.aborted
