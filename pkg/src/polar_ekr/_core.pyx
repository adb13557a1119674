# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: pairwise bit-row tests and the clique search.

Semantics (including search-tree node counts) mirror `_fallback` exactly;
see that module for the algorithm descriptions.
"""

from libc.stdlib cimport free, malloc
from libc.time cimport clock, CLOCKS_PER_SEC

import cython

BACKEND = "cython"


def pair_opposition(const unsigned long long[:, ::1] perp_words,
                    const unsigned long long[:, ::1] words,
                    unsigned char[:, ::1] out):
    cdef Py_ssize_t n = perp_words.shape[0], m = words.shape[0]
    cdef Py_ssize_t W = perp_words.shape[1]
    cdef Py_ssize_t i, j, w
    cdef bint clear
    for i in range(n):
        for j in range(m):
            clear = True
            for w in range(W):
                if perp_words[i, w] & words[j, w]:
                    clear = False
                    break
            out[i, j] = clear


def subset_matrix(const unsigned long long[:, ::1] small_words,
                  const unsigned long long[:, ::1] big_words,
                  unsigned char[:, ::1] out):
    cdef Py_ssize_t n = small_words.shape[0], m = big_words.shape[0]
    cdef Py_ssize_t W = small_words.shape[1]
    cdef Py_ssize_t i, j, w
    cdef bint inside
    for i in range(n):
        for j in range(m):
            inside = True
            for w in range(W):
                if small_words[i, w] & ~big_words[j, w]:
                    inside = False
                    break
            out[i, j] = inside


cdef struct SearchState:
    unsigned long long *adj      # n rows of W words
    unsigned long long *cand     # (n+1) levels of W words (candidate sets)
    unsigned long long *work     # 2 scratch rows
    int *order                   # colouring order buffer per level
    int *bound                   # colouring bounds per level
    int *stack                   # current clique
    int n
    int W
    int best
    int *best_members
    long long nodes
    long long node_limit
    double deadline
    bint budget_hit


cdef inline int _lowest_bit_vertex(unsigned long long *row, int W) nogil:
    cdef int w
    cdef unsigned long long x
    cdef int b
    for w in range(W):
        x = row[w]
        if x:
            b = 0
            while not (x & 1):
                x >>= 1
                b += 1
            return 64 * w + b
    return -1


cdef int _color_order(SearchState *st, unsigned long long *P,
                      int *order, int *bound) nogil:
    """Greedy colouring of P; returns the number of vertices written."""
    cdef unsigned long long *uncol = st.work
    cdef unsigned long long *avail = st.work + st.W
    cdef int W = st.W
    cdef int w, v, c = 0, cnt = 0
    for w in range(W):
        uncol[w] = P[w]
    while True:
        v = _lowest_bit_vertex(uncol, W)
        if v < 0:
            break
        c += 1
        for w in range(W):
            avail[w] = uncol[w]
        while v >= 0:
            order[cnt] = v
            bound[cnt] = c
            cnt += 1
            uncol[v >> 6] &= ~(1ULL << (v & 63))
            avail[v >> 6] &= ~(1ULL << (v & 63))
            for w in range(W):
                avail[w] &= ~st.adj[v * W + w]
            v = _lowest_bit_vertex(avail, W)
    return cnt


cdef void _expand(SearchState *st, int depth) nogil:
    cdef int W = st.W
    cdef unsigned long long *P = st.cand + depth * W
    cdef unsigned long long *P2 = st.cand + (depth + 1) * W
    cdef int *order = st.order + depth * st.n
    cdef int *bound = st.bound + depth * st.n
    cdef int cnt, i, v, w
    cdef bint empty

    st.nodes += 1
    if st.node_limit > 0 and st.nodes > st.node_limit:
        st.budget_hit = True
        return
    if st.deadline > 0 and (st.nodes & 1023) == 0:
        if <double>clock() / CLOCKS_PER_SEC > st.deadline:
            st.budget_hit = True
            return

    cnt = _color_order(st, P, order, bound)
    for i in range(cnt - 1, -1, -1):
        if depth + bound[i] <= st.best:
            return
        v = order[i]
        empty = True
        for w in range(W):
            P2[w] = P[w] & st.adj[v * W + w]
            if P2[w]:
                empty = False
        st.stack[depth] = v
        if not empty:
            _expand(st, depth + 1)
            if st.budget_hit:
                return
        elif depth + 1 > st.best:
            st.best = depth + 1
            for w in range(depth + 1):
                st.best_members[w] = st.stack[w]
        P[v >> 6] &= ~(1ULL << (v & 63))


def max_clique(const unsigned long long[:, ::1] adj_words, int n, initial,
               long long node_limit, double time_limit):
    cdef int W = adj_words.shape[1]
    cdef SearchState st
    cdef int i, w, v, cnt, ub
    cdef bint empty, proved
    cdef list init_list = list(initial)
    cdef unsigned long long *full
    cdef unsigned long long *P2
    cdef int *root_order
    cdef int *root_bound

    st.n = n
    st.W = W
    st.adj = <unsigned long long *> malloc(n * W * sizeof(unsigned long long))
    st.cand = <unsigned long long *> malloc((n + 2) * W * sizeof(unsigned long long))
    st.work = <unsigned long long *> malloc(2 * W * sizeof(unsigned long long))
    st.order = <int *> malloc((n + 1) * n * sizeof(int))
    st.bound = <int *> malloc((n + 1) * n * sizeof(int))
    st.stack = <int *> malloc((n + 1) * sizeof(int))
    st.best_members = <int *> malloc((n + 1) * sizeof(int))
    if not (st.adj and st.cand and st.work and st.order and st.bound
            and st.stack and st.best_members):
        raise MemoryError
    try:
        for i in range(n):
            for w in range(W):
                st.adj[i * W + w] = adj_words[i, w]
        st.best = len(init_list)
        for i in range(len(init_list)):
            st.best_members[i] = init_list[i]
        st.nodes = 0
        st.node_limit = node_limit
        st.deadline = (<double>clock() / CLOCKS_PER_SEC + time_limit) \
            if time_limit > 0 else 0.0
        st.budget_hit = False

        full = st.cand
        for w in range(W):
            full[w] = 0
        for i in range(n):
            full[i >> 6] |= 1ULL << (i & 63)

        # root level is unrolled to keep an anytime upper bound: when the
        # budget dies in branch i, unexplored branches are covered by the
        # colour bound of branch i and explored ones by the incumbent
        root_order = st.order
        root_bound = st.bound
        cnt = _color_order(&st, full, root_order, root_bound)
        ub = n
        proved = True
        P2 = st.cand + W
        i = cnt - 1
        while i >= 0:
            ub = st.best if st.best > root_bound[i] else root_bound[i]
            if root_bound[i] <= st.best:
                break
            v = root_order[i]
            empty = True
            for w in range(W):
                P2[w] = full[w] & st.adj[v * W + w]
                if P2[w]:
                    empty = False
            st.stack[0] = v
            st.nodes += 1
            if not empty:
                _expand(&st, 1)
                if st.budget_hit:
                    proved = False
                    break
            elif st.best < 1:
                st.best = 1
                st.best_members[0] = v
            full[v >> 6] &= ~(1ULL << (v & 63))
            i -= 1
        if not st.budget_hit:
            proved = True
            ub = st.best

        members = sorted([st.best_members[k] for k in range(st.best)])
        return {
            "size": st.best,
            "members": members,
            "proved": proved,
            "upper_bound": st.best if proved else max(st.best, ub),
            "nodes": st.nodes,
        }
    finally:
        free(st.adj)
        free(st.cand)
        free(st.work)
        free(st.order)
        free(st.bound)
        free(st.stack)
        free(st.best_members)
