"""Pure Python implementations of the hot kernels.

Mirrors the semantics of the compiled module `_core` exactly: identical
branching order, identical node accounting.  Used automatically when the
extension is not built; also handy as a reference in tests and benchmarks.
"""

from __future__ import annotations

import time

BACKEND = "python"


def _words_to_ints(words) -> list:
    out = []
    for row in words:
        m = 0
        for w in range(len(row) - 1, -1, -1):
            m = (m << 64) | int(row[w])
        out.append(m)
    return out


def pair_opposition(perp_words, words, out) -> None:
    """out[i, j] = 1 iff the two bit rows are disjoint."""
    pm = _words_to_ints(perp_words)
    mm = _words_to_ints(words)
    for i, a in enumerate(pm):
        row = out[i]
        for j, b in enumerate(mm):
            row[j] = not (a & b)


def subset_matrix(small_words, big_words, out) -> None:
    """out[i, j] = 1 iff small row i is a subset of big row j (as bit sets)."""
    sm = _words_to_ints(small_words)
    bm = _words_to_ints(big_words)
    for i, a in enumerate(sm):
        row = out[i]
        for j, b in enumerate(bm):
            row[j] = not (a & ~b)


class _Budget(Exception):
    pass


def max_clique(adj_words, n, initial, node_limit, time_limit):
    """Branch and bound maximum clique with greedy-colouring bounds.

    `initial` is a known clique (possibly empty) used as the starting
    incumbent.  Returns a dict with the best clique found, a proved flag,
    an upper bound valid for the whole graph, and the node count.
    Deterministic: branching follows colour order with lowest-bit ties.
    """
    adj = _words_to_ints(adj_words)
    deadline = time.monotonic() + time_limit if time_limit > 0 else None
    full = (1 << n) - 1

    best = len(initial)
    best_members = list(initial)
    nodes = 0

    def color_order(P):
        order, bounds = [], []
        uncolored = P
        c = 0
        while uncolored:
            c += 1
            avail = uncolored
            while avail:
                v = (avail & -avail).bit_length() - 1
                bit = 1 << v
                order.append(v)
                bounds.append(c)
                avail &= ~(adj[v] | bit)
                uncolored &= ~bit
        return order, bounds

    def expand(R, P):
        nonlocal best, best_members, nodes
        nodes += 1
        if node_limit and nodes > node_limit:
            raise _Budget
        if deadline is not None and nodes % 1024 == 0 and time.monotonic() > deadline:
            raise _Budget
        order, bounds = color_order(P)
        for i in range(len(order) - 1, -1, -1):
            if len(R) + bounds[i] <= best:
                return
            v = order[i]
            bit = 1 << v
            P2 = P & adj[v]
            R.append(v)
            if P2:
                expand(R, P2)
            elif len(R) > best:
                best = len(R)
                best_members = R.copy()
            R.pop()
            P &= ~bit

    proved = True
    ub = n
    root_order, root_bounds = color_order(full)
    try:
        P = full
        R = []
        for i in range(len(root_order) - 1, -1, -1):
            ub = max(best, root_bounds[i])
            if root_bounds[i] <= best:
                break
            v = root_order[i]
            bit = 1 << v
            P2 = P & adj[v]
            R.append(v)
            nodes += 1
            if P2:
                expand(R, P2)
            elif len(R) > best:
                best = len(R)
                best_members = R.copy()
            R.pop()
            P &= ~bit
        ub = best
    except _Budget:
        proved = False
        # cliques through an already-explored branch are <= best; the rest
        # live in the current colour-bound prefix
        ub = max(best, ub)

    return {
        "size": best,
        "members": sorted(best_members),
        "proved": proved,
        "upper_bound": ub,
        "nodes": nodes,
    }
