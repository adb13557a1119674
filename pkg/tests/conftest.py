"""Shared brute-force helpers for the test suite.

Everything here works over prime fields with plain modular arithmetic and
is deliberately independent of the package's own linear algebra, so it can
serve as an oracle for counts and containment questions.
"""

from __future__ import annotations

import itertools
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))


def rref_mod_p(rows, p):
    """Reduced row echelon form over GF(p).  Returns (rref rows, pivot cols)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] % p), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] % p:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def rank_mod_p(rows, p):
    return len(rref_mod_p(rows, p)[0])


def subspaces_mod_p(d, r, p):
    """All r-dimensional subspaces of GF(p)^d as canonical RREF tuples.

    Enumerates pivot-column patterns and free entries directly.
    """
    out = []
    for pivots in itertools.combinations(range(d), r):
        free = []
        for i, pc in enumerate(pivots):
            for c in range(pc + 1, d):
                if c not in pivots:
                    free.append((i, c))
        for vals in itertools.product(range(p), repeat=len(free)):
            mat = [[0] * d for _ in range(r)]
            for i, pc in enumerate(pivots):
                mat[i][pc] = 1
            for (i, c), v in zip(free, vals):
                mat[i][c] = v
            out.append(tuple(tuple(row) for row in mat))
    return out


def nonzero_vectors_mod_p(rows, p):
    """All nonzero vectors of the row space of `rows` over GF(p)."""
    rows = [r for r in rows if any(x % p for x in r)]
    vecs = set()
    for coeffs in itertools.product(range(p), repeat=len(rows)):
        if not any(coeffs):
            continue
        v = [0] * len(rows[0])
        for c, row in zip(coeffs, rows):
            for j, x in enumerate(row):
                v[j] = (v[j] + c * x) % p
        vecs.add(tuple(v))
    return vecs


def contains_mod_p(big, small, p):
    """Row space containment over GF(p)."""
    big_r, _ = rref_mod_p(big, p)
    both, _ = rref_mod_p(list(big_r) + [list(s) for s in small], p)
    return len(both) == len(big_r)
