"""Dense exact linear algebra over small Galois fields.

Matrices are numpy int16 arrays of element indices.  Prime fields use plain
modular arithmetic; proper extension fields go through the lookup tables of
the field object.  All matrices handled here are tiny (at most the ambient
dimension of a polar space), so the loops below favour clarity over blocking.
"""

from __future__ import annotations

import numpy as np

from .gf import GF


def as_mat(rows) -> np.ndarray:
    a = np.array(rows, dtype=np.int16)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    return a


def matmul(F: GF, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Exact matrix product over the field."""
    A = np.asarray(A, dtype=np.int16)
    B = np.asarray(B, dtype=np.int16)
    if F.k == 1:
        return ((A.astype(np.int64) @ B.astype(np.int64)) % F.p).astype(np.int16)
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int16)
    for t in range(A.shape[1]):
        out = F.ADD[out, F.MUL[A[:, t][:, None], B[t, :][None, :]]]
    return out


def scale_row(F: GF, row: np.ndarray, c: int) -> np.ndarray:
    if F.k == 1:
        return (row.astype(np.int64) * c % F.p).astype(np.int16)
    return F.MUL[row, c]


def addmul_row(F: GF, target: np.ndarray, source: np.ndarray, c: int) -> np.ndarray:
    """target + c * source."""
    if F.k == 1:
        return ((target.astype(np.int64) + c * source.astype(np.int64)) % F.p).astype(np.int16)
    return F.ADD[target, F.MUL[source, c]]


def conj_mat(F: GF, A: np.ndarray) -> np.ndarray:
    return F.CONJ[A] if F.CONJ is not None else A


def rref(F: GF, A: np.ndarray):
    """Reduced row echelon form.  Returns (canonical matrix, pivot columns).

    Zero rows are dropped, so the result is the canonical representative of
    the row space.
    """
    M = np.array(A, dtype=np.int16)
    nrows, ncols = M.shape
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if M[i, c]:
                pr = i
                break
        if pr is None:
            continue
        if pr != r:
            M[[r, pr]] = M[[pr, r]]
        piv = int(M[r, c])
        if piv != 1:
            M[r] = scale_row(F, M[r], F.inv(piv))
        for i in range(nrows):
            if i != r and M[i, c]:
                M[i] = addmul_row(F, M[i], M[r], F.neg(int(M[i, c])))
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return M[:r].copy(), pivots


def rank(F: GF, A: np.ndarray) -> int:
    return rref(F, A)[0].shape[0]


def right_kernel(F: GF, A: np.ndarray) -> np.ndarray:
    """Canonical basis (as rows) of {x : A @ x^T = 0}."""
    R, pivots = rref(F, A)
    ncols = A.shape[1]
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return np.zeros((0, ncols), dtype=np.int16)
    K = np.zeros((len(free), ncols), dtype=np.int16)
    for j, fc in enumerate(free):
        K[j, fc] = 1
        for i, pc in enumerate(pivots):
            K[j, pc] = F.neg(int(R[i, fc]))
    return rref(F, K)[0]


def left_kernel(F: GF, A: np.ndarray) -> np.ndarray:
    return right_kernel(F, np.ascontiguousarray(A.T))


def span_rows(F: GF, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return rref(F, np.vstack([A, B]))[0]


def meet_rows(F: GF, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Canonical basis of rowspace(A) & rowspace(B).

    Coefficient vectors (x, y) with x A + y B = 0 give x A in the meet, and
    every meet vector arises this way.
    """
    A = rref(F, A)[0]
    B = rref(F, B)[0]
    if A.shape[0] == 0 or B.shape[0] == 0:
        return np.zeros((0, A.shape[1]), dtype=np.int16)
    stacked = np.vstack([A, B])
    K = left_kernel(F, stacked)
    if K.shape[0] == 0:
        return np.zeros((0, A.shape[1]), dtype=np.int16)
    xs = K[:, : A.shape[0]]
    return rref(F, matmul(F, xs, A))[0]


def contains_rows(F: GF, A: np.ndarray, B: np.ndarray) -> bool:
    """rowspace(B) <= rowspace(A)."""
    Ar = rref(F, A)[0]
    return span_rows(F, Ar, B).shape[0] == Ar.shape[0]


def normalized_coefficients(F: GF, r: int) -> np.ndarray:
    """All projectively normalized nonzero vectors of F^r, lexicographically.

    First nonzero coordinate equals 1; there are (q^r - 1)/(q - 1) of them.
    Used to enumerate the projective points of an r-dimensional row space.
    """
    q = F.q
    rows = []
    for lead in range(r):
        tail = r - lead - 1
        block = np.zeros((q ** tail, r), dtype=np.int16)
        block[:, lead] = 1
        col = np.arange(q ** tail)
        for j in range(tail):
            block[:, lead + 1 + j] = (col // q ** (tail - 1 - j)) % q
        rows.append(block)
    return np.vstack(rows)


_COEFF_CACHE: dict = {}


def projective_points_of(F: GF, A: np.ndarray) -> np.ndarray:
    """Normalized representatives of the 1-spaces inside rowspace(A).

    A must have independent rows.  Rows of the result are not sorted.
    """
    r = A.shape[0]
    key = (F.p, F.k, r)
    if key not in _COEFF_CACHE:
        _COEFF_CACHE[key] = normalized_coefficients(F, r)
    pts = matmul(F, _COEFF_CACHE[key], A)
    return normalize_rows(F, pts)


def normalize_rows(F: GF, A: np.ndarray) -> np.ndarray:
    """Scale each nonzero row so its first nonzero entry is 1."""
    A = np.array(A, dtype=np.int16)
    for i in range(A.shape[0]):
        nz = np.nonzero(A[i])[0]
        if nz.size:
            lead = int(A[i, nz[0]])
            if lead != 1:
                A[i] = scale_row(F, A[i], F.inv(lead))
    return A
