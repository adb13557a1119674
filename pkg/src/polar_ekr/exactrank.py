"""Certified integer spectra and exact rational kernels of integer matrices.

The pipeline is: estimate eigenvalues in floating point, round to integer
candidates, then certify each candidate exactly.  Certification of a
candidate eigenvalue t of a symmetric integer matrix A produces an integer
basis of ker(A - t*I):

  1. reduce A - t*I modulo one or more word-size primes (blocked elimination
     so the heavy updates run through BLAS on float64, with strict overflow
     bounds that keep every intermediate value exactly representable),
  2. read a kernel basis off the echelon form, combine residues by CRT and
     lift entries to small rationals by rational reconstruction,
  3. clear denominators and verify (A - t*I) @ K == 0 in exact integer
     arithmetic.

Step 3 is the proof: steps 1 and 2 are only a search heuristic, so unlucky
primes or failed lifts can never produce a wrong answer, only a retry.  For
a symmetric matrix the geometric multiplicity equals the algebraic one, so
verified kernel dimensions summing to n certify the complete spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Dict, List, Tuple

import numpy as np

_BLOCK = 128
_CHUNK = 256


def _gen_primes(limit: int, count: int) -> list:
    out = []
    x = limit
    while len(out) < count:
        x -= 1
        if all(x % f for f in range(2, isqrt(x) + 1)):
            out.append(x)
    return out


# primes just below 2^22: block * p^2 stays far below 2^53, so float64
# arithmetic in the elimination and the chunked products is exact
PRIMES = _gen_primes(1 << 22, 25)


class CertificationError(RuntimeError):
    """An exact certificate could not be produced (never silently ignored)."""


def _reduce_mod(a: np.ndarray, p: int) -> np.ndarray:
    """In-place a %= p via floor division (much faster than fmod when the
    quotients are large, which they are for deferred reductions)."""
    np.subtract(a, np.floor(a / p) * p, out=a)
    return a


def matmul_mod(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """(A @ B) % p with float64 BLAS, chunking the inner dimension so that
    every partial sum is exactly representable."""
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    k = A.shape[1]
    out = np.zeros((A.shape[0], B.shape[1]))
    for c0 in range(0, k, _CHUNK):
        out += A[:, c0:c0 + _CHUNK] @ B[c0:c0 + _CHUNK]
        _reduce_mod(out, p)
    return out


def row_echelon_mod_p(A: np.ndarray, p: int):
    """Row echelon form modulo p via blocked elimination.

    The panel is factored in a contiguous copy (the full matrix is too wide
    for cache-friendly column work) and the trailing columns get one BLAS
    update per panel.  Returns (pivot columns, echelon rows as float64
    residues); pivot row i has its pivot in pivots[i].
    """
    M = np.array(A, dtype=np.float64) % p
    n, m = M.shape
    pivots: List[int] = []
    r = 0
    c0 = 0
    while c0 < m and r < n:
        c1 = min(c0 + _BLOCK, m)
        panel = M[:, c0:c1].copy()  # always a copy: M row swaps must not alias
        # within the panel, reductions are deferred: each position absorbs at
        # most _BLOCK rank-1 updates of magnitude < p^2, so values stay exact
        local = []
        for c in range(c1 - c0):
            rr = r + len(local)
            if rr >= n:
                break
            col = _reduce_mod(panel[rr:, c].copy(), p)
            nz = np.nonzero(col)[0]
            if nz.size == 0:
                panel[rr:, c] = col
                continue
            pr = rr + int(nz[0])
            if pr != rr:
                panel[[rr, pr]] = panel[[pr, rr]]
                M[[rr, pr]] = M[[pr, rr]]
                col[[0, pr - rr]] = col[[pr - rr, 0]]
            pivrow = _reduce_mod(panel[rr, c:].copy(), p)
            panel[rr, c:] = pivrow
            inv = pow(int(pivrow[0]), p - 2, p)
            factors = _reduce_mod(col[1:] * inv, p)
            if factors.any():
                panel[rr + 1:, c + 1:] -= factors[:, None] * pivrow[None, 1:]
            panel[rr + 1:, c] = factors  # stored multipliers, cleared below
            local.append(c)
        np_ = len(local)
        _reduce_mod(panel, p)
        M[:, c0:c1] = panel
        if np_ and c1 < m:
            # forward substitution brings the panel's pivot rows up to date
            for t in range(1, np_):
                L_row = panel[r + t, local[:t]]
                if L_row.any():
                    upd = M[r + t, c1:] - L_row @ M[r:r + t, c1:]
                    M[r + t, c1:] = _reduce_mod(upd, p)
            L_below = panel[r + np_:, local]
            if L_below.size and L_below.any():
                M[r + np_:, c1:] -= matmul_mod(L_below, M[r:r + np_, c1:], p)
                view = M[r + np_:, c1:]
                np.add(view, p, out=view, where=view < 0)
        for t, c in enumerate(local):
            M[r + t + 1:, c0 + c] = 0.0
        pivots.extend(c0 + c for c in local)
        r += np_
        c0 = c1
    return pivots, M[:len(pivots)]


def kernel_mod_p(A: np.ndarray, p: int):
    """Kernel basis of A modulo p.

    Returns (pivots, free columns, K) where K has shape (m, n_free); column
    j is the kernel vector with a 1 in free column j and 0 in the others.
    """
    pivots, E = row_echelon_mod_p(A, p)
    m = A.shape[1]
    pivset = set(pivots)
    free = [c for c in range(m) if c not in pivset]
    X = np.zeros((m, len(free)))
    for j, fc in enumerate(free):
        X[fc, j] = 1.0
    for t in range(len(pivots) - 1, -1, -1):
        pc = pivots[t]
        row = E[t, pc + 1:]
        if row.any():
            s = matmul_mod(row[None, :], X[pc + 1:], p)[0]
        else:
            s = np.zeros(len(free))
        inv = pow(int(E[t, pc]), p - 2, p)
        X[pc] = (-inv * s) % p
    return pivots, free, X.astype(np.int64)


def rational_reconstruct(a: int, m: int, bound: int):
    """The unique n/d with n*inverse(d) = a mod m, |n| <= bound, 0 < d <= bound,
    or None if no such fraction exists."""
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0:
        return None
    n, d = (r1, s1) if s1 > 0 else (-r1, -s1)
    if d > bound or gcd(abs(n), d) != 1:
        return None
    if (n - a * d) % m != 0:
        return None
    return Fraction(n, d)


def exact_matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Exact integer product, choosing the cheapest safe representation."""
    A = np.asarray(A)
    B = np.asarray(B)
    inner = A.shape[1]
    ma = int(np.abs(A).max(initial=0))
    mb = int(np.abs(B).max(initial=0))
    bound = inner * ma * mb
    if bound < (1 << 53):
        return np.rint(A.astype(np.float64) @ B.astype(np.float64)).astype(np.int64)
    if bound < (1 << 62):
        return A.astype(np.int64) @ B.astype(np.int64)
    return A.astype(object) @ B.astype(object)


def exact_kernel(A: np.ndarray) -> np.ndarray:
    """Verified integer kernel basis of an integer matrix.

    Returns K of shape (m, k) with A @ K == 0 exactly; columns are primitive
    integer vectors with echelon structure on the free coordinates, hence
    independent.  k is the exact nullity: the echelon rank of a lucky prime
    bounds the nullity from above, the verified columns bound it from below.
    """
    A = np.asarray(A, dtype=np.int64)
    m = A.shape[1]
    residues = []   # list of (p, pivots, free, K_p)
    best_rank = -1
    for p in PRIMES:
        pivots, free, Kp = kernel_mod_p(A, p)
        if len(pivots) > best_rank:
            best_rank = len(pivots)
            residues = [(p, pivots, free, Kp)]
        elif len(pivots) == best_rank and residues and pivots == residues[0][1]:
            residues.append((p, pivots, free, Kp))
        K = _try_lift(A, residues)
        if K is not None:
            return K
    raise CertificationError("rational kernel reconstruction failed for all primes")


def _crt_combine(residues):
    """Stack per-prime residue matrices into one matrix mod the product."""
    p0, _, _, K0 = residues[0]
    if len(residues) == 1:
        return K0, p0
    modulus = p0
    combined = K0.astype(np.int64)
    use_int64 = True
    for p, _, _, Kp in residues[1:]:
        inv = pow(modulus % p, -1, p)
        if use_int64 and modulus * p < (1 << 62):
            t = ((Kp - combined % p) * inv) % p
            combined = combined + modulus * t
        else:
            if use_int64:
                combined = combined.astype(object)
                use_int64 = False
            flat_c = combined.reshape(-1)
            flat_n = Kp.reshape(-1)
            for i in range(flat_c.size):
                t = ((int(flat_n[i]) - int(flat_c[i])) * inv) % p
                flat_c[i] = int(flat_c[i]) + modulus * t
        modulus *= p
    return combined, modulus


def _lift_column(col, modulus: int, bound: int):
    """Lift one residue column to a primitive integer vector, or None."""
    fracs = None
    for i, a in enumerate(col):
        a = int(a)
        if a <= bound or modulus - a <= bound:
            continue
        f = rational_reconstruct(a, modulus, bound)
        if f is None:
            return None
        if fracs is None:
            fracs = [None] * len(col)
        fracs[i] = f
    if fracs is None:
        # pure small-integer column
        ints = [int(a) if int(a) <= bound else int(a) - modulus for a in col]
        g = 0
        for x in ints:
            g = gcd(g, x)
            if g == 1:
                return ints
        return [x // g for x in ints] if g > 1 else ints
    den = 1
    for f in fracs:
        if f is not None and f.denominator != 1:
            den = den * f.denominator // gcd(den, f.denominator)
    ints = []
    for i, a in enumerate(col):
        if fracs[i] is not None:
            ints.append(int(fracs[i] * den))
        else:
            a = int(a)
            ints.append((a if a <= bound else a - modulus) * den)
    g = 0
    for x in ints:
        g = gcd(g, x)
        if g == 1:
            return ints
    return [x // g for x in ints] if g > 1 else ints


def _try_lift(A: np.ndarray, residues) -> np.ndarray | None:
    _, pivots, free, K0 = residues[0]
    nf = len(free)
    m = A.shape[1]
    if nf == 0:
        return np.zeros((m, 0), dtype=np.int64)
    combined, modulus = _crt_combine(residues)
    bound = isqrt(modulus // 2)

    cols = []
    for j in range(nf):
        ints = _lift_column(combined[:, j], modulus, bound)
        if ints is None:
            return None
        cols.append(ints)

    K = np.array(cols, dtype=object).T
    maxabs = max((abs(int(x)) for x in K.reshape(-1)), default=0)
    if maxabs < (1 << 62):
        K = K.astype(np.int64)
    # echelon structure on the free coordinates ensures independence
    sub = K[free][:, :]
    if np.count_nonzero(sub) != nf or any(sub[j, j] == 0 for j in range(nf)):
        return None
    if exact_matmul(A, K).any():
        return None
    return K


@dataclass(frozen=True)
class CertifiedSpectrum:
    """Complete integer spectrum with exactly certified multiplicities."""

    eigenvalues: Tuple[Tuple[int, int], ...]  # (value, multiplicity), ascending

    @property
    def smallest(self) -> int:
        return self.eigenvalues[0][0]

    @property
    def largest(self) -> int:
        return self.eigenvalues[-1][0]

    def multiplicity(self, value: int) -> int:
        for v, m in self.eigenvalues:
            if v == value:
                return m
        return 0


def certified_spectrum(A: np.ndarray, tol: float = 1e-6):
    """Certify the full integer spectrum of a symmetric integer matrix.

    Returns (CertifiedSpectrum, dict eigenvalue -> verified integer kernel
    basis of A - t*I).  Raises CertificationError if any numerical candidate
    is not near an integer, or if the certified multiplicities do not sum to
    the dimension (which would mean a non-integer eigenvalue exists).
    """
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    if not np.array_equal(A, A.T):
        raise ValueError("certified spectra are only defined for symmetric matrices")
    evs = np.linalg.eigvalsh(A.astype(np.float64))
    rounded = np.rint(evs)
    drift = float(np.abs(evs - rounded).max())
    if drift > tol:
        raise CertificationError(
            f"eigenvalue estimate {drift:.3e} away from an integer (tol {tol:.1e})")
    candidates = sorted(set(int(x) for x in rounded))
    kernels: Dict[int, np.ndarray] = {}
    pairs = []
    for t in candidates:
        B = A - t * np.eye(n, dtype=np.int64)
        K = exact_kernel(B)
        if K.shape[1] == 0:
            raise CertificationError(f"candidate {t} is not an eigenvalue")
        kernels[t] = K
        pairs.append((t, K.shape[1]))
    total = sum(m for _, m in pairs)
    if total != n:
        raise CertificationError(
            f"certified multiplicities sum to {total} != {n}: non-integer eigenvalues present")
    return CertifiedSpectrum(tuple(pairs)), kernels
