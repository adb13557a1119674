"""Exact rank / kernel / spectrum certification against independent oracles."""

import numpy as np
import pytest

from conftest import rank_mod_p
from polar_ekr.exactrank import (
    PRIMES,
    CertificationError,
    certified_spectrum,
    exact_kernel,
    exact_matmul,
    kernel_mod_p,
    matmul_mod,
    rational_reconstruct,
    row_echelon_mod_p,
)


def test_primes_are_prime_and_sized():
    for p in PRIMES:
        assert p < (1 << 22)
        assert all(p % f for f in range(2, int(p ** 0.5) + 1))
    assert len(set(PRIMES)) == len(PRIMES)


@pytest.mark.parametrize("seed", range(6))
def test_echelon_rank_against_small_prime_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 45))
    m = int(rng.integers(3, 45))
    k = int(rng.integers(1, min(n, m) + 1))
    A = (rng.integers(-3, 4, size=(n, k)) @ rng.integers(-3, 4, size=(k, m))).astype(np.int64)
    p = PRIMES[0]
    pivots, E = row_echelon_mod_p(A, p)
    assert len(pivots) == rank_mod_p((A % p).tolist(), p)
    # echelon rows actually lie in the row space mod p and have the pivots
    for i, pc in enumerate(pivots):
        assert E[i, pc] != 0
        assert not E[i, :pc].any()


def test_matmul_mod_exact():
    rng = np.random.default_rng(3)
    p = PRIMES[0]
    A = rng.integers(0, p, size=(40, 700)).astype(np.int64)
    B = rng.integers(0, p, size=(700, 30)).astype(np.int64)
    got = matmul_mod(A, B, p).astype(np.int64)
    want = np.zeros((40, 30), dtype=np.int64)
    for i in range(40):
        for j in range(30):
            want[i, j] = sum(int(a) * int(b) for a, b in zip(A[i], B[:, j])) % p
    assert np.array_equal(got, want)


def test_kernel_mod_p_annihilates():
    rng = np.random.default_rng(4)
    p = PRIMES[1]
    A = (rng.integers(-2, 3, size=(25, 5)) @ rng.integers(-2, 3, size=(5, 30))).astype(np.int64)
    pivots, free, K = kernel_mod_p(A, p)
    assert len(pivots) + len(free) == 30
    assert not (matmul_mod(A % p, K, p)).any()


def test_rational_reconstruct():
    p = 4194301
    bound = 1448
    a = (1 * pow(3, -1, p)) % p
    assert rational_reconstruct(a, p, bound) is not None
    assert rational_reconstruct(a, p, bound).numerator == 1
    assert rational_reconstruct(a, p, bound).denominator == 3
    # -4/3
    a = (-4 * pow(3, -1, p)) % p
    f = rational_reconstruct(a, p, bound)
    assert (f.numerator, f.denominator) == (-4, 3)


def test_exact_kernel_structured():
    # circulant-like structured matrix with a clean kernel
    n = 60
    A = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        A[i, (i + 1) % n] = 1
        A[i, (i - 1) % n] = 1
    B = A - 2 * np.eye(n, dtype=np.int64)  # eigenvalue 2 of the cycle
    K = exact_kernel(B)
    assert K.shape[1] == 1  # 2 = 2cos(0) simple
    assert not exact_matmul(B, K).any()


def test_exact_kernel_zero_matrix():
    Z = np.zeros((4, 4), dtype=np.int64)
    K = exact_kernel(Z)
    assert K.shape == (4, 4)


def test_exact_kernel_full_rank():
    K = exact_kernel(np.eye(5, dtype=np.int64))
    assert K.shape == (5, 0)


def test_certified_spectrum_k4():
    A = np.ones((4, 4), dtype=np.int64) - np.eye(4, dtype=np.int64)
    spec, kernels = certified_spectrum(A)
    assert spec.eigenvalues == ((-1, 3), (3, 1))
    assert spec.smallest == -1 and spec.largest == 3
    assert spec.multiplicity(-1) == 3 and spec.multiplicity(7) == 0


def test_certified_spectrum_petersen():
    # Petersen graph: spectrum 3^1, 1^5, (-2)^4
    edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
             (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
             (0, 5), (1, 6), (2, 7), (3, 8), (4, 9)]
    A = np.zeros((10, 10), dtype=np.int64)
    for a, b in edges:
        A[a, b] = A[b, a] = 1
    spec, _ = certified_spectrum(A)
    assert spec.eigenvalues == ((-2, 4), (1, 5), (3, 1))


def test_certified_spectrum_rejects_non_integer():
    # path on 3 vertices has eigenvalues 0, +-sqrt(2)
    A = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=np.int64)
    with pytest.raises(CertificationError):
        certified_spectrum(A)


def test_certified_spectrum_requires_symmetry():
    A = np.array([[0, 1], [0, 0]], dtype=np.int64)
    with pytest.raises(ValueError):
        certified_spectrum(A)


def test_exact_matmul_paths():
    rng = np.random.default_rng(8)
    A = rng.integers(-5, 6, size=(10, 12)).astype(np.int64)
    B = rng.integers(-5, 6, size=(12, 7)).astype(np.int64)
    want = A.astype(object) @ B.astype(object)
    assert np.array_equal(exact_matmul(A, B), want.astype(np.int64))
    # large-entry path
    A2 = A * (10 ** 12)
    got = exact_matmul(A2, B)
    assert np.array_equal(np.asarray(got, dtype=object), (A2.astype(object) @ B.astype(object)))
