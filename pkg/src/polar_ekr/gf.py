"""Exact arithmetic in GF(p^k) for q = p^k <= 256, via full lookup tables.

Elements are integers in [0, q).  The encoding is positional in the power
basis of the defining polynomial: the element with polynomial coordinates
(c_0, c_1, ..., c_{k-1}) has index sum(c_i * p^i).  In particular 0 and 1
are the additive and multiplicative identities, and indices sort elements
canonically.

Defining polynomials are the Conway polynomials, hard-coded below, so that
element indices are bit-exact across runs and platforms.
"""

from __future__ import annotations

import numpy as np

# Smallest primitive root mod p for every prime p < 256; the degree-1 Conway
# polynomial is x - g.
_PRIMITIVE_ROOT = {
    2: 1, 3: 2, 5: 2, 7: 3, 11: 2, 13: 2, 17: 3, 19: 2, 23: 5, 29: 2,
    31: 3, 37: 2, 41: 6, 43: 3, 47: 5, 53: 2, 59: 2, 61: 2, 67: 2, 71: 7,
    73: 5, 79: 3, 83: 2, 89: 3, 97: 5, 101: 2, 103: 5, 107: 2, 109: 6,
    113: 3, 127: 3, 131: 2, 137: 3, 139: 2, 149: 2, 151: 6, 157: 5,
    163: 2, 167: 5, 173: 2, 179: 2, 181: 2, 191: 19, 193: 5, 197: 2,
    199: 3, 211: 2, 223: 3, 227: 2, 229: 6, 233: 3, 239: 7, 241: 7, 251: 6,
}

# Conway polynomials for k >= 2, p^k <= 256, as ascending coefficient tuples
# (c_0, ..., c_{k-1}, 1).
_CONWAY = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (7, 2): (3, 6, 1),
    (11, 2): (2, 7, 1),
    (13, 2): (2, 12, 1),
}


def _poly_mul_mod(a, b, modulus, p):
    """Multiply coefficient tuples modulo the defining polynomial over GF(p)."""
    k = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # reduce: x^k = -(c_0 + c_1 x + ... + c_{k-1} x^{k-1})
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            prod[d] = 0
            for j in range(k):
                prod[d - k + j] = (prod[d - k + j] - c * modulus[j]) % p
    return tuple(prod[:k])


class GF:
    """A small Galois field with full add/mul/inv/conj lookup tables."""

    def __init__(self, p: int, k: int):
        if p < 2 or any(p % f == 0 for f in range(2, p)):
            raise ValueError(f"p = {p} is not prime")
        if k < 1:
            raise ValueError(f"extension degree must be >= 1, got {k}")
        q = p ** k
        if q > 256:
            raise ValueError(f"q = {q} exceeds the supported table range (<= 256)")
        self.p = p
        self.k = k
        self.q = q
        if k == 1:
            g = _PRIMITIVE_ROOT[p]
            self.modulus = ((-g) % p, 1)
        else:
            self.modulus = _CONWAY[(p, k)]

        idx_to_poly = [tuple((i // p ** j) % p for j in range(k)) for i in range(q)]
        self._poly = idx_to_poly
        poly_to_idx = {c: i for i, c in enumerate(idx_to_poly)}

        add = np.zeros((q, q), dtype=np.int16)
        mul = np.zeros((q, q), dtype=np.int16)
        for a in range(q):
            pa = idx_to_poly[a]
            for b in range(a, q):
                pb = idx_to_poly[b]
                s = poly_to_idx[tuple((x + y) % p for x, y in zip(pa, pb))]
                m = poly_to_idx[_poly_mul_mod(pa, pb, self.modulus, p)]
                add[a, b] = add[b, a] = s
                mul[a, b] = mul[b, a] = m
        self.ADD = add
        self.MUL = mul

        neg = np.zeros(q, dtype=np.int16)
        for a in range(q):
            pa = idx_to_poly[a]
            neg[a] = poly_to_idx[tuple((-x) % p for x in pa)]
        self.NEG = neg

        inv = np.zeros(q, dtype=np.int16)
        for a in range(1, q):
            for b in range(1, q):
                if mul[a, b] == 1:
                    inv[a] = b
                    break
            else:
                raise AssertionError(f"no inverse for element {a}: modulus not irreducible?")
        self.INV = inv

        # Frobenius x -> x^p, iterated k/2 times for the conjugation of
        # sesquilinear forms (defined only for even k).
        frob = np.zeros(q, dtype=np.int16)
        for a in range(q):
            frob[a] = self.power(a, p)
        self.FROB = frob
        if k % 2 == 0:
            conj = np.arange(q, dtype=np.int16)
            for _ in range(k // 2):
                conj = frob[conj]
            self.CONJ = conj
        else:
            self.CONJ = None

    # -- scalar operations ------------------------------------------------

    def add(self, x: int, y: int) -> int:
        return int(self.ADD[x, y])

    def sub(self, x: int, y: int) -> int:
        return int(self.ADD[x, self.NEG[y]])

    def mul(self, x: int, y: int) -> int:
        return int(self.MUL[x, y])

    def neg(self, x: int) -> int:
        return int(self.NEG[x])

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inversion of zero")
        return int(self.INV[x])

    def conj(self, x: int) -> int:
        if self.CONJ is None:
            raise ValueError(f"conjugation needs an even extension degree, GF has k={self.k}")
        return int(self.CONJ[x])

    def power(self, x: int, m: int) -> int:
        r = 1
        b = x
        while m:
            if m & 1:
                r = int(self.MUL[r, b])
            b = int(self.MUL[b, b])
            m >>= 1
        return r

    def is_square(self, x: int) -> bool:
        if x == 0 or self.p == 2:
            return True
        return self.power(x, (self.q - 1) // 2) == 1

    def sqrt(self, x: int) -> int:
        for y in range(self.q):
            if self.mul(y, y) == x:
                return y
        raise ValueError(f"{x} is not a square in GF({self.q})")

    def elements(self):
        return range(self.q)

    def poly(self, x: int) -> tuple:
        """Coordinates of x in the power basis, ascending degree."""
        return self._poly[x]

    def __repr__(self):
        return f"GF({self.q})" if self.k == 1 else f"GF({self.p}^{self.k})"


_CACHE: dict = {}


def make_field(p: int, k: int) -> GF:
    """Construct (and cache) GF(p^k)."""
    key = (p, k)
    if key not in _CACHE:
        _CACHE[key] = GF(p, k)
    return _CACHE[key]


def field_of_order(q: int) -> GF:
    """GF(q) for a prime power q <= 256."""
    p = q
    for f in range(2, q):
        if f * f > q:
            break
        if q % f == 0:
            p = f
            break
    k = 0
    m = q
    while m % p == 0 and m > 1:
        m //= p
        k += 1
    if m != 1:
        raise ValueError(f"{q} is not a prime power")
    return make_field(p, k)
