"""Exact counting formulas for finite classical polar spaces.

All values are arbitrary-precision integers.  A polar space is described by
its rank ``n``, its type parameter ``e`` (the number of generators through a
fixed (n-1)-space is ``q**e + 1``) and the field size ``q``.  The type is
one of 0, 1/2, 1, 3/2, 2 and is carried as an exact :class:`~fractions.Fraction`
so that half-integer exponents are never silently rounded: every power of q
is evaluated through :func:`qpow`, which demands either an integer exponent
or a square q.

Most quantities are polynomials in q with leading coefficient 1; their
degree is tracked alongside the value because several identities in the
package are statements about degrees.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Optional, Sequence, Union

HALF = Fraction(1, 2)

VALID_TYPES = (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2))


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    f = 3
    while f * f <= m:
        if m % f == 0:
            return False
        f += 2
    return True


def is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    p = q
    for f in range(2, isqrt(q) + 1):
        if q % f == 0:
            p = f
            break
    if not _is_prime(p):
        return False
    while q % p == 0:
        q //= p
    return q == 1


@dataclass(frozen=True)
class Params:
    """Rank, type and field size of a polar space."""

    n: int
    e: Fraction
    q: int

    def __post_init__(self):
        object.__setattr__(self, "e", Fraction(self.e))
        if self.n < 1:
            raise ValueError(f"rank must be >= 1, got {self.n}")
        if self.e not in VALID_TYPES:
            raise ValueError(f"type parameter must be one of {VALID_TYPES}, got {self.e}")
        if not is_prime_power(self.q):
            raise ValueError(f"q must be a prime power, got {self.q}")
        if self.e.denominator == 2 and isqrt(self.q) ** 2 != self.q:
            raise ValueError(f"half-integer type {self.e} requires a square q, got {self.q}")

    @property
    def valid_regime(self) -> bool:
        """True when e >= 1 or n is even (where the ratio bound is available)."""
        return self.e >= 1 or self.n % 2 == 0


@dataclass(frozen=True)
class ExactCount:
    """An exact count together with its q-degree, when one is defined.

    ``qdegree`` is the degree of the underlying polynomial in q; for
    hermitian types it can be a half-integer, so it is kept as a Fraction.
    """

    value: int
    qdegree: Optional[Fraction] = None

    def __post_init__(self):
        if self.value < 0:
            raise ValueError(f"counts are non-negative, got {self.value}")
        if self.qdegree is not None:
            object.__setattr__(self, "qdegree", Fraction(self.qdegree))

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def __eq__(self, other) -> bool:
        if isinstance(other, ExactCount):
            return self.value == other.value
        return self.value == other

    def __hash__(self):
        return hash(self.value)


def qpow(q: int, exp: Union[int, Fraction]) -> int:
    """q**exp with exact integrality checks.

    Half-integer exponents are allowed only when q is a square (the result
    is then an integer power of sqrt(q)).  Anything else is an error: a
    non-integral exponent signals an invalid parameter combination.
    """
    exp = Fraction(exp)
    if exp < 0:
        raise ValueError(f"negative exponent {exp}")
    if exp.denominator == 1:
        return q ** int(exp)
    if exp.denominator == 2:
        r = isqrt(q)
        if r * r == q:
            return r ** int(2 * exp)
    raise ValueError(f"exponent {exp} is not realizable over GF({q})")


def gaussian_binomial(s: int, m: int, q: int) -> ExactCount:
    """Number of m-dimensional subspaces of an s-dimensional space over GF(q).

    Out-of-range (m < 0 or m > s) gives 0, matching the empty count.
    """
    if m < 0 or m > s:
        return ExactCount(0, None)
    num = 1
    den = 1
    for i in range(1, m + 1):
        num *= q ** (s - m + i) - 1
        den *= q ** i - 1
    val, rem = divmod(num, den)
    assert rem == 0
    return ExactCount(val, Fraction(m * (s - m)))


def count_full_flags(s: int, q: int) -> ExactCount:
    """Number of complete nested chains of subspaces inside a fixed s-space.

    Equivalently the flags of type {1, ..., s} refining the s-space; the
    empty chain convention gives 1 for s = 0.
    """
    if s < 0:
        raise ValueError(f"s must be >= 0, got {s}")
    val = 1
    for i in range(1, s + 1):
        val *= gaussian_binomial(i, 1, q).value
    return ExactCount(val, Fraction(s * (s - 1), 2))


def count_extensions(m: int, s: int, pr: Params) -> ExactCount:
    """Number of totally singular s-spaces through a fixed m-space.

    Requires 0 <= m <= s <= n.  The degree is
    (s-m) * (2n - s - m + e - (s-m+1)/2).
    """
    n, e, q = pr.n, pr.e, pr.q
    if not (0 <= m <= s <= n):
        raise ValueError(f"need 0 <= m <= s <= n, got m={m} s={s} n={n}")
    val = gaussian_binomial(n - m, s - m, q).value
    for i in range(1, s - m + 1):
        val *= qpow(q, n - m + e - i) + 1
    deg = (s - m) * (2 * n - s - m + e - Fraction(s - m + 1, 2))
    return ExactCount(val, deg)


def count_subspaces(s: int, pr: Params) -> ExactCount:
    """Number of totally singular s-spaces of the polar space."""
    return count_extensions(0, s, pr)


def count_by_position(m: int, j: int, k: int, l: int, pr: Params) -> ExactCount:
    """Number of (j+k+l)-spaces meeting a fixed m-space U in a j-space and
    the tangent space of U in a (j+l)-space.

    The three indices split the subspace by its position relative to U: j
    dimensions inside U, l further dimensions inside the tangent space of U,
    and k dimensions outside it.
    """
    n, e, q = pr.n, pr.e, pr.q
    s = j + k + l
    if not (0 <= m <= n) or min(j, k, l) < 0 or s > n:
        raise ValueError(f"invalid indices m={m} j={j} k={k} l={l} for rank {n}")
    g1 = gaussian_binomial(m, j, q).value
    g2 = gaussian_binomial(m - j, k, q).value
    g3 = gaussian_binomial(n - m, l, q).value
    if g1 == 0 or g2 == 0 or g3 == 0:
        return ExactCount(0, None)
    exp = Fraction(l * (m - j)) + k * (2 * n - m - j - 2 * l + e - 1) - Fraction(k * (k - 1), 2)
    val = qpow(q, exp) * g1 * g2 * g3
    for i in range(l):
        val *= qpow(q, n + e - m - i - 1) + 1
    return ExactCount(val)


def _normalized_type(J: Iterable[int], n: int) -> tuple:
    Jt = tuple(sorted(set(int(t) for t in J)))
    if not Jt:
        raise ValueError("flag type must be nonempty")
    if Jt[0] < 1 or Jt[-1] > n:
        raise ValueError(f"flag type {Jt} out of range for rank {n}")
    return Jt


def count_chamber_extensions(J: Sequence[int], pr: Params) -> ExactCount:
    """Number of chambers refining a fixed flag of type J."""
    n, q = pr.n, pr.q
    Jt = _normalized_type(J, n)
    val = count_extensions(Jt[-1], n, pr).value
    deg = count_extensions(Jt[-1], n, pr).qdegree
    prev = 0
    for t in Jt:
        step = count_full_flags(t - prev, q)
        val *= step.value
        deg += step.qdegree
        prev = t
    tail = count_full_flags(n - Jt[-1], q)
    val *= tail.value
    deg += tail.qdegree
    return ExactCount(val, deg)


def count_flags(J: Sequence[int], pr: Params) -> ExactCount:
    """Number of flags of type J in the polar space."""
    Jt = _normalized_type(J, pr.n)
    val = 1
    deg = Fraction(0)
    prev = 0
    for t in Jt:
        step = count_extensions(prev, t, pr)
        val *= step.value
        deg += step.qdegree
        prev = t
    return ExactCount(val, deg)


def quotient_scale_exponent(J: Sequence[int], pr: Params) -> Fraction:
    """The exponent l(J): the q-degree of the chamber-extension count.

    q**l(J) is the scale factor relating chamber opposition to type-J
    opposition through the chamber/flag incidence matrix.  For hermitian
    types the exponent can be a half-integer; q is then a square, so the
    scale factor itself is still an integer.
    """
    deg = count_chamber_extensions(J, pr).qdegree
    qpow(pr.q, deg)  # realizability check
    return deg


def quotient_scale_factor(J: Sequence[int], pr: Params) -> int:
    """q**l(J), exactly."""
    return qpow(pr.q, quotient_scale_exponent(J, pr))


def graph_degree_flags(J: Sequence[int], pr: Params) -> ExactCount:
    """Valency of the opposition graph on flags of type J.

    Equals q**(n*(n+e-1) - l(J)); for chambers this is q**(n*(n+e-1)).
    """
    n, e, q = pr.n, pr.e, pr.q
    exp = n * (n + e - 1) - quotient_scale_exponent(J, pr)
    return ExactCount(qpow(q, exp), Fraction(exp))


def min_eigenvalue_sspace(s: int, pr: Params) -> int:
    """Smallest eigenvalue of the opposition graph on s-spaces (negative).

    Only available when e >= 1 or n is even; its magnitude is
    q**(s*(2n+e-1/2-3s/2) - n - e + 1).
    """
    n, e, q = pr.n, pr.e, pr.q
    if not (1 <= s <= n):
        raise ValueError(f"s out of range: {s}")
    if not pr.valid_regime:
        raise ValueError(f"smallest eigenvalue formula needs e >= 1 or n even, got {pr}")
    exp = s * (2 * n + e - HALF - Fraction(3 * s, 2)) - n - e + 1
    return -qpow(q, exp)


def min_eigenvalue_chambers(pr: Params) -> int:
    """Smallest eigenvalue of the chamber opposition graph (negative):
    -q**((n-1)*(n+e-1))."""
    n, e, q = pr.n, pr.e, pr.q
    if not pr.valid_regime:
        raise ValueError(f"smallest eigenvalue formula needs e >= 1 or n even, got {pr}")
    exp = (n - 1) * (n + e - 1)
    return -qpow(q, exp)


def min_eigenvalue_flags(J: Sequence[int], pr: Params) -> int:
    """Smallest eigenvalue of the opposition graph on flags of type J
    (negative), in the regime e >= 1 or n even.

    Derived from valency = -lambda * q**(n+e-1); agrees with the
    single-dimension and chamber formulas on their domains.
    """
    n, e, q = pr.n, pr.e, pr.q
    if not pr.valid_regime:
        raise ValueError(f"smallest eigenvalue formula needs e >= 1 or n even, got {pr}")
    exp = (n - 1) * (n + e - 1) - quotient_scale_exponent(J, pr)
    return -qpow(q, exp)


def ratio_bound(J: Sequence[int], pr: Params) -> ExactCount:
    """Upper bound |flags of type J| / (q**(n+e-1) + 1) for an EKR-set.

    The division is required to be exact; a remainder signals a parameter
    regime violation.
    """
    n, e, q = pr.n, pr.e, pr.q
    if not pr.valid_regime:
        raise ValueError(f"ratio bound needs e >= 1 or n even, got {pr}")
    total = count_flags(J, pr).value
    den = qpow(q, n + e - 1) + 1
    val, rem = divmod(total, den)
    if rem:
        raise ValueError(f"|flags({tuple(J)})| = {total} not divisible by {den} at {pr}")
    return ExactCount(val)


def ratio_bound_sspace_product(s: int, pr: Params) -> ExactCount:
    """Product form of the s-space ratio bound:
    gauss(n, s) * prod_{i=2..s} (q**(n+e-i) + 1).

    Must agree with ratio_bound({s}); its degree is the magnitude exponent
    of the smallest eigenvalue.
    """
    n, e, q = pr.n, pr.e, pr.q
    if not (1 <= s <= n):
        raise ValueError(f"s out of range: {s}")
    val = gaussian_binomial(n, s, q).value
    for i in range(2, s + 1):
        val *= qpow(q, n + e - i) + 1
    deg = s * (2 * n + e - HALF - Fraction(3 * s, 2)) - n - e + 1
    return ExactCount(val, deg)


def opposite_chambers_through_power(s: int, pr: Params) -> ExactCount:
    """Number of chambers through a fixed s-space S that are opposite to a
    fixed chamber C in general position (S skew to the s-part tangent space
    of C): a power of q with exponent s(s-1)/2 + (n-s)(n-s+e-1)."""
    n, e, q = pr.n, pr.e, pr.q
    if not (1 <= s <= n):
        raise ValueError(f"s out of range: {s}")
    exp = Fraction(s * (s - 1), 2) + (n - s) * (n - s + e - 1)
    return ExactCount(qpow(q, exp), exp)


def opposite_extensions_power(m: int, s: int, pr: Params) -> ExactCount:
    """Number of s-spaces through a fixed m-space M that are opposite to a
    fixed s-space S in general position (M skew to the tangent space of S):
    q to the degree of the extension count."""
    c = count_extensions(m, s, pr)
    return ExactCount(qpow(pr.q, c.qdegree), c.qdegree)


def degree_identity_holds(s: int, pr: Params) -> bool:
    """deg(-lambda_s) + deg(chambers through an s-space) == deg(-lambda_chambers).

    A self-test of the degree bookkeeping; true in the valid regime.
    """
    n, e = pr.n, pr.e
    lhs = (s * (2 * n + e - HALF - Fraction(3 * s, 2)) - n - e + 1) \
        + opposite_chambers_through_power(s, pr).qdegree
    rhs = (n - 1) * (n + e - 1)
    return lhs == rhs
