"""Finite classical polar spaces with canonical subspace enumeration.

Six families are supported, identified by the number q**e + 1 of generators
through a next-to-maximal subspace:

    kind             form                       ambient dim   e
    hyperbolic       quadratic, Witt index n    2n            0
    hermitian-odd    sesquilinear (q square)    2n            1/2
    symplectic       alternating                2n            1
    parabolic        quadratic                  2n + 1        1
    hermitian-even   sesquilinear (q square)    2n + 1        3/2
    elliptic         quadratic                  2n + 2        2

Canonical form shapes: the symplectic and hermitian Gram matrices pair the
coordinates hyperbolically (consecutive pairs, resp. antidiagonal), and the
quadratic kinds use x1*x2 + x3*x4 + ... plus a one- or two-dimensional
anisotropic tail.  A totally singular subspace is represented by its reduced
row echelon basis; ids are assigned by sorting the flattened matrices, so
they are reproducible across runs.

Every subspace carries two bitmasks over the ambient projective points: the
points it contains and the points of its tangent space.  Skewness and
containment questions reduce to mask arithmetic, which is what the flag and
graph layers build on.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import kernels
from .counting import Params, count_subspaces
from .gf import GF, field_of_order
from .linalg import (
    as_mat,
    conj_mat,
    matmul,
    meet_rows,
    normalized_coefficients,
    projective_points_of,
    rank,
    right_kernel,
    rref,
    span_rows,
)

KIND_TYPE = {
    "hyperbolic": Fraction(0),
    "hermitian-odd": Fraction(1, 2),
    "symplectic": Fraction(1),
    "parabolic": Fraction(1),
    "hermitian-even": Fraction(3, 2),
    "elliptic": Fraction(2),
}

_ORTHOGONAL = ("hyperbolic", "parabolic", "elliptic")
_HERMITIAN = ("hermitian-odd", "hermitian-even")


class Subspace:
    """A totally singular subspace: canonical RREF basis plus a stable id."""

    __slots__ = ("r", "id", "mat", "key")

    def __init__(self, r: int, sid: int, mat: np.ndarray):
        self.r = r
        self.id = sid
        self.mat = mat
        self.key = mat.astype(np.uint8).tobytes()

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.r == other.r and self.key == other.key

    def __hash__(self):
        return hash((self.r, self.key))

    def __repr__(self):
        return f"Subspace(r={self.r}, id={self.id})"


@dataclass(frozen=True)
class SectionReport:
    """Classification of a hyperplane section of the point set."""

    tag: str
    points: int
    radical_dim: int

    @property
    def degenerate(self) -> bool:
        return self.radical_dim > 0


def _ambient_dim(kind: str, n: int) -> int:
    if kind in ("hyperbolic", "hermitian-odd", "symplectic"):
        return 2 * n
    if kind in ("parabolic", "hermitian-even"):
        return 2 * n + 1
    return 2 * n + 2


class PolarSpace:
    """A finite classical polar space with all its totally singular subspaces."""

    def __init__(self, kind: str, n: int, q: int):
        if kind not in KIND_TYPE:
            raise ValueError(f"unknown kind {kind!r}; expected one of {sorted(KIND_TYPE)}")
        if n < 1:
            raise ValueError(f"rank must be >= 1, got {n}")
        self.kind = kind
        self.n = n
        self.q = q
        self.e = KIND_TYPE[kind]
        self.params = Params(n, self.e, q)  # validates q, squareness for hermitian
        self.d = _ambient_dim(kind, n)
        self.field = field_of_order(q)
        self.hermitian = kind in _HERMITIAN
        self.orthogonal = kind in _ORTHOGONAL
        if self.hermitian and self.field.CONJ is None:
            raise ValueError(f"hermitian space needs a square q, got {q}")
        self.gram, self.quad = self._build_form()

        self._subspaces: dict = {}
        self._masks: dict = {}
        self._perpmasks: dict = {}
        self._by_key: dict = {}
        self._opposition: dict = {}
        self._containment: dict = {}

        F = self.field
        amb = normalized_coefficients(F, self.d)
        order = sorted(range(amb.shape[0]), key=lambda i: tuple(amb[i]))
        self.ambient_points = amb[order]
        self._ambient_index = {p.astype(np.uint8).tobytes(): i
                               for i, p in enumerate(self.ambient_points)}
        singular = self._singular_rows(self.ambient_points)
        self.polar_point_mask = self._bools_to_mask(singular)

        pts = [Subspace(1, i, self.ambient_points[j:j + 1].copy())
               for i, j in enumerate(np.nonzero(singular)[0])]
        expected = count_subspaces(1, self.params).value
        if len(pts) != expected:
            raise AssertionError(
                f"{self}: found {len(pts)} singular points, formula gives {expected}")
        self._subspaces[1] = tuple(pts)
        self._by_key[1] = {s.key: s for s in pts}

    # -- form machinery -----------------------------------------------------

    def _build_form(self):
        F, d, n = self.field, self.d, self.n
        gram = np.zeros((d, d), dtype=np.int16)
        quad = None
        if self.kind == "symplectic":
            for i in range(n):
                gram[2 * i, 2 * i + 1] = 1
                gram[2 * i + 1, 2 * i] = F.neg(1)
        elif self.hermitian:
            for i in range(d):
                gram[i, d - 1 - i] = 1
        else:
            quad = np.zeros((d, d), dtype=np.int16)
            for i in range(n):
                quad[2 * i, 2 * i + 1] = 1
            if self.kind == "parabolic":
                quad[d - 1, d - 1] = 1
            elif self.kind == "elliptic":
                quad[d - 2, d - 2] = 1
                quad[d - 2, d - 1] = 1
                quad[d - 1, d - 1] = self._irreducible_tail_coefficient()
            gram = F.ADD[quad, quad.T]
        return gram, quad

    def _irreducible_tail_coefficient(self) -> int:
        # smallest c (by element index) with t^2 + t + c having no root
        F = self.field
        for c in range(1, F.q):
            if all(F.add(F.add(F.mul(t, t), t), c) != 0 for t in range(F.q)):
                return c
        raise AssertionError("no irreducible quadratic tail found")

    def pairing(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Matrix of form values between the rows of A and the rows of B."""
        F = self.field
        right = conj_mat(F, B) if self.hermitian else B
        return matmul(F, matmul(F, as_mat(A), self.gram), np.ascontiguousarray(as_mat(right).T))

    def quad_values(self, P: np.ndarray) -> np.ndarray:
        """Quadratic form value of each row (orthogonal kinds only)."""
        F = self.field
        P = as_mat(P)
        acc = np.zeros(P.shape[0], dtype=np.int16)
        for i, j in zip(*np.nonzero(self.quad)):
            term = F.MUL[F.MUL[P[:, i], P[:, j]], int(self.quad[i, j])]
            acc = F.ADD[acc, term]
        return acc

    def _singular_rows(self, P: np.ndarray) -> np.ndarray:
        """Boolean: which rows span totally singular 1-spaces."""
        F = self.field
        P = as_mat(P)
        if self.kind == "symplectic":
            return np.ones(P.shape[0], dtype=bool)
        if self.orthogonal:
            return self.quad_values(P) == 0
        tmp = matmul(F, P, self.gram)
        acc = np.zeros(P.shape[0], dtype=np.int16)
        for j in range(self.d):
            acc = F.ADD[acc, F.MUL[tmp[:, j], F.CONJ[P[:, j]]]]
        return acc == 0

    def is_totally_singular(self, mat: np.ndarray) -> bool:
        R = rref(self.field, as_mat(mat))[0]
        if R.shape[0] == 0:
            return True
        if self.pairing(R, R).any():
            return False
        if self.orthogonal and self.quad_values(R).any():
            return False
        return True

    # -- perp, span, meet ----------------------------------------------------

    def perp(self, mat: np.ndarray) -> np.ndarray:
        """Tangent space: everything pairing to zero with the given rows.

        Computed against the polar form; rank is d - rank(rows * gram),
        which is d - rank(rows) whenever the polar form is non-degenerate.
        """
        F = self.field
        A = matmul(F, as_mat(mat), self.gram)
        K = right_kernel(F, A)
        return rref(F, conj_mat(F, K))[0]

    def span(self, A, B) -> np.ndarray:
        return span_rows(self.field, self._mat(A), self._mat(B))

    def meet(self, A, B) -> np.ndarray:
        return meet_rows(self.field, self._mat(A), self._mat(B))

    def contains(self, A, B) -> bool:
        ar = rref(self.field, self._mat(A))[0]
        return self.span(ar, B).shape[0] == ar.shape[0]

    def skew(self, A, B) -> bool:
        return self.meet(A, B).shape[0] == 0

    @staticmethod
    def _mat(x) -> np.ndarray:
        return x.mat if isinstance(x, Subspace) else as_mat(x)

    # -- masks ----------------------------------------------------------------

    def _bools_to_mask(self, bools: np.ndarray) -> int:
        packed = np.packbits(bools.astype(np.uint8), bitorder="little")
        return int.from_bytes(packed.tobytes(), "little")

    def point_mask(self, mat: np.ndarray) -> int:
        """Bitmask of the ambient points lying inside the row space."""
        F = self.field
        K = right_kernel(F, self._mat(mat))
        if K.shape[0] == 0:
            return (1 << self.ambient_points.shape[0]) - 1
        Z = matmul(F, K, np.ascontiguousarray(self.ambient_points.T))
        return self._bools_to_mask(~Z.any(axis=0))

    def perp_mask(self, mat: np.ndarray) -> int:
        """Bitmask of the ambient points lying inside the tangent space."""
        F = self.field
        A = matmul(F, self._mat(mat), self.gram)
        pts = conj_mat(F, self.ambient_points) if self.hermitian else self.ambient_points
        Z = matmul(F, A, np.ascontiguousarray(pts.T))
        return self._bools_to_mask(~Z.any(axis=0))

    def masks(self, r: int) -> list:
        if r not in self._masks:
            self._masks[r] = [self.point_mask(s.mat) for s in self.subspaces(r)]
        return self._masks[r]

    def perp_masks(self, r: int) -> list:
        if r not in self._perpmasks:
            self._perpmasks[r] = [self.perp_mask(s.mat) for s in self.subspaces(r)]
        return self._perpmasks[r]

    # -- enumeration -----------------------------------------------------------

    def subspaces(self, r: int) -> tuple:
        """All totally singular r-spaces in canonical id order."""
        if not (1 <= r <= self.n):
            raise ValueError(f"dimension {r} out of range 1..{self.n}")
        if r not in self._subspaces:
            self._enumerate(r)
        return self._subspaces[r]

    def _enumerate(self, r: int):
        F = self.field
        prev = self.subspaces(r - 1)
        polar = self.polar_point_mask
        seen = {}
        for i, S in enumerate(prev):
            cand = self.perp_masks(r - 1)[i] & polar & ~self.masks(r - 1)[i]
            while cand:
                bit = cand & -cand
                cand ^= bit
                vec = self.ambient_points[bit.bit_length() - 1]
                T = rref(F, np.vstack([S.mat, vec[None, :]]))[0]
                key = T.astype(np.uint8).tobytes()
                if key not in seen:
                    seen[key] = T
        subs = tuple(Subspace(r, i, seen[k]) for i, k in enumerate(sorted(seen)))
        expected = count_subspaces(r, self.params).value
        if len(subs) != expected:
            raise AssertionError(
                f"{self}: enumerated {len(subs)} {r}-spaces, formula gives {expected}")
        self._subspaces[r] = subs
        self._by_key[r] = {s.key: s for s in subs}

    def lookup(self, mat: np.ndarray) -> Subspace:
        """The enumerated subspace with the given row space."""
        R = rref(self.field, self._mat(mat))[0]
        r = R.shape[0]
        sub = self._by_key.get(r, {}).get(R.astype(np.uint8).tobytes()) \
            if r in self._subspaces else None
        if sub is None and 1 <= r <= self.n:
            self.subspaces(r)
            sub = self._by_key[r].get(R.astype(np.uint8).tobytes())
        if sub is None:
            raise KeyError("row space is not an enumerated totally singular subspace")
        return sub

    @property
    def points(self) -> tuple:
        return self.subspaces(1)

    @property
    def generators(self) -> tuple:
        return self.subspaces(self.n)

    # -- relation matrices ------------------------------------------------------

    def opposition_matrix(self, r: int) -> np.ndarray:
        """Boolean matrix over r-spaces: (i, j) true iff i and j are opposite,
        i.e. the tangent space of i misses j entirely."""
        if r not in self._opposition:
            nbits = self.ambient_points.shape[0]
            self._opposition[r] = kernels.opposition_matrix(
                self.perp_masks(r), self.masks(r), nbits)
        return self._opposition[r]

    def containment_matrix(self, r_small: int, r_big: int) -> np.ndarray:
        """Boolean matrix: (i, j) true iff the i-th r_small-space lies in the
        j-th r_big-space."""
        key = (r_small, r_big)
        if key not in self._containment:
            nbits = self.ambient_points.shape[0]
            self._containment[key] = kernels.subset_matrix(
                self.masks(r_small), self.masks(r_big), nbits)
        return self._containment[key]

    # -- quotient and sections ----------------------------------------------------

    def quotient(self, M: Subspace) -> "QuotientMap":
        return QuotientMap(self, M)

    def hyperplane_section(self, H: np.ndarray) -> SectionReport:
        """Count and classify the polar-space points inside an ambient hyperplane."""
        F = self.field
        H = rref(F, self._mat(H))[0]
        if H.shape[0] != self.d - 1:
            raise ValueError(f"expected a hyperplane (rank {self.d - 1}), got rank {H.shape[0]}")
        npoints = int(bin(self.point_mask(H) & self.polar_point_mask).count("1"))

        gramH = self.pairing(H, H)
        rad_coords = right_kernel(F, np.ascontiguousarray(gramH.T))
        if self.hermitian:
            rad_coords = conj_mat(F, rad_coords)
        rad = matmul(F, rad_coords, H)
        if self.orthogonal:
            # radical of the quadratic form: radical of the polar form that is
            # also singular (closed under addition in every characteristic)
            if rad.shape[0]:
                sing = self._singular_rows(projective_points_of(F, rad))
                keep = projective_points_of(F, rad)[sing]
                rad = rref(F, keep)[0] if keep.shape[0] else keep.reshape(0, self.d)
        rdim = rad.shape[0]

        candidates = self._section_candidates()
        matches = [tag for tag, cnt, degen in candidates
                   if cnt == npoints and degen == (rdim > 0)]
        if len(matches) != 1:
            raise AssertionError(
                f"section classification not unique: {npoints} points, radical {rdim}, "
                f"candidates {candidates}")
        if rdim > 1:
            raise AssertionError(f"section radical has dimension {rdim}, expected <= 1")
        return SectionReport(matches[0], npoints, rdim)

    def _section_candidates(self):
        n, q = self.n, self.q

        def pts(nn, ee):
            if nn < 1:
                return 0
            return count_subspaces(1, Params(nn, ee, q)).value

        cone = ("cone-" + self.kind, 1 + q * pts(n - 1, self.e), True)
        if self.kind == "symplectic":
            return [cone]
        if self.kind == "parabolic":
            return [("hyperbolic", pts(n, Fraction(0)), False),
                    ("elliptic", pts(n - 1, Fraction(2)), False), cone]
        if self.kind == "hyperbolic":
            return [("parabolic", pts(n - 1, Fraction(1)), False), cone]
        if self.kind == "elliptic":
            return [("parabolic", pts(n, Fraction(1)), False), cone]
        if self.kind == "hermitian-odd":
            return [("hermitian-even", pts(n - 1, Fraction(3, 2)), False), cone]
        return [("hermitian-odd", pts(n, Fraction(1, 2)), False), cone]

    def hyperplanes(self):
        """All ambient hyperplanes, as RREF matrices, in dual-point order."""
        F = self.field
        for c in self.ambient_points:
            yield right_kernel(F, c[None, :])

    # -- export ---------------------------------------------------------------

    def dump_subspaces_csv(self, r: int, path) -> None:
        """One row per r-space: id, rank, flattened RREF entries (element indices)."""
        subs = self.subspaces(r)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["id", "rank"] + [f"m{i}{j}" for i in range(r) for j in range(self.d)])
            for s in subs:
                w.writerow([s.id, s.r] + [int(x) for x in s.mat.reshape(-1)])

    def __repr__(self):
        return f"PolarSpace({self.kind}, n={self.n}, q={self.q})"


class QuotientMap:
    """The polar space of subspaces through a fixed totally singular M.

    Realized on a complement: pick M' with M' skew to the tangent space of M;
    the space W = perp(M) & perp(M') carries the restricted form, which is
    recoordinatized onto the canonical model of the same kind and rank n - m.
    ``down`` maps a subspace through M (inside its tangent space) to the
    quotient; ``up`` is the inverse.
    """

    def __init__(self, space: PolarSpace, M: Subspace):
        if not space.is_totally_singular(M.mat):
            raise ValueError("quotient base must be totally singular")
        m = M.r
        if not (1 <= m < space.n):
            raise ValueError(f"quotient base rank must be in 1..{space.n - 1}, got {m}")
        self.space = space
        self.M = M
        F = space.field

        opp = next((T for T in space.subspaces(m)
                    if rank(F, space.pairing(M.mat, T.mat)) == m), None)
        assert opp is not None, "no complement found for the quotient base"
        self.basis_W = space.perp(np.vstack([M.mat, opp.mat]))
        assert self.basis_W.shape[0] == space.d - 2 * m

        self.qspace = build_polar_space(space.kind, space.n - m, space.q)
        self._build_recoordinatization()

    # restricted-form helpers, all in W coordinates -----------------------------

    def _w_pairing(self, A, B):
        sp, F = self.space, self.space.field
        return sp.pairing(matmul(F, as_mat(A), self.basis_W),
                          matmul(F, as_mat(B), self.basis_W))

    def _w_quad(self, rows):
        sp, F = self.space, self.space.field
        return sp.quad_values(matmul(F, as_mat(rows), self.basis_W))

    def _w_singular(self, row) -> bool:
        sp = self.space
        if sp.kind == "symplectic":
            return True
        if sp.orthogonal:
            return int(self._w_quad(row)[0]) == 0
        return int(self._w_pairing(row, row)[0, 0]) == 0

    def _build_recoordinatization(self):
        sp, F = self.space, self.space.field
        w = self.basis_W.shape[0]
        n_pairs = sp.n - self.M.r
        residual = np.eye(w, dtype=np.int16)
        pairs = []
        for _ in range(n_pairs):
            v = self._first_singular(residual)
            u = self._partner(v, residual)
            pairs.append((v, u))
            pv = np.vstack([v, u])
            cond = self._w_pairing(pv, residual)
            K = right_kernel(F, cond)
            if sp.hermitian:
                K = conj_mat(F, K)
            residual = matmul(F, K, residual)
        tail, scale = self._match_tail(residual)
        if scale != 1:
            pairs = [(v, F.MUL[u, scale]) for v, u in pairs]
        rows = []
        if sp.hermitian:
            # canonical hermitian Gram is antidiagonal: v_i at position i pairs
            # with u_i at position d-1-i, tail (if any) in the middle
            rows.extend(v.reshape(-1) for v, _ in pairs)
            rows.extend(t.reshape(-1) for t in tail)
            rows.extend(u.reshape(-1) for _, u in reversed(pairs))
        else:
            # pairs occupy consecutive coordinates, tail at the end
            for v, u in pairs:
                rows.append(v.reshape(-1))
                rows.append(u.reshape(-1))
            rows.extend(t.reshape(-1) for t in tail)
        V = np.array(rows, dtype=np.int16)
        self.new_basis = matmul(F, V, self.basis_W)
        self.scale = scale
        self._verify_recoordinatization()

    def _first_singular(self, residual) -> np.ndarray:
        F = self.space.field
        coeffs = normalized_coefficients(F, residual.shape[0])
        for c in coeffs:
            vec = matmul(F, c[None, :], residual)
            if self._w_singular(vec):
                return vec
        raise AssertionError("no singular vector in residual space")

    def _partner(self, v, residual) -> np.ndarray:
        """A second basis vector pairing to 1 with v, made singular."""
        sp, F = self.space, self.space.field
        vals = self._w_pairing(v, residual)[0]
        idx = next(i for i in range(residual.shape[0]) if vals[i])
        u = residual[idx:idx + 1].copy()
        c = int(self._w_pairing(v, u)[0, 0])
        factor = F.conj(F.inv(c)) if sp.hermitian else F.inv(c)
        u = F.MUL[u, factor]
        if sp.orthogonal:
            t = F.neg(int(self._w_quad(u)[0]))
            u = F.ADD[u, F.MUL[v, t]]
        elif sp.hermitian:
            h = int(self._w_pairing(u, u)[0, 0])
            t = next(t for t in range(F.q) if F.add(t, F.conj(t)) == F.neg(h))
            u = F.ADD[u, F.MUL[v, t]]
        assert int(self._w_pairing(v, u)[0, 0]) == 1
        return u

    def _match_tail(self, residual):
        """Recoordinatize the anisotropic remainder onto the canonical tail.

        Returns (tail rows in W coordinates, similarity scale).  The scale is
        1 except for quadratic tails whose leading value is a non-square.
        """
        sp, F = self.space, self.space.field
        t_dim = residual.shape[0]
        if t_dim == 0:
            return [], 1
        if sp.hermitian:
            t = residual[0:1]
            c = int(self._w_pairing(t, t)[0, 0])
            s = next(s for s in range(1, F.q) if F.mul(s, F.conj(s)) == c)
            return [F.MUL[t, F.inv(s)]], 1
        if t_dim == 1:  # parabolic tail x^2
            t = residual[0:1]
            c = int(self._w_quad(t)[0])
            if F.is_square(c):
                return [F.MUL[t, F.inv(F.sqrt(c))]], 1
            return [t], c
        # elliptic tail x^2 + xy + c0*y^2
        c0 = int(self.qspace.quad[self.qspace.d - 1, self.qspace.d - 1])
        vecs = normalized_coefficients(F, 2)
        for a in vecs:
            for sa in range(1, F.q):
                w1 = matmul(F, F.MUL[a[None, :], sa], residual)
                mu = int(self._w_quad(w1)[0])
                for b in vecs:
                    for sb in range(1, F.q):
                        w2 = matmul(F, F.MUL[b[None, :], sb], residual)
                        if int(self._w_quad(w2)[0]) == F.mul(mu, c0) and \
                           int(self._w_pairing(w1, w2)[0, 0]) == mu:
                            return [w1, w2], mu
        raise AssertionError("anisotropic tail could not be matched")

    def _verify_recoordinatization(self):
        sp, F, qs = self.space, self.space.field, self.qspace
        N = self.new_basis
        got = sp.pairing(N, N)
        want = F.MUL[qs.gram, self.scale]
        assert np.array_equal(got, want), "recoordinatized polar form mismatch"
        if sp.orthogonal:
            qv = sp.quad_values(N)
            for i in range(N.shape[0]):
                assert int(qv[i]) == F.mul(int(qs.quad[i, i]), self.scale)

    # -- the actual correspondence ---------------------------------------------

    def down(self, T) -> Subspace:
        """Image of a subspace through M (inside the tangent space of M)."""
        sp, F = self.space, self.space.field
        Tm = sp._mat(T)
        if not sp.contains(Tm, self.M.mat):
            raise ValueError("subspace does not pass through the quotient base")
        inter = meet_rows(F, Tm, self.new_basis)
        coords = _solve_left(F, self.new_basis, inter)
        return self.qspace.lookup(rref(F, coords)[0])

    def up(self, U) -> Subspace:
        """Preimage: the subspace of the big space spanned by M and the lift."""
        sp, F = self.space, self.space.field
        Um = self.qspace._mat(U)
        amb = matmul(F, Um, self.new_basis)
        return sp.lookup(span_rows(F, amb, self.M.mat))


def _solve_left(F: GF, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """X with X A = B; requires rows of B to lie in rowspace(A)."""
    m = A.shape[0]
    aug = np.hstack([np.ascontiguousarray(A.T), np.ascontiguousarray(B.T)])
    R, piv = rref(F, aug)
    X = np.zeros((B.shape[0], m), dtype=np.int16)
    for i, pc in enumerate(piv):
        if pc >= m:
            raise ValueError("rows not in the row space")
        X[:, pc] = R[i, m:]
    return X


@lru_cache(maxsize=None)
def build_polar_space(kind: str, n: int, q: int) -> PolarSpace:
    return PolarSpace(kind, n, q)
