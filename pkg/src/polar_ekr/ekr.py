"""EKR sets of flags: example families, blow-ups, sharpness, weights.

An EKR set is a family of flags of one type with no two opposite; members
are stored as vertex positions in the canonical flag order of their type.
The classical families:

  a. all points of a fixed generator,
  b. all generators through a fixed point (more generally, all s-spaces
     through a fixed point),
  c. one parity class of the generators of a hyperbolic space of odd rank,
  d. one parity class of the generators of a hyperbolic hyperplane section
     of a parabolic space (each such generator is a generator of the
     ambient space); the even-characteristic symplectic case is reached
     through the standard identification with the parabolic space and is
     not coded separately.

Blow-ups move an EKR set of type J to the type-J2 flags (J2 containing J)
whose subflag belongs to the base set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from .antidesigns import graph_min_eigenvalue
from .counting import count_chamber_extensions, count_extensions, ratio_bound
from .exactrank import exact_matmul
from .flags import enumerate_flags, flag_type
from .graphs import OppositionGraph, build_graph
from .spaces import PolarSpace, build_polar_space


@dataclass(frozen=True)
class EKRSet:
    """A pairwise non-opposite family of flags of one type."""

    J: Tuple[int, ...]
    members: Tuple[int, ...]
    label: str

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class WeightReport:
    """Weights of the probe subspaces of one dimension against a flag set."""

    s: int
    weights: np.ndarray          # weight of every s-space
    heavy: np.ndarray            # weight equals the full extension count
    full_count: int


@dataclass(frozen=True)
class SharpnessReport:
    size: int
    bound: int
    sharp: bool
    certificate: Optional[bool]  # characteristic vector in <1> + min eigenspace


def spinor_classes(space: PolarSpace, gen_ids: Optional[Sequence[int]] = None):
    """Split generators into the two parity classes of pairwise intersection.

    Two generators are in the same class iff their meet has dimension of the
    same parity as the rank.  The class containing the first generator comes
    first.  Only meaningful for hyperbolic spaces.
    """
    if space.kind != "hyperbolic":
        raise ValueError("spinor classes exist only in hyperbolic spaces")
    gens = space.generators
    ids = list(gen_ids) if gen_ids is not None else list(range(len(gens)))
    ref = gens[ids[0]]
    same, other = [], []
    for i in ids:
        d = space.meet(gens[i], ref).shape[0]
        (same if (space.n - d) % 2 == 0 else other).append(i)
    return tuple(same), tuple(other)


def build_example(space: PolarSpace, family: str, base: Optional[int] = None) -> EKRSet:
    """One of the classical EKR families (see module docstring)."""
    n = space.n
    if family == "a":
        G = space.generators[base or 0]
        mask = space.masks(n)[G.id]
        members = tuple(P.id for P in space.points
                        if (mask >> space._ambient_index[P.key]) & 1)
        return EKRSet((1,), members, f"points-in-generator[{G.id}]")
    if family == "b":
        P = space.points[base or 0]
        members = tuple(np.nonzero(space.containment_matrix(1, n)[P.id])[0])
        return EKRSet((n,), tuple(int(x) for x in members), f"generators-through-point[{P.id}]")
    if family == "c":
        if space.e != 0 or n % 2 == 0:
            raise ValueError("parity-class family needs a hyperbolic space of odd rank")
        same, _ = spinor_classes(space)
        return EKRSet((n,), same, "parity-class")
    if family == "d":
        if space.kind != "parabolic":
            raise ValueError("embedded-section family is built in a parabolic space")
        for H in space.hyperplanes():
            rep = space.hyperplane_section(H)
            if rep.tag == "hyperbolic":
                hmask = space.point_mask(H)
                inside = [G.id for G in space.generators
                          if space.masks(n)[G.id] & ~hmask == 0]
                cls = _section_parity_class(space, inside)
                return EKRSet((n,), cls, "embedded-hyperbolic-class")
        raise AssertionError("no hyperbolic hyperplane section found")
    raise ValueError(f"unknown example family {family!r}")


def _section_parity_class(space: PolarSpace, gen_ids: Sequence[int]) -> Tuple[int, ...]:
    gens = space.generators
    ref = gens[gen_ids[0]]
    out = [i for i in gen_ids
           if (space.n - space.meet(gens[i], ref).shape[0]) % 2 == 0]
    return tuple(out)


def sspaces_through_point(space: PolarSpace, s: int, point_id: int = 0) -> EKRSet:
    """All s-spaces through a fixed point: the dimension-s analogue of the
    generator family, used mostly as a search seed."""
    members = np.nonzero(space.containment_matrix(1, s)[point_id])[0]
    return EKRSet((s,), tuple(int(x) for x in members), f"through-point[{point_id},s={s}]")


def blow_up(space: PolarSpace, F: EKRSet, J2: Sequence[int]) -> EKRSet:
    """All flags of the larger type whose subflag of type F.J lies in F."""
    J2t = flag_type(J2, space.n)
    if not set(F.J) <= set(J2t):
        raise ValueError(f"target type {J2t} does not contain base type {F.J}")
    base_family = enumerate_flags(space, F.J)
    target = enumerate_flags(space, J2t)
    groups = target.projection_index(F.J)
    members = []
    for pos in F.members:
        members.extend(int(x) for x in groups.get(base_family.flags[pos], ()))
    return EKRSet(J2t, tuple(sorted(members)), f"blow-up({F.label}->{list(J2t)})")


def verify_ekr(space: PolarSpace, F: EKRSet):
    """Exhaustive pairwise non-opposition check.

    Returns (True, None) or (False, first violating pair of members).
    """
    fam = enumerate_flags(space, F.J)
    member_mask = 0
    for m in F.members:
        member_mask |= 1 << m
    use_graph = getattr(space, "_graphs", {}).get(F.J)
    if use_graph is not None:
        rows = use_graph.bitset_rows()
        for m in F.members:
            hit = rows[m] & member_mask
            if hit:
                other = (hit & -hit).bit_length() - 1
                return False, (m, other)
        return True, None
    members = sorted(F.members)
    for i, a in enumerate(members):
        for b in members[i + 1:]:
            if fam.opposite(a, b):
                return False, (a, b)
    return True, None


def ratio_sharpness(space: PolarSpace, F: EKRSet,
                    graph: Optional[OppositionGraph] = None) -> SharpnessReport:
    """Compare the set against the ratio bound and, when it is attained,
    certify that its characteristic vector lies in the span of the all-ones
    vector and the minimal eigenspace.

    The certificate uses the exact equivalence: x is in that span iff
    (A - t*I) x is a constant vector (t the smallest eigenvalue), valid
    because A is symmetric with constant row sums.
    """
    bound = ratio_bound(F.J, space.params).value
    sharp = len(F.members) == bound
    certificate = None
    g = graph or build_graph(space, F.J)
    lam = graph_min_eigenvalue(g)
    x = np.zeros(g.n, dtype=np.int64)
    x[list(F.members)] = 1
    y = exact_matmul(g.adjacency_int(), x.reshape(-1, 1))[:, 0] - lam * x
    total = int(y.sum())
    certificate = (total % g.n == 0) and bool((y == total // g.n).all())
    return SharpnessReport(len(F.members), bound, sharp, certificate)


# -- weights and the X/Y/Z statistics -------------------------------------------


def weights(space: PolarSpace, F: EKRSet, s: int) -> WeightReport:
    """Weights of all s-spaces with respect to a chamber set: the number of
    members containing each s-space."""
    chambers = enumerate_flags(space, F.J)
    if F.J != tuple(range(1, space.n + 1)):
        raise ValueError("weights are defined for chamber sets")
    col = chambers.parts[:, s - 1]
    w = np.bincount(col[list(F.members)], minlength=len(space.subspaces(s)))
    full = count_chamber_extensions((s,), space.params).value
    return WeightReport(s, w, w == full, full)


def heavy_flag(space: PolarSpace, F: EKRSet, pos: int) -> bool:
    """A chamber is heavy when at least one of its parts is heavy."""
    chambers = enumerate_flags(space, F.J)
    for s in range(1, space.n + 1):
        rep = weights(space, F, s)
        if rep.heavy[chambers.parts[pos, s - 1]]:
            return True
    return False


def xyz_chambers(space: PolarSpace, F: EKRSet, S) -> Tuple[int, int, int]:
    """Split a chamber set by position relative to a probe s-space:
    X members contain it, Y members have their s-part opposite to it,
    Z is the rest."""
    chambers = enumerate_flags(space, F.J)
    col = chambers.parts[:, S.r - 1][list(F.members)]
    X = int((col == S.id).sum())
    opp = space.opposition_matrix(S.r)[S.id]
    Y = int(opp[col].sum())
    return X, Y, len(F.members) - X - Y


def xyz_sspaces(space: PolarSpace, F: EKRSet, M) -> Tuple[int, int, int]:
    """Same split for a set of s-spaces against a probe m-space, m < s:
    X members contain M, Y members have tangent space skew to M."""
    from . import kernels

    (s,) = F.J
    if not (1 <= M.r < s):
        raise ValueError("probe dimension must be smaller than the family dimension")
    members = np.asarray(F.members, dtype=np.int64)
    through = space.containment_matrix(M.r, s)[M.id]
    X = int(through[members].sum())
    nbits = space.ambient_points.shape[0]
    missing = kernels.opposition_matrix(
        [space.perp_masks(s)[int(i)] for i in members],
        [space.masks(M.r)[M.id]], nbits)[:, 0]
    Y = int(missing.sum())
    return X, Y, len(F.members) - X - Y


def xyz_chamber_identity(space: PolarSpace, F: EKRSet, S) -> bool:
    """For ratio-sharp chamber sets: Y = lambda_s * (X - chambers through S)."""
    from .counting import min_eigenvalue_sspace

    X, Y, _ = xyz_chambers(space, F, S)
    lam = min_eigenvalue_sspace(S.r, space.params)
    full = count_chamber_extensions((S.r,), space.params).value
    return Y == lam * (X - full)


def xyz_sspace_identities(space: PolarSpace, F: EKRSet, M) -> bool:
    """For ratio-sharp s-space sets: the exact expressions for Y and Z in
    terms of X, the extension count and the bound."""
    from .counting import min_eigenvalue_sspace, opposite_extensions_power

    (s,) = F.J
    X, Y, Z = xyz_sspaces(space, F, M)
    pr = space.params
    lam = Fraction(min_eigenvalue_sspace(s, pr))
    phi = count_extensions(M.r, s, pr).value
    scale = Fraction(1, opposite_extensions_power(M.r, s, pr).value)
    bound = ratio_bound([s], pr).value
    y_ok = Fraction(Y) == -lam * scale * (phi - X)
    z_ok = Fraction(Z) == X * (-lam * scale - 1) + bound + lam * scale * phi
    return y_ok and z_ok


# -- persistence -------------------------------------------------------------------


def ekr_to_json_dict(space: PolarSpace, F: EKRSet) -> dict:
    return {
        "params": {"n": space.n, "e": str(space.e), "q": space.q},
        "kind": space.kind,
        "J": list(F.J),
        "label": F.label,
        "member_ids": list(F.members),
    }


def save_ekr(space: PolarSpace, F: EKRSet, path) -> None:
    with open(path, "w") as fh:
        json.dump(ekr_to_json_dict(space, F), fh, sort_keys=True)


def load_ekr(path) -> Tuple[PolarSpace, EKRSet]:
    with open(path) as fh:
        data = json.load(fh)
    space = build_polar_space(data["kind"], int(data["params"]["n"]),
                              int(data["params"]["q"]))
    F = EKRSet(tuple(data["J"]), tuple(int(x) for x in data["member_ids"]),
               data["label"])
    return space, F
