"""Antidesigns: integer vectors orthogonal to the minimal eigenspace.

Three constructions are provided, all with integer entries:

  * the row of (A - lambda_min I) at a fixed flag ("chi"),
  * for a fixed s-space S, the vector on chambers valued -lambda_s at
    chambers containing S and 1 at chambers whose s-part is opposite to S,
  * for a fixed m-space M with m < s, the vector on s-spaces valued
    -lambda_s on the s-spaces through M and q^deg(extensions) on those whose
    tangent space misses M.

The second is the incidence lift of chi at S scaled down by a power of q,
the third is the sum of chi over the s-spaces through M; both identities
are exposed as exact checks.  Orthogonality to the minimal eigenspace is
always a zero test on exact integers, never a tolerance test.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

import numpy as np

from . import kernels
from .counting import (
    count_extensions,
    min_eigenvalue_flags,
    opposite_chambers_through_power,
    opposite_extensions_power,
)
from .exactrank import exact_matmul
from .graphs import OppositionGraph, build_graph, incidence_matrix
from .spaces import PolarSpace, Subspace


@dataclass(frozen=True)
class Antidesign:
    """An exact antidesign on the flags of type J, with provenance."""

    J: Tuple[int, ...]
    values: np.ndarray
    provenance: str

    def total(self) -> int:
        return int(self.values.sum())


def graph_min_eigenvalue(graph: OppositionGraph) -> int:
    """Smallest eigenvalue: closed form in the valid regime, certified
    spectrum otherwise.  When both are available they must agree."""
    formula = None
    if graph.space.params.valid_regime:
        formula = min_eigenvalue_flags(graph.J, graph.space.params)
    if graph._spectrum is not None or formula is None:
        certified = graph.spectrum().smallest
        if formula is not None and certified != formula:
            raise AssertionError(
                f"certified minimum {certified} contradicts closed form {formula}")
        return certified
    return formula


def chi(graph: OppositionGraph, pos: int) -> Antidesign:
    """The antidesign supported on one flag and its opposites."""
    lam = graph_min_eigenvalue(graph)
    v = graph.adjacency[pos].astype(np.int64)
    v[pos] = -lam
    return Antidesign(graph.J, v, f"chi[{pos}]")


def v_subspace(space: PolarSpace, S: Subspace) -> Antidesign:
    """Subspace-based antidesign on chambers for a fixed s-space."""
    from .counting import min_eigenvalue_sspace
    from .flags import enumerate_flags

    s = S.r
    lam = min_eigenvalue_sspace(s, space.params)
    chambers = enumerate_flags(space, range(1, space.n + 1))
    col = chambers.parts[:, s - 1]
    opp = space.opposition_matrix(s)[S.id]
    v = opp[col].astype(np.int64)
    v[col == S.id] = -lam
    return Antidesign(tuple(range(1, space.n + 1)), v, f"v_subspace[s={s},{S.id}]")


def v_mspace(space: PolarSpace, M: Subspace, s: int) -> Antidesign:
    """Subspace-based antidesign on s-spaces for a fixed m-space, m < s."""
    from .counting import min_eigenvalue_sspace

    m = M.r
    if not (1 <= m < s <= space.n):
        raise ValueError(f"need 1 <= m < s <= n, got m={m}, s={s}")
    lam = min_eigenvalue_sspace(s, space.params)
    power = opposite_extensions_power(m, s, space.params).value
    nbits = space.ambient_points.shape[0]
    # s-spaces whose tangent space misses M
    missing = kernels.opposition_matrix(
        space.perp_masks(s), [space.masks(m)[M.id]], nbits)[:, 0]
    through = space.containment_matrix(m, s)[M.id]
    v = np.where(missing, power, 0).astype(np.int64)
    v[through] = -lam
    return Antidesign((s,), v, f"v_mspace[m={m},{M.id},s={s}]")


def lift(space: PolarSpace, v: Antidesign) -> Antidesign:
    """Incidence lift onto chambers: chamber C gets the value of its type-J
    subflag.  Antidesigns lift to antidesigns."""
    M = incidence_matrix(space, v.J)
    vals = exact_matmul(M, v.values.reshape(-1, 1))[:, 0]
    return Antidesign(tuple(range(1, space.n + 1)), vals, f"lift({v.provenance})")


def orthogonal_to_min_eigenspace(graph: OppositionGraph, v: Antidesign) -> bool:
    """Exact zero test of the defining property."""
    _, K = graph.min_eigenspace()
    return not exact_matmul(K.T, v.values.reshape(-1, 1)).any()


def verify_chi_row_identity(graph: OppositionGraph, pos: int) -> bool:
    """chi at a flag equals the corresponding row of A - lambda_min I."""
    lam = graph_min_eigenvalue(graph)
    row = graph.adjacency_int()[pos] - lam * np.eye(graph.n, dtype=np.int64)[pos]
    return np.array_equal(chi(graph, pos).values, row)


def verify_all_chi_orthogonal(graph: OppositionGraph) -> bool:
    """All chi rows annihilate the minimal eigenspace: (A - t I) K == 0."""
    lam, K = graph.min_eigenspace()
    A = graph.adjacency_int()
    return not (exact_matmul(A, K) - lam * K).any()


def verify_subspace_scaled_sum(space: PolarSpace, S: Subspace) -> bool:
    """q^deg(chambers through an s-space opposite to a chamber) * v_subspace
    equals the sum of chi over the chambers containing S, entrywise."""
    from .flags import enumerate_flags

    graph = build_graph(space, range(1, space.n + 1))
    chambers = enumerate_flags(space, range(1, space.n + 1))
    positions = np.nonzero(chambers.parts[:, S.r - 1] == S.id)[0]
    total = np.zeros(graph.n, dtype=np.int64)
    for pos in positions:
        total += chi(graph, int(pos)).values
    scale = opposite_chambers_through_power(S.r, space.params).value
    return np.array_equal(total, scale * v_subspace(space, S).values)


def verify_mspace_sum(space: PolarSpace, M: Subspace, s: int) -> bool:
    """v_mspace equals the sum of chi over the s-spaces through M, entrywise."""
    graph = build_graph(space, [s])
    through = np.nonzero(space.containment_matrix(M.r, s)[M.id])[0]
    total = np.zeros(graph.n, dtype=np.int64)
    for sid in through:
        total += chi(graph, int(sid)).values
    return np.array_equal(total, v_mspace(space, M, s).values)


def pairing(v: Antidesign, member_positions: Sequence[int], n_vertices: int):
    """Inner product with a flag set, plus the sharp-set prediction.

    Returns (actual, predicted, equal).  The prediction
    |F| * sum(v) / n_vertices is met exactly by every ratio-sharp EKR set.
    """
    members = np.asarray(list(member_positions), dtype=np.int64)
    if len(v.values) != n_vertices:
        raise ValueError("antidesign does not live on this flag family")
    actual = int(v.values[members].sum())
    predicted = Fraction(len(members) * v.total(), n_vertices)
    return actual, predicted, Fraction(actual) == predicted


def all_subspace_antidesigns(space: PolarSpace, s: int) -> np.ndarray:
    """Matrix whose rows are v_subspace for every s-space (row index = id)."""
    from .counting import min_eigenvalue_sspace
    from .flags import enumerate_flags

    lam = min_eigenvalue_sspace(s, space.params)
    chambers = enumerate_flags(space, range(1, space.n + 1))
    col = chambers.parts[:, s - 1]
    V = space.opposition_matrix(s)[:, col].astype(np.int64)
    V[col, np.arange(len(chambers))] = -lam
    return V


def all_mspace_antidesigns(space: PolarSpace, m: int, s: int) -> np.ndarray:
    """Matrix whose rows are v_mspace for every m-space (row index = id)."""
    from . import kernels
    from .counting import min_eigenvalue_sspace

    lam = min_eigenvalue_sspace(s, space.params)
    power = opposite_extensions_power(m, s, space.params).value
    nbits = space.ambient_points.shape[0]
    missing = kernels.opposition_matrix(space.perp_masks(s), space.masks(m), nbits)
    V = (missing.T * power).astype(np.int64)
    V[space.containment_matrix(m, s).astype(bool)] = -lam
    return V


def verify_subspace_antidesigns_bulk(space: PolarSpace, s: int) -> bool:
    """For every s-space at once: orthogonality of v_subspace to the minimal
    chamber eigenspace and the scaled-sum identity against the chi rows."""
    graph = build_graph(space, range(1, space.n + 1))
    lam, K = graph.min_eigenspace()
    V = all_subspace_antidesigns(space, s)
    if exact_matmul(V, K).any():
        return False
    from .flags import enumerate_flags

    chambers = enumerate_flags(space, range(1, space.n + 1))
    col = chambers.parts[:, s - 1]
    G = (np.arange(V.shape[0])[:, None] == col[None, :]).astype(np.int64)
    A_shift = graph.adjacency_int() - lam * np.eye(graph.n, dtype=np.int64)
    sums = exact_matmul(G, A_shift)
    scale = opposite_chambers_through_power(s, space.params).value
    return np.array_equal(sums, scale * V)


def verify_mspace_antidesigns_bulk(space: PolarSpace, m: int, s: int) -> bool:
    """For every m-space at once: orthogonality of v_mspace to the minimal
    eigenspace of the s-space graph and the chi-sum identity."""
    graph = build_graph(space, [s])
    lam, K = graph.min_eigenspace()
    V = all_mspace_antidesigns(space, m, s)
    if exact_matmul(V, K).any():
        return False
    C = space.containment_matrix(m, s).astype(np.int64)
    A_shift = graph.adjacency_int() - lam * np.eye(graph.n, dtype=np.int64)
    sums = exact_matmul(C, A_shift)
    return np.array_equal(sums, V)


def opposition_row_rank(graph: OppositionGraph) -> int:
    """Rank of A - lambda_min I: the antidesigns spanned by the chi rows fill
    the whole orthogonal complement of the minimal eigenspace."""
    spec = graph.spectrum()
    return graph.n - spec.multiplicity(spec.smallest)


def expected_chi_pairing(graph: OppositionGraph) -> int:
    """Value of the chi pairing on a ratio-sharp set: -lambda_min."""
    return -graph_min_eigenvalue(graph)


def expected_subspace_pairing(space: PolarSpace, s: int) -> int:
    """Value of the v_subspace pairing on a ratio-sharp chamber set."""
    from .counting import count_chamber_extensions, min_eigenvalue_sspace

    pr = space.params
    lam = min_eigenvalue_sspace(s, pr)
    return -lam * count_chamber_extensions((s,), pr).value


def expected_mspace_pairing(space: PolarSpace, m: int, s: int) -> int:
    """Value of the v_mspace pairing on a ratio-sharp set of s-spaces."""
    from .counting import min_eigenvalue_sspace

    pr = space.params
    return -min_eigenvalue_sspace(s, pr) * count_extensions(m, s, pr).value
