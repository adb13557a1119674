"""Antidesign constructions, orthogonality, identities, pairings."""

import numpy as np
import pytest

from polar_ekr.antidesigns import (
    all_mspace_antidesigns,
    all_subspace_antidesigns,
    chi,
    expected_chi_pairing,
    expected_mspace_pairing,
    expected_subspace_pairing,
    graph_min_eigenvalue,
    lift,
    opposition_row_rank,
    orthogonal_to_min_eigenspace,
    pairing,
    v_mspace,
    v_subspace,
    verify_all_chi_orthogonal,
    verify_chi_row_identity,
    verify_mspace_sum,
    verify_subspace_scaled_sum,
)
from polar_ekr.ekr import blow_up, build_example
from polar_ekr.graphs import build_graph
from polar_ekr.spaces import build_polar_space

W52 = build_polar_space("symplectic", 3, 2)
G1 = build_graph(W52, [1])
G3 = build_graph(W52, [3])
GC = build_graph(W52, [1, 2, 3])


def test_chi_entries_point_graph():
    c = chi(G1, 0)
    assert c.values[0] == 4  # -lambda_1
    assert (c.values == 1).sum() == 32
    assert (c.values == 0).sum() == 30
    assert c.total() == 36


def test_chi_chamber_total():
    c = chi(GC, 0)
    assert c.values[0] == 64
    assert c.total() == 64 + 512


def test_chi_row_identity():
    for pos in (0, 17, 62):
        assert verify_chi_row_identity(G1, pos)
    assert verify_chi_row_identity(GC, 100)


def test_all_chi_orthogonal():
    assert verify_all_chi_orthogonal(G1)
    assert verify_all_chi_orthogonal(G3)
    assert verify_all_chi_orthogonal(GC)


def test_chi_orthogonal_single():
    assert orthogonal_to_min_eigenspace(G1, chi(G1, 5))


def test_graph_min_eigenvalue_consistency():
    # formula and certified spectrum must agree where both exist
    assert graph_min_eigenvalue(G1) == -4
    G1.spectrum()
    assert graph_min_eigenvalue(G1) == -4


def test_v_subspace_values():
    S = W52.points[0]
    v = v_subspace(W52, S)
    assert (v.values == 4).sum() == 45   # chambers through S
    assert (v.values == 1).sum() == 32 * 45  # chambers with point opposite S
    assert v.values.sum() == 4 * 45 + 1440


def test_v_subspace_generator_entries():
    S = W52.generators[0]
    v = v_subspace(W52, S)
    assert (v.values == 8).sum() == 21  # -lambda_3 on the chambers in S


def test_v_subspace_orthogonal():
    for S in (W52.points[0], W52.subspaces(2)[7], W52.generators[3]):
        assert orthogonal_to_min_eigenspace(GC, v_subspace(W52, S))


def test_v_subspace_scaled_sum():
    assert verify_subspace_scaled_sum(W52, W52.points[2])
    assert verify_subspace_scaled_sum(W52, W52.subspaces(2)[0])
    assert verify_subspace_scaled_sum(W52, W52.generators[0])


def test_v_mspace_values():
    M = W52.points[0]
    v = v_mspace(W52, M, 3)
    assert (v.values == 8).sum() == 15 + 120  # through M and tangent-missing
    assert v.total() == 8 * 135


def test_v_mspace_line_values():
    # m = 1, s = 2: -lambda_2 = 16 on the 15 lines through M, 8 on the
    # 240 lines whose tangent space misses M
    M = W52.points[0]
    v = v_mspace(W52, M, 2)
    assert (v.values == 16).sum() == 15
    assert (v.values == 8).sum() == 240
    g2 = build_graph(W52, [2])
    assert orthogonal_to_min_eigenspace(g2, v)


def test_v_mspace_sum_identity():
    assert verify_mspace_sum(W52, W52.points[0], 3)
    assert verify_mspace_sum(W52, W52.points[5], 2)
    assert verify_mspace_sum(W52, W52.subspaces(2)[11], 3)


def test_v_mspace_orthogonal():
    assert orthogonal_to_min_eigenspace(G3, v_mspace(W52, W52.points[1], 3))
    assert orthogonal_to_min_eigenspace(G3, v_mspace(W52, W52.subspaces(2)[4], 3))


def test_v_mspace_range_check():
    with pytest.raises(ValueError):
        v_mspace(W52, W52.generators[0], 3)


def test_lift_of_chi_point_equals_v_subspace():
    for pid in (0, 30):
        lifted = lift(W52, chi(G1, pid))
        assert np.array_equal(lifted.values, v_subspace(W52, W52.points[pid]).values)


def test_lift_of_ones_is_ones():
    from polar_ekr.antidesigns import Antidesign
    ones = Antidesign((1,), np.ones(63, dtype=np.int64), "ones")
    lifted = lift(W52, ones)
    assert (lifted.values == 1).all()  # each chamber contains exactly one point


def test_lift_preserves_orthogonality():
    v = chi(G3, 0)
    assert orthogonal_to_min_eigenspace(GC, lift(W52, v))


def test_pairing_on_sharp_sets():
    Fa = blow_up(W52, build_example(W52, "a"), [1, 2, 3])
    act, pred, eq = pairing(chi(GC, 0), Fa.members, GC.n)
    assert eq and act == 64 == expected_chi_pairing(GC)
    act, pred, eq = pairing(v_subspace(W52, W52.points[0]), Fa.members, GC.n)
    assert eq and act == 180 == expected_subspace_pairing(W52, 1)
    act, pred, eq = pairing(v_subspace(W52, W52.generators[0]), Fa.members, GC.n)
    assert eq and act == 168 == expected_subspace_pairing(W52, 3)
    b = build_example(W52, "b")
    act, pred, eq = pairing(v_mspace(W52, W52.points[0], 3), b.members, G3.n)
    assert eq and act == 120 == expected_mspace_pairing(W52, 1, 3)


def test_pairing_type_mismatch():
    with pytest.raises(ValueError):
        pairing(chi(G1, 0), (0, 1), 2835)


def test_bulk_matrices_match_single():
    V1 = all_subspace_antidesigns(W52, 1)
    assert np.array_equal(V1[0], v_subspace(W52, W52.points[0]).values)
    VM = all_mspace_antidesigns(W52, 1, 3)
    assert np.array_equal(VM[0], v_mspace(W52, W52.points[0], 3).values)


def test_opposition_row_rank():
    spec = G1.spectrum()
    assert opposition_row_rank(G1) == 63 - spec.multiplicity(spec.smallest)
    # the chi rows span the orthogonal complement exactly
    lam = spec.smallest
    A = G1.adjacency_int() - lam * np.eye(63, dtype=np.int64)
    from polar_ekr.exactrank import row_echelon_mod_p, PRIMES
    piv, _ = row_echelon_mod_p(A, PRIMES[0])
    assert len(piv) == opposition_row_rank(G1)
