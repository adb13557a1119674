"""Opposition graphs: regularity, certified spectra, quotient relation, export."""

from fractions import Fraction

import numpy as np
import pytest

from polar_ekr.counting import (
    graph_degree_flags,
    min_eigenvalue_sspace,
    ratio_bound,
)
from polar_ekr.exactrank import certified_spectrum, exact_matmul
from polar_ekr.graphs import (
    build_graph,
    graph_from_json,
    incidence_matrix,
    load_dimacs,
    quotient_relation_check,
)
from polar_ekr.spaces import build_polar_space

W52 = build_polar_space("symplectic", 3, 2)


def test_gamma_1_basic():
    g = build_graph(W52, [1])
    assert g.n == 63
    assert g.degree == 32
    assert g.is_connected()


def test_gamma_chambers_basic():
    g = build_graph(W52, [1, 2, 3])
    assert g.n == 2835
    assert g.degree == 512


def test_gamma_3_degree():
    assert build_graph(W52, [3]).degree == 64


def test_degrees_match_closed_form():
    for J in ([1], [2], [3], [1, 3], [1, 2, 3]):
        g = build_graph(W52, J)
        assert g.degree == graph_degree_flags(J, W52.params).value


def test_adjacency_consistent_with_flag_opposition():
    g = build_graph(W52, [1, 3])
    rng = np.random.default_rng(0)
    for _ in range(60):
        a, b = rng.integers(0, g.n, size=2)
        assert bool(g.adjacency[a, b]) == g.family.opposite(int(a), int(b))


def test_spectrum_small_graphs():
    assert build_graph(W52, [1]).spectrum().smallest == -4 == min_eigenvalue_sspace(1, W52.params)
    assert build_graph(W52, [2]).spectrum().smallest == -16 == min_eigenvalue_sspace(2, W52.params)
    assert build_graph(W52, [3]).spectrum().smallest == -8 == min_eigenvalue_sspace(3, W52.params)


def test_spectrum_largest_is_degree_with_multiplicity_one():
    for J in ([1], [2], [3]):
        g = build_graph(W52, J)
        spec = g.spectrum()
        assert spec.largest == g.degree
        assert spec.multiplicity(g.degree) == 1  # connected regular graph


def test_k4_spectrum():
    A = np.ones((4, 4), dtype=np.int64) - np.eye(4, dtype=np.int64)
    spec, kernels = certified_spectrum(A)
    assert spec.eigenvalues == ((-1, 3), (3, 1))
    K = kernels[-1]
    assert K.shape == (4, 3)
    # the (-1)-eigenspace is the vectors summing to zero
    assert not K.sum(axis=0).any()


def test_eigenspace_is_exact_kernel():
    g = build_graph(W52, [1])
    lam, K = g.min_eigenspace()
    assert lam == -4
    A = g.adjacency_int()
    assert not (exact_matmul(A, K) - lam * K).any()
    assert K.shape[1] == g.spectrum().multiplicity(-4)


def test_eigenspace_unknown_value_raises():
    g = build_graph(W52, [1])
    with pytest.raises(ValueError):
        g.eigenspace(17)


def test_ratio_bound_consistency():
    # |V| * (-min) / (degree - min) equals the closed-form bound, exactly,
    # for singleton, composite and chamber types
    for J in ([1], [2], [3], [1, 3], [1, 2, 3]):
        g = build_graph(W52, J)
        lam = g.spectrum().smallest
        val = Fraction(g.n * (-lam), g.degree - lam)
        assert val == ratio_bound(J, W52.params).value


def test_incidence_matrix_structure():
    M = incidence_matrix(W52, [1, 3])
    assert M.shape == (2835, 945)
    assert (M.sum(axis=1) == 1).all()  # one type-J subflag per chamber
    assert (M.sum(axis=0) == 3).all()  # chamber extension count


@pytest.mark.parametrize("J", [(1,), (2,), (3,), (1, 3)])
def test_quotient_relation(J):
    rep = quotient_relation_check(W52, J)
    assert rep.holds
    assert rep.lift_orthogonal
    assert rep.lift_eigen


def test_quotient_relation_expected_scales():
    assert quotient_relation_check(W52, (1,), verify_lift=False).scale == 16
    assert quotient_relation_check(W52, (3,), verify_lift=False).scale == 8
    assert quotient_relation_check(W52, (2,), verify_lift=False).scale == 4
    assert quotient_relation_check(W52, (1, 3), verify_lift=False).scale == 2


def test_dimacs_export(tmp_path):
    g = build_graph(W52, [1])
    path = tmp_path / "g1.dimacs"
    g.export_dimacs(path)
    text = path.read_text().splitlines()
    assert text[0] == "p edge 63 1008"  # 63 * 32 / 2 edges
    loaded = load_dimacs(path)
    assert loaded.n == 63
    assert len(loaded.edges) == 1008
    rows = loaded.bitset_rows()
    orig = g.bitset_rows()
    assert rows == orig


def test_dimacs_complement(tmp_path):
    g = build_graph(W52, [1])
    path = tmp_path / "g1c.dimacs"
    g.export_dimacs(path, complement=True)
    loaded = load_dimacs(path)
    assert len(loaded.edges) == 63 * 62 // 2 - 1008


def test_json_round_trip(tmp_path):
    g = build_graph(W52, [1])
    d = g.to_json_dict()
    g2 = graph_from_json(d)
    assert g2.n == g.n
    assert g2.bitset_rows() == g.bitset_rows()


def test_json_deterministic(tmp_path):
    g = build_graph(W52, [1])
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    g.export_json(p1)
    g.export_json(p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_vertex_limit():
    from polar_ekr.graphs import OppositionGraph
    with pytest.raises(ValueError):
        OppositionGraph(W52, (1, 2), max_vertices=100)


def test_spectrum_refuses_oversize(monkeypatch):
    import polar_ekr.graphs as graphs_mod
    from polar_ekr.graphs import OppositionGraph
    g = OppositionGraph(W52, (2,))
    monkeypatch.setattr(graphs_mod, "MAX_DENSE_SPECTRUM", 100)
    with pytest.raises(ValueError):
        g.spectrum()


def test_threads_give_identical_adjacency():
    from polar_ekr.graphs import OppositionGraph
    g1 = OppositionGraph(W52, (1, 2), threads=1)
    g2 = OppositionGraph(W52, (1, 2), threads=3)
    assert np.array_equal(g1.adjacency, g2.adjacency)
