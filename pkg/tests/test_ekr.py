"""EKR families, blow-ups, sharpness certificates, weights and X/Y/Z."""

import numpy as np
import pytest

from polar_ekr.ekr import (
    EKRSet,
    blow_up,
    build_example,
    ekr_to_json_dict,
    load_ekr,
    ratio_sharpness,
    save_ekr,
    spinor_classes,
    sspaces_through_point,
    verify_ekr,
    weights,
    xyz_chamber_identity,
    xyz_chambers,
    xyz_sspace_identities,
    xyz_sspaces,
)
from polar_ekr.graphs import build_graph
from polar_ekr.spaces import build_polar_space

W52 = build_polar_space("symplectic", 3, 2)


def test_example_a():
    a = build_example(W52, "a")
    assert len(a) == 7
    assert a.J == (1,)
    assert verify_ekr(W52, a)[0]


def test_example_b():
    b = build_example(W52, "b")
    assert len(b) == 15
    assert b.J == (3,)
    assert verify_ekr(W52, b)[0]


def test_example_c_hyperbolic():
    Qp = build_polar_space("hyperbolic", 3, 2)
    c = build_example(Qp, "c")
    assert len(c) == 15  # half of the 30 generators
    ok, _ = verify_ekr(Qp, c)
    assert ok


def test_example_c_requires_odd_rank_hyperbolic():
    with pytest.raises(ValueError):
        build_example(W52, "c")


def test_example_d_parabolic():
    Q6 = build_polar_space("parabolic", 3, 2)
    d = build_example(Q6, "d")
    assert len(d) == 15
    assert verify_ekr(Q6, d)[0]
    sharp = ratio_sharpness(Q6, d)
    assert sharp.sharp and sharp.certificate


def test_example_d_needs_parabolic():
    with pytest.raises(ValueError):
        build_example(W52, "d")


def test_spinor_classes_q2():
    Qp = build_polar_space("hyperbolic", 3, 2)
    same, other = spinor_classes(Qp)
    assert len(same) == len(other) == 15
    # parity constant within a class
    gens = Qp.generators
    for cls in (same, other):
        for i in cls[:6]:
            for j in cls[:6]:
                d = Qp.meet(gens[i], gens[j]).shape[0]
                assert (3 - d) % 2 == 0


def test_blow_up_sizes():
    a = build_example(W52, "a")
    Fa = blow_up(W52, a, [1, 2, 3])
    assert len(Fa) == 315 == 7 * 45
    b = build_example(W52, "b")
    Fb = blow_up(W52, b, [1, 2, 3])
    assert len(Fb) == 315 == 15 * 21
    F13 = blow_up(W52, a, [1, 3])
    assert len(F13) == 105 == 7 * 15


def test_blow_up_to_composite_type_is_sharp():
    a = build_example(W52, "a")
    F13 = blow_up(W52, a, [1, 3])
    ok, _ = verify_ekr(W52, F13)
    assert ok
    rep = ratio_sharpness(W52, F13)
    assert rep.bound == 105 and rep.sharp and rep.certificate


def test_composite_type_chi_and_lift():
    from polar_ekr.antidesigns import chi, lift, orthogonal_to_min_eigenspace
    g13 = build_graph(W52, [1, 3])
    spec = g13.spectrum()
    assert spec.smallest == -32  # matches the closed form for this type
    c = chi(g13, 0)
    assert orthogonal_to_min_eigenspace(g13, c)
    gc = build_graph(W52, [1, 2, 3])
    assert orthogonal_to_min_eigenspace(gc, lift(W52, c))


def test_blow_up_single_generator():
    single = EKRSet((3,), (0,), "one-generator")
    F = blow_up(W52, single, [1, 2, 3])
    assert len(F) == 21
    assert verify_ekr(W52, F)[0]
    sharp = ratio_sharpness(W52, F)
    assert not sharp.sharp  # 21 < 315


def test_blow_up_composes():
    # blowing up in two steps equals blowing up directly
    a = build_example(W52, "a")
    via_13 = blow_up(W52, blow_up(W52, a, [1, 3]), [1, 2, 3])
    direct = blow_up(W52, a, [1, 2, 3])
    assert via_13.members == direct.members


def test_heavy_flag_classification():
    from polar_ekr.ekr import heavy_flag
    a = build_example(W52, "a")
    Fa = blow_up(W52, a, [1, 2, 3])
    for pos in list(Fa.members)[::37]:
        assert heavy_flag(W52, Fa, pos)
    outside = [p for p in range(2835) if p not in set(Fa.members)]
    for pos in outside[::251]:
        assert not heavy_flag(W52, Fa, pos)


def test_blow_up_type_mismatch():
    a = build_example(W52, "a")
    with pytest.raises(ValueError):
        blow_up(W52, a, [2, 3])


def test_blow_ups_are_ekr():
    for fam in ("a", "b"):
        F = blow_up(W52, build_example(W52, fam), [1, 2, 3])
        ok, _ = verify_ekr(W52, F)
        assert ok


def test_verify_ekr_detects_opposite_pair():
    g = build_graph(W52, [1, 2, 3])
    i, j = map(int, np.argwhere(g.adjacency)[0])
    ok, pair = verify_ekr(W52, EKRSet((1, 2, 3), (i, j), "bad"))
    assert not ok
    assert set(pair) == {i, j}


def test_verify_ekr_trivial_sets():
    assert verify_ekr(W52, EKRSet((1,), (), "empty"))[0]
    assert verify_ekr(W52, EKRSet((1,), (5,), "single"))[0]


def test_sharpness_certificates():
    a = build_example(W52, "a")
    Fa = blow_up(W52, a, [1, 2, 3])
    rep = ratio_sharpness(W52, Fa)
    assert rep.sharp and rep.certificate and rep.bound == 315
    b = build_example(W52, "b")
    rep_b = ratio_sharpness(W52, b)
    assert rep_b.sharp and rep_b.certificate and rep_b.bound == 15


def test_sspaces_through_point_seed():
    star = sspaces_through_point(W52, 2, 0)
    assert len(star) == 15
    assert verify_ekr(W52, star)[0]


def test_weights_blow_up_a():
    a = build_example(W52, "a")
    Fa = blow_up(W52, a, [1, 2, 3])
    w1 = weights(W52, Fa, 1)
    assert w1.full_count == 45
    assert sorted(set(w1.weights.tolist())) == [0, 45]
    assert int(w1.heavy.sum()) == 7
    w2 = weights(W52, Fa, 2)
    assert w2.full_count == 9
    assert int(w2.heavy.sum()) == 7  # exactly the lines inside the generator


def test_xyz_blow_up_a_values():
    a = build_example(W52, "a")
    Fa = blow_up(W52, a, [1, 2, 3])
    S_in = W52.points[a.members[0]]
    S_out = next(P for P in W52.points if P.id not in a.members)
    assert xyz_chambers(W52, Fa, S_in) == (45, 0, 270)
    assert xyz_chambers(W52, Fa, S_out) == (0, 180, 135)


def test_xyz_identity_all_probes():
    for fam in ("a", "b"):
        F = blow_up(W52, build_example(W52, fam), [1, 2, 3])
        for s in (1, 2, 3):
            for S in W52.subspaces(s)[::23]:
                assert xyz_chamber_identity(W52, F, S)


def test_xyz_sspaces_heavy_probe():
    b = build_example(W52, "b")
    M = W52.points[0]  # the base point: heavy
    X, Y, Z = xyz_sspaces(W52, b, M)
    assert (X, Y) == (15, 0)
    assert xyz_sspace_identities(W52, b, M)


def test_xyz_sspaces_identities_all_points():
    b = build_example(W52, "b")
    for M in W52.points[::7]:
        assert xyz_sspace_identities(W52, b, M)
    for M in W52.subspaces(2)[::41]:
        assert xyz_sspace_identities(W52, b, M)


def test_json_round_trip(tmp_path):
    a = build_example(W52, "a")
    path = tmp_path / "a.json"
    save_ekr(W52, a, path)
    space2, F2 = load_ekr(path)
    assert space2 is W52
    assert F2.members == a.members
    assert F2.J == a.J
    d = ekr_to_json_dict(W52, a)
    assert d["kind"] == "symplectic" and d["J"] == [1]
