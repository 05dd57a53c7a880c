import numpy as np
import pytest

from oneplusa.errors import CapExceeded, NotASubgroup, NotNormal
from oneplusa.exactfield import gf
from oneplusa.nilalg import (
    FieldRing,
    Subspace,
    Z_RING,
    free_nilpotent,
    strictly_upper_triangular,
)
from oneplusa.unitgroup import (
    Subgroup,
    UnitGroup,
    check_commutator_containment,
    check_commutator_theorem,
    commutator_subgroup,
    power_subgroup,
    quotient_group,
    subgroup_closure,
    unit,
)


def ul(n, q):
    return UnitGroup(strictly_upper_triangular(n, gf(q)))


def test_index_coords_roundtrip():
    G = ul(3, 3)
    for n in (0, 1, 5, 13, 26):
        assert G.index_of_coords(G.coords_of_index(n)) == n
    # coordinate 0 is the most significant digit
    assert G.coords_of_index(1) == (0, 0, 1)
    assert G.coords_of_index(9) == (1, 0, 0)


def test_geometric_series_inverse():
    G = ul(3, 2)
    u = unit(G.algebra.from_labels({"e12": 1, "e23": 1}))
    v = u.inverse()
    # 1 + sum (-a)^i = 1 + e12 + e23 + e13 over GF(2)
    assert v.a.coords == (1, 1, 1)
    assert (u * v).is_identity() and (v * u).is_identity()


def test_table_is_a_group_exhaustively():
    for G in (ul(3, 2), ul(3, 3), ul(3, 4)):
        T = G.table
        n = G.order
        assert (T[0, :] == np.arange(n)).all()
        assert (T[:, 0] == np.arange(n)).all()
        left = T[T[:, :, None], np.arange(n)[None, None, :]]
        right = T[np.arange(n)[:, None, None], T[None, :, :]]
        assert (left == right).all()
        inv = G.group.inv
        assert (T[np.arange(n), inv] == 0).all()


def test_table_matches_element_arithmetic():
    G = ul(3, 3)
    rng = np.random.default_rng(0)
    for _ in range(50):
        a, b = (int(x) for x in rng.integers(0, G.order, size=2))
        u = G.element(a) * G.element(b)
        assert G.index_of(u) == G.mul(a, b)


def test_ul32_classes():
    G = ul(3, 2)
    sizes = [len(c) for c in G.conjugacy_classes()]
    assert sizes == [1, 1, 2, 2, 2]
    assert G.exponent() == 4
    assert sorted(G.center_indices().tolist()) == [0, 1]  # 1 and 1 + e13


def test_ul33_classes():
    G = ul(3, 3)
    sizes = [len(c) for c in G.conjugacy_classes()]
    assert sizes == [1, 1, 1] + [3] * 8
    assert G.exponent() == 3
    # the three singletons are the center 1 + A^2 = {1, 1+e13, 1+2e13}
    assert G.center_indices().tolist() == [0, 1, 2]


def test_class_of_partitions():
    for G in (ul(3, 2), ul(3, 4), ul(4, 2)):
        classes = G.conjugacy_classes()
        assert sum(len(c) for c in classes) == G.order
        for t, c in enumerate(classes):
            assert (G.class_of[c] == t).all()
        # closed under conjugation by a non-generator sample
        T, inv = G.table, G.group.inv
        g = G.order - 1
        for c in classes:
            assert set(T[T[int(inv[g]), c], g].tolist()) == set(c.tolist())


def test_generators_generate():
    for G in (ul(3, 2), ul(3, 4), ul(4, 3)):
        gens = G.generator_indices()
        assert len(gens) == G.field.k * G.algebra.dim
        assert len(G.group.subgroup_closure(gens)) == G.order


def test_power_subgroups_normal_lagrange():
    G = ul(4, 2)
    for m in (1, 2, 3):
        H = power_subgroup(G, m)
        assert G.order % H.order == 0
        assert H.is_normal()
    assert power_subgroup(G, 2).order == 8
    assert power_subgroup(G, 3).order == 2
    assert power_subgroup(G, 4).order == 1


def test_commutator_subgroup_ul4():
    G = ul(4, 2)
    D = commutator_subgroup(G)
    P = power_subgroup(G, 2)
    assert D.order == 8
    assert D.indices.tolist() == P.indices.tolist()


def test_commutator_subgroup_heisenberg():
    G = ul(3, 3)
    D = commutator_subgroup(G)
    assert D.order == 3
    assert D.indices.tolist() == [0, 1, 2]


def test_commutator_of_two_subgroups():
    G = ul(4, 2)
    whole = Subgroup.from_subspace(G, G.algebra.power_subspace(1))
    S2 = power_subgroup(G, 2)
    S3 = power_subgroup(G, 3)
    C = commutator_subgroup(whole, S2)
    # (1+A, 1+A^2) lands inside 1+A^3, and here fills it
    assert C.order == S3.order == 2
    assert set(map(int, C.indices)) == set(map(int, S3.indices))
    H = ul(3, 2)
    with pytest.raises(TypeError):
        commutator_subgroup(whole, power_subgroup(H, 2))


def test_quotient_group_is_a_homomorphic_image():
    G = ul(4, 2)
    Q, proj = quotient_group(G, G.algebra.power_subspace(2))
    assert Q.order == 2 ** 3  # dim A/A^2 = 3
    T, QT = G.table, Q.table
    for x in range(G.order):
        row_ok = (proj[T[x]] == QT[proj[x]][proj]).all()
        assert row_ok
    assert Q.group.is_abelian()


def test_commutator_theorem_all_levels():
    for alg in (
        strictly_upper_triangular(4, gf(2)),
        strictly_upper_triangular(3, gf(3)),
        free_nilpotent(FieldRing(gf(2)), 2, 3),
    ):
        top = alg.nilpotency_index
        for m in range(1, top + 1):
            for n in range(1, top + 1):
                ok, witness = check_commutator_theorem(alg, m, n)
                assert ok, (m, n, witness)


def test_subgroup_verification_accepts_closed_set():
    G = ul(3, 2)
    H = Subgroup(G, [0, G.index_of_coords((1, 0, 0))])  # {1, 1+e12}
    assert H.order == 2


def test_subgroup_not_closed_detected():
    G = ul(3, 2)
    bad = [0, G.index_of_coords((1, 0, 0)), G.index_of_coords((0, 1, 0))]
    with pytest.raises(NotASubgroup):
        Subgroup(G, bad)
    with pytest.raises(NotASubgroup):
        Subgroup.from_subspace(G, Subspace.unit(G.algebra, [0, 1]))


def test_std_group_embedding():
    G = ul(4, 2)
    H = power_subgroup(G, 2)
    Hg, emb, amb_to_sub = H.std_group
    assert Hg.order == H.order == 8
    for a in range(Hg.order):
        for b in range(Hg.order):
            assert int(emb[Hg.table[a, b]]) == G.mul(int(emb[a]), int(emb[b]))
    assert all(H.contains_index(int(x)) for x in emb)
    assert amb_to_sub[int(emb[3])] == 3


def test_quotient_by_center():
    G = ul(3, 2)
    Z = power_subgroup(G, 2)
    Q, proj, reps = G.group.quotient(Z.indices)
    assert Q.order == 4
    assert Q.is_abelian()
    assert Q.exponent() == 2
    assert proj[0] == 0 and reps[0] == 0
    with pytest.raises(NotNormal):
        G.group.quotient([0, G.index_of_coords((1, 0, 0))])  # {1,1+e12} is not normal


def test_subgroup_closure_small():
    G = ul(3, 2)
    H = subgroup_closure(G, [G.index_of_coords((1, 0, 0))])
    assert H.order == 2
    K = subgroup_closure(G, [G.index_of_coords((1, 0, 0)), G.index_of_coords((0, 1, 0))])
    assert K.order == 8  # e12, e23 generate everything


def test_unit_elements_over_integers():
    J = free_nilpotent(Z_RING, 2, 4)
    x1, x2 = J.basis_element(0), J.basis_element(1)
    u, v = unit(x1), unit(x2)
    assert (u * u.inverse()).is_identity()
    assert (u.inverse() * u).is_identity()
    c = u.commutator(v)
    # defining relation u v = v u [u, v]
    assert (v * u) * c == u * v
    # leading term of the commutator is the ring bracket x1 x2 - x2 x1
    bracket = x1 * x2 - x2 * x1
    diff = c.a - bracket
    assert all(
        diff.coords[t] == 0
        for t, lab in enumerate(J.labels)
        if len(lab.split("*")) <= 2
    )


def test_unit_element_powers_and_order():
    G = ul(3, 2)
    u = unit(G.algebra.from_labels({"e12": 1, "e23": 1}))
    assert (u ** 2).a.coords == (0, 0, 1)  # (1+a)^2 = 1 + e13
    assert (u ** 4).is_identity()
    assert u.order() == 4
    assert (u ** -1) == u.inverse()


def test_commutator_containment_small():
    for alg in (
        strictly_upper_triangular(3, gf(2)),
        strictly_upper_triangular(4, gf(2)),
        free_nilpotent(FieldRing(gf(2)), 2, 3),
    ):
        results = check_commutator_containment(alg)
        assert results  # at least (m, n) = (1, 1)
        for r in results:
            assert r["lhs_order"] <= r["rhs_order"]


def test_group_cap():
    with pytest.raises(CapExceeded):
        UnitGroup(strictly_upper_triangular(3, gf(2)), cap=4)
    big = UnitGroup(free_nilpotent(FieldRing(gf(2)), 2, 4))
    assert big.order == 2 ** 14
    with pytest.raises(CapExceeded):
        _ = big.table
