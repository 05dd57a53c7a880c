"""Monomial descent and polarizations.

The small cases are frozen by hand.  For U(3, 2) the whole pipeline is
pinned object by object: the scalar level, the pairing table, the matrix of
the induced map, the chosen line, both ideals, both extensions and the final
certificate.  Larger algebras get structural assertions (level sequence,
dimension drops, extension counts) plus the end-to-end verification that
induction really reproduces the character.
"""

import itertools
import json
import random

import pytest

from oneplusa.chars import character_table, induce, restrict, ClassFunction
from oneplusa.errors import (
    NoLineFound,
    NotInvariant,
    SearchExhausted,
    VerificationFailed,
)
from oneplusa.exactfield import Cyclotomic, gf
from oneplusa.gutkin import (
    QuotientSpace,
    _all_subspaces,
    _bracket_value,
    build_ideals,
    choose_line,
    commutator_pairing,
    extension_set,
    find_polarization,
    gutkin_decompose,
    minimal_scalar_level,
    phi_map,
    standard_additive_character,
    verify_gutkin_all,
)
from oneplusa.linalg import rref
from oneplusa.nilalg import (
    Algebra,
    FieldRing,
    Subspace,
    free_nilpotent,
    is_subalgebra,
    strictly_upper_triangular,
)
from oneplusa.unitgroup import Subgroup, UnitGroup, power_subgroup

ONE = Cyclotomic.rational(1)
MINUS_ONE = Cyclotomic.rational(-1)


def ul_group(n, q):
    return UnitGroup(strictly_upper_triangular(n, gf(q)))


# -- quotient coordinates ------------------------------------------------------


def test_quotient_space_roundtrip():
    A = strictly_upper_triangular(4, gf(2))
    Q = QuotientSpace(A, A.power_subspace(3), A.power_subspace(2))
    # A^2/A^3 for the 4x4 group: classes of e13 and e24
    assert Q.dim == 2
    assert Q.rows == ((0, 0, 0, 1, 0, 0), (0, 0, 0, 0, 1, 0))
    for c in Q.all_coords():
        assert Q.project(Q.rep(c)) == c
    # the deeper power projects to zero
    assert Q.project(A.power_subspace(3).rows[0]) == (0, 0)


def test_quotient_space_rejects_outside_vectors():
    A = strictly_upper_triangular(4, gf(2))
    Q = QuotientSpace(A, A.power_subspace(3), A.power_subspace(2))
    with pytest.raises(ValueError):
        Q.project((1, 0, 0, 0, 0, 0))  # e12 is not in A^2


# -- the 8-element group, everything pinned by hand ---------------------------


def test_u32_scalar_level():
    G = ul_group(3, 2)
    tab = character_table(G)
    chi = tab.chars[-1]
    assert chi.degree_int() == 2
    m, zeta = minimal_scalar_level(chi)
    assert m == 2
    # 1 + A^2 = {1, 1+e13}; the central character sends 1+e13 to -1
    assert zeta == {0: ONE, 1: MINUS_ONE}


def test_u32_scalar_level_of_linear_character():
    G = ul_group(3, 2)
    tab = character_table(G)
    m, zeta = minimal_scalar_level(tab.chars[0])
    assert m == 1
    assert len(zeta) == G.order


def test_u32_pairing_table():
    G = ul_group(3, 2)
    tab = character_table(G)
    m, zeta = minimal_scalar_level(tab.chars[-1])
    pairing = commutator_pairing(G, m, zeta)
    # both sides are A/A^2 with basis classes of e12, e23
    assert pairing.dom.rows == ((1, 0, 0), (0, 1, 0))
    assert pairing.cod.rows == ((1, 0, 0), (0, 1, 0))
    # (1+e12)(1+e23)(1+e12)^-1(1+e23)^-1 = 1+e13 picks up the -1
    assert pairing.value((1, 0), (0, 1)) == MINUS_ONE
    assert pairing.value((0, 1), (1, 0)) == MINUS_ONE
    for x in pairing.dom.all_coords():
        assert pairing.value(x, x) == ONE
    assert len(pairing.values) == 16


def test_u32_matrix_line_and_ideals():
    G = ul_group(3, 2)
    tab = character_table(G)
    m, zeta = minimal_scalar_level(tab.chars[-1])
    pairing = commutator_pairing(G, m, zeta)
    phi = phi_map(pairing)
    # psi(1) = -1 over F_2, so each entry is the coefficient itself
    assert phi.rows == ((0, 1), (1, 0))
    line = choose_line(phi)
    # (1,0) and (0,1) both work; the scan order prefers pivot position 0
    assert line == (1, 0)
    A1, U = build_ideals(phi, line)
    assert A1.rows == ((1, 0, 0), (0, 0, 1))  # span{e12, e13}
    assert U.rows == A1.rows
    assert A1.dim == G.algebra.dim - 1


def test_u32_extension_set():
    G = ul_group(3, 2)
    tab = character_table(G)
    m, zeta = minimal_scalar_level(tab.chars[-1])
    pairing = commutator_pairing(G, m, zeta)
    phi = phi_map(pairing)
    A1, U = build_ideals(phi, choose_line(phi))
    exts = extension_set(G, U, m, zeta, A1)
    assert len(exts) == 2
    # indices in 1+U: 0 = identity, 1 = 1+e13, 4 = 1+e12, 5 = 1+e12+e13
    assert exts[0] == {0: ONE, 1: MINUS_ONE, 4: ONE, 5: MINUS_ONE}
    assert exts[1] == {0: ONE, 1: MINUS_ONE, 4: MINUS_ONE, 5: ONE}
    # conjugating by 1+e23 swaps the two extensions
    g = G.index_of_coords((0, 1, 0))
    T = G.table
    conj = {h: exts[0][int(T[T[g, h], G.inv(g)])] for h in exts[0]}
    assert conj == exts[1]


def test_u32_full_certificate():
    G = ul_group(3, 2)
    tab = character_table(G)
    chi = tab.chars[-1]
    datum = gutkin_decompose(chi)
    assert datum.verified
    assert len(datum.chain) == 1
    assert datum.chain[0].rows == ((1, 0, 0), (0, 0, 1))
    assert datum.alpha.degree_int() == 1
    # q^(dim A - dim B) = 2^(3-2) = deg chi
    assert chi.degree_int() == 2 ** (G.algebra.dim - datum.bottom_space.dim)
    assert datum.induced_from_bottom() == chi
    # alpha is -1 on the element that maps to 1+e13 upstairs
    bottom = {int(t): i for i, t in enumerate(datum.emb_to_top)}
    e13_top = G.index_of_coords((0, 0, 1))
    assert datum.alpha.value_at_index(bottom[e13_top]) == MINUS_ONE


def test_linear_character_needs_no_descent():
    G = ul_group(3, 2)
    tab = character_table(G)
    datum = gutkin_decompose(tab.chars[1])
    assert datum.chain == []
    assert datum.steps == []
    assert datum.bottom_space.dim == G.algebra.dim
    assert datum.alpha == tab.chars[1]
    assert datum.verified


# -- deeper descent on the 4x4 group ------------------------------------------


def test_u42_degree_four_descends_twice():
    G = ul_group(4, 2)
    tab = character_table(G)
    chi = tab.chars[-1]
    assert chi.degree_int() == 4
    m, _ = minimal_scalar_level(chi)
    assert m == 3  # scalar on 1+A^3 but not on 1+A^2
    datum = gutkin_decompose(chi)
    assert [len(s.rows) for s in datum.chain] == [5, 4]
    assert [step.m for step in datum.steps] == [3, 2]
    assert datum.steps[0].pairing.dom.dim == 3  # A/A^2
    assert datum.steps[0].pairing.cod.dim == 2  # A^2/A^3
    assert len(datum.steps[0].u.rows) == 2
    assert datum.steps[0].num_extensions == 2
    assert datum.verified
    assert datum.induced_from_bottom() == chi


def test_u42_chain_is_nested():
    G = ul_group(4, 2)
    tab = character_table(G)
    datum = gutkin_decompose(tab.chars[-1])
    full = Subspace.from_vectors(G.algebra, G.algebra.basis())
    spaces = [full] + list(datum.chain)
    for big, small in zip(spaces, spaces[1:]):
        assert big.contains_subspace(small)
        assert big.dim == small.dim + 1
        assert is_subalgebra(G.algebra, small)


def test_u42_induction_is_transitive_along_the_chain():
    # inducing alpha in two hops B -> A1 -> A agrees with the certificate
    G = ul_group(4, 2)
    tab = character_table(G)
    chi = tab.chars[-1]
    datum = gutkin_decompose(chi)
    A1_space, B_space = datum.chain
    SA1 = Subgroup.from_subspace(G, A1_space)
    H1, emb1, amb_to_mid = SA1.std_group
    # rewrite B in A1 coordinates and alpha on the copy of 1+B inside H1
    B_rel = Subspace.from_vectors(
        H1.algebra, [A1_space.coords_of(r) for r in B_space.rows]
    )
    SB = Subgroup.from_subspace(H1, B_rel)
    HB, embB, _ = SB.std_group
    bottom = {int(t): i for i, t in enumerate(datum.emb_to_top)}
    vals = []
    for cls in HB.conjugacy_classes():
        top = int(emb1[int(embB[int(cls[0])])])
        vals.append(datum.alpha.value_at_index(bottom[top]))
    rho = ClassFunction(HB, tuple(vals))
    mid = induce(rho, SB)
    top_chi = induce(mid, SA1)
    assert top_chi == chi


# -- odd characteristic and psi independence ----------------------------------


def test_u33_extension_count():
    G = ul_group(3, 3)
    tab = character_table(G)
    chi = tab.chars[-1]
    assert chi.degree_int() == 3
    datum = gutkin_decompose(chi)
    assert len(datum.steps) == 1
    assert datum.steps[0].num_extensions == 3
    assert datum.bottom_space.dim == 2
    assert datum.verified


def test_changing_psi_moves_phi_but_not_the_ideals():
    G = ul_group(3, 3)
    tab = character_table(G)
    m, zeta = minimal_scalar_level(tab.chars[-1])
    pairing = commutator_pairing(G, m, zeta)
    phi1 = phi_map(pairing)
    std = standard_additive_character(G.field)
    phi2 = phi_map(pairing, lambda t: std(G.field.mul_idx(2, t)))
    assert phi1.rows == ((0, 1), (2, 0))
    assert phi2.rows == ((0, 2), (1, 0))
    line1, line2 = choose_line(phi1), choose_line(phi2)
    assert line1 == line2 == (1, 0)
    A1a, Ua = build_ideals(phi1, line1)
    A1b, Ub = build_ideals(phi2, line2)
    assert A1a.rows == A1b.rows
    assert Ua.rows == Ub.rows


def test_pairing_scalar_swap_beyond_prime_field():
    # over GF(4) the swap identity is checked for lambda outside F_2
    G = ul_group(3, 4)
    tab = character_table(G)
    m, zeta = minimal_scalar_level(tab.chars[-1])
    pairing = commutator_pairing(G, m, zeta)
    F = G.field
    lam = F.gen.index
    assert lam not in (0, 1)
    for x in pairing.dom.all_coords():
        for y in pairing.cod.all_coords():
            lx = tuple(F.mul_idx(lam, c) for c in x)
            ly = tuple(F.mul_idx(lam, c) for c in y)
            assert pairing.value(lx, y) == pairing.value(x, ly)


# -- failure paths -------------------------------------------------------------


def test_non_invariant_zeta_is_rejected():
    # 1+A^2 of the 4x4 group is abelian, so "-1 on the e14 coefficient" is a
    # genuine character of it, but conjugation by 1+e34 sends 1+e13 to
    # 1+e13+e14 and breaks invariance
    G = ul_group(4, 2)
    S2 = power_subgroup(G, 2)
    zeta = {}
    for s in S2.indices:
        c = G.coords_of_index(int(s))
        zeta[int(s)] = MINUS_ONE if c[5] else ONE
    with pytest.raises(NotInvariant):
        commutator_pairing(G, 2, zeta)


def test_trivial_zeta_gives_zero_matrix_and_no_line():
    G = ul_group(3, 2)
    zeta = {0: ONE, 1: ONE}
    pairing = commutator_pairing(G, 2, zeta)
    assert all(v == ONE for v in pairing.values.values())
    phi = phi_map(pairing)
    assert phi.is_zero()
    with pytest.raises(NoLineFound):
        choose_line(phi)


def test_decompose_rejects_reducible_input():
    G = ul_group(3, 2)
    tab = character_table(G)
    chi = tab.chars[0]
    doubled = ClassFunction(G, tuple(v + v for v in chi.values))
    with pytest.raises(ValueError):
        gutkin_decompose(doubled)


# -- whole-table sweeps --------------------------------------------------------


@pytest.mark.parametrize(
    "n,q,expected",
    [(3, 2, 5), (3, 3, 11), (4, 2, 16)],
)
def test_verify_all_upper_triangular(n, q, expected):
    A = strictly_upper_triangular(n, gf(q))
    report = verify_gutkin_all(A)
    assert report["characters"] == expected
    assert report["verified"] == expected
    for entry in report["entries"]:
        assert entry["verified"]


def test_verify_all_free_algebra():
    A = free_nilpotent(FieldRing(gf(2)), 2, 3)
    report = verify_gutkin_all(A)
    assert report["characters"] == 40
    assert report["verified"] == 40
    degs = sorted(e["degree"] for e in report["entries"])
    assert degs == [1] * 32 + [2] * 8


def test_free_33_sample_character():
    # one degree-3 character of the 729-element group; the full sweep lives
    # in the acceptance suite
    A = free_nilpotent(FieldRing(gf(3)), 2, 3)
    G = UnitGroup(A)
    tab = character_table(G)
    chi = tab.chars[-1]
    assert chi.degree_int() == 3
    datum = gutkin_decompose(chi)
    assert datum.bottom_space.dim == 5
    assert [step.m for step in datum.steps] == [2]
    assert datum.steps[0].num_extensions == 3
    assert datum.verified


def test_decomposition_is_deterministic():
    def digest():
        A = strictly_upper_triangular(3, gf(3))
        G = UnitGroup(A)
        tab = character_table(G)
        return json.dumps(
            gutkin_decompose(tab.chars[-1]).to_json(), sort_keys=True
        )

    assert digest() == digest()


# -- polarizations -------------------------------------------------------------


def test_polarization_zero_functional_is_everything():
    A = strictly_upper_triangular(3, gf(2))
    B = find_polarization(A, (0, 0, 0))
    assert B.dim == 3


def test_polarization_abelian_algebra():
    # nilpotency index 2 means the commutator form vanishes identically
    A = free_nilpotent(FieldRing(gf(3)), 2, 2)
    B = find_polarization(A, tuple(1 for _ in range(A.dim)))
    assert B.dim == A.dim


def test_polarization_heisenberg():
    A = strictly_upper_triangular(3, gf(2))
    B = find_polarization(A, (0, 0, 1))
    assert B.rows == ((1, 0, 0), (0, 0, 1))  # span{e12, e13}


def _isotropic_subalgebra(alg, f, space):
    if not is_subalgebra(alg, space):
        return False
    els = space.row_elements()
    return all(
        alg.ring.is_zero(_bracket_value(alg, f, x, y))
        for x in els
        for y in els
    )


def _brute_force_best(alg, f):
    for k in range(alg.dim, 0, -1):
        for rows in _all_subspaces(alg, k):
            if _isotropic_subalgebra(alg, f, Subspace.from_vectors(alg, rows)):
                return k
    return 0


def test_polarization_matches_brute_force_on_u32():
    A = strictly_upper_triangular(3, gf(2))
    for f in itertools.product(range(2), repeat=3):
        assert find_polarization(A, f).dim == _brute_force_best(A, f)


def test_polarization_matches_brute_force_dim4():
    # a*b = c and nothing else; d is a direct abelian summand
    sc = {(0, 1): ((2, 1),)}
    A = Algebra(FieldRing(gf(2)), 4, sc, labels=("a", "b", "c", "d"))
    for f in itertools.product(range(2), repeat=4):
        assert find_polarization(A, f).dim == _brute_force_best(A, f)


def test_polarization_random_functionals():
    rng = random.Random(0)
    algebras = [
        strictly_upper_triangular(3, gf(2)),
        strictly_upper_triangular(3, gf(3)),
        strictly_upper_triangular(4, gf(2)),
        free_nilpotent(FieldRing(gf(2)), 2, 3),
        free_nilpotent(FieldRing(gf(3)), 2, 3),
    ]
    for alg in algebras:
        q = alg.ring.field.q
        basis = alg.basis()
        ops = alg.ring.linalg_ops()
        for _ in range(20):
            f = tuple(rng.randrange(q) for _ in range(alg.dim))
            B = find_polarization(alg, f)
            assert _isotropic_subalgebra(alg, f, B)
            gram = [
                tuple(_bracket_value(alg, f, x, y) for y in basis)
                for x in basis
            ]
            rank = len(rref(gram, ops)[0])
            assert B.dim == alg.dim - rank // 2


def test_polarization_requires_a_field():
    from oneplusa.nilalg import IntegerRing, Z_RING

    A = free_nilpotent(Z_RING, 2, 2)
    with pytest.raises(TypeError):
        find_polarization(A, (0,) * A.dim)
