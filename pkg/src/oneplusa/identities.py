"""Exact commutator identities in free nilpotent algebras.

The group commutator of 1+x and 1+y collapses to 1+[x, y] once y sits deep
enough in the power filtration; the additivity and scaling defects of that
commutator, computed over Z and Z[lam] with no modular shortcuts, vanish in
all word degrees <= m.  Over a finite field the same statements are checked
by brute force at the level of the quotient (1+A^m)/(1+A, 1+A^m), with no
character theory involved.  The explorer at the bottom measures whether the
derived-subgroup intersection (1+J, 1+J) with 1+J^k collapses to
(1+J, 1+J^(k-1)) over finite fields, where the characteristic-zero argument
is unavailable; it reports orders and takes no side.
"""

import numpy as np

from .errors import NotBilinear, NotInvariant, NotWellDefined, VerificationFailed
from .gutkin import QuotientSpace
from .nilalg import (
    FREE_DIM_CAP,
    FieldRing,
    LAMBDA_RING,
    Poly,
    Z_RING,
    free_nilpotent,
)
from .unitgroup import (
    DEFAULT_GROUP_CAP,
    Subgroup,
    UnitGroup,
    commutator_subgroup,
    power_subgroup,
    unit,
)


def beta(g, h):
    """g h g^-1 h^-1 for unit elements; the group-theory commutator in the
    order matching the pairing definition."""
    return g * h * g.inverse() * h.inverse()


def _free_dim(gens, nil_index):
    return sum(gens ** L for L in range(1, nil_index))


def _truncation_index(gens, m):
    # Membership of the defect in 1+J^(m+1) only depends on the image mod
    # J^(m+1), so class m+1 is already a faithful check.  When the cap
    # allows, work one level deeper so the defect is visibly nonzero and
    # the grading argument has teeth.
    if _free_dim(gens, m + 2) <= FREE_DIM_CAP:
        return m + 2
    return m + 1


def _generator_word(J, indices):
    w = J.basis_element(indices[0])
    for i in indices[1:]:
        w = w * J.basis_element(i)
    return w


def _words_up_to_degree_vanish(a, m):
    ring = a.algebra.ring
    degs = a.algebra.graded_degrees
    return all(
        ring.is_zero(c) for c, d in zip(a.coords, degs) if d <= m
    )


def lemma_auxiliary_check(gens, n, m):
    """(1+x)(1+y)(1+x)^-1(1+y)^-1 = 1 + xy - yx exactly, for x a generator
    and y a product of m-1 generators, computed in the free algebra of class
    n truncated at J^(m+1).  Returns (passed, residual element)."""
    if m < 2:
        raise ValueError("the identity needs m >= 2")
    if gens < 1:
        raise ValueError("need at least one generator")
    N = free_nilpotent(Z_RING, gens, min(n, m + 1))
    x = N.basis_element(0)
    if gens == 1:
        picks = [0] * (m - 1)
    else:
        picks = [1 + (t % (gens - 1)) for t in range(m - 1)]
    y = _generator_word(N, picks)
    lhs = beta(unit(x), unit(y))
    rhs = unit(x * y - y * x)
    residual = lhs.a - rhs.a
    return residual.is_zero(), residual


def additivity_defect(m):
    """The unit beta(1+x1+x2, 1+y) beta(1+x1, 1+y)^-1 beta(1+x2, 1+y)^-1
    over Z, with y = a_1 ... a_(m-1) a product of fresh generators."""
    if m < 2:
        raise ValueError("the defect needs m >= 2")
    gens = m + 1
    names = ["x1", "x2"] + [f"a{j}" for j in range(1, m)]
    J = free_nilpotent(Z_RING, gens, _truncation_index(gens, m), names=names)
    x1, x2 = J.basis_element(0), J.basis_element(1)
    y = _generator_word(J, list(range(2, m + 1)))
    u, v = unit(x1), unit(x2)
    w = unit(y)
    return (
        beta(unit(x1 + x2), w)
        * beta(u, w).inverse()
        * beta(v, w).inverse()
    )


def additivity_defect_check(m):
    """All words of length <= m in the additivity defect have coefficient
    zero, i.e. the defect lies in 1+J^(m+1)."""
    return _words_up_to_degree_vanish(additivity_defect(m).a, m)


def scaling_defect(m):
    """beta(1+lam*x, 1+y) beta(1+x, 1+lam*y)^-1 over Z[lam]."""
    if m < 2:
        raise ValueError("the defect needs m >= 2")
    gens = m
    names = ["x"] + [f"a{j}" for j in range(1, m)]
    J = free_nilpotent(
        LAMBDA_RING, gens, _truncation_index(gens, m), names=names
    )
    lam = Poly.lam()
    x = J.basis_element(0)
    y = _generator_word(J, list(range(1, m))) if m > 1 else x
    return (
        beta(unit(x.scale(lam)), unit(y))
        * beta(unit(x), unit(y.scale(lam))).inverse()
    )


def scaling_defect_check(m):
    """The scaling defect lies in 1+J^(m+1), coefficients polynomial in
    lam; exact over Z[lam]."""
    return _words_up_to_degree_vanish(scaling_defect(m).a, m)


# -- finite-field verification at the quotient level ---------------------------


def _group_of(algebra, cap):
    G = getattr(algebra, "_unit_group", None)
    if G is None:
        G = UnitGroup(algebra, cap=cap)
        algebra._unit_group = G
    return G


def _quotient_pairing(group, m):
    """The commutator map (1+A) x (1+A^(m-1)) -> Q = (1+A^m)/(1+A, 1+A^m),
    verified to factor through (A/A^2) x (A^(m-1)/A^m) and to be biadditive
    with the scalar-swap symmetry.  Character-free; cached per level."""
    cache = getattr(group, "_quotient_pairing_cache", None)
    if cache is None:
        cache = group._quotient_pairing_cache = {}
    if m in cache:
        return cache[m]

    A = group.algebra
    whole = Subgroup.from_subspace(group, A.power_subspace(1))
    Sm = power_subgroup(group, m)
    Sm1 = power_subgroup(group, m - 1)
    K = commutator_subgroup(whole, Sm)

    Hm, emb, amb_to_sub = Sm.std_group
    K_sub = sorted(amb_to_sub[int(k)] for k in K.indices)
    Qt, proj, _ = Hm.group.quotient(K_sub)
    amb_to_Q = np.full(group.order, -1, dtype=np.int64)
    for i, s in enumerate(emb):
        amb_to_Q[int(s)] = proj[i]

    dom = QuotientSpace(A, A.power_subspace(2), A.power_subspace(1))
    cod = QuotientSpace(A, A.power_subspace(m), A.power_subspace(m - 1))

    T = group.table
    inv = group.group.inv
    garr = np.arange(group.order, dtype=np.int64)
    xkeys = [
        dom.project(group.coords_of_index(g)) for g in range(group.order)
    ]
    order = {}
    for g, k in enumerate(xkeys):
        order.setdefault(k, []).append(g)
    blocks = sorted(order.items())

    values = {}
    for h in Sm1.indices:
        h = int(h)
        yk = cod.project(group.coords_of_index(h))
        w = T[T[T[garr, h], inv], int(inv[h])]
        qv = amb_to_Q[w]
        if (qv < 0).any():
            g = int(np.nonzero(qv < 0)[0][0])
            raise VerificationFailed(
                "pairing-level-containment", witness=(g, h)
            )
        for xk, members in blocks:
            vals = qv[members]
            if not (vals == vals[0]).all():
                bad = members[int(np.nonzero(vals != vals[0])[0][0])]
                raise NotWellDefined(witness=(members[0], bad, h))
            key = (xk, yk)
            got = int(vals[0])
            if key not in values:
                values[key] = got
            elif values[key] != got:
                raise NotWellDefined(witness=(key, values[key], got))

    field = group.field
    q = field.q

    def add_coords(a, b):
        return tuple(field.add_idx(x, y) for x, y in zip(a, b))

    def scale_coords(lam, a):
        return tuple(field.mul_idx(lam, x) for x in a)

    for x1 in dom.all_coords():
        for x2 in dom.all_coords():
            for y in cod.all_coords():
                lhs = values[(add_coords(x1, x2), y)]
                rhs = int(Qt.table[values[(x1, y)], values[(x2, y)]])
                if lhs != rhs:
                    raise NotBilinear(witness=("additive-in-x", x1, x2, y))
    for x in dom.all_coords():
        for y1 in cod.all_coords():
            for y2 in cod.all_coords():
                lhs = values[(x, add_coords(y1, y2))]
                rhs = int(Qt.table[values[(x, y1)], values[(x, y2)]])
                if lhs != rhs:
                    raise NotBilinear(witness=("additive-in-y", x, y1, y2))
    for lam in range(q):
        for x in dom.all_coords():
            for y in cod.all_coords():
                if values[(scale_coords(lam, x), y)] != values[
                    (x, scale_coords(lam, y))
                ]:
                    raise NotBilinear(witness=("scalar-swap", lam, x, y))

    result = {
        "K": K,
        "Sm": Sm,
        "q_order": int(Qt.order),
        "values": values,
    }
    cache[m] = result
    return result


def finite_pairing_check(algebra, m, zeta, cap=DEFAULT_GROUP_CAP):
    """Brute-force check, independent of any character, that the commutator
    map factors through (A/A^2) x (A^(m-1)/A^m) into the finite quotient
    Q = (1+A^m)/(1+A, 1+A^m) and is bilinear there; then that zeta is an
    actual character of 1+A^m killing (1+A, 1+A^m), which is exactly
    conjugation invariance."""
    if m < 2:
        raise ValueError("the pairing needs m >= 2")
    G = _group_of(algebra, cap)
    data = _quotient_pairing(G, m)

    Sm = data["Sm"]
    T = G.table
    for a in Sm.indices:
        for b in Sm.indices:
            a, b = int(a), int(b)
            if zeta[a] * zeta[b] != zeta[int(T[a, b])]:
                raise VerificationFailed(
                    "zeta-multiplicative", witness=(a, b)
                )
    for k in data["K"].indices:
        if zeta[int(k)] != 1:
            raise NotInvariant(witness=int(k))
    return True


# -- the derived-intersection question over finite fields ----------------------


def halasi_explore(field, num_gens, n, k, cap=DEFAULT_GROUP_CAP):
    """Orders of (1+J,1+J) intersected with 1+J^k versus (1+J,1+J^(k-1)) in
    the free nilpotent algebra of class n over a finite field.  The right
    side is always contained in the left (that containment is asserted);
    whether they are equal is reported, not asserted."""
    if k < 2:
        raise ValueError("the comparison needs k >= 2")
    J = free_nilpotent(FieldRing(field), num_gens, n)
    G = _group_of(J, cap)
    whole = Subgroup.from_subspace(G, J.power_subspace(1))
    derived = commutator_subgroup(G)
    Sk = power_subgroup(G, k)
    lhs_idx = sorted(
        set(int(x) for x in derived.indices)
        & set(int(x) for x in Sk.indices)
    )
    lhs = Subgroup(G, lhs_idx)
    rhs = commutator_subgroup(whole, power_subgroup(G, k - 1))
    rhs_set = set(int(x) for x in rhs.indices)
    if not rhs_set <= set(lhs_idx):
        raise VerificationFailed(
            "derived-intersection-containment",
            witness=sorted(rhs_set - set(lhs_idx))[:4],
        )
    return {
        "field": field.q,
        "num_gens": num_gens,
        "nil_index": n,
        "k": k,
        "lhs_order": lhs.order,
        "rhs_order": rhs.order,
        "equal": lhs.order == rhs.order,
    }
