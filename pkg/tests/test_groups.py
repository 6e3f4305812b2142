from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from condflat.errors import (
    Inconsistent,
    InvalidGroup,
    IsoSearchBudgetExceeded,
    NotGenerating,
    NotHomomorphism,
    NotNormal,
    OrderTooLarge,
    UnsupportedParams,
)
from condflat.groups import (
    FiniteGroup,
    Hom,
    are_isomorphic,
    compose,
    cyclic,
    dihedral,
    direct_product,
    dumps_group,
    dumps_hom,
    elementary_abelian,
    enumerate_homs,
    find_isomorphism,
    generate,
    group_from_name,
    group_standard,
    hom_from_generator_images,
    identity_hom,
    is_normal,
    loads_group,
    loads_hom,
    normal_closure,
    normal_subgroups,
    pullback,
    quaternion8,
    quotient,
    symmetric,
    trivial_group,
    zero_hom,
)

import oracles

SMALL = [
    trivial_group(), cyclic(2), cyclic(3), cyclic(4), elementary_abelian(2, 2),
    cyclic(5), cyclic(6), symmetric(3),
]


def group_strategy(max_order=8):
    pool = [
        trivial_group(), cyclic(2), cyclic(3), cyclic(4), elementary_abelian(2, 2), cyclic(6),
        symmetric(3), dihedral(4), quaternion8(), elementary_abelian(2, 3), cyclic(8),
    ]
    return st.sampled_from([G for G in pool if G.order <= max_order])


def assert_group_axioms(G: FiniteGroup):
    t = np.asarray(G.table)
    n = G.order
    assert (t[0] == np.arange(n)).all() and (t[:, 0] == np.arange(n)).all()
    for row in t:
        assert sorted(row) == list(range(n))
    # t[t][a, b, c] = (ab)c and t[:, t][a, b, c] = a(bc)
    assert (t[t] == t[:, t]).all()


# --- construction -----------------------------------------------------------

@pytest.mark.parametrize("name,order", [
    ("1", 1), ("Z/7", 7), ("Z/2^3", 8), ("Z/3^2", 9), ("D_8", 8), ("D_10", 10),
    ("Q_8", 8), ("S_3", 6), ("S_4", 24), ("Z/2xS_3", 12), ("Z/2xZ/2xZ/3", 12),
])
def test_named_groups_satisfy_axioms(name, order):
    G = group_from_name(name)
    assert G.order == order
    assert_group_axioms(G)


def test_symmetric_table_matches_permutation_oracle():
    perms = sorted(permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    expected = [[index[oracles.perm_mul(a, b)] for b in perms] for a in perms]
    assert np.array_equal(symmetric(3).table, expected)


def test_quaternion_is_not_dihedral():
    Q, D = quaternion8(), dihedral(4)
    assert sorted(Q.element_orders.tolist()) != sorted(D.element_orders.tolist())
    assert not are_isomorphic(Q, D)
    assert Q.center.order == 2 and D.center.order == 2


def test_center_and_abelian():
    assert symmetric(3).center.order == len(oracles.symmetric_group(3).center())
    assert cyclic(6).is_abelian and not symmetric(3).is_abelian


def test_invalid_tables_rejected():
    with pytest.raises(InvalidGroup):
        FiniteGroup([[0, 1], [1, 1]])
    with pytest.raises(InvalidGroup):
        FiniteGroup([[1, 0], [0, 1]])
    # a Latin square with identity that is not associative
    loop = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(InvalidGroup):
        FiniteGroup(loop)


def test_order_cap_and_unsupported_params():
    with pytest.raises(OrderTooLarge):
        cyclic(200)
    with pytest.raises(OrderTooLarge):
        symmetric(6)
    with pytest.raises(UnsupportedParams):
        group_standard("dihedral", 0)
    with pytest.raises(UnsupportedParams):
        group_standard("alternating", 4)
    with pytest.raises(UnsupportedParams):
        elementary_abelian(4, 2)


# --- subgroups --------------------------------------------------------------

@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_normal_subgroup_count_matches_oracle(n):
    assert len(normal_subgroups(dihedral(n))) == len(oracles.dihedral_group(n).normal_subgroups())


def test_normal_subgroups_of_small_products():
    G = group_from_name("S_3xZ/2")
    assert len(normal_subgroups(G)) == len(oracles.product_group(oracles.symmetric_group(3), oracles.cyclic_group(2)).normal_subgroups())


def test_normal_closure_of_transposition_is_whole_s3():
    S3 = symmetric(3)
    t = next(x for x in range(6) if S3.element_orders[x] == 2)
    assert generate(S3, [t]).order == 2
    assert normal_closure(S3, [t]).order == 6


def test_quotient_requires_normal():
    S3 = symmetric(3)
    t = next(x for x in range(6) if S3.element_orders[x] == 2)
    with pytest.raises(NotNormal):
        quotient(S3, generate(S3, [t]))


def test_quotient_of_s3_by_a3():
    S3 = symmetric(3)
    A3 = generate(S3, [next(x for x in range(6) if S3.element_orders[x] == 3)])
    Q, p = quotient(S3, A3)
    assert Q.order == 2 and p.is_surjective() and p.kernel() == A3


def test_quotient_of_product_by_a3_has_order_four():
    G = group_from_name("S_3xZ/2")
    c3 = next(x for x in range(G.order) if G.element_orders[x] == 3)
    Q, _ = quotient(G, normal_closure(G, [c3]))
    assert Q.order == 4 and are_isomorphic(Q, elementary_abelian(2, 2))


# --- homomorphisms ----------------------------------------------------------

@pytest.mark.parametrize("G", SMALL, ids=lambda g: g.name)
@pytest.mark.parametrize("H", SMALL, ids=lambda g: g.name)
def test_enumerate_homs_matches_all_maps_oracle(G, H):
    homs = enumerate_homs(G, H)
    assert len(set(homs)) == len(homs)
    assert len(homs) == oracles.count_table_homs(G.table.tolist(), H.table.tolist())


def test_hom_count_z2_to_s3():
    assert len(enumerate_homs(cyclic(2), symmetric(3))) == oracles.count_homs(
        oracles.cyclic_group(2), oracles.symmetric_group(3)
    ) == 4


def test_hom_validation():
    with pytest.raises(NotHomomorphism):
        Hom(cyclic(2), cyclic(3), [0, 1])
    with pytest.raises(NotHomomorphism):
        Hom(cyclic(2), cyclic(2), [0])
    S3 = symmetric(3)
    with pytest.raises(NotGenerating):
        hom_from_generator_images(cyclic(4), [2], [0], cyclic(2))
    three_cycle = int(np.flatnonzero(S3.element_orders == 3)[0])
    with pytest.raises(Inconsistent):
        hom_from_generator_images(cyclic(4), [1], [three_cycle], S3)
    f = hom_from_generator_images(cyclic(4), [1], [1], cyclic(2))
    assert f.map.tolist() == [0, 1, 0, 1]


@settings(max_examples=40, deadline=None)
@given(group_strategy(), group_strategy(6), group_strategy(6), st.data())
def test_composition_is_a_hom_and_associative(G, H, K, data):
    fs, gs = enumerate_homs(G, H), enumerate_homs(H, K)
    f, g = data.draw(st.sampled_from(fs)), data.draw(st.sampled_from(gs))
    gf = compose(g, f)
    Hom(G, K, gf.map)  # validates
    assert compose(identity_hom(K), gf) == gf == compose(g, compose(f, identity_hom(G)))
    assert gf.kernel().issubset(G.whole()) and f.kernel().issubset(gf.kernel())


@settings(max_examples=30, deadline=None)
@given(group_strategy())
def test_isomorphism_with_relabelled_copy(G):
    rng = np.random.default_rng(G.order)
    perm = np.concatenate([[0], 1 + rng.permutation(G.order - 1)]) if G.order > 1 else np.array([0])
    inv = np.argsort(perm)
    t = perm[np.asarray(G.table)[inv][:, inv]]
    H = FiniteGroup(t, "copy")
    phi = find_isomorphism(G, H)
    assert phi is not None and phi.is_bijective()
    assert compose(phi.inverse(), phi) == identity_hom(G)


def test_iso_budget_is_enforced():
    G = elementary_abelian(2, 4)
    perm = np.array([0] + list(range(15, 0, -1)))
    inv = np.argsort(perm)
    H = FiniteGroup(perm[np.asarray(G.table)[inv][:, inv]], "copy")
    with pytest.raises(IsoSearchBudgetExceeded):
        find_isomorphism(G, H, budget=3)
    assert find_isomorphism(G, H) is not None


# --- products and pullbacks -------------------------------------------------

def test_direct_product_maps():
    P, i1, i2, p1, p2 = direct_product(cyclic(2), symmetric(3))
    assert P.order == 12
    assert compose(p1, i1) == identity_hom(cyclic(2))
    assert compose(p2, i2) == identity_hom(symmetric(3))
    assert compose(p1, i2).is_zero()


def test_pullback_of_z4_over_z2():
    Z4, Z2 = cyclic(4), cyclic(2)
    f = hom_from_generator_images(Z4, [1], [1], Z2)
    pb = pullback(f, f)
    G = oracles.cyclic_group(4)
    fd = {x: x[1] % 2 for x in G.elements}
    assert pb.apex.order == oracles.pullback_order(G, G, None, fd, fd) == 8
    assert compose(f, pb.p1) == compose(f, pb.p2)


@settings(max_examples=40, deadline=None)
@given(group_strategy(6), group_strategy(6), group_strategy(4), group_strategy(4), st.data())
def test_pullback_universal_property(A, C, B, T, data):
    f = data.draw(st.sampled_from(enumerate_homs(A, B)))
    g = data.draw(st.sampled_from(enumerate_homs(C, B)))
    pb = pullback(f, g)
    assert pb.apex.order == sum(1 for a in range(A.order) for c in range(C.order) if f(a) == g(c))
    # every commuting cone through T factors uniquely
    us = enumerate_homs(T, A)
    vs = enumerate_homs(T, C)
    for u in us[:6]:
        for v in vs[:6]:
            if compose(f, u) != compose(g, v):
                continue
            w = pb.factor(u, v)
            assert compose(pb.p1, w) == u and compose(pb.p2, w) == v
            others = [h for h in enumerate_homs(T, pb.apex) if compose(pb.p1, h) == u and compose(pb.p2, h) == v]
            assert others == [w]


@settings(max_examples=30, deadline=None)
@given(group_strategy(8), group_strategy(8), st.data())
def test_surjections_are_stable_under_pullback(A, C, data):
    Ns = normal_subgroups(A)
    N = data.draw(st.sampled_from(Ns))
    B, f = quotient(A, N)
    g = data.draw(st.sampled_from(enumerate_homs(C, B)))
    assert pullback(f, g).p2.is_surjective()


# --- serialization ----------------------------------------------------------

@pytest.mark.parametrize("name", ["1", "S_3", "Q_8", "Z/2xZ/4"])
def test_group_roundtrip(name):
    G = group_from_name(name)
    H = loads_group(dumps_group(G))
    assert H == G and H.name == G.name


def test_hom_roundtrip():
    f = enumerate_homs(symmetric(3), cyclic(2))[-1]
    assert loads_hom(dumps_hom(f), f.source, f.target) == f


def test_zero_hom():
    z = zero_hom(symmetric(3), cyclic(4))
    assert z.is_zero() and z.kernel().is_whole


def test_is_normal_center():
    for G in (dihedral(4), quaternion8(), symmetric(3)):
        assert is_normal(G, G.center)
