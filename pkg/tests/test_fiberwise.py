import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from condflat.catalog import catalog_build
from condflat.errors import RadicalNotNormalInTotal
from condflat.exactseq import MorphismOfExtensions, extension_of_normal, identity_morphism, pullback_extension
from condflat.fiberwise import (
    functoriality_check,
    fiberwise_localize,
    pushed_radical,
    reflection_factorization,
)
from condflat.groups import (
    Hom,
    dihedral,
    enumerate_homs,
    generate,
    group_from_name,
    normal_subgroups,
    symmetric,
)
from condflat.reflectors import Reflector, parse_reflector

CAT8 = catalog_build(8)
VERBAL = ["ab", "burnside:2", "nil:2"]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(VERBAL), st.sampled_from(CAT8.extensions))
def test_fiberwise_output_is_exact_and_certified(spec, ext):
    R = parse_reflector(spec)
    res = fiberwise_localize(R, ext)
    assert res.diagram_commutes()
    assert res.output.Q == ext.Q
    assert res.output.K.order == R.reflect(ext.K)[0].order
    assert res.E_bar.order * R.radical(ext.K).order == ext.E.order
    assert R.is_equivalence(res.e)
    reflection_factorization(R, res)


def test_fiberwise_of_d8_over_center_with_ab():
    D8 = dihedral(4)
    C4 = generate(D8, [1])
    ext = extension_of_normal(D8, C4)
    res = fiberwise_localize(parse_reflector("ab"), ext)
    # C4 is abelian, so nothing is killed
    assert res.E_bar.order == 8 and res.e.is_bijective()


def test_fiberwise_kills_commutators_of_kernel():
    G = group_from_name("S_3xZ/2")
    N = next(N for N in normal_subgroups(G) if N.order == 6 and not N.as_group()[0].is_abelian)
    res = fiberwise_localize(parse_reflector("ab"), extension_of_normal(G, N))
    assert res.E_bar.order == 4 and res.output.K.order == 2


@pytest.mark.parametrize("spec", ["null:Z/2", "null:Z/3", "null:S_3"])
def test_nullification_fiberwise_on_catalog(spec):
    # the radical of K is characteristic in K, so it is always normal in E
    R = parse_reflector(spec)
    for ext in CAT8.extensions:
        res = fiberwise_localize(R, ext)
        assert res.diagram_commutes() and res.certificate.is_bijective()


class _SkewRadical(Reflector):
    """Pretends the radical of K is a non-normal subgroup, to exercise the error path."""

    def radical(self, X):
        return generate(X, [int(np.flatnonzero(X.element_orders == 2)[0])])


def test_non_normal_radical_is_rejected():
    S3 = symmetric(3)
    R = _SkewRadical("skew", words=parse_reflector("ab").words)
    with pytest.raises(RadicalNotNormalInTotal):
        fiberwise_localize(R, extension_of_normal(S3, S3.whole()))


def test_pushed_radical_lives_in_total_group():
    S3 = symmetric(3)
    ext = extension_of_normal(S3, S3.whole())
    T = pushed_radical(parse_reflector("ab"), ext)
    assert T.order == 3 and T.parent == S3


@pytest.mark.parametrize("spec", VERBAL)
def test_identity_morphisms_are_preserved(spec):
    R = parse_reflector(spec)
    for ext in CAT8.extensions[::5]:
        assert functoriality_check(R, identity_morphism(ext))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(VERBAL), st.sampled_from([G for G in CAT8.groups if G.order > 1]), st.data())
def test_functoriality_on_endomorphisms(spec, G, data):
    R = parse_reflector(spec)
    N = data.draw(st.sampled_from(normal_subgroups(G)))
    ext = extension_of_normal(G, N)
    # endomorphisms of G preserving N induce morphisms of the extension
    for v in enumerate_homs(G, G)[:20]:
        if not N.mask[v.map[list(N)]].all():
            continue
        pos = np.full(G.order, -1, dtype=np.intp)
        pos[ext.k.map] = np.arange(ext.K.order)
        u = Hom(ext.K, ext.K, pos[v.map[ext.k.map]])
        w_map = np.zeros(ext.Q.order, dtype=np.intp)
        w_map[ext.p.map] = ext.p.map[v.map]
        w = Hom(ext.Q, ext.Q, w_map)
        assert functoriality_check(R, MorphismOfExtensions(ext, ext, u, v, w))


def _s3_in_product():
    G = group_from_name("S_3xZ/2")
    N = next(N for N in normal_subgroups(G) if N.order == 6 and not N.as_group()[0].is_abelian)
    return extension_of_normal(G, N)


def test_center_extension_of_d8_is_unchanged_by_ab():
    D8 = dihedral(4)
    res = fiberwise_localize(parse_reflector("ab"), extension_of_normal(D8, D8.center))
    assert res.E_bar == D8 and res.e.is_bijective()


@pytest.mark.parametrize("spec", ["ab", "null:Z/3"])
def test_s3_kernel_becomes_z2(spec):
    res = fiberwise_localize(parse_reflector(spec), _s3_in_product())
    assert res.output.K.order == 2 and res.E_bar.order == 4


@pytest.mark.parametrize("spec", VERBAL + ["null:Z/2"])
def test_local_kernel_gives_bijective_e(spec):
    R = parse_reflector(spec)
    for ext in CAT8.extensions:
        if R.is_local(ext.K):
            assert fiberwise_localize(R, ext).e.is_bijective()


@pytest.mark.parametrize("spec", VERBAL)
def test_pullback_comparison_is_functorial(spec):
    R = parse_reflector(spec)
    for ext in CAT8.extensions[::3]:
        for X in CAT8.up_to(4):
            for f in enumerate_homs(X, ext.Q)[:4]:
                _, m = pullback_extension(ext, f)
                assert functoriality_check(R, m)
