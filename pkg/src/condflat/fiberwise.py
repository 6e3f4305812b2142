"""Fiberwise localization of an extension: replace K by L(K) over the same Q.

Given 0 -> K -> E -> Q -> 0, the radical T(K) = ker(eta_K) is pushed into E;
when it is normal there, E-bar = E / T(K) sits in 0 -> L(K) -> E-bar -> Q -> 0
and the projection e: E -> E-bar is an L-equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RadicalNotNormalInTotal
from .exactseq import Extension, MorphismOfExtensions, extension_new
from .groups import FiniteGroup, Hom, Subgroup, compose, is_normal, quotient
from .reflectors import Reflector


@dataclass(frozen=True, eq=False)
class FiberwiseResult:
    input: Extension
    output: Extension
    e: Hom
    kernel_side: Hom  # eta_K
    certificate: Hom  # L(e), bijective

    @property
    def E_bar(self) -> FiniteGroup:
        return self.output.E

    def diagram_commutes(self) -> bool:
        inp, out = self.input, self.output
        left = np.array_equal(out.k.map[self.kernel_side.map], self.e.map[inp.k.map])
        right = np.array_equal(out.p.map[self.e.map], inp.p.map)
        return left and right


def pushed_radical(R: Reflector, ext: Extension) -> Subgroup:
    """Image of T(K) -> K -> E as a subgroup of E."""
    T = R.radical(ext.K)
    return Subgroup(ext.E, tuple(ext.k.map[list(T.carrier)].tolist()), check=False)


def fiberwise_localize(R: Reflector, ext: Extension) -> FiberwiseResult:
    TK = pushed_radical(R, ext)
    if not is_normal(ext.E, TK):
        raise RadicalNotNormalInTotal(
            f"{R.label}: T({ext.K.name}) is not normal in {ext.E.name}"
        )
    LK, eta_K = R.reflect(ext.K)
    E_bar, e = quotient(ext.E, TK, name=f"{ext.E.name}/T" if not TK.is_trivial() else ext.E.name)

    k_bar = np.full(LK.order, -1, dtype=np.intp)
    k_bar[eta_K.map] = e.map[ext.k.map]
    p_bar = np.full(E_bar.order, -1, dtype=np.intp)
    p_bar[e.map] = ext.p.map
    output = extension_new(Hom(LK, E_bar, k_bar), Hom(E_bar, ext.Q, p_bar))

    certificate = R.reflect_hom(e)
    if not certificate.is_bijective():
        raise AssertionError(f"{R.label}: L(e) is not bijective for {ext.describe()}")
    return FiberwiseResult(ext, output, e, eta_K, certificate)


def induced_total_map(src: FiberwiseResult, tgt: FiberwiseResult, v: Hom) -> Hom | None:
    """E-bar_src -> E-bar_tgt induced by v, or None if v does not respect the radicals."""
    vals = tgt.e.map[v.map]
    m = np.full(src.E_bar.order, -1, dtype=np.intp)
    m[src.e.map] = vals
    if not np.array_equal(m[src.e.map], vals):
        return None
    return Hom(src.E_bar, tgt.E_bar, m, check=False)


def functoriality_check(R: Reflector, m: MorphismOfExtensions) -> bool:
    """Whether the fiberwise construction carries m to a morphism of the localized extensions."""
    src = fiberwise_localize(R, m.source)
    tgt = fiberwise_localize(R, m.target)
    v_bar = induced_total_map(src, tgt, m.v)
    if v_bar is None:
        return False
    Lu = R.reflect_hom(m.u)
    so, to = src.output, tgt.output
    left = np.array_equal(v_bar.map[so.k.map], to.k.map[Lu.map])
    right = np.array_equal(m.w.map[so.p.map], to.p.map[v_bar.map])
    total = np.array_equal(v_bar.map[src.e.map], tgt.e.map[m.v.map])
    return left and right and total


def reflection_factorization(R: Reflector, result: FiberwiseResult) -> Hom:
    """The map q: E-bar -> L(E) with q∘e = eta_E.

    Raises AssertionError if eta_E does not factor through e, or if q differs
    from L(e)^-1∘eta_{E-bar}.
    """
    LE, eta_E = R.reflect(result.input.E)
    q = np.full(result.E_bar.order, -1, dtype=np.intp)
    q[result.e.map] = eta_E.map
    if not np.array_equal(q[result.e.map], eta_E.map):
        raise AssertionError("eta_E does not factor through e")
    factor = Hom(result.E_bar, LE, q, check=False)
    LEbar, eta_bar = R.reflect(result.E_bar)
    # factor must equal L(e)^{-1} ∘ eta_{E-bar}
    expected = compose(result.certificate.inverse(), eta_bar)
    if not np.array_equal(expected.map, factor.map):
        raise AssertionError("induced map is not the reflection of E-bar")
    return factor
