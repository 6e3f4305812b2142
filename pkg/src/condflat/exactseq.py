"""Short exact sequences 0 -> K -> E -> Q -> 0 and the homological lemmas."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .errors import ImageNotKernel, NotCommuting, NotEpi, NotMono, NotSplit, ParseError
from .groups import (
    FiniteGroup,
    Hom,
    Subgroup,
    _backtrack_homs,
    _read_group,
    compose,
    dumps_group,
    dumps_hom,
    enumerate_homs,
    identity_hom,
    image,
    kernel,
    loads_hom,
    pullback,
    quotient,
)


@dataclass(frozen=True, eq=False)
class Extension:
    """A short exact sequence stored as its two maps k: K -> E and p: E -> Q."""

    k: Hom
    p: Hom

    @property
    def K(self) -> FiniteGroup:
        return self.k.source

    @property
    def E(self) -> FiniteGroup:
        return self.k.target

    @property
    def Q(self) -> FiniteGroup:
        return self.p.target

    def __repr__(self) -> str:
        return f"Extension({self.K.name} -> {self.E.name} -> {self.Q.name})"

    def describe(self) -> str:
        return f"0 -> {self.K.name} -> {self.E.name} -> {self.Q.name} -> 0"


def extension_new(k: Hom, p: Hom) -> Extension:
    """Validate (k, p) as a short exact sequence."""
    if k.target != p.source:
        raise ValueError("codomain of k differs from domain of p")
    if not k.is_injective():
        raise NotMono(f"k: {k.source.name} -> {k.target.name} is not injective")
    if not p.is_surjective():
        raise NotEpi(f"p: {p.source.name} -> {p.target.name} is not surjective")
    if image(k).carrier != kernel(p).carrier:
        raise ImageNotKernel("image of k differs from kernel of p")
    return Extension(k, p)


def extension_of_normal(G: FiniteGroup, N: Subgroup) -> Extension:
    """0 -> N -> G -> G/N -> 0."""
    Ngrp, incl = N.as_group()
    _, proj = quotient(G, N)
    return Extension(incl, proj)


def trivial_extension(G: FiniteGroup) -> Extension:
    """0 -> 1 -> G -> G -> 0 with identity on G."""
    return extension_of_normal(G, G.trivial_subgroup())


@dataclass(frozen=True, eq=False)
class MorphismOfExtensions:
    source: Extension
    target: Extension
    u: Hom
    v: Hom
    w: Hom

    def __post_init__(self):
        s, t = self.source, self.target
        if not (self.u.source == s.K and self.u.target == t.K
                and self.v.source == s.E and self.v.target == t.E
                and self.w.source == s.Q and self.w.target == t.Q):
            raise ValueError("component maps do not match the extensions")
        if not np.array_equal(self.v.map[s.k.map], t.k.map[self.u.map]):
            raise NotCommuting("left square does not commute")
        if not np.array_equal(self.w.map[s.p.map], t.p.map[self.v.map]):
            raise NotCommuting("right square does not commute")


def identity_morphism(ext: Extension) -> MorphismOfExtensions:
    return MorphismOfExtensions(ext, ext, identity_hom(ext.K), identity_hom(ext.E), identity_hom(ext.Q))


def pullback_extension(ext: Extension, f: Hom) -> tuple[Extension, MorphismOfExtensions]:
    """Pull ``ext`` back along f: X -> Q, giving 0 -> K -> E x_Q X -> X -> 0."""
    if f.target != ext.Q:
        raise ValueError("f must land in the quotient of the extension")
    pb = pullback(ext.p, f)
    kappa = Hom(ext.K, pb.apex, pb._lookup[ext.k.map, 0], check=False)
    new = Extension(kappa, pb.p2)
    compare = MorphismOfExtensions(new, ext, identity_hom(ext.K), pb.p1, f)
    return new, compare


def kernel_map(f: Hom, f2: Hom, v: Hom) -> Hom:
    """Restriction of v to ker f -> ker f2 (requires v(ker f) ⊆ ker f2)."""
    K, _ = kernel(f).as_group()
    K2, _ = kernel(f2).as_group()
    k_idx = np.array(kernel(f).carrier)
    k2 = kernel(f2)
    pos = np.full(f2.source.order, -1, dtype=np.intp)
    pos[list(k2.carrier)] = np.arange(k2.order)
    images = pos[v.map[k_idx]]
    if (images < 0).any():
        raise NotCommuting("v does not carry ker f into ker f2")
    return Hom(K, K2, images, check=False)


def _check_square(f: Hom, f2: Hom, v: Hom, w: Hom) -> None:
    if not (v.source == f.source and v.target == f2.source and w.source == f.target and w.target == f2.target):
        raise ValueError("square maps are not composable")
    if not np.array_equal(f2.map[v.map], w.map[f.map]):
        raise NotCommuting("f2∘v != w∘f")


def pullback_square_oracle(f: Hom, f2: Hom, v: Hom, w: Hom) -> bool:
    """Universal-property test: the comparison A -> A' x_{B'} B is bijective."""
    _check_square(f, f2, v, w)
    pb = pullback(f2, w)
    comparison = pb.factor(v, f)
    return comparison.is_bijective()


def is_pullback_square(f: Hom, f2: Hom, v: Hom, w: Hom, cross_check: bool = True) -> bool:
    """Decide whether the square (f: A->B, f2: A'->B', v: A->A', w: B->B') is a pullback.

    Both horizontal maps must be surjective.  The decision is whether the
    induced map on kernels is bijective; ``cross_check`` also runs the
    universal-property test and asserts agreement.
    """
    _check_square(f, f2, v, w)
    if not (f.is_surjective() and f2.is_surjective()):
        raise ValueError("horizontal maps must be surjective")
    verdict = kernel_map(f, f2, v).is_bijective()
    if cross_check:
        assert verdict == pullback_square_oracle(f, f2, v, w), "kernel criterion disagrees with pullback"
    return verdict


def is_section(p: Hom, s: Hom) -> bool:
    return s.source == p.target and s.target == p.source and np.array_equal(
        p.map[s.map], np.arange(p.target.order)
    )


def split_short_five_check(m: MorphismOfExtensions, s_source: Hom, s_target: Hom) -> bool:
    """Whether v is bijective for a morphism of split extensions with u, w bijective."""
    if not is_section(m.source.p, s_source) or not is_section(m.target.p, s_target):
        raise NotSplit("given maps are not sections of the quotient maps")
    if not (m.u.is_bijective() and m.w.is_bijective()):
        raise ValueError("u and w must be bijective")
    return m.v.is_bijective()


def sections(ext: Extension) -> list[Hom]:
    """All homomorphic sections of ext.p."""
    return [s for s in enumerate_homs(ext.Q, ext.E) if is_section(ext.p, s)]


def isomorphisms(G: FiniteGroup, H: FiniteGroup) -> Iterator[Hom]:
    if G.order_profile() != H.order_profile():
        return
    og, oh = G.element_orders, H.element_orders
    candidates = [[h for h in range(H.order) if oh[h] == og[g]] for g in G.generators]
    for phi in _backtrack_homs(G, H, candidates, injective=True, budget=[10**6]):
        yield Hom(G, H, [phi[i] for i in range(G.order)], check=False)


def extensions_isomorphic(a: Extension, b: Extension) -> Optional[MorphismOfExtensions]:
    """Search isos (u, v, w) forming a morphism of extensions a -> b."""
    if (a.K.order, a.E.order, a.Q.order) != (b.K.order, b.E.order, b.Q.order):
        return None
    img_a = image(a.k).carrier
    img_b = image(b.k)
    for v in isomorphisms(a.E, b.E):
        if not img_b.mask[v.map[list(img_a)]].all():
            continue
        u = Hom(a.K, b.K, _preimage_under(b.k, v.map[a.k.map]), check=False)
        w_map = np.full(a.Q.order, -1, dtype=np.intp)
        w_map[a.p.map] = b.p.map[v.map]
        w = Hom(a.Q, b.Q, w_map, check=False)
        if u.is_bijective() and w.is_bijective():
            return MorphismOfExtensions(a, b, u, v, w)
    return None


def _preimage_under(k: Hom, vals: np.ndarray) -> np.ndarray:
    pos = np.full(k.target.order, -1, dtype=np.intp)
    pos[k.map] = np.arange(k.source.order)
    return pos[vals]


# -- serialization ----------------------------------------------------------


def dumps_extension(ext: Extension) -> str:
    return (
        "extension\n"
        + dumps_group(ext.K)
        + dumps_group(ext.E)
        + dumps_group(ext.Q)
        + dumps_hom(ext.k) + "\n"
        + dumps_hom(ext.p) + "\n"
    )


def loads_extension(text: str) -> Extension:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines or lines[0].strip() != "extension":
        raise ParseError("missing 'extension' header")
    K, rest = _read_group(lines[1:])
    E, rest = _read_group(rest)
    Q, rest = _read_group(rest)
    if len(rest) != 2:
        raise ParseError("expected two map lines after the group blocks")
    return extension_new(loads_hom(rest[0], K, E), loads_hom(rest[1], E, Q))
