"""The audit population: small groups and every extension by a normal subgroup."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .errors import OrderTooLarge
from .exactseq import Extension, extension_of_normal
from .groups import (
    FiniteGroup,
    cyclic,
    dihedral,
    direct_product,
    dumps_group,
    elementary_abelian,
    find_isomorphism,
    normal_subgroups,
    quaternion8,
    symmetric,
    trivial_group,
)

CATALOG_LIMIT = 128


@dataclass(frozen=True, eq=False)
class Catalog:
    groups: tuple[FiniteGroup, ...]
    extensions: tuple[Extension, ...]
    max_order: int
    fingerprint: str

    def group(self, name: str) -> FiniteGroup:
        for G in self.groups:
            if G.name == name:
                return G
        raise KeyError(name)

    def up_to(self, order: int) -> list[FiniteGroup]:
        return [G for G in self.groups if G.order <= order]

    def extensions_of(self, G: FiniteGroup) -> list[Extension]:
        return [e for e in self.extensions if e.E is G]


def _base_groups(max_order: int) -> list[FiniteGroup]:
    out = [trivial_group()]
    out += [cyclic(n) for n in range(2, max_order + 1)]
    for p in (2, 3):
        k = 2
        while p**k <= max_order:
            out.append(elementary_abelian(p, k))
            k += 1
    # symmetric groups precede dihedral ones so S_3 keeps its name over D_6
    for n, size in ((3, 6), (4, 24)):
        if size <= max_order:
            out.append(symmetric(n))
    out += [dihedral(n) for n in range(3, max_order // 2 + 1)]
    if max_order >= 8:
        out.append(quaternion8())
    return out


def _dedupe(groups: list[FiniteGroup]) -> list[FiniteGroup]:
    kept: list[FiniteGroup] = []
    by_profile: dict[tuple, list[FiniteGroup]] = {}
    for G in groups:
        bucket = by_profile.setdefault(G.order_profile(), [])
        if any(find_isomorphism(G, H) is not None for H in bucket):
            continue
        bucket.append(G)
        kept.append(G)
    return kept


def catalog_groups(max_order: int) -> list[FiniteGroup]:
    """Deterministic, isomorphism-free list of groups of order at most ``max_order``.

    Base families first, then binary direct products of nontrivial base
    groups; a group isomorphic to an earlier one is dropped.  The result is
    stably sorted by order.
    """
    base = _base_groups(max_order)
    candidates = list(base)
    nontrivial = base[1:]
    for i, G in enumerate(nontrivial):
        for H in nontrivial[i:]:
            if G.order * H.order <= max_order:
                candidates.append(direct_product(G, H, limit=max_order)[0])
    groups = _dedupe(candidates)
    return sorted(groups, key=lambda G: G.order)


def catalog_build(max_order: int = 16) -> Catalog:
    if not 1 <= max_order <= CATALOG_LIMIT:
        raise OrderTooLarge(f"catalog max order must lie in 1..{CATALOG_LIMIT}, got {max_order}")
    groups = catalog_groups(max_order)
    exts = [extension_of_normal(G, N) for G in groups for N in normal_subgroups(G)]
    h = hashlib.sha256(f"max_order={max_order}\n".encode())
    for G in groups:
        h.update(dumps_group(G).encode())
    return Catalog(tuple(groups), tuple(exts), max_order, h.hexdigest()[:16])
