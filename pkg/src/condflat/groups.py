"""Finite groups as Cayley tables, and the category they form.

Elements are indices ``0 .. n-1`` with the identity at index 0.  A group is
immutable once constructed; all derived data (inverses, element orders,
generators, fingerprint) is computed lazily and cached on the instance.
"""

from __future__ import annotations

import hashlib
import itertools
from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import (
    Inconsistent,
    InvalidGroup,
    IsoSearchBudgetExceeded,
    NotGenerating,
    NotHomomorphism,
    NotNormal,
    OrderTooLarge,
    ParseError,
    UnsupportedParams,
)

DEFAULT_MAX_ORDER = 128
ISO_SEARCH_BUDGET = 10**6

_config = {"max_order": DEFAULT_MAX_ORDER}


def max_order() -> int:
    return _config["max_order"]


def set_max_order(n: int) -> None:
    if n < 1:
        raise ValueError("max order must be positive")
    _config["max_order"] = int(n)


def _check_order(n: int, limit: Optional[int] = None) -> None:
    limit = max_order() if limit is None else limit
    if n > limit:
        raise OrderTooLarge(f"order {n} exceeds configured maximum {limit}")


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=np.intp)
    arr.setflags(write=False)
    return arr


class FiniteGroup:
    """A finite group given by its multiplication table.

    ``table[i, j]`` is the index of ``g_i * g_j``.  Construction validates
    the group axioms exhaustively unless ``check=False`` is passed by code
    that builds tables which are groups by construction.
    """

    def __init__(self, table, name: str = "G", *, check: bool = True):
        self.table = _frozen(table)
        self.name = name
        if check:
            self._validate()

    def _validate(self) -> None:
        t = self.table
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise InvalidGroup("table must be a non-empty square matrix")
        n = t.shape[0]
        if t.min() < 0 or t.max() >= n:
            raise InvalidGroup("table entries out of range")
        ar = np.arange(n)
        if not (np.array_equal(t[0], ar) and np.array_equal(t[:, 0], ar)):
            raise InvalidGroup("index 0 is not a two-sided identity")
        if not (t == 0).any(axis=1).all() or not (t == 0).any(axis=0).all():
            raise InvalidGroup("some element has no inverse")
        # (ab)c == a(bc) for all triples
        if not np.array_equal(t[t], t[ar[:, None, None], t[None, :, :]]):
            raise InvalidGroup("table is not associative")
        inv = np.argmax(t == 0, axis=1)
        if not np.array_equal(t[inv, ar], np.zeros(n, dtype=np.intp)):
            raise InvalidGroup("left and right inverses differ")

    # -- basic data ---------------------------------------------------------

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self is other or (
            self.order == other.order and np.array_equal(self.table, other.table)
        )

    def __hash__(self) -> int:
        return hash(self.fingerprint)

    @cached_property
    def fingerprint(self) -> str:
        """Content hash of the table; two groups with equal tables share it."""
        h = hashlib.sha256()
        h.update(str(self.order).encode())
        h.update(self.table.astype(np.int64).tobytes())
        return h.hexdigest()[:32]

    @cached_property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(x) for x in row) for row in self.table)

    @cached_property
    def inverses(self) -> np.ndarray:
        return _frozen(np.argmax(self.table == 0, axis=1))

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        ar = np.arange(n)
        orders = np.zeros(n, dtype=np.intp)
        cur = ar.copy()
        for k in range(1, n + 1):
            hit = (cur == 0) & (orders == 0)
            orders[hit] = k
            if orders.all():
                break
            cur = self.table[cur, ar]
        return _frozen(orders)

    def mul(self, a: int, b: int) -> int:
        return self.rows[a][b]

    def inv(self, a: int) -> int:
        return int(self.inverses[a])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        r = 0
        for _ in range(k):
            r = self.rows[r][a]
        return r

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def center(self) -> "Subgroup":
        t = self.table
        mask = (t == t.T).all(axis=1)
        return Subgroup(self, tuple(int(i) for i in np.flatnonzero(mask)), check=False)

    def order_profile(self) -> tuple:
        """Isomorphism invariants used to prefilter searches."""
        return (
            self.order,
            tuple(sorted(Counter(int(o) for o in self.element_orders).items())),
            self.center.order,
        )

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A small generating set chosen greedily by decreasing element order."""
        if self.order == 1:
            return ()
        orders = self.element_orders
        cands = sorted(range(1, self.order), key=lambda i: (-int(orders[i]), i))
        gens: list[int] = []
        span = {0}
        for c in cands:
            if c in span:
                continue
            gens.append(c)
            span = set(_closure(self, gens))
            if len(span) == self.order:
                break
        return tuple(gens)

    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, (0,), check=False)

    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)), check=False)


def _closure(G: FiniteGroup, gens: Iterable[int]) -> list[int]:
    """Elements of the subgroup generated by ``gens`` (BFS by right multiplication)."""
    gens = [g for g in gens if g != 0]
    rows = G.rows
    seen = {0}
    out = [0]
    queue = deque([0])
    while queue:
        x = queue.popleft()
        row = rows[x]
        for g in gens:
            y = row[g]
            if y not in seen:
                seen.add(y)
                out.append(y)
                queue.append(y)
    return out


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    carrier: tuple[int, ...]
    check: bool = True

    def __post_init__(self):
        carrier = tuple(sorted(set(int(c) for c in self.carrier)))
        object.__setattr__(self, "carrier", carrier)
        if self.check:
            if not carrier or carrier[0] != 0:
                raise InvalidGroup("subgroup must contain the identity")
            m = self.mask
            idx = np.array(carrier)
            if not m[self.parent.table[np.ix_(idx, idx)]].all():
                raise InvalidGroup("carrier is not closed under multiplication")
            if not m[self.parent.inverses[idx]].all():
                raise InvalidGroup("carrier is not closed under inverses")

    @property
    def order(self) -> int:
        return len(self.carrier)

    def __len__(self) -> int:
        return len(self.carrier)

    def __contains__(self, x: int) -> bool:
        return bool(self.mask[x])

    def __iter__(self) -> Iterator[int]:
        return iter(self.carrier)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent == other.parent and self.carrier == other.carrier

    def __hash__(self) -> int:
        return hash((self.parent.fingerprint, self.carrier))

    def __repr__(self) -> str:
        return f"Subgroup({self.parent.name}, order={self.order})"

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[list(self.carrier)] = True
        m.setflags(write=False)
        return m

    def is_trivial(self) -> bool:
        return self.carrier == (0,)

    def is_whole(self) -> bool:
        return len(self.carrier) == self.parent.order

    def issubset(self, other: "Subgroup") -> bool:
        return bool(other.mask[list(self.carrier)].all())

    @cached_property
    def _as_group(self) -> tuple[FiniteGroup, "Hom"]:
        idx = np.array(self.carrier)
        pos = np.full(self.parent.order, -1, dtype=np.intp)
        pos[idx] = np.arange(len(idx))
        table = pos[self.parent.table[np.ix_(idx, idx)]]
        S = FiniteGroup(table, f"{self.parent.name}[{self.order}]", check=False)
        return S, Hom(S, self.parent, idx, check=False)

    def as_group(self) -> tuple[FiniteGroup, "Hom"]:
        """The subgroup as a standalone group, with its inclusion into the parent."""
        return self._as_group


def generate(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    return Subgroup(G, tuple(_closure(G, gens)), check=False)


def is_normal(G: FiniteGroup, S: Subgroup) -> bool:
    idx = np.array(S.carrier)
    t = G.table
    conj = t[t[:, idx], G.inverses[:, None]]
    return bool(S.mask[conj].all())


def normal_closure(G: FiniteGroup, seed: Iterable[int]) -> Subgroup:
    """Least normal subgroup containing ``seed``."""
    seed = sorted(set(int(s) for s in seed) - {0})
    if not seed:
        return G.trivial_subgroup()
    t = G.table
    conj = t[t[:, seed], G.inverses[:, None]]
    cur = generate(G, np.unique(conj).tolist())
    # generated by a conjugation-invariant set, hence normal; loop is a guard
    while not is_normal(G, cur):
        idx = list(cur.carrier)
        conj = t[t[:, idx], G.inverses[:, None]]
        cur = generate(G, np.unique(conj).tolist())
    return cur


def join_normal(G: FiniteGroup, N: Subgroup, M: Subgroup) -> Subgroup:
    return generate(G, sorted(set(N.carrier) | set(M.carrier)))


def normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """All normal subgroups, sorted by (order, carrier)."""
    minimal = {normal_closure(G, [x]).carrier for x in range(G.order)}
    found = set(minimal)
    frontier = set(minimal)
    while frontier:
        new = set()
        for a in frontier:
            for b in minimal:
                j = tuple(_closure(G, sorted(set(a) | set(b))))
                j = tuple(sorted(j))
                if j not in found:
                    new.add(j)
        found |= new
        frontier = new
    return [Subgroup(G, c, check=False) for c in sorted(found, key=lambda c: (len(c), c))]


# -- homomorphisms ----------------------------------------------------------


class Hom:
    """A group homomorphism given by the image of every source element."""

    __slots__ = ("source", "target", "map")

    def __init__(self, source: FiniteGroup, target: FiniteGroup, images, *, check: bool = True):
        self.source = source
        self.target = target
        self.map = _frozen(images)
        if check:
            self._validate()

    def _validate(self) -> None:
        m = self.map
        if m.shape != (self.source.order,):
            raise NotHomomorphism("map must be total on the source")
        if m.min() < 0 or m.max() >= self.target.order:
            raise NotHomomorphism("map values out of range")
        if m[0] != 0:
            raise NotHomomorphism("identity must map to identity")
        if not np.array_equal(m[self.source.table], self.target.table[m[:, None], m[None, :]]):
            raise NotHomomorphism("map is not multiplicative")

    def __call__(self, x: int) -> int:
        return int(self.map[x])

    def __repr__(self) -> str:
        return f"Hom({self.source.name} -> {self.target.name}, {self.map.tolist()})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hom):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and np.array_equal(self.map, other.map)
        )

    def __hash__(self) -> int:
        return hash((self.source.fingerprint, self.target.fingerprint, self.map.tobytes()))

    def kernel(self) -> Subgroup:
        return kernel(self)

    def image(self) -> Subgroup:
        return image(self)

    def is_injective(self) -> bool:
        return int(np.count_nonzero(self.map == 0)) == 1

    def is_surjective(self) -> bool:
        return len(np.unique(self.map)) == self.target.order

    def is_bijective(self) -> bool:
        return self.source.order == self.target.order and self.is_injective()

    def is_zero(self) -> bool:
        return not self.map.any()

    def inverse(self) -> "Hom":
        if not self.is_bijective():
            raise NotHomomorphism("only bijective homs have inverses")
        inv = np.empty_like(self.map)
        inv[self.map] = np.arange(self.source.order)
        return Hom(self.target, self.source, inv, check=False)


def identity_hom(G: FiniteGroup) -> Hom:
    return Hom(G, G, np.arange(G.order), check=False)


def zero_hom(G: FiniteGroup, H: FiniteGroup) -> Hom:
    return Hom(G, H, np.zeros(G.order, dtype=np.intp), check=False)


def compose(g: Hom, f: Hom) -> Hom:
    """g ∘ f."""
    if f.target != g.source:
        raise NotHomomorphism("maps are not composable")
    return Hom(f.source, g.target, g.map[f.map], check=False)


def kernel(h: Hom) -> Subgroup:
    return Subgroup(h.source, tuple(int(i) for i in np.flatnonzero(h.map == 0)), check=False)


def image(h: Hom) -> Subgroup:
    return Subgroup(h.target, tuple(int(i) for i in np.unique(h.map)), check=False)


def _extend(
    G: FiniteGroup, H: FiniteGroup, gens: Sequence[int], imgs: Sequence[int]
) -> Optional[dict[int, int]]:
    """Extend gens -> imgs multiplicatively over <gens>; None on a relation clash.

    Checking phi(x*g) == phi(x)*phi(g) for every x in <gens> and every
    generator g is sufficient for phi to be a homomorphism on <gens>.
    """
    rg, rh = G.rows, H.rows
    phi = {0: 0}
    queue = deque([0])
    pairs = list(zip(gens, imgs))
    while queue:
        x = queue.popleft()
        row_x, row_fx = rg[x], rh[phi[x]]
        for g, h in pairs:
            y = row_x[g]
            v = row_fx[h]
            w = phi.get(y)
            if w is None:
                phi[y] = v
                queue.append(y)
            elif w != v:
                return None
    return phi


def hom_from_generator_images(
    G: FiniteGroup, gens: Sequence[int], images: Sequence[int], H: FiniteGroup
) -> Hom:
    if len(gens) != len(images):
        raise ValueError("gens and images differ in length")
    if len(_closure(G, gens)) != G.order:
        raise NotGenerating(f"{list(gens)} do not generate {G.name}")
    phi = _extend(G, H, list(gens), list(images))
    if phi is None:
        raise Inconsistent("generator images violate a relation")
    return Hom(G, H, [phi[i] for i in range(G.order)], check=False)


def _backtrack_homs(
    G: FiniteGroup, H: FiniteGroup, candidates: Sequence[Sequence[int]], injective: bool = False,
    budget: Optional[list[int]] = None,
) -> Iterator[dict[int, int]]:
    gens = G.generators
    k = len(gens)
    imgs: list[int] = []

    def rec(i: int):
        for h in candidates[i]:
            if budget is not None:
                budget[0] -= 1
                if budget[0] < 0:
                    raise IsoSearchBudgetExceeded("isomorphism search exceeded node budget")
            imgs.append(h)
            phi = _extend(G, H, gens[: i + 1], imgs)
            if phi is not None and (not injective or len(set(phi.values())) == len(phi)):
                if i + 1 == k:
                    yield phi
                else:
                    yield from rec(i + 1)
            imgs.pop()

    if k == 0:
        yield {0: 0}
    else:
        yield from rec(0)


def enumerate_homs(G: FiniteGroup, H: FiniteGroup) -> list[Hom]:
    """Every homomorphism G -> H, each once, ordered lexicographically by generator images."""
    og, oh = G.element_orders, H.element_orders
    candidates = [
        [h for h in range(H.order) if int(og[g]) % int(oh[h]) == 0] for g in G.generators
    ]
    out = []
    for phi in _backtrack_homs(G, H, candidates):
        out.append(Hom(G, H, [phi[i] for i in range(G.order)], check=False))
    return out


def find_isomorphism(G: FiniteGroup, H: FiniteGroup, budget: int = ISO_SEARCH_BUDGET) -> Optional[Hom]:
    if G.order_profile() != H.order_profile():
        return None
    if G == H:
        return identity_hom(G)
    og, oh = G.element_orders, H.element_orders
    candidates = [[h for h in range(H.order) if oh[h] == og[g]] for g in G.generators]
    counter = [budget]
    for phi in _backtrack_homs(G, H, candidates, injective=True, budget=counter):
        return Hom(G, H, [phi[i] for i in range(G.order)], check=False)
    return None


def are_isomorphic(G: FiniteGroup, H: FiniteGroup) -> bool:
    return find_isomorphism(G, H) is not None


# -- quotients, products, pullbacks -----------------------------------------


def quotient(G: FiniteGroup, N: Subgroup, name: Optional[str] = None) -> tuple[FiniteGroup, Hom]:
    """G/N with cosets ordered by their minimal representative."""
    if N.parent != G:
        raise ValueError("subgroup belongs to another group")
    if not is_normal(G, N):
        raise NotNormal(f"subgroup of order {N.order} is not normal in {G.name}")
    n = G.order
    label = np.full(n, -1, dtype=np.intp)
    reps = []
    nidx = np.array(N.carrier)
    for x in range(n):
        if label[x] < 0:
            label[G.table[x, nidx]] = len(reps)
            reps.append(x)
    reps_a = np.array(reps)
    table = label[G.table[np.ix_(reps_a, reps_a)]]
    if name is None:
        name = G.name if N.is_trivial() else f"{G.name}/{N.order}"
    Q = FiniteGroup(table, name, check=False)
    return Q, Hom(G, Q, label, check=False)


def direct_product(G: FiniteGroup, H: FiniteGroup, limit: Optional[int] = None):
    """G × H with element (g, h) at index g*|H| + h.

    Returns ``(P, inj1, inj2, proj1, proj2)``.
    """
    _check_order(G.order * H.order, limit)
    m = H.order
    table = G.table[:, None, :, None] * m + H.table[None, :, None, :]
    table = table.reshape(G.order * m, G.order * m)
    P = FiniteGroup(table, f"{G.name}x{H.name}", check=False)
    ar_g, ar_h, ar_p = np.arange(G.order), np.arange(m), np.arange(G.order * m)
    return (
        P,
        Hom(G, P, ar_g * m, check=False),
        Hom(H, P, ar_h, check=False),
        Hom(P, G, ar_p // m, check=False),
        Hom(P, H, ar_p % m, check=False),
    )


@dataclass(frozen=True, eq=False)
class PullbackData:
    apex: FiniteGroup
    p1: Hom
    p2: Hom
    f: Hom
    g: Hom

    def pair_index(self, a: int, c: int) -> int:
        """Apex index of the pair (a, c); raises KeyError if f(a) != g(c)."""
        i = int(self._lookup[a, c])
        if i < 0:
            raise KeyError((a, c))
        return i

    @cached_property
    def _lookup(self) -> np.ndarray:
        lk = np.full((self.f.source.order, self.g.source.order), -1, dtype=np.intp)
        lk[self.p1.map, self.p2.map] = np.arange(self.apex.order)
        return lk

    def factor(self, u: Hom, v: Hom) -> Hom:
        """The unique w: T -> apex with p1∘w = u and p2∘w = v."""
        if not np.array_equal(self.f.map[u.map], self.g.map[v.map]):
            raise ValueError("test pair does not commute over the cospan")
        return Hom(u.source, self.apex, self._lookup[u.map, v.map], check=False)


def pullback(f: Hom, g: Hom, name: Optional[str] = None) -> PullbackData:
    """Pullback of the cospan A --f--> B <--g-- C as a subgroup of A × C."""
    if f.target != g.target:
        raise ValueError("cospan maps must share a codomain")
    A, C = f.source, g.source
    a_idx, c_idx = np.nonzero(f.map[:, None] == g.map[None, :])
    k = len(a_idx)
    lk = np.full((A.order, C.order), -1, dtype=np.intp)
    lk[a_idx, c_idx] = np.arange(k)
    prod_a = A.table[a_idx[:, None], a_idx[None, :]]
    prod_c = C.table[c_idx[:, None], c_idx[None, :]]
    table = lk[prod_a, prod_c]
    apex = FiniteGroup(table, name or f"({A.name}x_{f.target.name}{C.name})", check=False)
    p1 = Hom(apex, A, a_idx, check=False)
    p2 = Hom(apex, C, c_idx, check=False)
    if g.is_surjective():
        assert p1.is_surjective(), "regular epis must be stable under pullback"
    if f.is_surjective():
        assert p2.is_surjective(), "regular epis must be stable under pullback"
    pb = PullbackData(apex, p1, p2, f, g)
    pb.__dict__["_lookup"] = lk
    return pb


# -- standard families ------------------------------------------------------


def group_from_elements(elements: Sequence, mul, name: str, limit: Optional[int] = None) -> FiniteGroup:
    """Cayley table of a concrete group; ``elements[0]`` must be the identity."""
    _check_order(len(elements), limit)
    pos = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    table = [[pos[mul(elements[i], elements[j])] for j in range(n)] for i in range(n)]
    return FiniteGroup(table, name)


def cyclic(n: int, limit: Optional[int] = None) -> FiniteGroup:
    """Z/n; index k is the k-th power of the generator 1."""
    if n < 1:
        raise UnsupportedParams("cyclic order must be positive")
    _check_order(n, limit)
    ar = np.arange(n)
    return FiniteGroup((ar[:, None] + ar[None, :]) % n, f"Z/{n}", check=False)


def dihedral(n: int, limit: Optional[int] = None) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n: rotations r^i at i, reflections r^i s at n+i."""
    if n < 1:
        raise UnsupportedParams("dihedral parameter must be positive")
    _check_order(2 * n, limit)

    def mul(a, b):
        (i, s), (j, t) = a, b
        return ((i + (-j if s else j)) % n, s ^ t)

    elements = [(i, 0) for i in range(n)] + [(i, 1) for i in range(n)]
    return group_from_elements(elements, mul, f"D_{2 * n}", limit)


def symmetric(n: int, limit: Optional[int] = None) -> FiniteGroup:
    """S_n on permutations of range(n) in lexicographic order; (στ)(x) = σ(τ(x))."""
    if n < 1:
        raise UnsupportedParams("symmetric degree must be positive")
    size = 1
    for k in range(2, n + 1):
        size *= k
    _check_order(size, limit)
    elements = list(itertools.permutations(range(n)))
    return group_from_elements(
        elements, lambda s, t: tuple(s[t[x]] for x in range(n)), f"S_{n}", limit
    )


_QUAT = {  # unit products: (a, b) -> (sign, c) for a, b in {1, i, j, k}
    ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
    ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
    ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
    ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
}


def quaternion8(limit: Optional[int] = None) -> FiniteGroup:
    """Q_8 ordered 1, -1, i, -i, j, -j, k, -k."""

    def mul(a, b):
        s, u = _QUAT[(a[1], b[1])]
        return (a[0] * b[0] * s, u)

    elements = [(s, u) for u in "1ijk" for s in (1, -1)]
    return group_from_elements(elements, mul, "Q_8", limit)


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


def elementary_abelian(p: int, k: int, limit: Optional[int] = None) -> FiniteGroup:
    """(Z/p)^k; index is the base-p number whose digit i is coordinate i."""
    if not _is_prime(p) or k < 1:
        raise UnsupportedParams(f"elementary abelian needs prime p and k >= 1, got {p}, {k}")
    _check_order(p**k, limit)
    n = p**k
    ar = np.arange(n)
    digits = np.stack([(ar // p**i) % p for i in range(k)])
    sums = (digits[:, :, None] + digits[:, None, :]) % p
    weights = np.array([p**i for i in range(k)])[:, None, None]
    table = (sums * weights).sum(axis=0)
    name = f"Z/{p}" if k == 1 else f"Z/{p}^{k}"
    return FiniteGroup(table, name, check=False)


def trivial_group() -> FiniteGroup:
    return FiniteGroup([[0]], "1", check=False)


FAMILIES = ("cyclic", "dihedral", "symmetric", "quaternion8", "elementary_abelian")


def group_standard(family: str, *params: int, limit: Optional[int] = None) -> FiniteGroup:
    if family == "cyclic" and len(params) == 1:
        return cyclic(params[0], limit)
    if family == "dihedral" and len(params) == 1:
        return dihedral(params[0], limit)
    if family == "symmetric" and len(params) == 1:
        return symmetric(params[0], limit)
    if family == "quaternion8" and not params:
        return quaternion8(limit)
    if family == "elementary_abelian" and len(params) == 2:
        return elementary_abelian(params[0], params[1], limit)
    raise UnsupportedParams(f"unsupported family/params: {family}{params}")


def group_from_name(name: str, limit: Optional[int] = None) -> FiniteGroup:
    """Parse a display name: ``1``, ``Z/n``, ``Z/p^k``, ``D_2n``, ``Q_8``, ``S_n``, ``AxB``."""
    name = name.strip()
    if "x" in name:
        parts = name.split("x")
        G = group_from_name(parts[0], limit)
        for part in parts[1:]:
            G = direct_product(G, group_from_name(part, limit), limit)[0]
        return G
    try:
        if name == "1":
            return trivial_group()
        if name.startswith("Z/"):
            body = name[2:]
            if "^" in body:
                p, k = body.split("^")
                return elementary_abelian(int(p), int(k), limit)
            return cyclic(int(body), limit)
        if name.startswith("D_"):
            m = int(name[2:])
            if m % 2:
                raise UnsupportedParams(f"dihedral order must be even: {name}")
            return dihedral(m // 2, limit)
        if name == "Q_8":
            return quaternion8(limit)
        if name.startswith("S_"):
            return symmetric(int(name[2:]), limit)
    except ValueError as exc:
        raise ParseError(f"cannot parse group name {name!r}") from exc
    raise ParseError(f"unknown group name {name!r}")


# -- text serialization -----------------------------------------------------


def dumps_group(G: FiniteGroup) -> str:
    lines = [f"group {G.name} {G.order}"]
    lines += [" ".join(str(x) for x in row) for row in G.rows]
    return "\n".join(lines) + "\n"


def loads_group(text: str) -> FiniteGroup:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    G, rest = _read_group(lines)
    if rest:
        raise ParseError("trailing content after group block")
    return G


def _read_group(lines: list[str]) -> tuple[FiniteGroup, list[str]]:
    head = lines[0].split()
    if len(head) != 3 or head[0] != "group":
        raise ParseError(f"bad group header: {lines[0]!r}")
    n = int(head[2])
    rows = [[int(x) for x in ln.split()] for ln in lines[1 : n + 1]]
    if len(rows) != n:
        raise ParseError("truncated group block")
    try:
        return FiniteGroup(rows, head[1]), lines[n + 1 :]
    except InvalidGroup as exc:
        raise ParseError(str(exc)) from exc


def dumps_hom(h: Hom) -> str:
    return f"map {h.source.name} {h.target.name} " + " ".join(str(int(x)) for x in h.map)


def loads_hom(line: str, source: FiniteGroup, target: FiniteGroup) -> Hom:
    parts = line.split()
    if len(parts) < 3 or parts[0] != "map":
        raise ParseError(f"bad map line: {line!r}")
    return Hom(source, target, [int(x) for x in parts[3:]])
