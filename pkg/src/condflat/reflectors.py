"""Idempotent pointed endofunctors (L, eta) on finite groups.

Two kinds are supported: verbal reflections, where L(X) is X modulo the
verbal subgroup of a set of words, and nullification by a fixed group A,
where L(X) is the largest quotient of X receiving only the zero map from A.
Both are realized lazily, one object at a time, with results memoized by
table fingerprint.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import InternalError, ParseError
from .groups import (
    FiniteGroup,
    Hom,
    Subgroup,
    enumerate_homs,
    group_from_name,
    kernel,
    normal_closure,
    quotient,
)


@dataclass(frozen=True)
class Word:
    """A group word in variables x_1..x_arity; letters are (variable, ±1) pairs."""

    arity: int
    letters: tuple[tuple[int, int], ...]
    name: str = ""

    def __post_init__(self):
        if self.arity < 1 or not self.letters:
            raise ValueError("a word needs positive arity and at least one letter")
        for var, exp in self.letters:
            if not 0 <= var < self.arity or exp not in (1, -1):
                raise ValueError(f"bad letter {(var, exp)}")

    def __str__(self) -> str:
        if self.name:
            return self.name
        return " ".join(f"x{v + 1}" + ("" if e == 1 else "^-1") for v, e in self.letters)

    def inverse(self) -> "Word":
        return Word(self.arity, tuple((v, -e) for v, e in reversed(self.letters)))

    def __call__(self, G: FiniteGroup, *args: int) -> int:
        r = 0
        for v, e in self.letters:
            x = args[v] if e == 1 else G.inv(args[v])
            r = G.mul(r, x)
        return r


def _commutator_letters(a, b):
    # [a, b] = a^-1 b^-1 a b, with a and b given as letter tuples
    inv = lambda w: tuple((v, -e) for v, e in reversed(w))
    return inv(a) + inv(b) + a + b


def commutator_word() -> Word:
    return Word(2, _commutator_letters(((0, 1),), ((1, 1),)), "[x,y]")


def power_word(n: int) -> Word:
    if n < 1:
        raise ValueError("exponent must be positive")
    return Word(1, ((0, 1),) * n, f"x^{n}")


def left_normed_commutator(weight: int) -> Word:
    """[[...[x1, x2], ...], x_weight]; weight 2 is the plain commutator."""
    if weight < 2:
        raise ValueError("commutator weight must be at least 2")
    letters = ((0, 1),)
    for v in range(1, weight):
        letters = _commutator_letters(letters, ((v, 1),))
    name = "[" * (weight - 1) + "x1" + "".join(f",x{v + 1}]" for v in range(1, weight))
    return Word(weight, letters, name)


def word_values(G: FiniteGroup, word: Word, domain: Optional[Sequence[int]] = None) -> Iterator[np.ndarray]:
    """Values of ``word`` over all tuples from ``domain``, in chunks.

    The last two variables are vectorized; leading variables are looped so
    memory stays at |domain|^2 per chunk.
    """
    dom = np.arange(G.order) if domain is None else np.asarray(domain, dtype=np.intp)
    t, inv = G.table, G.inverses
    nvec = min(word.arity, 2)
    grids = [g.ravel() for g in np.meshgrid(*([dom] * nvec), indexing="ij")]
    lead = word.arity - nvec
    for head in itertools.product(dom.tolist(), repeat=lead):
        vals = list(head) + grids
        r = np.zeros(len(grids[0]), dtype=np.intp)
        for v, e in word.letters:
            x = vals[v]
            r = t[r, x if e == 1 else inv[x]]
        yield r


def verbal_subgroup(X: FiniteGroup, words: Iterable[Word]) -> Subgroup:
    """Normal closure of all values of ``words`` in X.

    Seeds with values on generator tuples, then repeatedly evaluates on
    coset representatives of the current quotient and adds any value not yet
    captured; stops once the quotient satisfies every word identically.
    """
    words = list(words)
    seeds = [0, *X.generators]
    vals: set[int] = set()
    for w in words:
        for chunk in word_values(X, w, seeds):
            vals.update(chunk.tolist())
    V = normal_closure(X, vals)
    while True:
        _, proj = quotient(X, V)
        # cosets are labelled in order of first (minimal) element
        _, reps = np.unique(proj.map, return_index=True)
        new: set[int] = set()
        for w in words:
            for chunk in word_values(X, w, reps):
                out = chunk[~V.mask[chunk]]
                if len(out):
                    new.update(out.tolist())
        if not new:
            return V
        V = normal_closure(X, set(V.carrier) | new)


class Reflector:
    """A localization functor (L, eta), evaluated on demand and memoized.

    ``words`` selects a verbal reflection; ``null_object`` selects
    nullification by that group.  Exactly one must be given.
    """

    def __init__(self, label: str, *, words: Sequence[Word] = (), null_object: Optional[FiniteGroup] = None):
        if bool(words) == (null_object is not None):
            raise ValueError("give either words or a nullifying object")
        self.label = label
        self.words = tuple(words)
        self.null_object = null_object
        self._cache: dict[str, tuple[FiniteGroup, np.ndarray]] = {}

    @property
    def kind(self) -> str:
        return "verbal" if self.words else "nullification"

    def __repr__(self) -> str:
        return f"Reflector({self.label!r})"

    def __getstate__(self):
        state = self.__dict__.copy()
        state["_cache"] = {}
        return state

    def clear_cache(self) -> None:
        self._cache.clear()

    def reflect(self, X: FiniteGroup) -> tuple[FiniteGroup, Hom]:
        key = X.fingerprint
        hit = self._cache.get(key)
        if hit is None:
            LX, eta = self._compute(X)
            # at-most-once visible insertion; a concurrent duplicate is identical
            hit = self._cache.setdefault(key, (LX, eta.map))
        LX, emap = hit
        return LX, Hom(X, LX, emap, check=False)

    def _compute(self, X: FiniteGroup) -> tuple[FiniteGroup, Hom]:
        name = f"{self.label}({X.name})"
        if self.words:
            V = verbal_subgroup(X, self.words)
            return quotient(X, V, name=name if not V.is_trivial() else X.name)
        A = self.null_object
        cur = X
        total = np.arange(X.order)
        while True:
            seed = set()
            for h in enumerate_homs(A, cur):
                seed.update(np.unique(h.map).tolist())
            seed.discard(0)
            if not seed:
                break
            N = normal_closure(cur, seed)
            cur, proj = quotient(cur, N, name=name)
            total = proj.map[total]
        if cur is X:
            return X, Hom(X, X, total, check=False)
        return cur, Hom(X, cur, total, check=False)

    def eta(self, X: FiniteGroup) -> Hom:
        return self.reflect(X)[1]

    def reflect_hom(self, f: Hom) -> Hom:
        """L(f): the unique map with L(f)∘eta_X = eta_Y∘f."""
        LX, ex = self.reflect(f.source)
        LY, ey = self.reflect(f.target)
        vals = ey.map[f.map]
        m = np.full(LX.order, -1, dtype=np.intp)
        m[ex.map] = vals
        if not np.array_equal(m[ex.map], vals):
            raise InternalError(f"{self.label}: induced map on {f.source.name} is not well defined")
        return Hom(LX, LY, m, check=False)

    def is_local(self, X: FiniteGroup) -> bool:
        return self.reflect(X)[0].order == X.order

    def radical(self, X: FiniteGroup) -> Subgroup:
        return kernel(self.reflect(X)[1])

    def is_equivalence(self, f: Hom) -> bool:
        return self.reflect_hom(f).is_bijective()


def parse_reflector(spec: str) -> Reflector:
    """Build a reflector from ``ab``, ``burnside:<n>``, ``nil:<c>`` or ``null:<group>``."""
    spec = spec.strip()
    if spec == "ab":
        return Reflector("ab", words=[commutator_word()])
    kind, _, arg = spec.partition(":")
    if not arg:
        raise ParseError(f"unknown reflector {spec!r}")
    if kind == "burnside":
        try:
            n = int(arg)
        except ValueError as exc:
            raise ParseError(f"bad exponent in {spec!r}") from exc
        if n < 1:
            raise ParseError("burnside exponent must be positive")
        return Reflector(spec, words=[power_word(n), commutator_word()])
    if kind == "nil":
        try:
            c = int(arg)
        except ValueError as exc:
            raise ParseError(f"bad class in {spec!r}") from exc
        if c < 1:
            raise ParseError("nilpotency class must be positive")
        return Reflector(spec, words=[left_normed_commutator(c + 1)])
    if kind == "null":
        return Reflector(spec, null_object=group_from_name(arg))
    raise ParseError(f"unknown reflector {spec!r}")
