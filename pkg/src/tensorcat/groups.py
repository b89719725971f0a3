"""Concrete finite groups, subgroups and homomorphisms.

Elements are dense indices ``0..order-1``.  Small groups keep a full Cayley
table.  Groups that come out of a coset enumeration too large for a table
keep the right-regular permutations of a few generating elements plus a
spanning tree of the Cayley graph; products are then computed by walking
tree words.  Every algorithm below only needs ``right_perm``, ``left_perm``,
``mul_many`` and a generating set, so both backends share them.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

import numpy as np
from numba import njit
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from sympy import factorint

from .abelian import AbelianInvariants, invariants_from_relations
from .errors import CapExceeded, NotAbelian, NotNormal

DENSE_CAP = 5040
FULL_ASSOC_CHECK = 256
ASSOC_SAMPLES = 100_000
# seed for the sampled associativity check of large user-supplied tables
ASSOC_SEED = 0
SNF_ROUTE_CAP = 512


def _index_dtype(n: int):
    return np.int16 if n <= np.iinfo(np.int16).max else np.int32


# --- kernels for the tree-backed representation -------------------------

@njit(cache=True)
def _tree_inverse(cols_inv, parent, letter):
    n = parent.shape[0]
    out = np.empty(n, dtype=np.int32)
    for d in range(n):
        c = 0
        node = d
        while node != 0:
            c = cols_inv[letter[node], c]
            node = parent[node]
        out[d] = c
    return out


@njit(cache=True)
def _tree_left(cols, parent, letter, bfs, a):
    n = parent.shape[0]
    out = np.empty(n, dtype=np.int32)
    out[0] = a
    for k in range(1, n):
        node = bfs[k]
        out[node] = cols[letter[node], out[parent[node]]]
    return out


@njit(cache=True)
def _tree_mul_many(cols, parent, letter, a, b):
    out = np.empty(a.shape[0], dtype=np.int32)
    path = np.empty(parent.shape[0], dtype=np.int32)
    for i in range(a.shape[0]):
        node = b[i]
        k = 0
        while node != 0:
            path[k] = letter[node]
            k += 1
            node = parent[node]
        c = a[i]
        while k > 0:
            k -= 1
            c = cols[path[k], c]
        out[i] = c
    return out


def spanning_tree(cols: np.ndarray):
    """BFS tree of the Cayley graph given right-multiplication perms ``cols``.

    Returns ``(parent, letter, bfs_order)`` rooted at element 0.
    """
    m, n = cols.shape
    parent = np.full(n, -1, dtype=np.int32)
    letter = np.full(n, -1, dtype=np.int32)
    parent[0] = 0
    order = [np.array([0], dtype=np.int32)]
    frontier = order[0]
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    while frontier.size:
        nxt_parts = []
        for x in range(m):
            img = cols[x, frontier]
            fresh = ~seen[img]
            if not fresh.any():
                continue
            img_f, src_f = img[fresh], frontier[fresh]
            img_u, first = np.unique(img_f, return_index=True)
            seen[img_u] = True
            parent[img_u] = src_f[first]
            letter[img_u] = x
            nxt_parts.append(img_u)
        frontier = np.concatenate(nxt_parts) if nxt_parts else np.empty(0, np.int32)
        if frontier.size:
            order.append(frontier)
    if not seen.all():
        raise ValueError("permutations do not act transitively on the elements")
    return parent, letter, np.concatenate(order).astype(np.int32)


class FiniteGroup:
    """A finite group on elements ``0..order-1``.

    Build from a Cayley table with ``FiniteGroup(table)`` or from the
    right-regular permutations of a generating set with
    :meth:`from_right_regular`.
    """

    def __init__(self, table, labels: Sequence[str] | None = None, *, check: bool = True,
                 seed: int | None = None, name: str | None = None):
        table = np.asarray(table)
        n = table.shape[0]
        if table.ndim != 2 or table.shape != (n, n) or n == 0:
            raise ValueError("Cayley table must be a non-empty square array")
        self.order = n
        self._table = np.ascontiguousarray(table, dtype=_index_dtype(n))
        self._cols = None
        if check:
            _check_latin(self._table)
        ids = np.flatnonzero((self._table == np.arange(n)).all(axis=1))
        if ids.size != 1:
            raise ValueError("table has no two-sided identity")
        self.identity = int(ids[0])
        if check and not (self._table[:, self.identity] == np.arange(n)).all():
            raise ValueError("table has no two-sided identity")
        rows, cols = np.nonzero(self._table == self.identity)
        inv = np.empty(n, dtype=np.int64)
        inv[rows] = cols
        self.inverse = inv
        if check:
            _check_associative(self._table, ASSOC_SEED if seed is None else seed)
        self.labels = list(labels) if labels is not None else [str(i) for i in range(n)]
        self.name = name

    @classmethod
    def from_right_regular(cls, cols: np.ndarray, *, labels: Sequence[str] | None = None,
                           dense_cap: int = DENSE_CAP, name: str | None = None) -> "FiniteGroup":
        """Group generated by right-multiplication perms ``cols[k]`` of a regular action.

        Element ``c`` is the group element ``w_c`` carrying the base point 0 to
        ``c``; element 0 is the identity.  Up to ``dense_cap`` elements a full
        Cayley table is materialised.
        """
        cols = np.ascontiguousarray(cols, dtype=np.int32)
        n = cols.shape[1]
        parent, letter, bfs = spanning_tree(cols)
        if n <= dense_cap:
            dt = _index_dtype(n)
            table = np.empty((n, n), dtype=np.int32)
            table[:, 0] = np.arange(n)
            for d in bfs[1:]:
                table[:, d] = cols[letter[d], table[:, parent[d]]]
            return cls(table.astype(dt), labels=labels, check=False, name=name)
        self = cls.__new__(cls)
        self.order = n
        self._table = None
        self._cols = cols
        inv_cols = np.empty_like(cols)
        for k in range(cols.shape[0]):
            inv_cols[k, cols[k]] = np.arange(n, dtype=np.int32)
        self._inv_cols = inv_cols
        self._parent, self._letter, self._bfs = parent, letter, bfs
        self.identity = 0
        self.inverse = _tree_inverse(inv_cols, parent, letter).astype(np.int64)
        self.labels = list(labels) if labels is not None else [str(i) for i in range(n)]
        self.name = name
        return self

    # --- primitives -----------------------------------------------------

    @property
    def is_dense(self) -> bool:
        return self._table is not None

    @property
    def table(self) -> np.ndarray:
        if self._table is None:
            raise CapExceeded("order for a dense Cayley table", self.order, DENSE_CAP)
        return self._table

    def mul(self, a: int, b: int) -> int:
        if self._table is not None:
            return int(self._table[a, b])
        return int(self.mul_many(np.array([a]), np.array([b]))[0])

    def mul_many(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int32)
        b = np.asarray(b, dtype=np.int32)
        a, b = np.broadcast_arrays(a, b)
        if self._table is not None:
            return self._table[a, b].astype(np.int64)
        return _tree_mul_many(self._cols, self._parent, self._letter,
                              np.ascontiguousarray(a.ravel()),
                              np.ascontiguousarray(b.ravel())).reshape(a.shape).astype(np.int64)

    def product(self, elements: Iterable[int]) -> int:
        acc = self.identity
        for e in elements:
            acc = self.mul(acc, e)
        return acc

    def right_perm(self, b: int) -> np.ndarray:
        """``x -> x*b`` for all x."""
        if self._table is not None:
            return self._table[:, b].astype(np.int64)
        return self.mul_many(np.arange(self.order), np.full(self.order, b))

    def left_perm(self, a: int) -> np.ndarray:
        """``x -> a*x`` for all x."""
        if self._table is not None:
            return self._table[a].astype(np.int64)
        return _tree_left(self._cols, self._parent, self._letter, self._bfs, a).astype(np.int64)

    def conj_perm(self, g: int) -> np.ndarray:
        """``x -> g x g^-1``."""
        return self.mul_many(self.left_perm(g), np.full(self.order, self.inverse[g]))

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = int(self.inverse[a]), -k
        acc, base = self.identity, a
        while k:
            if k & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            k >>= 1
        return acc

    def commutator(self, a: int, b: int) -> int:
        """``[a, b] = a b a^-1 b^-1``."""
        return self.mul(self.mul(self.mul(a, b), int(self.inverse[a])), int(self.inverse[b]))

    def commutator_many(self, a, b) -> np.ndarray:
        ab = self.mul_many(a, b)
        return self.mul_many(self.mul_many(ab, self.inverse[np.asarray(a)]), self.inverse[np.asarray(b)])

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        cur = np.arange(n)
        base = np.arange(n)
        k = 1
        while True:
            hit = (cur == self.identity) & (orders == 0)
            orders[hit] = k
            if (orders > 0).all():
                return orders
            cur = self.mul_many(cur, base)
            k += 1

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A small generating set, chosen greedily."""
        if self._cols is not None:
            elems = [int(self._cols[k, 0]) for k in range(self._cols.shape[0])]
            cand = elems
        else:
            cand = np.argsort(-self.element_orders, kind="stable").tolist()
        gens: list[int] = []
        mask = np.zeros(self.order, dtype=bool)
        mask[self.identity] = True
        count = 1
        for g in cand:
            if count == self.order:
                break
            if mask[g]:
                continue
            gens.append(int(g))
            mask = self._closure_mask(gens)
            count = int(mask.sum())
        return tuple(gens)

    def _closure_mask(self, seeds: Sequence[int], start: np.ndarray | None = None) -> np.ndarray:
        """Orbit of the identity under right multiplication by ``seeds``."""
        n = self.order
        perms = [self.right_perm(s) for s in seeds]
        if start is None:
            mask = np.zeros(n, dtype=bool)
            mask[self.identity] = True
            frontier = np.array([self.identity])
        else:
            mask = start.copy()
            frontier = np.flatnonzero(mask)
        while frontier.size:
            parts = []
            for p in perms:
                img = p[frontier]
                img = img[~mask[img]]
                if img.size:
                    img = np.unique(img)
                    mask[img] = True
                    parts.append(img)
            frontier = np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)
        return mask

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(self.mul(a, b) == self.mul(b, a) for a in gens for b in gens)

    def whole(self) -> "Subgroup":
        return Subgroup(self, np.arange(self.order))

    def trivial(self) -> "Subgroup":
        return Subgroup(self, np.array([self.identity]))

    def __repr__(self):
        kind = "dense" if self.is_dense else "regular"
        nm = f" {self.name}" if self.name else ""
        return f"<FiniteGroup{nm} order={self.order} {kind}>"


def _check_latin(t: np.ndarray):
    n = t.shape[0]
    ref = np.arange(n)
    if t.min() < 0 or t.max() >= n:
        raise ValueError("table entries out of range")
    if not (np.sort(t, axis=1) == ref).all() or not (np.sort(t, axis=0) == ref[:, None]).all():
        raise ValueError("table is not a Latin square")


def _check_associative(t: np.ndarray, seed: int):
    n = t.shape[0]
    if n <= FULL_ASSOC_CHECK:
        for a in range(n):
            # (a*b)*c == a*(b*c) for all b, c
            if not (t[t[a]] == t[a][t]).all():
                raise ValueError("table is not associative")
        return
    rng = np.random.default_rng(seed)
    a, b, c = rng.integers(0, n, size=(3, ASSOC_SAMPLES))
    if not (t[t[a, b], c] == t[a, t[b, c]]).all():
        raise ValueError("table is not associative")


# --- subgroups -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    members: np.ndarray

    def __post_init__(self):
        m = np.unique(np.asarray(self.members, dtype=np.int64))
        object.__setattr__(self, "members", m)

    @property
    def order(self) -> int:
        return int(self.members.size)

    @cached_property
    def mask(self) -> np.ndarray:
        mk = np.zeros(self.parent.order, dtype=bool)
        mk[self.members] = True
        return mk

    def __contains__(self, x) -> bool:
        return bool(self.mask[int(x)])

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and np.array_equal(self.members, other.members)

    def __hash__(self):
        return hash((id(self.parent), self.members.tobytes()))

    def __le__(self, other: "Subgroup") -> bool:
        return bool(other.mask[self.members].all())

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_whole(self) -> bool:
        return self.order == self.parent.order

    @cached_property
    def generators(self) -> tuple[int, ...]:
        G = self.parent
        if self.is_whole():
            return G.generators
        orders = G.element_orders[self.members]
        cand = self.members[np.argsort(-orders, kind="stable")]
        gens: list[int] = []
        mask = np.zeros(G.order, dtype=bool)
        mask[G.identity] = True
        for g in cand:
            if mask.sum() == self.order:
                break
            if mask[g]:
                continue
            gens.append(int(g))
            mask = G._closure_mask(gens)
        return tuple(gens)

    def is_abelian(self) -> bool:
        G, gens = self.parent, self.generators
        return all(G.mul(a, b) == G.mul(b, a) for a in gens for b in gens)

    def is_normal(self, within: "Subgroup | None" = None) -> bool:
        G = self.parent
        outer = within.generators if within is not None else G.generators
        for g in outer:
            conj = G.mul_many(G.mul_many(np.full(len(self.generators), g), np.array(self.generators)),
                              np.full(len(self.generators), G.inverse[g]))
            if not self.mask[conj].all():
                return False
        return True

    def is_central(self, within: "Subgroup | None" = None) -> bool:
        G = self.parent
        outer = within.generators if within is not None else G.generators
        z = np.array(self.generators, dtype=np.int64)
        for g in outer:
            if not (G.mul_many(z, g) == G.mul_many(g, z)).all():
                return False
        return True

    def as_group(self, check: bool = False) -> tuple[FiniteGroup, np.ndarray]:
        """The subgroup as a standalone group plus its embedding into the parent."""
        G = self.parent
        m = self.members
        pos = np.full(G.order, -1, dtype=np.int64)
        pos[m] = np.arange(m.size)
        if m.size > DENSE_CAP:
            raise CapExceeded("subgroup order", m.size, DENSE_CAP)
        table = pos[G.mul_many(m[:, None], m[None, :])]
        labels = [G.labels[int(x)] for x in m]
        return FiniteGroup(table, labels=labels, check=check), m.copy()

    def __repr__(self):
        return f"<Subgroup order={self.order} of {self.parent!r}>"


def subgroup_generated(G: FiniteGroup, seeds: Iterable[int]) -> Subgroup:
    seeds = [int(s) for s in seeds]
    return Subgroup(G, np.flatnonzero(G._closure_mask(seeds)))


def normal_closure(G: FiniteGroup, seeds: Iterable[int], within: Subgroup | None = None) -> Subgroup:
    """Smallest subgroup containing ``seeds`` normalised by ``within`` (default all of G)."""
    outer = within.generators if within is not None else G.generators
    gens = [int(s) for s in seeds if int(s) != G.identity]
    mask = G._closure_mask(gens)
    queue = list(gens)
    while queue:
        h = queue.pop()
        for g in outer:
            c = G.mul(G.mul(g, h), int(G.inverse[g]))
            if not mask[c]:
                gens.append(c)
                queue.append(c)
                mask = G._closure_mask([c] + gens, start=mask)
    return Subgroup(G, np.flatnonzero(mask))


def normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """All normal subgroups, sorted by (order, members).

    Each is a join of normal closures of single elements, so the lattice is
    grown from those by pairwise joins until it is closed.
    """
    if not G.is_dense:
        raise CapExceeded("order for the normal subgroup lattice", G.order, DENSE_CAP)
    found: dict[bytes, Subgroup] = {}
    for cls in conjugacy_classes(G):
        S = normal_closure(G, [int(cls[0])])
        found.setdefault(S.members.tobytes(), S)
    frontier = list(found.values())
    atoms = list(found.values())
    while frontier:
        nxt = []
        for A in frontier:
            for B in atoms:
                if B <= A:
                    continue
                J = Subgroup(G, np.flatnonzero(G._closure_mask(list(A.generators) + list(B.generators))))
                key = J.members.tobytes()
                if key not in found:
                    found[key] = J
                    nxt.append(J)
        frontier = nxt
    return sorted(found.values(), key=lambda S: (S.order, S.members.tolist()))


def commutator_subgroup(A: Subgroup, B: Subgroup) -> Subgroup:
    """``[A, B]``: normal closure in ``<A, B>`` of the commutators of generators."""
    G = A.parent
    if B.parent is not G:
        raise ValueError("subgroups of different groups")
    ga, gb = np.array(A.generators, dtype=np.int64), np.array(B.generators, dtype=np.int64)
    if ga.size == 0 or gb.size == 0:
        return G.trivial()
    aa, bb = np.meshgrid(ga, gb, indexing="ij")
    comms = np.unique(G.commutator_many(aa.ravel(), bb.ravel()))
    joint = subgroup_generated(G, list(ga) + list(gb))
    return normal_closure(G, comms.tolist(), within=joint)


def _as_subgroup(X) -> Subgroup:
    return X.whole() if isinstance(X, FiniteGroup) else X


def lower_central_series(X) -> list[Subgroup]:
    S = _as_subgroup(X)
    series = [S]
    while True:
        nxt = commutator_subgroup(series[-1], S)
        if nxt.order == series[-1].order:
            return series
        series.append(nxt)


def derived_series(X) -> list[Subgroup]:
    S = _as_subgroup(X)
    series = [S]
    while True:
        nxt = commutator_subgroup(series[-1], series[-1])
        if nxt.order == series[-1].order:
            return series
        series.append(nxt)


def nilpotency_class(X) -> int | None:
    """Smallest c with gamma_{c+1} = 1, or None when not nilpotent."""
    series = lower_central_series(X)
    if not series[-1].is_trivial():
        return None
    return len(series) - 1


def is_nilpotent(X) -> bool:
    return nilpotency_class(X) is not None


def is_solvable(X) -> bool:
    return derived_series(X)[-1].is_trivial()


def derived_length(X) -> int | None:
    series = derived_series(X)
    if not series[-1].is_trivial():
        return None
    return len(series) - 1


def center(X) -> Subgroup:
    S = _as_subgroup(X)
    return centralizer(S.parent, S.generators, within=S)


def centralizer(G: FiniteGroup, elements: Iterable[int], within: Subgroup | None = None) -> Subgroup:
    mask = np.zeros(G.order, dtype=bool)
    mask[within.members if within is not None else np.arange(G.order)] = True
    for s in elements:
        s = int(s)
        mask &= G.left_perm(s) == G.right_perm(s)
    return Subgroup(G, np.flatnonzero(mask))


def orbits(perms: Sequence[np.ndarray], n: int) -> np.ndarray:
    """Orbit labels (0, 1, ...) of the group generated by ``perms`` on ``range(n)``."""
    if not perms:
        return np.arange(n)
    src = np.concatenate([np.arange(n)] * len(perms))
    dst = np.concatenate([np.asarray(p) for p in perms])
    graph = coo_matrix((np.ones(src.size, dtype=np.int8), (src, dst)), shape=(n, n))
    _, labels = connected_components(graph, directed=True, connection="weak")
    # relabel by first occurrence so the output is canonical
    _, first = np.unique(labels, return_index=True)
    rank = np.empty(first.size, dtype=np.int64)
    rank[np.argsort(np.argsort(first))] = np.arange(first.size)
    return rank[labels]


def conjugacy_classes(X) -> list[np.ndarray]:
    S = _as_subgroup(X)
    G = S.parent
    perms = [G.conj_perm(g) for g in S.generators]
    labels = orbits(perms, G.order)
    mlabels = labels[S.members]
    classes = []
    for lab in np.unique(mlabels):
        classes.append(S.members[mlabels == lab])
    classes.sort(key=lambda c: int(c[0]))
    return classes


@dataclass
class Homomorphism:
    source: FiniteGroup
    target: FiniteGroup
    images: np.ndarray

    def __post_init__(self):
        self.images = np.asarray(self.images, dtype=np.int64)
        if self.images.shape != (self.source.order,):
            raise ValueError("one image per source element required")

    def __call__(self, x):
        return self.images[x]

    def violations(self, limit: int = 10) -> list[tuple[int, int]]:
        """Pairs (x, y) with images[x*y] != images[x]*images[y].

        Exhaustive for dense sources of order <= 512; otherwise every
        Cayley-graph edge for a generating set is checked, which decides the
        same question.
        """
        S, T, im = self.source, self.target, self.images
        bad: list[tuple[int, int]] = []
        ys = range(S.order) if (S.is_dense and S.order <= 512) else S.generators
        xs = np.arange(S.order)
        for y in ys:
            lhs = im[S.right_perm(y)]
            rhs = T.mul_many(im, im[y])
            for x in xs[lhs != rhs][:limit - len(bad)]:
                bad.append((int(x), int(y)))
            if len(bad) >= limit:
                break
        return bad

    def is_homomorphism(self) -> bool:
        return not self.violations(limit=1)

    def kernel(self) -> Subgroup:
        return Subgroup(self.source, np.flatnonzero(self.images == self.target.identity))

    def image(self) -> Subgroup:
        return Subgroup(self.target, np.unique(self.images))

    def preimage(self, sub: Subgroup) -> Subgroup:
        return Subgroup(self.source, np.flatnonzero(sub.mask[self.images]))

    def is_surjective(self) -> bool:
        return np.unique(self.images).size == self.target.order


def generating_subset(G: FiniteGroup, candidates: Iterable[int]) -> list[int]:
    """Greedy: keep each candidate not already in the span of the kept ones."""
    kept: list[int] = []
    mask = np.zeros(G.order, dtype=bool)
    mask[G.identity] = True
    count = 1
    for c in candidates:
        c = int(c)
        if count == G.order:
            break
        if mask[c]:
            continue
        kept.append(c)
        mask = G._closure_mask([c] + kept, start=mask)
        count = int(mask.sum())
    return kept


def extend_homomorphism(source: FiniteGroup, gens: Sequence[int], images: Sequence[int],
                        target: FiniteGroup) -> tuple[Homomorphism | None, list[tuple[int, int]]]:
    """Extend ``gens[k] -> images[k]`` to a homomorphism, if one exists.

    Images are propagated along a breadth-first tree over a generating subset
    of ``gens``; then every Cayley edge for that subset and every remaining
    pair ``(gens[k], images[k])`` is checked.  Returns ``(hom, [])`` or
    ``(None, violations)`` where a violation is ``(element, generator)``
    (``element = -1`` for a generator whose own image disagrees).
    """
    want: dict[int, int] = {}
    bad: list[tuple[int, int]] = []
    for g, v in zip(gens, images):
        g, v = int(g), int(v)
        if want.setdefault(g, v) != v:
            bad.append((-1, g))
    if bad:
        return None, bad
    sub = generating_subset(source, want)
    img = np.full(source.order, -1, dtype=np.int64)
    img[source.identity] = target.identity
    perms = [source.right_perm(s) for s in sub]
    frontier = np.array([source.identity])
    while frontier.size:
        parts = []
        for s, p in zip(sub, perms):
            dst = p[frontier]
            fresh = img[dst] < 0
            if not fresh.any():
                continue
            dst, src = dst[fresh], frontier[fresh]
            dst, first = np.unique(dst, return_index=True)
            img[dst] = target.mul_many(img[src[first]], want[s])
            parts.append(dst)
        frontier = np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)
    if (img < 0).any():
        return None, [(-1, int(np.flatnonzero(img < 0)[0]))]
    for s, p in zip(sub, perms):
        lhs = img[p]
        rhs = target.mul_many(img, want[s])
        for x in np.flatnonzero(lhs != rhs)[:10].tolist():
            bad.append((x, s))
    for g, v in want.items():
        if img[g] != v:
            bad.append((-1, g))
    if bad:
        return None, bad
    return Homomorphism(source, target, img), []


def quotient(G: FiniteGroup, N: Subgroup) -> tuple[FiniteGroup, Homomorphism]:
    if N.parent is not G:
        raise ValueError("N is not a subgroup of G")
    if not N.is_normal():
        raise NotNormal("subgroup is not normal")
    coset = np.full(G.order, -1, dtype=np.int64)
    reps = []
    for g in range(G.order):
        if coset[g] < 0:
            coset[G.mul_many(g, N.members)] = len(reps)
            reps.append(g)
    reps = np.array(reps, dtype=np.int64)
    table = coset[G.mul_many(reps[:, None], reps[None, :])]
    labels = [G.labels[int(r)] + "N" if N.order > 1 else G.labels[int(r)] for r in reps]
    Q = FiniteGroup(table, labels=labels, check=False)
    return Q, Homomorphism(G, Q, coset)


def minimal_normal_subgroup(G: FiniteGroup, inside: Subgroup | None = None) -> Subgroup:
    """A minimal normal subgroup (contained in ``inside`` when given).

    Candidates are the subgroups generated by single non-identity conjugacy
    classes; the smallest one, ties broken by member list, is minimal.
    """
    best = None
    for cls in conjugacy_classes(G):
        if cls[0] == G.identity or (inside is not None and not inside.mask[cls[0]]):
            continue
        S = subgroup_generated(G, cls.tolist())
        key = (S.order, S.members.tolist())
        if best is None or key < best[0]:
            best = (key, S)
    if best is None:
        raise ValueError("trivial group has no minimal normal subgroup")
    return best[1]


def chief_series(X) -> list[Subgroup]:
    """Chief series ``1 = N0 < N1 < ... < Nk = G`` (normal in G, minimal steps)."""
    S = _as_subgroup(X)
    if S.is_whole():
        G, embed = S.parent, None
    else:
        G, embed = S.as_group()
    if not G.is_dense:
        raise CapExceeded("order for chief series", G.order, DENSE_CAP)
    series = [G.trivial()]
    while not series[-1].is_whole():
        Q, pi = quotient(G, series[-1])
        M = minimal_normal_subgroup(Q)
        series.append(pi.preimage(M))
    if embed is None:
        return series
    return [Subgroup(S.parent, embed[T.members]) for T in series]


def is_supersolvable(X) -> bool:
    """All chief factors of prime order.

    Tree-backed groups too large for a Cayley table are accepted when
    nilpotent (finite nilpotent groups are supersolvable).
    """
    S = _as_subgroup(X)
    if S.order > DENSE_CAP or not S.parent.is_dense:
        if is_nilpotent(S):
            return True
        if not is_solvable(S):
            return False
        raise CapExceeded("order for chief series", S.order, DENSE_CAP)
    series = chief_series(S)
    for lo, hi in zip(series, series[1:]):
        k = hi.order // lo.order
        if len(factorint(k)) != 1 or sum(factorint(k).values()) != 1:
            return False
    return True


def abelian_invariants(X, route: str = "auto") -> AbelianInvariants:
    """Invariant factors of an abelian (sub)group.

    ``route="snf"`` uses the Smith normal form of the Cayley-graph relation
    matrix (generators: all elements; relations ``x_a + x_s = x_{as}`` for a
    generating set ``s``, and ``x_e = 0``).  ``route="count"`` rebuilds the
    group from the sizes ``|A[p^k]|``.  ``auto`` picks SNF up to order 512.
    """
    S = _as_subgroup(X)
    if not S.is_abelian():
        raise NotAbelian("abelian invariants requested for a non-abelian group")
    if S.order == 1:
        return AbelianInvariants(())
    if route == "auto":
        route = "snf" if S.order <= SNF_ROUTE_CAP else "count"
    G = S.parent
    if route == "snf":
        pos = {int(x): i for i, x in enumerate(S.members)}
        rows = [{pos[G.identity]: 1}]
        for s in S.generators:
            prods = G.mul_many(S.members, s)
            for a, ab in zip(S.members.tolist(), prods.tolist()):
                r: dict[int, int] = {}
                for c, v in ((pos[a], 1), (pos[s], 1), (pos[ab], -1)):
                    r[c] = r.get(c, 0) + v
                rows.append(r)
        return invariants_from_relations(rows, S.order)
    if route != "count":
        raise ValueError(f"unknown route {route!r}")
    orders = G.element_orders[S.members]
    counts = {}
    for p, e in factorint(S.order).items():
        logs = [0]
        k = 1
        while logs[-1] < e:
            size = int(np.count_nonzero((p ** k) % orders == 0))
            lg = 0
            while size % p == 0:
                size //= p
                lg += 1
            logs.append(lg)
            k += 1
        counts[p] = logs
    return AbelianInvariants.from_prime_power_counts(counts)


def abelianization(G: FiniteGroup) -> tuple[FiniteGroup, Homomorphism, AbelianInvariants]:
    D = commutator_subgroup(G.whole(), G.whole())
    Q, pi = quotient(G, D)
    return Q, pi, abelian_invariants(Q)


def exponent(X) -> int:
    S = _as_subgroup(X)
    e = 1
    for o in np.unique(S.parent.element_orders[S.members]).tolist():
        e = e * o // gcd(e, o)
    return e


def is_isomorphic(G: FiniteGroup, H: FiniteGroup) -> bool:
    return find_isomorphism(G, H) is not None


def _invariant_signature(G: FiniteGroup):
    return (G.order, tuple(np.bincount(G.element_orders, minlength=G.order + 1).tolist()))


def find_isomorphism(G: FiniteGroup, H: FiniteGroup) -> np.ndarray | None:
    """Backtracking search for generator images; returns the element map or None."""
    if _invariant_signature(G) != _invariant_signature(H):
        return None
    gens = list(G.generators)
    n = G.order
    og, oh = G.element_orders, H.element_orders
    cands = [np.flatnonzero(oh == og[g]).tolist() for g in gens]

    def extend(imgs):
        # propagate along right multiplication by generators from the identity
        phi = np.full(n, -1, dtype=np.int64)
        phi[G.identity] = H.identity
        frontier = [G.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g, h in zip(gens[:len(imgs)], imgs):
                    y = G.mul(x, g)
                    v = H.mul(int(phi[x]), h)
                    if phi[y] < 0:
                        phi[y] = v
                        nxt.append(y)
                    elif phi[y] != v:
                        return None
            frontier = nxt
        return phi

    def search(imgs):
        k = len(imgs)
        if k == len(gens):
            phi = extend(imgs)
            if phi is None or (phi < 0).any() or np.unique(phi).size != n:
                return None
            return phi
        for h in cands[k]:
            trial = imgs + [h]
            # cheap consistency: the partial map on <g1..gk> must be a well-defined injection
            phi = extend(trial)
            if phi is None:
                continue
            got = phi[phi >= 0]
            if np.unique(got).size != got.size:
                continue
            res = search(trial)
            if res is not None:
                return res
        return None

    return search([])


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """``G x H`` on pairs ``(g, h)`` encoded as ``g * |H| + h``."""
    m = H.order
    g = np.arange(G.order * m) // m
    h = np.arange(G.order * m) % m
    table = G.mul_many(g[:, None], g[None, :]) * m + H.mul_many(h[:, None], h[None, :])
    labels = [f"({G.labels[a]},{H.labels[b]})" for a, b in zip(g.tolist(), h.tolist())]
    return FiniteGroup(table, labels=labels, check=False)


def abelian_group(orders: Sequence[int], *, dense_cap: int = DENSE_CAP,
                  name: str | None = None) -> FiniteGroup:
    """``Z/orders[0] x Z/orders[1] x ...`` with element ``ravel_multi_index(coords)``."""
    orders = [int(d) for d in orders if int(d) > 1]
    if not orders:
        return FiniteGroup(np.zeros((1, 1), dtype=np.int16), labels=["0"], check=False, name=name)
    n = int(np.prod(orders))
    coords = np.array(np.unravel_index(np.arange(n), orders))
    cols = []
    for j, d in enumerate(orders):
        shifted = coords.copy()
        shifted[j] = (shifted[j] + 1) % d
        cols.append(np.ravel_multi_index(tuple(shifted), orders))
    labels = None
    if n <= dense_cap:
        labels = ["(" + ",".join(map(str, coords[:, i])) + ")" for i in range(n)]
    return FiniteGroup.from_right_regular(np.array(cols), labels=labels, dense_cap=dense_cap, name=name)


def encode_abelian(orders: Sequence[int], coords) -> np.ndarray:
    """Element indices in :func:`abelian_group` for coordinate rows."""
    orders = [int(d) for d in orders if int(d) > 1]
    c = np.asarray(coords, dtype=np.int64).reshape(-1, len(orders))
    if not orders:
        return np.zeros(c.shape[0], dtype=np.int64)
    return np.ravel_multi_index(tuple((c % orders).T), orders).astype(np.int64)
