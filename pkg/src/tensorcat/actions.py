"""Actions by automorphisms, compatible pairs, semidirect products, crossed modules.

Conjugation is written on the left: ``^g x = g x g^-1``.  In the
compatibility identities the exponent ``h g h^-1`` mixes the two groups; it
is read as the composite ``h . g . h^-1`` of the three single-group actions,
which makes every conjugation pair compatible.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import InvalidAction
from .groups import (FiniteGroup, Homomorphism, Subgroup, commutator_subgroup, subgroup_generated)



@dataclass(eq=False)
class AutAction:
    """``table[a, x]`` is the image of ``x`` in ``space`` under the actor element ``a``."""

    actor: FiniteGroup
    space: FiniteGroup
    table: np.ndarray
    name: str = "explicit"

    def __post_init__(self):
        self.table = np.asarray(self.table, dtype=np.int64)
        if self.table.shape != (self.actor.order, self.space.order):
            raise InvalidAction(f"action table must be {self.actor.order}x{self.space.order}")

    def __call__(self, a, x):
        return self.table[a, x]

    def violations(self, limit: int = 20) -> list[str]:
        A, X, t = self.actor, self.space, self.table
        out: list[str] = []
        ident = np.arange(X.order)
        if not (t[A.identity] == ident).all():
            out.append("identity does not act trivially")
        for a in range(A.order):
            if np.unique(t[a]).size != X.order:
                out.append(f"element {a} does not act bijectively")
                if len(out) >= limit:
                    return out
                continue
            for s in X.generators:
                lhs = t[a][X.right_perm(s)]
                rhs = X.mul_many(t[a], t[a, s])
                if not (lhs == rhs).all():
                    x = int(np.flatnonzero(lhs != rhs)[0])
                    out.append(f"element {a} is not a homomorphism at ({x}, {s})")
                    break
            if len(out) >= limit:
                return out
        for b in A.generators:
            # t[a*b] == t[a] o t[b] for all a
            lhs = t[A.right_perm(b)]
            rhs = t[:, t[b]]
            if not (lhs == rhs).all():
                a = int(np.flatnonzero((lhs != rhs).any(axis=1))[0])
                out.append(f"action is not a homomorphism at ({a}, {b})")
        return out[:limit]

    def validate(self) -> "AutAction":
        bad = self.violations()
        if bad:
            raise InvalidAction(f"not an action by automorphisms: {bad[0]}", bad)
        return self

    def is_trivial(self) -> bool:
        return bool((self.table == np.arange(self.space.order)).all())


def conjugation_table(G: FiniteGroup) -> np.ndarray:
    return np.stack([G.conj_perm(g) for g in range(G.order)])


def conjugation_action(G: FiniteGroup) -> AutAction:
    return AutAction(G, G, conjugation_table(G), "conjugation")


def trivial_action(actor: FiniteGroup, space: FiniteGroup) -> AutAction:
    return AutAction(actor, space, np.tile(np.arange(space.order), (actor.order, 1)), "trivial")


def inversion_action(actor: FiniteGroup, space: FiniteGroup) -> AutAction:
    """Elements outside the index-2 subgroup ``actor^2 [actor, actor]`` invert ``space``."""
    if not space.is_abelian():
        raise InvalidAction("inversion is an automorphism only of an abelian group")
    squares = [actor.mul(g, g) for g in range(actor.order)]
    comm = commutator_subgroup(actor.whole(), actor.whole())
    K = subgroup_generated(actor, squares + comm.members.tolist())
    if 2 * K.order != actor.order:
        raise InvalidAction("actor has no canonical index-2 subgroup for an inversion action")
    rows = np.where(K.mask[:, None], np.arange(space.order)[None, :], space.inverse[None, :])
    return AutAction(actor, space, rows, "inversion")


def action_from_generators(actor: FiniteGroup, space: FiniteGroup,
                           images: dict[int, dict[int, int] | np.ndarray]) -> AutAction:
    """Extend automorphisms given for actor generators (as full element maps) to all of actor."""
    n = space.order
    table = np.full((actor.order, n), -1, dtype=np.int64)
    table[actor.identity] = np.arange(n)
    gens = list(images)
    maps = {g: np.asarray(images[g] if not isinstance(images[g], dict)
                          else [images[g][x] for x in range(n)], dtype=np.int64) for g in gens}
    frontier = [actor.identity]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = actor.mul(a, g)
                row = table[a][maps[g]]
                if table[b, 0] < 0:
                    table[b] = row
                    nxt.append(b)
                elif not (table[b] == row).all():
                    raise InvalidAction("generator images do not define an action")
        frontier = nxt
    if (table < 0).any():
        raise InvalidAction("given elements do not generate the actor")
    return AutAction(actor, space, table).validate()


class Violation(NamedTuple):
    identity: str
    first: int
    second: int
    third: int


@dataclass(eq=False)
class CompatiblePair:
    G: FiniteGroup
    H: FiniteGroup
    alpha: AutAction
    beta: AutAction
    verified: bool = False
    conjugation: bool = False

    def swapped(self) -> "CompatiblePair":
        return CompatiblePair(self.H, self.G, self.beta, self.alpha, self.verified, self.conjugation)

    @property
    def is_square(self) -> bool:
        return self.conjugation


def compatibility_violations(G: FiniteGroup, H: FiniteGroup, alpha: AutAction, beta: AutAction,
                             limit: int | None = None) -> list[Violation]:
    """All triples breaking the compatibility identities.

    ``("H", h, g, h')`` reports ``^(^h g) h' != h . g . h^-1 (h')`` and
    ``("G", g, h, g')`` reports ``^(^g h) g' != g . h . g^-1 (g')``.
    """
    out: list[Violation] = []
    for (X, Y, act_xy, act_yx, tag) in ((G, H, alpha, beta, "H"), (H, G, beta, alpha, "G")):
        # X acts on Y via act_xy; Y acts on X via act_yx
        cy = conjugation_table(Y)
        a, b = act_xy.table, act_yx.table
        for y in range(Y.order):
            yinv = int(Y.inverse[y])
            # lhs[x, y'] = a[b[y, x], y'] ; rhs[x, y'] = cy[y, a[x, cy[yinv, y']]]
            lhs = a[b[y]]
            rhs = cy[y][a[:, cy[yinv]]]
            bad = np.argwhere(lhs != rhs)
            for x, y2 in bad.tolist():
                out.append(Violation(tag, y, x, y2))
                if limit is not None and len(out) >= limit:
                    return out
    return out


def check_compatibility(G: FiniteGroup, H: FiniteGroup, alpha: AutAction, beta: AutAction):
    """Verified :class:`CompatiblePair`, or the list of all violations.

    ``alpha`` is the action of G on H, ``beta`` the action of H on G.
    Raises InvalidAction if either table is not an action by automorphisms.
    """
    for act, actor, space in ((alpha, G, H), (beta, H, G)):
        if act.actor is not actor or act.space is not space:
            raise InvalidAction("action does not match the groups of the pair")
        act.validate()
    bad = compatibility_violations(G, H, alpha, beta)
    if bad:
        return bad
    conj = G is H and alpha.name == beta.name == "conjugation"
    return CompatiblePair(G, H, alpha, beta, verified=True, conjugation=conj)


def conjugation_pair(G: FiniteGroup) -> CompatiblePair:
    act = conjugation_action(G)
    return CompatiblePair(G, G, act, act, verified=True, conjugation=True)


def normal_subgroup_pair(A: Subgroup, B: Subgroup) -> CompatiblePair:
    """``A`` and ``B`` normal in a common group, acting on each other by conjugation there.

    Such mutual actions are always compatible; the check is run anyway.
    """
    X = A.parent
    if B.parent is not X:
        raise InvalidAction("subgroups of different groups")
    if not (A.is_normal() and B.is_normal()):
        raise InvalidAction("both subgroups must be normal in the common group")
    G, ea = A.as_group()
    H, eb = B.as_group()
    pa = np.full(X.order, -1, dtype=np.int64)
    pa[ea] = np.arange(ea.size)
    pb = np.full(X.order, -1, dtype=np.int64)
    pb[eb] = np.arange(eb.size)
    conj = conjugation_table(X)
    alpha = AutAction(G, H, pb[conj[ea][:, eb]], "conjugation")
    beta = AutAction(H, G, pa[conj[eb][:, ea]], "conjugation")
    res = check_compatibility(G, H, alpha, beta)
    if not isinstance(res, CompatiblePair):
        raise InvalidAction("conjugation actions of normal subgroups failed the compatibility check", res)
    return res


def trivial_pair(G: FiniteGroup, H: FiniteGroup) -> CompatiblePair:
    """Both actions trivial; always compatible."""
    res = check_compatibility(G, H, trivial_action(G, H), trivial_action(H, G))
    assert isinstance(res, CompatiblePair)
    return res


def semidirect(action: AutAction) -> tuple[FiniteGroup, np.ndarray, np.ndarray]:
    """``N x| Q`` for Q acting on N; elements ``(n, q)`` encoded as ``n*|Q| + q``.

    Multiplication ``(n, q)(n', q') = (n . ^q n', q q')``.  Returns the group
    and the embeddings of N (normal) and Q.
    """
    Q, N = action.actor, action.space
    m = Q.order
    idx = np.arange(N.order * m)
    n_, q_ = idx // m, idx % m
    acted = action.table[q_[:, None], n_[None, :]]
    nn = N.mul_many(np.broadcast_to(n_[:, None], acted.shape), acted)
    qq = Q.mul_many(q_[:, None], q_[None, :])
    table = nn * m + qq
    labels = [f"({N.labels[a]},{Q.labels[b]})" for a, b in zip(n_.tolist(), q_.tolist())]
    S = FiniteGroup(table, labels=labels)
    embed_n = np.arange(N.order) * m + Q.identity
    embed_q = N.identity * m + np.arange(m)
    return S, embed_n, embed_q


def semidirect_product(pair: CompatiblePair, side: str = "G"):
    """``G x| H`` using beta (side ``"G"``) or ``H x| G`` using alpha (side ``"H"``)."""
    return semidirect(pair.beta if side == "G" else pair.alpha)


@dataclass(eq=False)
class CrossedModule:
    boundary: Homomorphism
    action: AutAction

    @property
    def A(self) -> FiniteGroup:
        return self.boundary.source

    @property
    def B(self) -> FiniteGroup:
        return self.boundary.target


@dataclass
class CrossedModuleReport:
    equivariance: list[tuple[int, int]] = field(default_factory=list)
    peiffer: list[tuple[int, int]] = field(default_factory=list)
    other: list[str] = field(default_factory=list)
    exhaustive: bool = True

    @property
    def ok(self) -> bool:
        return not (self.equivariance or self.peiffer or self.other)

    def __bool__(self):
        return self.ok


EXHAUSTIVE_PEIFFER_CAP = 4096


def verify_crossed_module(cm: CrossedModule, limit: int = 20) -> CrossedModuleReport:
    """Check equivariance, the Peiffer identity, and the kernel/image consequences.

    Both identities are checked for every pair of elements when the source is
    a Cayley-table group of order at most 4096.  Otherwise the Peiffer
    identity is checked for every ``a'`` against a generating set of ``a``;
    the two sides are homomorphisms in ``a`` into Aut(A), so this decides the
    identity for all pairs.
    """
    rep = CrossedModuleReport()
    phi, act = cm.boundary, cm.action
    A, B = cm.A, cm.B
    if act.actor is not B or act.space is not A:
        rep.other.append("action is not an action of the boundary's target on its source")
        return rep
    bad_hom = phi.violations(limit=1)
    if bad_hom:
        rep.other.append(f"boundary is not a homomorphism at {bad_hom[0]}")
    av = act.violations(limit=1)
    if av:
        rep.other.append(f"invalid action: {av[0]}")
    im = phi.images
    # phi(^b a) == b phi(a) b^-1
    for b in range(B.order):
        lhs = im[act.table[b]]
        rhs = B.conj_perm(b)[im]
        for a in np.flatnonzero(lhs != rhs)[:limit - len(rep.equivariance)].tolist():
            rep.equivariance.append((b, a))
        if len(rep.equivariance) >= limit:
            break
    exhaustive = A.is_dense and A.order <= EXHAUSTIVE_PEIFFER_CAP
    rep.exhaustive = exhaustive
    sources = range(A.order) if exhaustive else A.generators
    for a in sources:
        lhs = act.table[im[a]]
        rhs = A.conj_perm(a)
        for a2 in np.flatnonzero(lhs != rhs)[:limit - len(rep.peiffer)].tolist():
            rep.peiffer.append((int(a), a2))
        if len(rep.peiffer) >= limit:
            break
    if rep.ok:
        K = phi.kernel()
        if not K.is_central():
            rep.other.append("kernel of the boundary is not central")
        if not phi.image().is_normal():
            rep.other.append("image of the boundary is not normal")
    return rep


def identity_crossed_module(G: FiniteGroup) -> CrossedModule:
    return CrossedModule(Homomorphism(G, G, np.arange(G.order)), conjugation_action(G))


def inclusion_crossed_module(N: Subgroup) -> CrossedModule:
    """Inclusion of a normal subgroup with the conjugation action."""
    G = N.parent
    A, embed = N.as_group()
    pos = np.full(G.order, -1, dtype=np.int64)
    pos[embed] = np.arange(A.order)
    table = np.stack([pos[G.conj_perm(g)[embed]] for g in range(G.order)])
    if (table < 0).any():
        raise InvalidAction("subgroup is not normal")
    return CrossedModule(Homomorphism(A, G, embed), AutAction(G, A, table, "conjugation"))
