import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tensorcat.abelian import AbelianInvariants, exterior_invariants, gamma_whitehead, tensor_invariants
from tensorcat.actions import (conjugation_pair, inversion_action, trivial_action, trivial_pair,
                               check_compatibility)
from tensorcat.catalog import build, cyclic_group, dicyclic_group, dihedral_group
from tensorcat.errors import CapExceeded, InvalidAction
from tensorcat.fp.enumeration import Limits, enumerate_cosets, to_group
from tensorcat.fp.parse import parse_presentation
from tensorcat.fp.words import Presentation
from tensorcat.groups import (abelian_group, abelian_invariants, commutator_subgroup, is_isomorphic,
                              nilpotency_class)
from tensorcat.permutations import from_permutations
from tensorcat.tensor import (derivative_subgroup, evaluate_tokens, exterior_square, kappa_and_J,
                              m0_and_bogomolov, nabla_consistency, phi_crossed_module,
                              schur_multiplier, section5_rewrite, tensor_presentation,
                              tensor_product, tensor_square)

from oracles import exterior_oracle, gamma_oracle, tensor_oracle

S3 = from_permutations(["(1 2 3)", "(1 2)"])


def nu_order(text):
    """|nu(G)| for G = <text>, from the standard presentation of nu(G).

    nu(G) is generated by G and a copy G^phi, subject to the relations of
    both and ^x[g, h^phi] = [^x g, (^x h)^phi] = ^(x^phi)[g, h^phi].  Its
    order is |G|^2 |G (x) G|, with no tensor machinery involved.
    """
    P = parse_presentation(text)
    T = enumerate_cosets(P)
    G, _ = to_group(T, P)
    k = P.generator_count
    words = [None] * G.order
    words[0] = []
    frontier = [0]
    while frontier:
        nxt = []
        for c in frontier:
            for i in range(k):
                for s, col in ((i + 1, 2 * i), (-(i + 1), 2 * i + 1)):
                    d = int(T.rows[c, col])
                    if words[d] is None:
                        words[d] = words[c] + [s]
                        nxt.append(d)
        frontier = nxt
    inv = lambda w: [-x for x in reversed(w)]
    ph = lambda w: [x + k if x > 0 else x - k for x in w]
    rels = [list(r) for r in P.relators] + [ph(list(r)) for r in P.relators]

    def comm(g, h):
        a, b = words[g], ph(words[h])
        return a + b + inv(a) + inv(b)

    for xi in range(k):
        x = int(T.rows[0, 2 * xi])
        cx = G.conj_perm(x)
        for g in range(G.order):
            for h in range(G.order):
                rhs = comm(int(cx[g]), int(cx[h]))
                c = comm(g, h)
                rels.append([xi + 1] + c + [-(xi + 1)] + inv(rhs))
                rels.append([xi + 1 + k] + c + [-(xi + 1 + k)] + inv(rhs))
    Q = Presentation.from_relators(2 * k, rels)
    return G.order, enumerate_cosets(Q, "hlt", Limits(max_time=300)).index


# -- presentations ---------------------------------------------------------------

def test_presentation_sizes():
    Z2 = cyclic_group(2)
    P = tensor_presentation(conjugation_pair(Z2))
    assert P.generator_count == 4
    # two bilinearity families and two compatibility families, |G|^2 |H| each
    assert P.generator_count == 4
    P3 = tensor_presentation(conjugation_pair(S3))
    assert P3.generator_count == 36
    T = cyclic_group(1)
    assert tensor_square(T).order == 1


def test_presentation_relator_count_before_reduction():
    from tensorcat.tensor import _relator_array
    assert _relator_array(conjugation_pair(cyclic_group(2)), False).shape[0] == 16
    assert _relator_array(conjugation_pair(S3), False).shape[0] == 432


# -- abelian cases against the counting oracle ---------------------------------

@pytest.mark.parametrize("orders", [(2,), (3,), (4,), (6,), (2, 2), (2, 4), (3, 3)])
def test_abelian_square_matches_counting_oracle(orders):
    G = abelian_group(list(orders))
    ts = tensor_square(G, route="enumeration")
    assert abelian_invariants(ts.group).to_list() == tensor_oracle(orders, orders)
    ws = exterior_square(G, route="enumeration")
    assert abelian_invariants(ws.group).to_list() == exterior_oracle(orders)


@pytest.mark.parametrize("a,b", [((2,), (4,)), ((4,), (6,)), ((2, 2), (3,)), ((2,), (2, 4))])
def test_trivial_action_tensor_matches_oracle(a, b):
    ts = tensor_product(trivial_pair(abelian_group(list(a)), abelian_group(list(b))))
    assert abelian_invariants(ts.group).to_list() == tensor_oracle(a, b)


def test_closed_forms_agree_with_oracle():
    for a in [(2,), (2, 2), (2, 4), (3, 6)]:
        inv = AbelianInvariants.from_cyclic_orders(a)
        assert tensor_invariants(inv, inv).to_list() == tensor_oracle(a, a)
        assert exterior_invariants(inv).to_list() == exterior_oracle(a)


@pytest.mark.parametrize("orders", [(), (2,), (3,), (4,), (2, 2)])
def test_gamma_matches_quadratic_map_count(orders):
    inv = AbelianInvariants.from_cyclic_orders(orders)
    assert gamma_whitehead(inv).to_list() == gamma_oracle(orders)


def test_small_squares():
    assert tensor_square(cyclic_group(2)).order == 2
    for n in range(1, 9):
        ts = tensor_square(cyclic_group(n))
        assert abelian_invariants(ts.group).to_list() == ([n] if n > 1 else [])
    assert tensor_square(abelian_group([2, 2])).order == 16
    for n in range(1, 7):
        assert exterior_square(cyclic_group(n)).order == 1
    assert exterior_square(abelian_group([2, 2])).order == 2


# -- non-abelian cases -----------------------------------------------------------

@pytest.mark.parametrize("text,expected", [
    ("gens: a, b; rels: a^4, b^2, abab", 32),    # D4
    ("gens: a, b; rels: a^4, a^2B^2, abaB", 64),  # Q8
    ("gens: a, b; rels: a^3, b^2, abab", 6),      # S3
])
def test_square_order_matches_nu_oracle(text, expected):
    n, nu = nu_order(text)
    P = parse_presentation(text)
    G, _ = to_group(enumerate_cosets(P), P)
    ts = tensor_square(G)
    assert nu == n * n * ts.order
    assert ts.order == expected


@pytest.mark.parametrize("n", [3, 4, 5, 6, 8])
def test_dihedral_family_closed_form(n):
    # Z2^3 x Zn for even n, Z2 x Zn for odd n
    ts = tensor_square(dihedral_group(n))
    want = AbelianInvariants.from_cyclic_orders([2, 2, 2, n] if n % 2 == 0 else [2, n])
    assert abelian_invariants(ts.group) == want


def test_quaternion_square():
    ts = tensor_square(dicyclic_group(2))
    assert abelian_invariants(ts.group).factors == (2, 2, 4, 4)


def test_s3_square_and_wedge():
    ts = tensor_square(S3)
    _, J = kappa_and_J(ts)
    assert J.order * 3 == ts.order
    ws = exterior_square(S3, square=ts)
    assert ws.order == 3
    assert schur_multiplier(S3).factors == ()


def test_schur_multipliers():
    assert schur_multiplier(cyclic_group(5)).factors == ()
    assert schur_multiplier(abelian_group([2, 2])).factors == (2,)
    assert schur_multiplier(dicyclic_group(2)).factors == ()
    assert schur_multiplier(dihedral_group(4)).factors == (2,)


def test_derivative_subgroups():
    Z4, Z2 = cyclic_group(4), cyclic_group(2)
    pair = check_compatibility(Z2, Z4, trivial_action(Z2, Z4), trivial_action(Z4, Z2))
    assert derivative_subgroup(pair).is_trivial()
    pair = check_compatibility(Z4, Z2, trivial_action(Z4, Z2), inversion_action(Z2, Z4))
    D = derivative_subgroup(pair)
    assert sorted(D.members.tolist()) == [0, 2]
    D4 = dihedral_group(4)
    assert derivative_subgroup(conjugation_pair(D4)) == commutator_subgroup(D4.whole(), D4.whole())


def test_kappa_and_j():
    ts = tensor_square(abelian_group([2, 3]))
    _, J = kappa_and_J(ts)
    assert J.is_whole()
    _, J1 = kappa_and_J(tensor_square(cyclic_group(1)))
    assert J1.is_trivial()


@pytest.mark.parametrize("spec", ["dihedral:4", "dihedral:3", "dicyclic:2"])
def test_phi_is_a_crossed_module(spec):
    G = build(spec)
    ts = tensor_square(G)
    cm, rep = phi_crossed_module(ts)
    assert rep.ok and rep.exhaustive
    assert ts.phi.image() == commutator_subgroup(G.whole(), G.whole())


def test_trivial_pair_has_trivial_phi():
    A, B = dihedral_group(3), cyclic_group(4)
    ts = tensor_product(trivial_pair(A, B))
    assert ts.phi.image().is_trivial()
    assert ts.group.is_abelian()


def test_bogomolov_examples():
    rep = m0_and_bogomolov(dihedral_group(4))
    assert rep.bogomolov.is_trivial() and rep.schur.factors == (2,)
    for spec in ["abelian:2:2", "abelian:2:4", "metacyclic:8:2:3", "dicyclic:3"]:
        assert m0_and_bogomolov(build(spec)).bogomolov.is_trivial()


def test_multiplier_identities():
    for spec in ["dihedral:4", "dihedral:5", "alternating:4", "heisenberg:3"]:
        G = build(spec)
        rep = m0_and_bogomolov(G, with_square=True)
        assert rep.schur.order * rep.commutator_order == rep.wedge_order
        assert rep.j_invariants.order * rep.commutator_order == rep.tensor_order
        assert rep.schur.order % rep.bogomolov.order == 0


def test_section5_rewrite():
    G = dihedral_group(4)
    ts = tensor_square(G)
    assert section5_rewrite(ts, ts.group.identity) == []
    for e in range(ts.order):
        word = section5_rewrite(ts, e)
        assert evaluate_tokens(ts, word) == e
    e = int(ts.gen[1, 2])
    w = section5_rewrite(ts, e)
    assert evaluate_tokens(ts, w) == e


def test_caps():
    with pytest.raises(CapExceeded):
        tensor_square(cyclic_group(80))
    with pytest.raises(InvalidAction):
        tensor_product(trivial_pair(cyclic_group(2), cyclic_group(3)), exterior=True)


# -- properties -------------------------------------------------------------------

small_specs = st.sampled_from(["cyclic:4", "abelian:2:2", "dihedral:3", "dihedral:4", "dicyclic:2",
                               "dihedral:5", "alternating:4", "metacyclic:8:2:5"])


@settings(max_examples=12, deadline=None)
@given(small_specs)
def test_tensor_structure_maps(spec):
    G = build(spec)
    ts = tensor_square(G)
    T = ts.group
    # generators generate, phi and kappa act on symbols as prescribed, g (x) g is not forced trivial
    assert T.order == len(np.unique(ts.gen)) or T.order >= 1
    from tensorcat.groups import subgroup_generated
    assert subgroup_generated(T, np.unique(ts.gen).tolist()).is_whole()
    g = np.repeat(np.arange(G.order), G.order)
    h = np.tile(np.arange(G.order), G.order)
    assert (ts.kappa.images[ts.gen.ravel()] == G.commutator_many(g, h)).all()
    conj_h_g_inv = G.mul_many(g, G.inverse[ts.pair.beta.table[h, g]])
    assert (ts.phi.images[ts.gen.ravel()] == conj_h_g_inv).all()


@settings(max_examples=12, deadline=None)
@given(small_specs)
def test_wedge_kills_diagonal(spec):
    G = build(spec)
    ws = exterior_square(G)
    assert all(int(ws.gen[g, g]) == ws.group.identity for g in range(G.order))


@settings(max_examples=10, deadline=None)
@given(small_specs)
def test_nabla_identities(spec):
    rep = nabla_consistency(build(spec))
    assert rep.ok


@settings(max_examples=10, deadline=None)
@given(small_specs)
def test_strategies_agree(spec):
    G = build(spec)
    a = tensor_square(G, strategy="hlt", route="enumeration")
    b = tensor_square(G, strategy="felsch", route="enumeration")
    assert a.order == b.order and is_isomorphic(a.group, b.group)


@settings(max_examples=10, deadline=None)
@given(st.lists(st.integers(2, 6), min_size=1, max_size=3).filter(lambda xs: np.prod(xs) <= 16))
def test_abelian_route_matches_enumeration(orders):
    G = abelian_group(orders)
    a = tensor_square(G, route="abelian")
    inv = AbelianInvariants.from_cyclic_orders(orders)
    assert a.invariants == tensor_invariants(inv, inv)
    if a.order <= 256:
        b = tensor_square(G, route="enumeration")
        assert b.order == a.order


@settings(max_examples=10, deadline=None)
@given(small_specs)
def test_class_bound(spec):
    G = build(spec)
    c = nilpotency_class(G)
    if c is not None and c >= 1:
        assert nilpotency_class(tensor_square(G).group) <= (c + 1) // 2
