import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tensorcat.actions import (AutAction, CompatiblePair, action_from_generators, check_compatibility,
                               conjugation_action, conjugation_pair, identity_crossed_module,
                               inclusion_crossed_module, inversion_action, normal_subgroup_pair,
                               semidirect, semidirect_product, trivial_action, trivial_pair,
                               verify_crossed_module)
from tensorcat.catalog import build, cyclic_group, dihedral_group
from tensorcat.errors import InvalidAction
from tensorcat.groups import is_isomorphic, normal_subgroups
from tensorcat.permutations import from_permutations

S3 = from_permutations(["(1 2 3)", "(1 2)"])


def test_conjugation_pairs_are_compatible():
    for G in (S3, cyclic_group(1), dihedral_group(4)):
        act = conjugation_action(G)
        res = check_compatibility(G, G, act, act)
        assert isinstance(res, CompatiblePair) and res.conjugation
        assert conjugation_pair(G).verified


def test_trivial_actions_are_compatible():
    Z4 = cyclic_group(4)
    res = check_compatibility(S3, Z4, trivial_action(S3, Z4), trivial_action(Z4, S3))
    assert isinstance(res, CompatiblePair)
    assert trivial_pair(S3, Z4).verified


def test_incompatible_pair_is_reported():
    Z2 = cyclic_group(2)
    t = S3.labels.index("(1 2)")
    alpha = action_from_generators(Z2, S3, {1: S3.conj_perm(t)})
    beta = trivial_action(S3, Z2)
    bad = check_compatibility(Z2, S3, alpha, beta)
    assert isinstance(bad, list) and bad
    # every reported triple really breaks the identity
    cy = np.stack([S3.conj_perm(h) for h in range(6)])
    for v in bad:
        if v.identity == "H":
            h, g, h2 = v.first, v.second, v.third
            lhs = alpha.table[beta.table[h, g], h2]
            rhs = cy[h][alpha.table[g, cy[S3.inverse[h]][h2]]]
            assert lhs != rhs


def test_action_validation():
    Z2, Z3 = cyclic_group(2), cyclic_group(3)
    with pytest.raises(InvalidAction):
        AutAction(Z2, Z3, np.array([[0, 1, 2], [0, 0, 0]])).validate()
    with pytest.raises(InvalidAction):
        inversion_action(Z2, S3)


def test_semidirect_products():
    Z3, Z2, Z4 = cyclic_group(3), cyclic_group(2), cyclic_group(4)
    G, en, eq = semidirect(inversion_action(Z2, Z3))
    assert G.order == 6 and not G.is_abelian() and is_isomorphic(G, S3)
    D, _, _ = semidirect(inversion_action(Z2, Z4))
    assert is_isomorphic(D, dihedral_group(4))
    P, _, _ = semidirect_product(trivial_pair(Z3, Z4))
    assert P.order == 12 and P.is_abelian()


def test_crossed_module_textbook_cases():
    G = dihedral_group(4)
    assert verify_crossed_module(identity_crossed_module(G)).ok
    for N in normal_subgroups(G):
        assert verify_crossed_module(inclusion_crossed_module(N)).ok


def test_crossed_module_detects_bad_boundary():
    G = dihedral_group(4)
    cm = identity_crossed_module(G)
    cm.action = trivial_action(G, G)
    rep = verify_crossed_module(cm)
    assert not rep.ok and rep.equivariance


def test_normal_subgroup_pairs():
    G = dihedral_group(4)
    Ns = normal_subgroups(G)
    for A in Ns:
        for B in Ns:
            assert normal_subgroup_pair(A, B).verified


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["dihedral:3", "dihedral:4", "dicyclic:2", "alternating:4", "abelian:2:2"]))
def test_actions_are_by_automorphisms(spec):
    G = build(spec)
    act = conjugation_action(G)
    t = act.table
    assert (t[G.identity] == np.arange(G.order)).all()
    for a in range(G.order):
        for b in range(G.order):
            assert (t[G.mul(a, b)] == t[a][t[b]]).all()
        assert np.unique(t[a]).size == G.order
    assert not act.violations()
