import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tensorcat.abelian import AbelianInvariants, gamma_whitehead, smith_diagonal
from tensorcat.catalog import build, cyclic_group, dicyclic_group, dihedral_group
from tensorcat.errors import NotAbelian
from tensorcat.groups import (FiniteGroup, Homomorphism, abelian_group, abelian_invariants, center,
                              centralizer, commutator_subgroup, conjugacy_classes, derived_length,
                              derived_series, direct_product, exponent, find_isomorphism,
                              is_isomorphic, is_nilpotent, is_solvable, is_supersolvable,
                              lower_central_series, nilpotency_class, normal_subgroups, quotient,
                              subgroup_generated)
from tensorcat.permutations import alternating_group, from_permutations, symmetric_group

from oracles import perm_closure


def el(G, cycles):
    return G.labels.index(cycles)


@pytest.fixture(scope="module")
def S3():
    return from_permutations(["(1 2 3)", "(1 2)"])


@pytest.fixture(scope="module")
def Q8():
    return dicyclic_group(2)


# -- permutation closure -------------------------------------------------------

def test_s3_closure_matches_brute_force(S3):
    assert S3.order == len(perm_closure([(1, 2, 0), (1, 0, 2)], 3)) == 6


def test_empty_generating_set_is_trivial():
    assert from_permutations([]).order == 1


def test_klein_four():
    V = from_permutations(["(1 2)(3 4)", "(1 3)(2 4)"])
    assert V.order == 4
    assert sorted(V.element_orders.tolist()) == [1, 2, 2, 2]


def test_cayley_table_is_checked():
    bad = np.array([[0, 1], [0, 1]])
    with pytest.raises(ValueError):
        FiniteGroup(bad)


# -- subgroups -------------------------------------------------------------------

def test_subgroup_generated(S3):
    assert subgroup_generated(S3, [el(S3, "(1 2 3)")]).order == 3
    assert subgroup_generated(S3, []).order == 1
    Z4 = cyclic_group(4)
    assert subgroup_generated(Z4, [Z4.power(1, 2)]).order == 2


def test_commutator_subgroups(S3, Q8):
    assert commutator_subgroup(S3.whole(), S3.whole()).order == 3
    Z6 = cyclic_group(6)
    assert commutator_subgroup(Z6.whole(), Z6.whole()).is_trivial()
    D = commutator_subgroup(Q8.whole(), Q8.whole())
    assert D.order == 2 and D == center(Q8)


def test_series(S3):
    D4 = dihedral_group(4)
    lcs = lower_central_series(D4)
    assert len(lcs) == 3 and lcs[-1].is_trivial()
    assert nilpotency_class(D4) == 2
    assert nilpotency_class(cyclic_group(5)) == 1
    assert [s.order for s in derived_series(S3)] == [6, 3, 1]
    assert derived_length(S3) == 2


def test_class_and_solvability(S3, Q8):
    assert nilpotency_class(Q8) == 2
    assert nilpotency_class(S3) is None and not is_nilpotent(S3) and is_solvable(S3)
    assert nilpotency_class(cyclic_group(1)) == 0
    assert not is_solvable(alternating_group(5))


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7, 8])
def test_dihedral_supersolvable(n):
    assert is_supersolvable(dihedral_group(n))


def test_supersolvable_edge_cases():
    assert not is_supersolvable(alternating_group(4))
    assert not is_supersolvable(symmetric_group(4))
    for spec in ["dicyclic:2", "heisenberg:3", "extraspecial:2:-:2", "abelian:2:4"]:
        G = build(spec)
        assert is_nilpotent(G) and is_supersolvable(G)


def test_quotients(S3):
    A3 = commutator_subgroup(S3.whole(), S3.whole())
    Q, pi = quotient(S3, A3)
    assert Q.order == 2 and pi.is_surjective() and pi.kernel() == A3
    Q1, _ = quotient(S3, S3.trivial())
    assert is_isomorphic(Q1, S3)
    assert quotient(S3, S3.whole())[0].order == 1


def test_abelian_invariants():
    assert abelian_invariants(cyclic_group(6)).factors == (6,)
    assert abelian_invariants(abelian_group([4, 2])).factors == (2, 4)
    assert abelian_invariants(cyclic_group(1)).factors == ()
    with pytest.raises(NotAbelian):
        abelian_invariants(dihedral_group(3))


def test_center_and_centralizer(S3, Q8):
    assert center(Q8).order == 2
    Z = abelian_group([2, 3])
    assert center(Z).is_whole()
    r = el(S3, "(1 2 3)")
    assert centralizer(S3, [r]) == subgroup_generated(S3, [r])


def test_conjugacy_classes(S3):
    sizes = sorted(len(c) for c in conjugacy_classes(S3))
    assert sizes == [1, 2, 3]
    assert len(conjugacy_classes(symmetric_group(4))) == 5


def test_normal_subgroup_lattices():
    assert len(normal_subgroups(dihedral_group(4))) == 6
    assert len(normal_subgroups(symmetric_group(4))) == 4
    assert len(normal_subgroups(alternating_group(5))) == 2


def test_homomorphism_checks():
    Z4, Z2 = cyclic_group(4), cyclic_group(2)
    good = Homomorphism(Z4, Z2, np.array([0, 1, 0, 1]))
    assert good.is_homomorphism() and good.kernel().order == 2
    bad = Homomorphism(Z4, Z2, np.array([0, 1, 1, 0]))
    assert not bad.is_homomorphism()


def test_isomorphism_search():
    a = build("metacyclic:4:2:3")
    b = dihedral_group(4)
    phi = find_isomorphism(a, b)
    assert phi is not None
    for x in range(8):
        for y in range(8):
            assert phi[a.mul(x, y)] == b.mul(phi[x], phi[y])
    assert not is_isomorphic(dihedral_group(4), dicyclic_group(2))


def test_smith_normal_form():
    # Z^2 / <(2, 0), (0, 4), (2, 4)>
    assert smith_diagonal([{0: 2}, {1: 4}, {0: 2, 1: 4}], 2) == [2, 4]
    assert smith_diagonal([{0: 6, 1: 4}], 2)[:1] == [2]


def test_invariants_validation():
    with pytest.raises(ValueError):
        AbelianInvariants((4, 2))
    assert AbelianInvariants.from_cyclic_orders([2, 3, 4]).factors == (2, 12)


# -- properties -------------------------------------------------------------------

orders = st.lists(st.integers(2, 6), min_size=0, max_size=3).filter(lambda xs: np.prod(xs) <= 64)


@settings(max_examples=25, deadline=None)
@given(orders)
def test_invariant_factors_form_a_chain(os):
    inv = abelian_invariants(abelian_group(os))
    assert inv.order == int(np.prod(os))
    for a, b in zip(inv.factors, inv.factors[1:]):
        assert b % a == 0


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 7), st.data())
def test_subgroups_are_closed(n, data):
    G = dihedral_group(n) if n >= 3 else cyclic_group(n)
    seeds = data.draw(st.lists(st.integers(0, G.order - 1), max_size=3))
    S = subgroup_generated(G, seeds)
    m = S.members
    assert 0 in m.tolist()
    assert S.mask[G.mul_many(np.repeat(m, m.size), np.tile(m, m.size))].all()
    inv = [next(y for y in range(G.order) if G.mul(x, y) == G.identity) for x in m.tolist()]
    assert S.mask[inv].all()


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 12), st.integers(2, 12))
def test_quotient_map_is_a_homomorphism(n, k):
    G = direct_product(cyclic_group(n), dihedral_group(3))
    N = commutator_subgroup(G.whole(), G.whole())
    Q, pi = quotient(G, N)
    assert pi.is_homomorphism() and Q.order * N.order == G.order


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 40))
def test_exponent_of_cyclic(n):
    assert exponent(cyclic_group(n)) == n


def test_gamma_small_values():
    assert gamma_whitehead(AbelianInvariants((2,))).factors == (4,)
    assert gamma_whitehead(AbelianInvariants((3,))).factors == (3,)
    assert gamma_whitehead(AbelianInvariants(())).factors == ()
