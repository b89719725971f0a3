import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tensorcat.catalog import cyclic_group, dihedral_group
from tensorcat.errors import LimitExceeded, ParseError
from tensorcat.fp.enumeration import (Limits, enumerate_cosets, group_order, presentation_of,
                                      reduce_letter_array, to_group)
from tensorcat.fp.parse import parse_presentation
from tensorcat.fp.words import Presentation, Word
from tensorcat.groups import is_isomorphic
from tensorcat.permutations import from_permutations

from oracles import dihedral_words, perm_closure

STRATS = ["hlt", "felsch"]


def test_word_free_reduction():
    assert list(Word([1, 2, -2, -1, 3])) == [3]
    assert list(Word([1, 2]).inverse()) == [-2, -1]
    assert list(Word([1]) ** -3) == [-1, -1, -1]
    assert list(Word([-2, 1, 3, 2]).cyclically_reduced()) == [1, 3]


def test_presentation_validates_letters():
    with pytest.raises(ValueError):
        Presentation(("a",), (Word([2]),))
    with pytest.raises(ValueError):
        Presentation(("a", "a"), ())


def test_parser_round_trip():
    P = parse_presentation("gens: a, b; rels: a^4, b^2, baBa")
    assert P.generator_count == 2
    assert [list(r) for r in P.relators] == [[1, 1, 1, 1], [2, 2], [2, 1, -2, 1]]
    assert parse_presentation(P.to_text()) == P


def test_parser_errors_carry_positions():
    with pytest.raises(ParseError) as e:
        parse_presentation("gens: a, b; rels: a^2, c")
    assert e.value.column > 0
    with pytest.raises(ParseError):
        parse_presentation("rels: a")
    with pytest.raises(ParseError):
        parse_presentation("gens: a, , b; rels: a")


def test_empty_generator_list():
    P = parse_presentation("gens: ; rels:")
    assert P.generator_count == 0
    assert enumerate_cosets(P).index == 1


@pytest.mark.parametrize("strategy", STRATS)
def test_cyclic_five(strategy):
    T = enumerate_cosets(parse_presentation("gens: a; rels: a^5"), strategy)
    assert T.index == 5 and T.is_consistent()
    G, gens = to_group(T, parse_presentation("gens: a; rels: a^5"))
    assert G.order == 5 and G.element_orders[gens[0]] == 5


@pytest.mark.parametrize("strategy", STRATS)
def test_dihedral_eight(strategy):
    P = parse_presentation("gens: a, b; rels: a^2, b^2, (ab)^4")
    assert group_order(P, strategy) == len(dihedral_words(4)) == 8


@pytest.mark.parametrize("strategy", STRATS)
def test_a4(strategy):
    P = parse_presentation("gens: a, b; rels: a^2, b^3, (ab)^3")
    # permutation model a = (1 2)(3 4), b = (1 2 3)
    assert group_order(P, strategy) == len(perm_closure([(1, 0, 3, 2), (1, 2, 0, 3)], 4)) == 12


def test_s3_from_presentation():
    P = parse_presentation("gens: a, b; rels: a^2, b^2, (ab)^3")
    G, _ = to_group(enumerate_cosets(P), P)
    assert G.order == 6 and not G.is_abelian()
    assert is_isomorphic(G, from_permutations(["(1 2 3)", "(1 2)"]))


def test_trivial_presentation():
    P = Presentation((), ())
    G, gens = to_group(enumerate_cosets(P), P)
    assert G.order == 1 and gens == []


def test_cayley_presentations():
    Z2 = cyclic_group(2)
    P = presentation_of(Z2)
    assert P.generator_count == 2 and len(P.relators) == 4
    assert group_order(P) == 2
    S3 = from_permutations(["(1 2 3)", "(1 2)"])
    P = presentation_of(S3)
    assert (P.generator_count, len(P.relators)) == (6, 36)
    G, _ = to_group(enumerate_cosets(P, "hlt"), P)
    assert is_isomorphic(G, S3)
    P1 = presentation_of(cyclic_group(1))
    assert P1.generator_count == 1 and group_order(P1) == 1


def test_limits_raise():
    P = parse_presentation("gens: a, b; rels: aBAb")  # Z^2, infinite
    with pytest.raises(LimitExceeded):
        enumerate_cosets(P, limits=Limits(max_cosets=2000))


def test_letter_array_reduction_matches_words():
    rng = np.random.default_rng(0)
    arr = rng.integers(-3, 4, size=(200, 9))
    got = reduce_letter_array(arr)
    rows = []
    for r in arr.tolist():
        w = Word(x for x in r if x).cyclically_reduced()
        if w:
            rows.append(list(w))
    flat = sorted(tuple(r) for rs in got.values() for r in np.asarray(rs).tolist())
    flat = [tuple(x for x in r if x) for r in flat]
    assert sorted(flat) == sorted(tuple(r) for r in rows)


# -- properties -------------------------------------------------------------------

@settings(max_examples=30, deadline=None)
@given(st.integers(1, 30), st.sampled_from(STRATS))
def test_cyclic_orders(n, strategy):
    assert group_order(parse_presentation(f"gens: a; rels: a^{n}"), strategy) == n


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 12))
def test_strategies_agree_on_dihedral(n):
    P = parse_presentation(f"gens: a, b; rels: a^2, b^2, (ab)^{n}")
    a, b = (enumerate_cosets(P, s) for s in STRATS)
    assert a.index == b.index == 2 * n
    assert a.is_consistent() and b.is_consistent()


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 8))
def test_cayley_round_trip(n):
    G = dihedral_group(n) if n >= 3 else cyclic_group(n)
    P = presentation_of(G)
    H, _ = to_group(enumerate_cosets(P), P)
    assert is_isomorphic(G, H)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-3, 3).filter(bool), max_size=12))
def test_words_are_freely_reduced(letters):
    w = Word(letters)
    assert all(a != -b for a, b in zip(w, w[1:]))
    assert Word(list(w) + list(w.inverse())) == Word()
