import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tensorcat.catalog import (GroupSpec, _build_cached, abelian_types, build, central_extension,
                               cocycle_violations, cyclic_group, dedupe, dicyclic_group, dihedral_group, expected_order, extraspecial_group, load_corpus,
                               metacyclic_family, metacyclic_group, named_cocycle, parse_spec,
                               standard_corpus)
from tensorcat.errors import InvalidSpec, NotACocycle, ParseError
from tensorcat.groups import (Homomorphism, Subgroup, abelian_group, center, exponent, is_isomorphic,
                              nilpotency_class)


def test_builds():
    D4 = build("dihedral:4")
    assert D4.order == 8 and nilpotency_class(D4) == 2
    assert build("metacyclic:5:4:2").order == 20
    assert build("cyclic:1").order == 1
    assert build("heisenberg:3").order == 27
    assert build("extraspecial:2:+:2").order == 32
    assert build("symmetric:4").order == 24
    assert build("semidirect:(cyclic:3):(cyclic:2):inversion").order == 6
    assert build("cyclic:2*dihedral:3").order == 12


def test_build_is_cached_and_labelled():
    a, b = build("dicyclic:3"), build(parse_spec("dicyclic:3"))
    assert a is b
    assert a.spec == parse_spec("dicyclic:3")


def test_validation():
    with pytest.raises(InvalidSpec):
        GroupSpec.make("metacyclic", m=5, n=3, r=2)  # 2^3 != 1 mod 5
    with pytest.raises(InvalidSpec):
        GroupSpec.make("heisenberg", p=4)
    with pytest.raises(InvalidSpec):
        GroupSpec.make("cyclic", n=0)
    with pytest.raises(InvalidSpec):
        GroupSpec.make("nonsense")


def test_inline_grammar():
    s = parse_spec("presentation:gens: a, b; rels: a^4, b^2, baBa")
    assert build(s).order == 8
    p = parse_spec("permutation:(1 2 3):(1 2)")
    assert build(p).order == 6
    e = parse_spec("central_ext:2:square:(cyclic:2)")
    assert e["c"] == 2 and e["base"] == parse_spec("cyclic:2")
    sd = parse_spec("semidirect:(abelian:3:3):(cyclic:2):power:2")
    assert build(sd).order == 18
    d = parse_spec("(cyclic:2 * cyclic:3) * dihedral:4")
    assert build(d).order == 48


def test_parse_errors_report_columns():
    with pytest.raises(ParseError) as e:
        parse_spec("dihedral:x")
    assert e.value.column >= 1
    with pytest.raises((ParseError, InvalidSpec)):
        parse_spec("cyclic:4 * (dihedral:3")


def test_json_round_trip():
    s = parse_spec("central_ext:3:cup:(abelian:3:3)")
    assert GroupSpec.from_json(s.dumps()) == s
    assert parse_spec(s.dumps()) == s
    assert parse_spec(s.label()) == s


def test_extensions():
    Z2 = cyclic_group(2)
    assert is_isomorphic(central_extension(Z2, 2, named_cocycle(Z2, 2, "trivial")), abelian_group([2, 2]))
    f = np.array([[0, 0], [0, 1]])
    assert is_isomorphic(central_extension(Z2, 2, f), cyclic_group(4))
    V = abelian_group([2, 2])
    ext = central_extension(V, 2, named_cocycle(V, 2, "cup"))
    assert ext.order == 8 and not ext.is_abelian()
    # diagonal values decide between D4 and Q8
    assert exponent(ext) == 4 and nilpotency_class(ext) == 2
    assert is_isomorphic(ext, dihedral_group(4)) or is_isomorphic(ext, dicyclic_group(2))


def test_bad_cocycle():
    Z3 = cyclic_group(3)
    f = np.zeros((3, 3), dtype=int)
    f[1, 2] = 1
    assert cocycle_violations(Z3, 3, f)
    with pytest.raises(NotACocycle):
        central_extension(Z3, 3, f)


def test_extraspecial_types_differ():
    a, b = extraspecial_group(2, "+", 2), extraspecial_group(2, "-", 2)
    assert a.order == b.order == 32
    assert center(a).order == 2 and center(b).order == 2
    assert np.bincount(a.element_orders).tolist() != np.bincount(b.element_orders).tolist()
    assert extraspecial_group(3, "-").order == 27


def test_abelian_types():
    assert sorted(abelian_types(8)) == sorted([(8,), (2, 4), (2, 2, 2)])
    assert len(abelian_types(16)) == 5


def test_standard_corpus_small():
    assert [s.label() for s in standard_corpus(1)] == ["cyclic:1"]
    C8 = [s for s in standard_corpus(8) if build(s).order == 8]
    assert len(C8) == 5
    for i, a in enumerate(C8):
        for b in C8[i + 1:]:
            assert not is_isomorphic(build(a), build(b))


def test_corpus_files(tmp_path):
    p = tmp_path / "c.txt"
    p.write_text("# groups\ncyclic:4\ndihedral:3\n\n")
    assert [s.label() for s in load_corpus(str(p))] == ["cyclic:4", "dihedral:3"]
    q = tmp_path / "c.json"
    q.write_text('[{"kind": "cyclic", "n": 5}]')
    assert load_corpus(str(q)) == [GroupSpec.make("cyclic", n=5)]


def test_dedupe_keeps_first():
    specs = [parse_spec("metacyclic:4:2:3"), parse_spec("dihedral:4"), parse_spec("cyclic:3")]
    assert [s.label() for s in dedupe(specs)] == ["metacyclic:4:2:3", "cyclic:3"]


# -- properties -------------------------------------------------------------------

@st.composite
def metacyclic_params(draw):
    m = draw(st.integers(2, 12))
    n = draw(st.integers(1, 6))
    rs = [r for r in range(1, m) if np.gcd(r, m) == 1 and pow(r, n, m) == 1]
    return m, n, draw(st.sampled_from(rs))


@settings(max_examples=30, deadline=None)
@given(metacyclic_params())
def test_metacyclic_order(mnr):
    m, n, r = mnr
    G = metacyclic_group(m, n, r)
    assert G.order == m * n
    assert expected_order(GroupSpec.make("metacyclic", m=m, n=n, r=r)) == m * n


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["cyclic:6", "dihedral:5", "metacyclic:7:3:2", "abelian:2:4", "heisenberg:3"]))
def test_build_is_deterministic(spec):
    _build_cached.cache_clear()
    a = build(spec)
    _build_cached.cache_clear()
    b = build(spec)
    assert (a.table == b.table).all()


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["cyclic:2", "cyclic:4", "abelian:2:2", "dihedral:3", "dihedral:4", "cyclic:6"]),
       st.sampled_from([2, 3]), st.sampled_from(["trivial", "square", "cup"]))
def test_central_extension_properties(base, c, name):
    G = build(base)
    try:
        f = named_cocycle(G, c, name)
    except InvalidSpec:
        return
    X = central_extension(G, c, f)
    n = G.order
    C = Subgroup(X, np.arange(c) * n + G.identity)
    assert C.is_central()
    proj = Homomorphism(X, G, np.arange(X.order) % n)
    assert proj.is_homomorphism() and proj.kernel() == C


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(standard_corpus(16)))
def test_labels_round_trip(spec):
    assert parse_spec(spec.label()) == spec
    assert GroupSpec.from_json(spec.to_json()) == spec
    assert build(spec).order == (expected_order(spec) or build(spec).order)


def test_metacyclic_family_is_valid():
    for s in metacyclic_family(24):
        m, n, r = s["m"], s["n"], s["r"]
        assert pow(r, n, m) == 1 % m
