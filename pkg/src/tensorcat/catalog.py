"""Group specifications, deterministic constructors and the standard test corpus.

A :class:`GroupSpec` is a kind plus keyword parameters.  It has two text
forms: a JSON object such as ``{"kind": "metacyclic", "m": 5, "n": 4, "r": 2}``
and an inline form such as ``metacyclic:5:4:2`` (see :func:`parse_spec`).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import gcd, prod
from typing import Any, Iterable, Sequence

import numpy as np
from sympy import isprime

from .actions import AutAction, inversion_action, semidirect, trivial_action
from .errors import CapExceeded, InvalidAction, InvalidSpec, NotACocycle, ParseError
from .fp.enumeration import Limits, enumerate_cosets, to_group
from .fp.parse import parse_presentation
from .groups import (DENSE_CAP, FiniteGroup, Subgroup, center, direct_product, extend_homomorphism,
                     find_isomorphism, quotient, subgroup_generated)
from .permutations import alternating_group, from_permutations, symmetric_group

# kind -> ordered parameter names (the inline form lists them in this order)
KINDS: dict[str, tuple[str, ...]] = {
    "cyclic": ("n",),
    "abelian": ("orders",),
    "dihedral": ("n",),
    "dicyclic": ("n",),
    "symmetric": ("n",),
    "alternating": ("n",),
    "heisenberg": ("p",),
    "extraspecial": ("p", "sign", "n"),
    "metacyclic": ("m", "n", "r"),
    "direct": ("factors",),
    "semidirect": ("normal", "actor", "action"),
    "central_ext": ("base", "c", "cocycle"),
    "presentation": ("text",),
    "permutation": ("gens", "degree"),
}
COCYCLE_NAMES = ("trivial", "square", "cup")


def _freeze(v):
    if isinstance(v, (list, tuple)):
        return tuple(_freeze(x) for x in v)
    return v


def _thaw(v):
    if isinstance(v, GroupSpec):
        return v.to_json()
    if isinstance(v, tuple):
        return [_thaw(x) for x in v]
    return v


@dataclass(frozen=True)
class GroupSpec:
    kind: str
    params: tuple[tuple[str, Any], ...] = ()

    @classmethod
    def make(cls, kind: str, **params) -> "GroupSpec":
        if kind not in KINDS:
            raise InvalidSpec(f"unknown group kind {kind!r}")
        extra = set(params) - set(KINDS[kind])
        if extra:
            raise InvalidSpec(f"{kind}: unexpected parameter(s) {sorted(extra)}")
        items = tuple((k, _freeze(params[k])) for k in KINDS[kind] if params.get(k) is not None)
        spec = cls(kind, items)
        _validate(spec)
        return spec

    def __getitem__(self, key):
        for k, v in self.params:
            if k == key:
                return v
        raise KeyError(key)

    def get(self, key, default=None):
        try:
            return self[key]
        except KeyError:
            return default

    # --- serialisation ------------------------------------------------

    def to_json(self) -> dict:
        out: dict[str, Any] = {"kind": self.kind}
        for k, v in self.params:
            out[k] = _thaw(v)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, obj) -> "GroupSpec":
        if isinstance(obj, str):
            obj = json.loads(obj)
        if not isinstance(obj, dict) or "kind" not in obj:
            raise InvalidSpec("a group spec object needs a 'kind' field")
        kind = obj["kind"]
        params = {k: v for k, v in obj.items() if k != "kind"}
        for key in ("normal", "actor", "base"):
            if key in params:
                params[key] = cls.from_json(params[key])
        if "factors" in params:
            params["factors"] = [cls.from_json(f) for f in params["factors"]]
        return cls.make(kind, **params)

    def label(self) -> str:
        """Inline form; :func:`parse_spec` of the result gives back an equal spec."""
        k = self.kind
        if k == "abelian":
            return "abelian:" + ":".join(map(str, self["orders"]))
        if k == "direct":
            return "*".join(_wrap(f) for f in self["factors"])
        if k == "semidirect":
            return f"semidirect:({self['normal'].label()}):({self['actor'].label()}):{self['action']}"
        if k == "central_ext":
            coc = self["cocycle"]
            if not isinstance(coc, str):
                return self.dumps()
            return f"central_ext:{self['c']}:{coc}:({self['base'].label()})"
        if k == "presentation":
            return "presentation:" + self["text"]
        if k == "permutation":
            s = "permutation:" + ":".join(self["gens"])
            return s + (f":{self['degree']}" if self.get("degree") is not None else "")
        return ":".join([k] + [str(v) for _, v in self.params])

    def __str__(self):
        return self.label()


def _wrap(spec: GroupSpec) -> str:
    s = spec.label()
    return f"({s})" if spec.kind == "direct" else s


def _int(spec_kind, name, v, lo=None):
    if isinstance(v, bool) or not isinstance(v, int):
        raise InvalidSpec(f"{spec_kind}: parameter {name} must be an integer, got {v!r}")
    if lo is not None and v < lo:
        raise InvalidSpec(f"{spec_kind}: parameter {name} must be >= {lo}, got {v}")
    return v


def _validate(spec: GroupSpec):
    k = spec.kind
    missing = [p for p in KINDS[k] if spec.get(p) is None and p not in ("degree",)]
    if k == "extraspecial" and missing == ["n"]:
        missing = []
    if missing:
        raise InvalidSpec(f"{k}: missing parameter(s) {missing}")
    if k in ("cyclic", "dihedral", "symmetric", "alternating"):
        _int(k, "n", spec["n"], 1)
    elif k == "dicyclic":
        _int(k, "n", spec["n"], 1)
    elif k == "abelian":
        orders = spec["orders"]
        if not isinstance(orders, tuple):
            raise InvalidSpec("abelian: orders must be a list of integers")
        for d in orders:
            _int(k, "orders", d, 1)
    elif k in ("heisenberg", "extraspecial"):
        p = _int(k, "p", spec["p"], 2)
        if not isprime(p):
            raise InvalidSpec(f"{k}: p = {p} is not prime")
        if k == "extraspecial":
            if spec["sign"] not in ("+", "-"):
                raise InvalidSpec("extraspecial: sign must be '+' or '-'")
            _int(k, "n", spec.get("n", 1), 1)
    elif k == "metacyclic":
        m, n, r = (_int(k, x, spec[x]) for x in ("m", "n", "r"))
        if m < 1 or n < 1:
            raise InvalidSpec("metacyclic: m and n must be positive")
        if pow(r, n, m) != 1 % m or gcd(r, m) != 1:
            raise InvalidSpec(f"metacyclic: need gcd(r, m) = 1 and r^n = 1 mod m (m={m}, n={n}, r={r})")
    elif k == "direct":
        fs = spec["factors"]
        if not fs or not all(isinstance(f, GroupSpec) for f in fs):
            raise InvalidSpec("direct: factors must be a non-empty list of specs")
    elif k == "semidirect":
        if not isinstance(spec["normal"], GroupSpec) or not isinstance(spec["actor"], GroupSpec):
            raise InvalidSpec("semidirect: normal and actor must be specs")
        _parse_action(spec["action"])
    elif k == "central_ext":
        if not isinstance(spec["base"], GroupSpec):
            raise InvalidSpec("central_ext: base must be a spec")
        _int(k, "c", spec["c"], 1)
        coc = spec["cocycle"]
        if isinstance(coc, str):
            if coc not in COCYCLE_NAMES:
                raise InvalidSpec(f"central_ext: cocycle name must be one of {COCYCLE_NAMES}")
        elif not (isinstance(coc, tuple) and all(isinstance(r, tuple) for r in coc)):
            raise InvalidSpec("central_ext: cocycle must be a name or a square table")
    elif k == "presentation":
        if not isinstance(spec["text"], str):
            raise InvalidSpec("presentation: text must be a string")
    elif k == "permutation":
        gens = spec["gens"]
        if not isinstance(gens, tuple) or not all(isinstance(g, str) for g in gens):
            raise InvalidSpec("permutation: gens must be a list of cycle strings")
        if spec.get("degree") is not None:
            _int(k, "degree", spec["degree"], 1)


def _parse_action(text) -> tuple[str, int | None]:
    if not isinstance(text, str):
        raise InvalidSpec("semidirect: action must be a string")
    if text in ("trivial", "inversion"):
        return text, None
    if text.startswith("power:"):
        try:
            return "power", int(text[len("power:"):])
        except ValueError:
            pass
    raise InvalidSpec(f"semidirect: unknown action {text!r} (trivial, inversion, power:<r>)")


# --- inline grammar -----------------------------------------------------

def _split_top(text: str, sep: str, base: int) -> list[tuple[int, str]]:
    """Split at ``sep`` outside parentheses; pieces carry their offsets."""
    out, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced ')'", 1, base + i + 1)
        elif ch == sep and depth == 0:
            out.append((base + start, text[start:i]))
            start = i + 1
    if depth:
        raise ParseError("unbalanced '('", 1, base + len(text) + 1)
    out.append((base + start, text[start:]))
    return out


def _strip_parens(text: str, offset: int) -> tuple[str, int]:
    """Drop whitespace and redundant outer parentheses."""
    while True:
        lead = len(text) - len(text.lstrip())
        t = text.strip()
        offset += lead
        if not (t.startswith("(") and t.endswith(")")):
            return t, offset
        depth = 0
        for i, ch in enumerate(t):
            depth += (ch == "(") - (ch == ")")
            if depth == 0:
                break
        if i != len(t) - 1:
            return t, offset
        text, offset = t[1:-1], offset + 1


def parse_spec(text: str) -> GroupSpec:
    """Parse an inline spec or a JSON object.

    Grammar::

        spec    := factor ('*' factor)*          direct product when more than one
        factor  := '(' spec ')' | kind (':' param)*
        kind    := cyclic | abelian | dihedral | dicyclic | symmetric | alternating
                 | heisenberg | extraspecial | metacyclic | semidirect | central_ext
                 | presentation | permutation

    Parameters follow the order of :data:`KINDS`.  ``semidirect:(N):(Q):action``
    and ``central_ext:c:cocycle:(base)`` take parenthesised sub-specs;
    ``presentation:`` takes the rest of the text verbatim.
    """
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            return GroupSpec.from_json(json.loads(stripped))
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", e.lineno, e.colno) from None
    return _parse_inline(text, 0)


def _parse_inline(text: str, offset: int) -> GroupSpec:
    body, offset = _strip_parens(text, offset)
    if not body:
        raise ParseError("empty group spec", 1, offset + 1)
    if not body.startswith("presentation:"):
        factors = _split_top(body, "*", offset)
        if len(factors) > 1:
            return _make(GroupSpec.make, "direct", offset,
                         factors=[_parse_inline(t, o) for o, t in factors])
    else:
        return _make(GroupSpec.make, "presentation", offset, text=body[len("presentation:"):])
    parts = _split_top(body, ":", offset)
    kind = parts[0][1].strip()
    if kind not in KINDS:
        raise ParseError(f"unknown group kind {kind!r}", 1, parts[0][0] + 1)
    args = [(o, t.strip()) for o, t in parts[1:]]

    def ints(xs):
        out = []
        for o, t in xs:
            try:
                out.append(int(t))
            except ValueError:
                raise ParseError(f"expected an integer, got {t!r}", 1, o + 1) from None
        return out

    if kind == "abelian":
        return _make(GroupSpec.make, kind, offset, orders=ints(args))
    if kind == "extraspecial":
        if len(args) not in (2, 3):
            raise ParseError("extraspecial takes p:sign[:n]", 1, offset + 1)
        extra = ints(args[2:])
        return _make(GroupSpec.make, kind, offset, p=ints(args[:1])[0], sign=args[1][1],
                     n=extra[0] if extra else None)
    if kind == "semidirect":
        if len(args) < 3:
            raise ParseError("semidirect takes (N):(Q):action", 1, offset + 1)
        return _make(GroupSpec.make, kind, offset, normal=_parse_inline(args[0][1], args[0][0]),
                     actor=_parse_inline(args[1][1], args[1][0]),
                     action=":".join(t for _, t in args[2:]))
    if kind == "central_ext":
        if len(args) != 3:
            raise ParseError("central_ext takes c:cocycle:(base)", 1, offset + 1)
        return _make(GroupSpec.make, kind, offset, c=ints(args[:1])[0], cocycle=args[1][1],
                     base=_parse_inline(args[2][1], args[2][0]))
    if kind == "permutation":
        gens = [t for _, t in args if t.startswith("(")]
        rest = [(o, t) for o, t in args if not t.startswith("(")]
        if len(rest) > 1:
            raise ParseError("permutation takes cycle strings and an optional degree", 1, rest[1][0] + 1)
        degree = ints(rest)[0] if rest else None
        return _make(GroupSpec.make, kind, offset, gens=gens, degree=degree)
    names = KINDS[kind]
    if len(args) != len(names):
        raise ParseError(f"{kind} takes {len(names)} parameter(s) {':'.join(names)}", 1, offset + 1)
    return _make(GroupSpec.make, kind, offset, **dict(zip(names, ints(args))))


def _make(fn, kind, offset, **kw):
    try:
        return fn(kind, **kw)
    except InvalidSpec as e:
        raise ParseError(str(e), 1, offset + 1) from None


# --- constructors ---------------------------------------------------------

def expected_order(spec: GroupSpec) -> int | None:
    """Order predicted from the parameters, when that is cheap to know."""
    k = spec.kind
    if k == "cyclic":
        return spec["n"]
    if k == "abelian":
        return prod(spec["orders"])
    if k == "dihedral":
        return 2 * spec["n"]
    if k == "dicyclic":
        return 4 * spec["n"]
    if k == "symmetric":
        return prod(range(1, spec["n"] + 1))
    if k == "alternating":
        n = spec["n"]
        return max(1, prod(range(1, n + 1)) // 2)
    if k == "heisenberg":
        return spec["p"] ** 3
    if k == "extraspecial":
        return spec["p"] ** (1 + 2 * spec.get("n", 1))
    if k == "metacyclic":
        return spec["m"] * spec["n"]
    if k == "direct":
        parts = [expected_order(f) for f in spec["factors"]]
        return None if None in parts else prod(parts)
    if k == "semidirect":
        a, b = expected_order(spec["normal"]), expected_order(spec["actor"])
        return None if a is None or b is None else a * b
    if k == "central_ext":
        b = expected_order(spec["base"])
        return None if b is None else b * spec["c"]
    return None


def build(spec: GroupSpec | str, cap: int = DENSE_CAP) -> FiniteGroup:
    """Construct the group; identical specs give identical tables.

    Results are cached, so callers must treat the returned group as
    read-only.
    """
    if isinstance(spec, str):
        spec = parse_spec(spec)
    want = expected_order(spec)
    if want is not None and want > cap:
        raise CapExceeded(f"order of {spec.label()}", want, cap)
    return _build_cached(spec, cap)


@lru_cache(maxsize=512)
def _build_cached(spec: GroupSpec, cap: int) -> FiniteGroup:
    G = _BUILDERS[spec.kind](spec, cap)
    if G.order > cap:
        raise CapExceeded(f"order of {spec.label()}", G.order, cap)
    G.name = spec.label()
    G.spec = spec
    return G


def cyclic_group(n: int) -> FiniteGroup:
    i = np.arange(n)
    return FiniteGroup((i[:, None] + i[None, :]) % n, labels=[f"a^{k}" for k in range(n)], check=False)


def _cyclic(spec, cap):
    return cyclic_group(spec["n"])


def _abelian(spec, cap):
    orders = [d for d in spec["orders"] if d > 1]
    if not orders:
        return cyclic_group(1)
    G = _direct([cyclic_group(d) for d in orders])
    return G


def _direct(groups: Sequence[FiniteGroup]) -> FiniteGroup:
    G = groups[0]
    for H in groups[1:]:
        G = direct_product(G, H)
    return G


def dihedral_group(n: int) -> FiniteGroup:
    """Order 2n: element ``s^j r^i`` is ``i + n*j``, with ``r s = s r^-1``."""
    idx = np.arange(2 * n)
    i, j = idx % n, idx // n
    # (s^j r^i)(s^l r^k) = s^(j+l) r^((-1)^l i + k)
    sign = np.where(j == 1, -1, 1)
    ni = (sign[None, :] * i[:, None] + i[None, :]) % n
    nj = (j[:, None] + j[None, :]) % 2
    labels = [("s" if b else "") + (f"r^{a}" if a else ("" if b else "1")) for a, b in zip(i, j)]
    return FiniteGroup(ni + n * nj, labels=labels, check=False)


def _dihedral(spec, cap):
    return dihedral_group(spec["n"])


def dicyclic_group(n: int) -> FiniteGroup:
    """Order 4n: element ``a^i x^j`` is ``i + 2n*j``; ``x^2 = a^n``, ``x a x^-1 = a^-1``."""
    m = 2 * n
    idx = np.arange(2 * m)
    i, j = idx % m, idx // m
    sign = np.where(j == 1, -1, 1)
    ni = (i[:, None] + sign[:, None] * i[None, :] + n * (j[:, None] * j[None, :])) % m
    nj = (j[:, None] + j[None, :]) % 2
    labels = [(f"a^{a}" if a else ("" if b else "1")) + ("x" if b else "") for a, b in zip(i, j)]
    return FiniteGroup(ni + m * nj, labels=labels, check=False)


def _dicyclic(spec, cap):
    return dicyclic_group(spec["n"])


def heisenberg_group(p: int) -> FiniteGroup:
    """Upper unitriangular 3x3 matrices over Z/p; ``[[1,a,c],[0,1,b],[0,0,1]]`` is ``a p^2 + b p + c``."""
    idx = np.arange(p ** 3)
    a, b, c = idx // (p * p), (idx // p) % p, idx % p
    na = (a[:, None] + a[None, :]) % p
    nb = (b[:, None] + b[None, :]) % p
    nc = (c[:, None] + c[None, :] + a[:, None] * b[None, :]) % p
    labels = [f"[{x},{y},{z}]" for x, y, z in zip(a, b, c)]
    return FiniteGroup(na * p * p + nb * p + nc, labels=labels, check=False)


def _heisenberg(spec, cap):
    return heisenberg_group(spec["p"])


def metacyclic_group(m: int, n: int, r: int, cap: int = DENSE_CAP) -> FiniteGroup:
    """``<a, b | a^m, b^n, b a b^-1 a^-r>`` by coset enumeration."""
    P = parse_presentation(f"gens: a, b; rels: a^{m}, b^{n}, b a B a^-{r}")
    T = enumerate_cosets(P, "felsch", Limits(max_cosets=max(4 * m * n, 1024)))
    G, _ = to_group(T, P, cap)
    if G.order != m * n:
        raise InvalidSpec(f"metacyclic({m},{n},{r}) has order {G.order}, expected {m * n}")
    return G


def _metacyclic(spec, cap):
    return metacyclic_group(spec["m"], spec["n"], spec["r"], cap)


def central_product(groups: Sequence[FiniteGroup], zs: Sequence[int]) -> FiniteGroup:
    """Direct product modulo ``z_i = z_j``; each ``z_i`` central of one common prime order."""
    G = groups[0]
    pos = [int(zs[0])]
    for H, z in zip(groups[1:], zs[1:]):
        # direct_product encodes (g, h) as g*|H| + h
        pos = [q * H.order + H.identity for q in pos]
        pos.append(G.identity * H.order + int(z))
        G = direct_product(G, H)
    N = subgroup_generated(G, [G.mul(pos[0], int(G.inverse[q])) for q in pos[1:]])
    Q, _ = quotient(G, N)
    return Q


def _center_generator(G: FiniteGroup) -> int:
    Z = center(G)
    if Z.order == 1:
        raise InvalidSpec("group has trivial centre")
    return int(Z.members[Z.members != G.identity][0])


def extraspecial_group(p: int, sign: str, n: int = 1) -> FiniteGroup:
    """Extraspecial group of order ``p^(1+2n)`` as a central product of order-p^3 pieces.

    For p = 2 the pieces are D4 (type +) and Q8 (type -); for odd p they are the
    Heisenberg group (exponent p, type +) and ``Z/p^2 x| Z/p`` (type -).  The
    minus type uses one minus piece.
    """
    if p == 2:
        plus, minus = dihedral_group(4), dicyclic_group(2)
    else:
        plus, minus = heisenberg_group(p), metacyclic_group(p * p, p, 1 + p)
    pieces = [plus] * (n - 1) + [plus if sign == "+" else minus]
    if n == 1:
        return pieces[0]
    return central_product(pieces, [_center_generator(X) for X in pieces])


def _extraspecial(spec, cap):
    return extraspecial_group(spec["p"], spec["sign"], spec.get("n", 1))


def _symmetric(spec, cap):
    if expected_order(spec) > cap:
        raise CapExceeded("symmetric group order", expected_order(spec), cap)
    return symmetric_group(spec["n"])


def _alternating(spec, cap):
    if expected_order(spec) > cap:
        raise CapExceeded("alternating group order", expected_order(spec), cap)
    return alternating_group(spec["n"])


def _direct_kind(spec, cap):
    return _direct([build(f, cap) for f in spec["factors"]])


def power_action(actor: FiniteGroup, space: FiniteGroup, r: int) -> AutAction:
    """A generator of the cyclic actor acts by ``x -> x^r`` on the abelian space."""
    if not space.is_abelian():
        raise InvalidAction("power maps are automorphisms only of abelian groups")
    orders = actor.element_orders
    gens = np.flatnonzero(orders == actor.order)
    if gens.size == 0:
        raise InvalidAction("power action needs a cyclic actor")
    g = int(gens[0])
    table = np.empty((actor.order, space.order), dtype=np.int64)
    cur, row = actor.identity, np.arange(space.order)
    for _ in range(actor.order):
        table[cur] = row
        row = np.array([space.power(int(x), r) for x in row])
        cur = actor.mul(cur, g)
    return AutAction(actor, space, table, f"power:{r}").validate()


def _semidirect_kind(spec, cap):
    N, Q = build(spec["normal"], cap), build(spec["actor"], cap)
    how, r = _parse_action(spec["action"])
    try:
        if how == "trivial":
            act = trivial_action(Q, N)
        elif how == "inversion":
            act = inversion_action(Q, N)
        else:
            act = power_action(Q, N, r)
    except InvalidAction as e:
        raise InvalidSpec(f"semidirect: {e}") from None
    S, _, _ = semidirect(act)
    return S


def characters(G: FiniteGroup, c: int) -> list[np.ndarray]:
    """All homomorphisms ``G -> Z/c`` as value arrays, in lexicographic order of generator images."""
    C = cyclic_group(c)
    gens = list(G.generators)
    out = []
    for imgs in product(range(c), repeat=len(gens)):
        hom, _ = extend_homomorphism(G, gens, list(imgs), C)
        if hom is not None:
            out.append(hom.images.copy())
    return out


def named_cocycle(G: FiniteGroup, c: int, name: str) -> np.ndarray:
    """Bilinear factor sets ``f(g, h) = u(g) v(h) mod c`` from characters ``u, v: G -> Z/c``.

    ``trivial`` is zero; ``square`` uses the first non-trivial character twice;
    ``cup`` pairs it with the first character outside its span.
    """
    n = G.order
    if name == "trivial":
        return np.zeros((n, n), dtype=np.int64)
    chars = [u for u in characters(G, c) if u.any()]
    if not chars:
        raise InvalidSpec(f"central_ext: no non-trivial homomorphism to Z/{c}")
    u = chars[0]
    if name == "square":
        v = u
    elif name == "cup":
        span = {tuple(((k * u) % c).tolist()) for k in range(c)}
        rest = [w for w in chars if tuple(w.tolist()) not in span]
        if not rest:
            raise InvalidSpec(f"central_ext: cup needs two independent homomorphisms to Z/{c}")
        v = rest[0]
    else:
        raise InvalidSpec(f"unknown cocycle {name!r}")
    return (u[:, None] * v[None, :]) % c


def cocycle_violations(G: FiniteGroup, c: int, f: np.ndarray, limit: int = 5) -> list[str]:
    """Failures of normalisation or of ``f(g,h) + f(gh,k) = f(h,k) + f(g,hk)`` mod c."""
    n = G.order
    f = np.asarray(f, dtype=np.int64)
    if f.shape != (n, n):
        return [f"factor set must be {n}x{n}, got {f.shape}"]
    f = f % c
    e = G.identity
    bad = []
    if f[e].any() or f[:, e].any():
        bad.append("not normalised: f(e, g) or f(g, e) is non-zero")
    T = G.table.astype(np.int64)
    for g in range(n):
        lhs = (f[g][:, None] + f[T[g]]) % c          # f(g,h) + f(gh,k), indexed [h, k]
        rhs = (f + f[g][T]) % c                      # f(h,k) + f(g,hk)
        diff = np.argwhere(lhs != rhs)
        for h, k in diff[:limit - len(bad)].tolist():
            bad.append(f"cocycle identity fails at (g, h, k) = ({g}, {h}, {k})")
        if len(bad) >= limit:
            break
    return bad


def central_extension(G: FiniteGroup, c: int, cocycle) -> FiniteGroup:
    """Extension of Z/c by G with factor set ``cocycle``; ``(x, g)`` is ``x*|G| + g``.

    Multiplication is ``(x, g)(y, h) = (x + y + f(g, h), g h)``.  Raises
    NotACocycle for an invalid factor set.
    """
    f = np.asarray(cocycle, dtype=np.int64)
    bad = cocycle_violations(G, c, f)
    if bad:
        raise NotACocycle("; ".join(bad))
    f = f % c
    n = G.order
    idx = np.arange(c * n)
    x, g = idx // n, idx % n
    T = G.table.astype(np.int64)
    table = ((x[:, None] + x[None, :] + f[g[:, None], g[None, :]]) % c) * n + T[g[:, None], g[None, :]]
    labels = [f"({a},{G.labels[b]})" for a, b in zip(x.tolist(), g.tolist())]
    X = FiniteGroup(table, labels=labels, check=False)
    C = Subgroup(X, np.arange(c) * n + G.identity)
    if not C.is_central():
        raise NotACocycle("kernel of the extension is not central")
    return X


def _central_ext_kind(spec, cap):
    G = build(spec["base"], cap)
    c = spec["c"]
    coc = spec["cocycle"]
    f = named_cocycle(G, c, coc) if isinstance(coc, str) else np.array(coc, dtype=np.int64)
    return central_extension(G, c, f)


def _presentation_kind(spec, cap):
    P = parse_presentation(spec["text"])
    T = enumerate_cosets(P, "felsch", Limits(max_cosets=max(4 * cap, 4096)))
    G, _ = to_group(T, P, cap)
    return G


def _permutation_kind(spec, cap):
    return from_permutations(list(spec["gens"]), spec.get("degree"), cap=cap)


_BUILDERS = {
    "cyclic": _cyclic, "abelian": _abelian, "dihedral": _dihedral, "dicyclic": _dicyclic,
    "symmetric": _symmetric, "alternating": _alternating, "heisenberg": _heisenberg,
    "extraspecial": _extraspecial, "metacyclic": _metacyclic, "direct": _direct_kind,
    "semidirect": _semidirect_kind, "central_ext": _central_ext_kind,
    "presentation": _presentation_kind, "permutation": _permutation_kind,
}


# --- classification helpers and the corpus ------------------------------

def is_metacyclic_spec(spec: GroupSpec) -> bool:
    """Specs whose construction exhibits a cyclic normal subgroup with cyclic quotient."""
    k = spec.kind
    if k in ("cyclic", "dihedral", "dicyclic", "metacyclic"):
        return True
    if k == "abelian":
        return sum(1 for d in spec["orders"] if d > 1) <= 2
    if k == "extraspecial":
        return spec.get("n", 1) == 1 and not (spec["p"] > 2 and spec["sign"] == "+")
    return False


def is_metacyclic_extension_spec(spec: GroupSpec) -> bool:
    return spec.kind == "central_ext" and is_metacyclic_spec(spec["base"])


def abelian_types(n: int) -> list[tuple[int, ...]]:
    """Invariant-factor lists ``d1 | d2 | ... `` of the abelian groups of order n."""
    from sympy import factorint
    from sympy.utilities.iterables import partitions

    per_prime = []
    for p, e in sorted(factorint(n).items()):
        opts = []
        for part in partitions(e):
            exps = sorted((k for k, mult in part.items() for _ in range(mult)), reverse=True)
            opts.append(exps)
        opts.sort(reverse=True)
        per_prime.append([(p, ex) for ex in opts])
    out = []
    for combo in product(*per_prime):
        length = max((len(ex) for _, ex in combo), default=0)
        factors = [1] * length
        for p, ex in combo:
            for i, k in enumerate(ex):
                factors[i] *= p ** k
        out.append(tuple(sorted(factors)))
    return sorted(set(out), key=lambda t: (len(t), t))


def metacyclic_family(max_order: int) -> list[GroupSpec]:
    """Non-abelian ``metacyclic(m, n, r)`` with ``m n <= max_order``, ``m >= 3``, ``n >= 2``, ``1 < r < m``."""
    out = []
    for order in range(6, max_order + 1):
        for n in range(2, order // 3 + 1):
            if order % n:
                continue
            m = order // n
            if m < 3:
                continue
            for r in range(2, m):
                if gcd(r, m) == 1 and pow(r, n, m) == 1:
                    out.append(GroupSpec.make("metacyclic", m=m, n=n, r=r))
    return out


def standard_corpus(max_order: int = 32, *, extension_cap: int | None = None) -> list[GroupSpec]:
    """Deterministic corpus of specs, duplicate-free up to isomorphism.

    Contents in order: abelian types, dihedral and dicyclic groups, S3, S4,
    A4, the Heisenberg group mod 3, the extraspecial groups of order 32, the
    metacyclic family up to ``min(max_order, 32)``, then central extensions of
    the metacyclic members by Z/2 and Z/3 (trivial, ``square`` and ``cup``
    factor sets) up to ``extension_cap`` (default ``max_order``).  The first
    spec of each isomorphism class is kept.
    """
    if not 1 <= max_order <= 64:
        raise InvalidSpec("standard_corpus supports 1 <= max_order <= 64")
    ext_cap = max_order if extension_cap is None else min(extension_cap, 64)
    cands: list[GroupSpec] = []
    for n in range(1, max_order + 1):
        for t in abelian_types(n):
            if len(t) <= 1:
                cands.append(GroupSpec.make("cyclic", n=n))
            else:
                cands.append(GroupSpec.make("abelian", orders=list(t)))
    cands += [GroupSpec.make("dihedral", n=n) for n in range(3, max_order // 2 + 1)]
    cands += [GroupSpec.make("dicyclic", n=n) for n in range(2, max_order // 4 + 1)]
    cands += [GroupSpec.make("symmetric", n=3), GroupSpec.make("symmetric", n=4),
              GroupSpec.make("alternating", n=4), GroupSpec.make("heisenberg", p=3),
              GroupSpec.make("extraspecial", p=2, sign="+", n=2),
              GroupSpec.make("extraspecial", p=2, sign="-", n=2)]
    meta = metacyclic_family(min(max_order, 32))
    cands += meta
    bases = ([s for s in cands if s.kind in ("dihedral", "dicyclic") and expected_order(s) <= 32]
             + meta)
    for base in bases:
        for c in (2, 3):
            if c * expected_order(base) > ext_cap:
                continue
            for name in COCYCLE_NAMES:
                cands.append(GroupSpec.make("central_ext", base=base, c=c, cocycle=name))
    return dedupe([s for s in cands if (expected_order(s) or 0) <= max(max_order, ext_cap)])


def dedupe(specs: Iterable[GroupSpec]) -> list[GroupSpec]:
    """Keep the first spec of each isomorphism class; specs that fail to build are dropped."""
    kept: list[tuple[GroupSpec, FiniteGroup, tuple]] = []
    by_sig: dict[tuple, list[FiniteGroup]] = {}
    for s in specs:
        try:
            G = build(s)
        except InvalidSpec:
            continue
        sig = (G.order, tuple(np.bincount(G.element_orders, minlength=G.order + 1).tolist()),
               G.is_abelian())
        same = by_sig.setdefault(sig, [])
        if any(find_isomorphism(G, H) is not None for H in same):
            continue
        same.append(G)
        kept.append((s, G, sig))
    return [s for s, _, _ in kept]


def load_corpus(path: str) -> list[GroupSpec]:
    """A JSON list of spec objects or inline strings, or one inline spec per line."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.strip()
    if stripped.startswith("["):
        try:
            items = json.loads(stripped)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", e.lineno, e.colno) from None
        return [parse_spec(x) if isinstance(x, str) else GroupSpec.from_json(x) for x in items]
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            out.append(parse_spec(line))
        except ParseError as e:
            raise ParseError(str(e).split(": ", 1)[-1], lineno, e.column) from None
    return out
