"""Permutation groups closed into Cayley tables.

Permutations act on the right: the product ``a*b`` applies ``a`` first.
Points are written 1-based in cycle notation.
"""
from __future__ import annotations

import re
from typing import Sequence

import numpy as np

from .errors import CapExceeded, ParseError
from .groups import DENSE_CAP, FiniteGroup

_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int | None = None) -> tuple[int, ...]:
    """``"(1 2 3)(4 5)"`` -> 0-based image tuple."""
    text = text.strip()
    cycles = []
    pos = 0
    for m in _CYCLE.finditer(text):
        if text[pos:m.start()].strip():
            raise ParseError(f"unexpected {text[pos:m.start()].strip()!r}", 1, pos + 1)
        pts = [int(t) for t in re.split(r"[\s,]+", m.group(1).strip()) if t]
        if any(p < 1 for p in pts) or len(set(pts)) != len(pts):
            raise ParseError(f"bad cycle {m.group(0)!r}", 1, m.start() + 1)
        cycles.append(pts)
        pos = m.end()
    if text[pos:].strip():
        raise ParseError(f"unexpected {text[pos:].strip()!r}", 1, pos + 1)
    n = max([p for c in cycles for p in c], default=0)
    n = max(n, degree or 0)
    img = list(range(n))
    for c in cycles:
        for a, b in zip(c, c[1:] + c[:1]):
            img[a - 1] = b - 1
    return tuple(img)


def cycle_string(perm: Sequence[int]) -> str:
    seen = set()
    parts = []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = perm[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = perm[j]
        parts.append("(" + " ".join(str(p + 1) for p in cyc) + ")")
    return "".join(parts) or "()"


def _as_image(g, degree: int | None) -> tuple[int, ...]:
    if isinstance(g, str):
        return parse_cycles(g, degree)
    img = tuple(int(x) for x in g)
    if sorted(img) != list(range(len(img))):
        raise ValueError(f"{g!r} is not a bijection on 0..{len(img) - 1}")
    return img


def from_permutations(generators: Sequence, degree: int | None = None,
                      cap: int = DENSE_CAP, name: str | None = None) -> FiniteGroup:
    """Closure of the given permutations (cycle strings or 0-based image lists).

    Element 0 is the identity; the rest follow in breadth-first order of
    right multiplication by the generators.
    """
    imgs = [_as_image(g, degree) for g in generators]
    n = max([len(i) for i in imgs] + [degree or 0])
    gens = np.array([list(i) + list(range(len(i), n)) for i in imgs], dtype=np.int64).reshape(len(imgs), n)
    identity = tuple(range(n))
    elems = [identity]
    index = {identity: 0}
    k = 0
    while k < len(elems):
        p = np.array(elems[k], dtype=np.int64)
        for g in gens:
            q = tuple(g[p].tolist())
            if q not in index:
                if len(elems) >= cap:
                    raise CapExceeded("permutation group order", len(elems) + 1, cap)
                index[q] = len(elems)
                elems.append(q)
        k += 1
    P = np.array(elems, dtype=np.int64).reshape(len(elems), n)
    cols = np.empty((len(gens), len(elems)), dtype=np.int32)
    for j, g in enumerate(gens):
        cols[j] = [index[tuple(r)] for r in g[P].tolist()]
    labels = [cycle_string(e) for e in elems]
    if not len(gens):
        return FiniteGroup(np.zeros((1, 1), dtype=np.int16), labels=labels, check=False, name=name)
    G = FiniteGroup.from_right_regular(cols, labels=labels, dense_cap=cap, name=name)
    G.permutations = P
    return G


def symmetric_group(n: int) -> FiniteGroup:
    if n <= 1:
        return from_permutations([], name=f"S{n}")
    if n == 2:
        return from_permutations(["(1 2)"], name="S2")
    return from_permutations([f"({' '.join(str(i) for i in range(1, n + 1))})", "(1 2)"], name=f"S{n}")


def alternating_group(n: int) -> FiniteGroup:
    if n <= 2:
        return from_permutations([], name=f"A{n}")
    gens = [f"(1 2 {k})" for k in range(3, n + 1)]
    return from_permutations(gens, name=f"A{n}")
