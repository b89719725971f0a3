"""Finite abelian groups in invariant-factor form, and the integer algebra behind it."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from math import gcd, prod
from typing import Iterable, Mapping, Sequence

from sympy import factorint


@dataclass(frozen=True)
class AbelianInvariants:
    """Invariant factors ``d1 | d2 | ... | dk`` with every ``di >= 2``.

    The empty tuple is the trivial group.
    """

    factors: tuple[int, ...] = ()

    def __post_init__(self):
        fs = tuple(int(d) for d in self.factors)
        for d in fs:
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
        for a, b in zip(fs, fs[1:]):
            if b % a:
                raise ValueError(f"divisibility chain broken: {a} does not divide {b}")
        object.__setattr__(self, "factors", fs)

    @classmethod
    def from_cyclic_orders(cls, orders: Iterable[int]) -> "AbelianInvariants":
        """Canonical form of the direct sum of cyclic groups of the given orders."""
        by_prime: dict[int, list[int]] = defaultdict(list)
        for n in orders:
            n = int(n)
            if n < 1:
                raise ValueError("cyclic orders must be positive")
            for p, e in factorint(n).items():
                by_prime[p].append(p ** e)
        return cls._assemble(by_prime)

    @classmethod
    def from_prime_power_counts(cls, count: Mapping[int, Sequence[int]]) -> "AbelianInvariants":
        """Rebuild a group from ``count[p][k] = log_p |A[p^k]|`` for k = 0, 1, ...

        ``A[n]`` is the subgroup of elements killed by ``n``.  The sequence for
        each prime must end once it has stabilised.
        """
        by_prime: dict[int, list[int]] = defaultdict(list)
        for p, logs in count.items():
            # r[k] = number of cyclic p-factors of order >= p^k
            r = [logs[k] - logs[k - 1] for k in range(1, len(logs))] + [0]
            for k in range(1, len(r)):
                for _ in range(r[k - 1] - r[k]):
                    by_prime[p].append(p ** k)
        return cls._assemble(by_prime)

    @staticmethod
    def _assemble(by_prime: Mapping[int, list[int]]) -> "AbelianInvariants":
        width = max((len(v) for v in by_prime.values()), default=0)
        factors = [1] * width
        for p, powers in by_prime.items():
            powers = sorted(powers, reverse=True)
            for i, q in enumerate(powers):
                factors[width - 1 - i] *= q
        return AbelianInvariants(tuple(d for d in factors if d > 1))

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    def is_trivial(self) -> bool:
        return not self.factors

    def killed_by(self, n: int) -> int:
        """Order of the subgroup of elements killed by ``n``."""
        return prod(gcd(d, n) for d in self.factors)

    def __str__(self):
        if not self.factors:
            return "1"
        return " x ".join(f"Z/{d}" for d in self.factors)

    def to_list(self) -> list[int]:
        return list(self.factors)


TRIVIAL = AbelianInvariants(())


def _dense_smith(mat: list[list[int]], ncols: int):
    """Smith normal form of a dense integer matrix.

    Returns ``(diag, V)`` where ``V`` records the column operations: the
    group ``Z^n / rows`` is carried onto ``sum Z/diag[j]`` by ``v -> v V``.
    """
    a = [row[:] for row in mat if any(row)]
    V = [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    m, n = len(a), ncols

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def sub_col(j, t, q):
        # col_j -= q * col_t
        for row in a:
            row[j] -= q * row[t]
        for row in V:
            row[j] -= q * row[t]

    diag = []
    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    v = a[i][j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
            if best is None:
                return diag, V
            _, i, j = best
            a[t], a[i] = a[i], a[t]
            if j != t:
                swap_cols(t, j)
            p = a[t][t]
            clean = True
            for i in range(t + 1, m):
                q = a[i][t] // p
                if q:
                    ri, rt = a[i], a[t]
                    for j in range(t, n):
                        ri[j] -= q * rt[j]
                clean = clean and a[i][t] == 0
            for j in range(t + 1, n):
                q = a[t][j] // p
                if q:
                    sub_col(j, t, q)
                clean = clean and a[t][j] == 0
            if not clean:
                continue
            bad = next((i for i in range(t + 1, m)
                        if any(a[i][j] % p for j in range(t + 1, n))), None)
            if bad is None:
                break
            rt, rb = a[t], a[bad]
            for j in range(t, n):
                rt[j] += rb[j]
        diag.append(abs(a[t][t]))
    return diag, V


def _dense_smith_diagonal(mat: list[list[int]]) -> list[int]:
    """Diagonal of the Smith normal form of a small dense integer matrix."""
    if not mat:
        return []
    return _dense_smith(mat, len(mat[0]))[0]


def _eliminate_units(rows: Iterable[Mapping[int, int]], ncols: int):
    """Sparse Tietze elimination of variables with a unit coefficient.

    Returns the surviving rows, the surviving columns and the substitutions
    ``(col, {c: coeff})`` meaning ``x_col = sum coeff * x_c`` in the order made.
    """
    rows_: dict[int, dict[int, int]] = {}
    by_col: dict[int, set[int]] = defaultdict(set)
    for rid, r in enumerate(rows):
        r = {c: v for c, v in r.items() if v}
        if not r:
            continue
        rows_[rid] = r
        for c in r:
            by_col[c].add(rid)
    alive_cols = set(range(ncols))
    subs: list[tuple[int, dict[int, int]]] = []
    progress = True
    while progress:
        progress = False
        for rid in sorted(rows_):
            r = rows_.get(rid)
            if r is None:
                continue
            col = None
            for c, v in r.items():
                if v in (1, -1) and (col is None or len(by_col[c]) < len(by_col[col])):
                    col = c
            if col is None:
                continue
            sign = r[col]
            # x_col = -sign * (rest of row); substitute into every other row
            for other in list(by_col[col]):
                if other == rid:
                    continue
                o = rows_[other]
                f = o.pop(col) * sign
                for c, v in r.items():
                    if c == col:
                        continue
                    nv = o.get(c, 0) - f * v
                    if nv:
                        if c not in o:
                            by_col[c].add(other)
                        o[c] = nv
                    elif c in o:
                        del o[c]
                        by_col[c].discard(other)
                if not o:
                    del rows_[other]
            for c in r:
                by_col[c].discard(rid)
            del by_col[col]
            del rows_[rid]
            alive_cols.discard(col)
            subs.append((col, {c: -sign * v for c, v in r.items() if c != col}))
            progress = True
    return list(rows_.values()), sorted(alive_cols), subs


def smith_diagonal(rows: Iterable[Mapping[int, int]], ncols: int) -> list[int]:
    """Smith normal form diagonal of a sparse integer relation matrix.

    Rows are ``{column: coefficient}`` maps.  Unit pivots are eliminated
    sparsely first; the remaining block is reduced densely.  Zero diagonal
    entries (free rank) are returned as 0.
    """
    left, cols, subs = _eliminate_units(rows, ncols)
    index = {c: i for i, c in enumerate(cols)}
    dense = [[0] * len(cols) for _ in left]
    for i, r in enumerate(left):
        for c, v in r.items():
            dense[i][index[c]] = v
    diag = _dense_smith(dense, len(cols))[0] if cols else []
    diag = diag + [0] * (len(cols) - len(diag))
    return [1] * len(subs) + diag


def invariants_from_relations(rows: Iterable[Mapping[int, int]], ncols: int) -> AbelianInvariants:
    """Invariant factors of the finite abelian group ``Z^ncols / <rows>``."""
    diag = smith_diagonal(rows, ncols)
    if any(d == 0 for d in diag):
        raise ValueError("relation matrix does not define a finite group")
    return AbelianInvariants.from_cyclic_orders(d for d in diag if d > 1)


def abelian_model(rows: Iterable[Mapping[int, int]], ncols: int) -> tuple[list[int], list[list[int]]]:
    """Cyclic decomposition of ``Z^ncols / <rows>`` with coordinates of each generator.

    Returns ``(orders, coords)``: the group is ``sum Z/orders[j]`` (every
    order at least 2) and generator ``i`` maps to ``coords[i]``, reduced
    modulo the orders.  Raises ValueError for an infinite group.
    """
    left, cols, subs = _eliminate_units(rows, ncols)
    index = {c: i for i, c in enumerate(cols)}
    dense = [[0] * len(cols) for _ in left]
    for i, r in enumerate(left):
        for c, v in r.items():
            dense[i][index[c]] = v
    diag, V = _dense_smith(dense, len(cols)) if cols else ([], [])
    if len(diag) < len(cols) or any(d == 0 for d in diag):
        raise ValueError("relation matrix does not define a finite group")
    keep = [j for j, d in enumerate(diag) if d > 1]
    orders = [diag[j] for j in keep]
    vec: dict[int, list[int]] = {}
    for c in cols:
        vec[c] = [V[index[c]][j] % diag[j] for j in keep]
    for col, expr in reversed(subs):
        acc = [0] * len(keep)
        for c, coef in expr.items():
            vc = vec[c]
            for t in range(len(keep)):
                acc[t] += coef * vc[t]
        vec[col] = [x % d for x, d in zip(acc, orders)]
    return orders, [vec[i] for i in range(ncols)]


def tensor_invariants(a: AbelianInvariants, b: AbelianInvariants) -> AbelianInvariants:
    """Classical ``A (x) B`` of finite abelian groups: sum of ``Z/gcd(di, ej)``."""
    return AbelianInvariants.from_cyclic_orders(gcd(d, e) for d in a.factors for e in b.factors)


def exterior_invariants(a: AbelianInvariants) -> AbelianInvariants:
    """Exterior square of a finite abelian group: sum over i < j of ``Z/gcd(di, dj)``."""
    fs = a.factors
    return AbelianInvariants.from_cyclic_orders(
        gcd(fs[i], fs[j]) for i in range(len(fs)) for j in range(i + 1, len(fs)))


def direct_sum(*parts: AbelianInvariants) -> AbelianInvariants:
    return AbelianInvariants.from_cyclic_orders(d for p in parts for d in p.factors)


def gamma_whitehead(a: AbelianInvariants) -> AbelianInvariants:
    """Whitehead's quadratic functor on a finite abelian group.

    ``Gamma(Z/d)`` is ``Z/d`` for odd ``d`` and ``Z/2d`` for even ``d``, and
    ``Gamma(A + B) = Gamma(A) + Gamma(B) + A (x) B``.
    """
    fs = a.factors
    parts = [d if d % 2 else 2 * d for d in fs]
    parts += [gcd(fs[i], fs[j]) for i in range(len(fs)) for j in range(i + 1, len(fs))]
    return AbelianInvariants.from_cyclic_orders(parts)
