"""Todd-Coxeter coset enumeration over the trivial subgroup."""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from ..errors import CapExceeded, LimitExceeded
from ..groups import DENSE_CAP, FiniteGroup, spanning_tree
from . import _kernel as K
from .words import Presentation, Word, format_word

log = logging.getLogger(__name__)

DEFAULT_MAX_COSETS = 2_000_000
DEFAULT_MAX_TIME = 120.0
DEFAULT_MAX_TABLE_BYTES = 1_500_000_000
STRATEGIES = ("hlt", "felsch")


@dataclass(frozen=True)
class Limits:
    max_cosets: int = DEFAULT_MAX_COSETS
    max_time: float = DEFAULT_MAX_TIME
    max_table_bytes: int = DEFAULT_MAX_TABLE_BYTES


@dataclass
class CosetTable:
    """A complete coset table; row ``c`` column ``2i`` is ``c * x_i``, ``2i+1`` is ``c * x_i^-1``."""

    rows: np.ndarray
    generator_count: int
    strategy: str = "felsch"
    stats: dict = field(default_factory=dict)

    @property
    def live(self) -> np.ndarray:
        return np.ones(self.rows.shape[0], dtype=bool)

    @property
    def index(self) -> int:
        return int(self.rows.shape[0])

    def is_consistent(self) -> bool:
        r = self.rows
        n = r.shape[0]
        if (r < 0).any() or (r >= n).any():
            return False
        for x in range(r.shape[1]):
            if not (r[r[:, x], x ^ 1] == np.arange(n)).all():
                return False
        return True

    def coset_of(self, word) -> int:
        c = 0
        for l in word:
            c = int(self.rows[c, 2 * (l - 1) if l > 0 else 2 * (-l - 1) + 1])
        return c


def _letter_cols(w) -> np.ndarray:
    a = np.asarray(w, dtype=np.int64)
    return np.where(a > 0, 2 * (a - 1), 2 * (-a - 1) + 1)


def reduce_letter_array(arr: np.ndarray) -> dict[int, np.ndarray]:
    """Cyclically reduce rows of signed letters (0 = padding), grouped by length.

    Vectorised equivalent of ``Word(row).cyclically_reduced()`` for every row;
    empty results are dropped.
    """
    a = np.asarray(arr, dtype=np.int64)
    if a.ndim != 2:
        raise ValueError("relator array must be 2-dimensional")
    a = a.copy()
    w = a.shape[1]
    changed = True
    while changed:
        changed = False
        # left-justify: stable sort on "is padding"
        a = np.take_along_axis(a, np.argsort(a == 0, axis=1, kind="stable"), axis=1)
        length = (a != 0).sum(axis=1)
        for i in range(w - 1):
            hit = (a[:, i] != 0) & (a[:, i] == -a[:, i + 1])
            if hit.any():
                a[hit, i] = 0
                a[hit, i + 1] = 0
                changed = True
                break
        if changed:
            continue
        last = a[np.arange(a.shape[0]), np.maximum(length - 1, 0)]
        hit = (length >= 2) & (a[:, 0] == -last)
        if hit.any():
            rows = np.flatnonzero(hit)
            a[rows, 0] = 0
            a[rows, length[rows] - 1] = 0
            changed = True
    length = (a != 0).sum(axis=1)
    return {int(L): a[length == L, :L] for L in np.unique(length).tolist() if L > 0}


def _compile_relators(P: Presentation | None, by_letters: dict[int, np.ndarray] | None = None,
                      generator_count: int | None = None):
    """Deduplicated relators (up to rotation and inversion) and their conjugates by first letter."""
    if by_letters is None:
        by_letters = {}
        for r in P.relators:
            r = r.cyclically_reduced()
            if r:
                by_letters.setdefault(len(r), []).append(list(r))
        by_letters = {L: np.array(ws, dtype=np.int64) for L, ws in by_letters.items()}
        generator_count = P.generator_count
    ncols = 2 * generator_count
    rels: list[np.ndarray] = []
    conjs: list[np.ndarray] = []
    base = max(ncols, 2)
    for L, words in sorted(by_letters.items()):
        arr = _letter_cols(words).reshape(len(words), L)
        inv = (arr[:, ::-1] ^ 1)
        if L * np.log2(base) < 62:
            weights = base ** np.arange(L - 1, -1, -1, dtype=np.int64)
            rots = np.stack([np.roll(arr, -k, axis=1) for k in range(L)]
                            + [np.roll(inv, -k, axis=1) for k in range(L)], axis=1)
            codes = (rots * weights).sum(axis=2)
            canon = codes.min(axis=1)
            _, keep = np.unique(canon, return_index=True)
            keep.sort()
            rels.append(arr[keep])
            cr = rots[keep].reshape(-1, L)
            cc = codes[keep].ravel()
            _, ukeep = np.unique(cc, return_index=True)
            conjs.append(cr[np.sort(ukeep)])
        else:
            seen_canon = set()
            seen_conj = set()
            kept, kept_conj = [], []
            for row, irow in zip(arr.tolist(), inv.tolist()):
                rot = [tuple(row[k:] + row[:k]) for k in range(L)] + \
                      [tuple(irow[k:] + irow[:k]) for k in range(L)]
                c = min(rot)
                if c in seen_canon:
                    continue
                seen_canon.add(c)
                kept.append(row)
                for t in rot:
                    if t not in seen_conj:
                        seen_conj.add(t)
                        kept_conj.append(t)
            rels.append(np.array(kept, dtype=np.int64).reshape(-1, L))
            conjs.append(np.array(kept_conj, dtype=np.int64).reshape(-1, L))

    def flatten(blocks):
        lens = np.concatenate([np.full(bk.shape[0], bk.shape[1], dtype=np.int64) for bk in blocks]
                              + [np.zeros(0, dtype=np.int64)])
        flat = np.concatenate([bk.ravel() for bk in blocks] + [np.zeros(0, dtype=np.int64)])
        off = np.zeros(lens.size + 1, dtype=np.int64)
        np.cumsum(lens, out=off[1:])
        return flat.astype(np.int32), off

    # blocks come in increasing length, so HLT scans short relators first
    rel_flat, rel_off = flatten(rels)
    flat, off = flatten(conjs)
    lens = np.diff(off)
    first = flat[off[:-1]].astype(np.int64) if lens.size else np.zeros(0, dtype=np.int64)
    order = np.argsort(first, kind="stable")
    new_lens = lens[order]
    new_off = np.zeros(lens.size + 1, dtype=np.int64)
    np.cumsum(new_lens, out=new_off[1:])
    gather = np.repeat(off[:-1][order] - new_off[:-1], new_lens) + np.arange(new_off[-1])
    conj_flat, conj_off = flat[gather], new_off
    col_start = np.searchsorted(first[order], np.arange(ncols + 1)).astype(np.int64)
    maxlen = int(max((bk.shape[1] for bk in rels if bk.shape[0]), default=0))
    return rel_flat, rel_off, conj_flat, conj_off, col_start, maxlen


def enumerate_cosets(P: Presentation, strategy: str = "felsch", limits: Limits | None = None,
                     *, debug: bool = False) -> CosetTable:
    """Enumerate the cosets of the trivial subgroup of ``<P>``.

    Raises LimitExceeded when the coset, memory or time budget is hit.  That
    does not prove the group infinite.
    """
    return _enumerate(P.generator_count, lambda: _compile_relators(P), strategy, limits, debug)


def enumerate_letter_array(generator_count: int, relators: np.ndarray, strategy: str = "felsch",
                           limits: Limits | None = None, *, debug: bool = False) -> CosetTable:
    """Like :func:`enumerate_cosets` for relators given as a padded array of signed letters."""
    return _enumerate(generator_count,
                      lambda: _compile_relators(None, reduce_letter_array(relators), generator_count),
                      strategy, limits, debug)


def _enumerate(k: int, compile_rels, strategy: str, limits: Limits | None, debug: bool) -> CosetTable:
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    limits = limits or Limits()
    ncols = 2 * k
    t0 = time.monotonic()
    if k == 0:
        return CosetTable(np.zeros((1, 0), dtype=np.int32), 0, strategy, {"defined": 0, "max_live": 1})
    rel_flat, rel_off, conj_flat, conj_off, col_start, maxlen = compile_rels()
    row_bytes = 4 * ncols
    hard_cap = int(min(limits.max_cosets, limits.max_table_bytes // row_bytes))
    if hard_cap < maxlen + 2:
        raise LimitExceeded(f"table budget allows only {hard_cap} cosets")
    cap = int(min(hard_cap, max(1024, 4 * maxlen)))
    table = np.empty((cap, ncols), dtype=np.int32)
    fwd = np.empty(cap, dtype=np.int32)
    queue = np.empty(cap, dtype=np.int32)
    dstack = np.empty((1 << 16, 2), dtype=np.int32)
    st = np.zeros(K.STATE_LEN, dtype=np.int64)
    table[0, :] = -1
    fwd[0] = 0
    st[K.NALLOC] = 1
    st[K.NLIVE] = 1
    strat = K.HLT if strategy == "hlt" else K.FELSCH
    step = 1 if debug else 20_000
    max_live = 1
    compactions = lookaheads = 0
    rels = (rel_flat, rel_off, conj_flat, conj_off, col_start)

    def remap_pointer(new):
        c = int(st[K.PTR_C])
        if c >= new.size:
            st[K.PTR_C] = int((new >= 0).sum())
            st[K.PTR_X] = 0
        elif new[c] >= 0:
            st[K.PTR_C] = int(new[c])
        else:
            st[K.PTR_C] = int((new[:c] >= 0).sum())
            st[K.PTR_X] = 0

    while True:
        status = K.run(table, fwd, queue, dstack, st, *rels, strat, maxlen, step)
        max_live = max(max_live, int(st[K.NLIVE]))
        log.debug("status=%d alloc=%d live=%d defs=%d lookaheads=%d t=%.1f", status, st[K.NALLOC],
                  st[K.NLIVE], st[K.NDEFS], lookaheads, time.monotonic() - t0)
        if debug:
            bad = K.check_consistent(table, fwd, st[K.NALLOC])
            if bad:
                raise AssertionError(f"coset table inconsistent at {bad} entries")
        if time.monotonic() - t0 > limits.max_time:
            raise LimitExceeded(f"time budget {limits.max_time}s exceeded "
                                f"({int(st[K.NLIVE])} live cosets)")
        if status == K.PAUSED:
            continue
        if status == K.NEED_SPACE:
            nalloc, nlive = int(st[K.NALLOC]), int(st[K.NLIVE])
            if nalloc - nlive > nalloc // 4:
                remap_pointer(K.compact(table, fwd, st))
                compactions += 1
                continue
            if cap < hard_cap:
                cap = int(min(hard_cap, 2 * cap))
                grown = np.empty((cap, ncols), dtype=np.int32)
                grown[:nalloc] = table[:nalloc]
                table = grown
                fwd = np.concatenate([fwd[:nalloc], np.empty(cap - nalloc, np.int32)])
                queue = np.empty(cap, dtype=np.int32)
                continue
            # out of room: look ahead for coincidences before giving up
            K.lookahead(table, fwd, queue, dstack, st, *rels)
            lookaheads += 1
            if int(st[K.NALLOC]) - int(st[K.NLIVE]) > maxlen + 1:
                remap_pointer(K.compact(table, fwd, st))
                compactions += 1
                continue
            raise LimitExceeded(f"coset budget {hard_cap} exhausted "
                                f"(max_cosets={limits.max_cosets})")
        # DONE: make sure nothing was lost to a deduction-stack overflow
        if st[K.DOVERFLOW]:
            K.lookahead(table, fwd, queue, dstack, st, *rels)
            lookaheads += 1
            if st[K.DOVERFLOW]:
                continue
        c, x = K.first_gap(table, fwd, st[K.NALLOC])
        if c >= 0:
            st[K.PTR_C] = c
            st[K.PTR_X] = 0 if strat == K.HLT else x
            continue
        break
    K.compact(table, fwd, st)
    n = int(st[K.NALLOC])
    rows = table[:n].copy()
    stats = {"defined": int(st[K.NDEFS]), "max_live": max_live, "compactions": compactions,
             "lookaheads": lookaheads, "seconds": round(time.monotonic() - t0, 3)}
    log.debug("enumerated %d cosets (%s): %s", n, strategy, stats)
    return CosetTable(rows, k, strategy, stats)


def group_order(P: Presentation, strategy: str = "felsch", limits: Limits | None = None) -> int:
    return enumerate_cosets(P, strategy, limits).index


def _forward_cols(T: CosetTable) -> np.ndarray:
    return np.ascontiguousarray(T.rows[:, 0::2].T)


def to_group(T: CosetTable, P: Presentation | None, cap: int = DENSE_CAP, *,
             allow_regular: bool = False) -> tuple[FiniteGroup, list[int]]:
    """The group acting regularly on the cosets, plus each generator's element.

    Element ``c`` is the coset reached from coset 0 along its spanning-tree
    word; generator ``i`` is element ``T.rows[0, 2i]``.  Above ``cap`` this
    raises CapExceeded unless ``allow_regular`` asks for the tree-backed form.
    """
    n = T.index
    if n > cap and not allow_regular:
        raise CapExceeded("group order", n, cap)
    gens = [int(T.rows[0, 2 * i]) for i in range(T.generator_count)]
    if T.generator_count == 0:
        return FiniteGroup(np.zeros((1, 1), dtype=np.int16), labels=["1"], check=False), gens
    cols = _forward_cols(T)
    if cols.shape[0] > 64:
        # keep only the generators a spanning tree needs; element numbering is unchanged
        _, letter, _ = spanning_tree(cols)
        cols = cols[np.unique(letter[1:])]
    G = FiniteGroup.from_right_regular(cols, dense_cap=cap)
    if P is not None and G.is_dense and n * T.rows.shape[1] <= 200_000:
        G.labels = _coset_labels(T, P)
    return G, gens


def _coset_labels(T: CosetTable, P: Presentation) -> list[str]:
    n = T.index
    words: list[list[int] | None] = [None] * n
    words[0] = []
    frontier = [0]
    while frontier:
        nxt = []
        for c in frontier:
            for i in range(T.generator_count):
                for sign, col in ((1, 2 * i), (-1, 2 * i + 1)):
                    d = int(T.rows[c, col])
                    if words[d] is None:
                        words[d] = words[c] + [sign * (i + 1)]
                        nxt.append(d)
        frontier = nxt
    return [format_word(Word(w), P.generator_names) for w in words]


def presentation_of(G: FiniteGroup) -> Presentation:
    """Cayley presentation: a generator per element, ``x_i x_j x_{ij}^-1`` per pair."""
    n = G.order
    names = [f"g{i}" for i in range(n)]
    i = np.repeat(np.arange(n), n)
    j = np.tile(np.arange(n), n)
    ij = G.mul_many(i, j)
    rels = [Word((a + 1, b + 1, -(c + 1))) for a, b, c in zip(i.tolist(), j.tolist(), ij.tolist())]
    return Presentation(tuple(names), tuple(rels))
