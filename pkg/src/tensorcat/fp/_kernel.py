"""Numba kernels for coset enumeration over the trivial subgroup.

Columns: generator ``i`` (0-based) owns column ``2i``, its inverse ``2i+1``;
the inverse of column ``x`` is ``x ^ 1``.  Undefined entries are ``-1``.
Coset ``c`` is live iff ``fwd[c] == c``; ``fwd`` doubles as the union-find
forest used while merging coincident cosets.

The driver keeps every array on the Python side.  ``run`` returns at safe
points (no pending coincidences, empty deduction stack) so the caller can
grow or compact the table and enforce its time budget.
"""
import numpy as np
from numba import njit

# indices into the int64 state vector
NALLOC = 0
DTOP = 1
DOVERFLOW = 2
PTR_C = 3
PTR_X = 4
NLIVE = 5
QLEN = 6
NDEFS = 7
STATE_LEN = 8

DONE = 0
NEED_SPACE = 1
PAUSED = 2

HLT = 0
FELSCH = 1


@njit(cache=True, nogil=True)
def _rep(fwd, c):
    r = c
    while fwd[r] != r:
        r = fwd[r]
    while fwd[c] != r:
        nxt = fwd[c]
        fwd[c] = r
        c = nxt
    return r


@njit(cache=True, nogil=True)
def _merge(fwd, queue, st, a, b):
    a = _rep(fwd, a)
    b = _rep(fwd, b)
    if a == b:
        return
    if a > b:
        a, b = b, a
    fwd[b] = a
    queue[st[QLEN]] = b
    st[QLEN] += 1
    st[NLIVE] -= 1


@njit(cache=True, nogil=True)
def _push(dstack, st, c, x):
    top = st[DTOP]
    if top >= dstack.shape[0]:
        st[DOVERFLOW] = 1
        return
    dstack[top, 0] = c
    dstack[top, 1] = x
    st[DTOP] = top + 1


@njit(cache=True, nogil=True)
def _coincidence(table, fwd, queue, dstack, st, a, b):
    ncols = table.shape[1]
    st[QLEN] = 0
    _merge(fwd, queue, st, a, b)
    i = 0
    while i < st[QLEN]:
        g = queue[i]
        i += 1
        for x in range(ncols):
            d = table[g, x]
            if d < 0:
                continue
            xi = x ^ 1
            table[d, xi] = -1
            mu = _rep(fwd, g)
            nu = _rep(fwd, d)
            if table[mu, x] >= 0:
                _merge(fwd, queue, st, nu, table[mu, x])
            elif table[nu, xi] >= 0:
                _merge(fwd, queue, st, mu, table[nu, xi])
            else:
                table[mu, x] = nu
                table[nu, xi] = mu
                _push(dstack, st, mu, x)
    st[QLEN] = 0


@njit(cache=True, nogil=True)
def _define(table, fwd, dstack, st, c, x):
    d = st[NALLOC]
    st[NALLOC] = d + 1
    table[d, :] = -1
    fwd[d] = d
    table[c, x] = d
    table[d, x ^ 1] = c
    st[NLIVE] += 1
    st[NDEFS] += 1
    _push(dstack, st, c, x)
    return d


@njit(cache=True, nogil=True)
def _scan(table, fwd, queue, dstack, st, c, word, lo, hi, fill):
    """Scan ``word[lo:hi]`` from coset ``c``.

    With ``fill`` the gaps are closed by defining new cosets (HLT); without
    it only a single-letter gap yields a deduction.
    """
    f = c
    b = c
    i = lo
    j = hi - 1
    while True:
        while i <= j and table[f, word[i]] >= 0:
            f = table[f, word[i]]
            i += 1
        if i > j:
            if f != b:
                _coincidence(table, fwd, queue, dstack, st, f, b)
            return
        while j >= i and table[b, word[j] ^ 1] >= 0:
            b = table[b, word[j] ^ 1]
            j -= 1
        if j < i:
            _coincidence(table, fwd, queue, dstack, st, f, b)
            return
        if i == j:
            x = word[i]
            table[f, x] = b
            table[b, x ^ 1] = f
            _push(dstack, st, f, x)
            return
        if not fill:
            return
        _define(table, fwd, dstack, st, f, word[i])


@njit(cache=True, nogil=True)
def _process_deductions(table, fwd, queue, dstack, st, conj_words, conj_off, col_start):
    # the conjugate list is closed under inversion, so a relator read backwards
    # through the new edge is a conjugate starting with x read forwards from c
    while st[DTOP] > 0:
        st[DTOP] -= 1
        c = dstack[st[DTOP], 0]
        x = dstack[st[DTOP], 1]
        if fwd[c] != c:
            continue
        for k in range(col_start[x], col_start[x + 1]):
            if fwd[c] != c:
                break
            _scan(table, fwd, queue, dstack, st, c, conj_words, conj_off[k], conj_off[k + 1], False)


@njit(cache=True, nogil=True)
def lookahead(table, fwd, queue, dstack, st, rel_words, rel_off, conj_words, conj_off, col_start):
    """Scan every relator at every live coset without defining anything."""
    st[DOVERFLOW] = 0
    nrel = rel_off.shape[0] - 1
    c = 0
    while c < st[NALLOC]:
        if fwd[c] == c:
            for r in range(nrel):
                if fwd[c] != c:
                    break
                _scan(table, fwd, queue, dstack, st, c, rel_words, rel_off[r], rel_off[r + 1], False)
                _process_deductions(table, fwd, queue, dstack, st, conj_words, conj_off, col_start)
        c += 1


@njit(cache=True, nogil=True)
def run(table, fwd, queue, dstack, st, rel_words, rel_off, conj_words, conj_off, col_start,
        strategy, maxlen, max_defs):
    """Advance the enumeration; returns DONE, NEED_SPACE or PAUSED."""
    cap = table.shape[0]
    ncols = table.shape[1]
    nrel = rel_off.shape[0] - 1
    start_defs = st[NDEFS]
    work = 0
    if strategy == HLT:
        while True:
            c = st[PTR_C]
            if c >= st[NALLOC]:
                break
            if fwd[c] != c:
                st[PTR_C] = c + 1
                st[PTR_X] = 0
                continue
            # PTR_X < nrel: relator index still to scan; afterwards row filling
            while st[PTR_X] < nrel + ncols and fwd[c] == c:
                work += 1
                if work > max_defs or st[NDEFS] - start_defs >= max_defs:
                    return PAUSED
                if cap - st[NALLOC] < maxlen + 1:
                    return NEED_SPACE
                k = st[PTR_X]
                if k < nrel:
                    _scan(table, fwd, queue, dstack, st, c, rel_words, rel_off[k], rel_off[k + 1], True)
                else:
                    x = k - nrel
                    if table[c, x] < 0:
                        _define(table, fwd, dstack, st, c, x)
                st[PTR_X] = k + 1
                _process_deductions(table, fwd, queue, dstack, st, conj_words, conj_off, col_start)
            st[PTR_C] = c + 1
            st[PTR_X] = 0
    else:
        while True:
            c = st[PTR_C]
            x = st[PTR_X]
            found = False
            while c < st[NALLOC]:
                if fwd[c] == c:
                    while x < ncols:
                        if table[c, x] < 0:
                            found = True
                            break
                        x += 1
                    if found:
                        break
                c += 1
                x = 0
            st[PTR_C] = c
            st[PTR_X] = x
            if not found:
                break
            if st[NDEFS] - start_defs >= max_defs:
                return PAUSED
            if cap - st[NALLOC] < 1:
                return NEED_SPACE
            _define(table, fwd, dstack, st, c, x)
            _process_deductions(table, fwd, queue, dstack, st, conj_words, conj_off, col_start)
    return DONE


@njit(cache=True, nogil=True)
def compact(table, fwd, st):
    """Renumber live cosets to 0..nlive-1 in order; returns the old->new map."""
    n = st[NALLOC]
    ncols = table.shape[1]
    new = np.full(n, -1, dtype=np.int64)
    k = 0
    for c in range(n):
        if fwd[c] == c:
            new[c] = k
            k += 1
    for c in range(n):
        if fwd[c] == c:
            t = new[c]
            for x in range(ncols):
                d = table[c, x]
                table[t, x] = -1 if d < 0 else new[d]
    for c in range(k):
        fwd[c] = c
    st[NALLOC] = k
    st[NLIVE] = k
    return new


@njit(cache=True, nogil=True)
def first_gap(table, fwd, nalloc):
    """Return (coset, column) of an undefined entry among live rows, or (-1, -1)."""
    ncols = table.shape[1]
    for c in range(nalloc):
        if fwd[c] == c:
            for x in range(ncols):
                if table[c, x] < 0:
                    return c, x
    return -1, -1


@njit(cache=True, nogil=True)
def check_consistent(table, fwd, nalloc):
    """Number of live entries violating ``T[T[c,x], x^1] == c`` or pointing at dead cosets."""
    bad = 0
    ncols = table.shape[1]
    for c in range(nalloc):
        if fwd[c] != c:
            continue
        for x in range(ncols):
            d = table[c, x]
            if d < 0:
                continue
            if fwd[d] != d or table[d, x ^ 1] != c:
                bad += 1
    return bad
