"""Compiled inner loops for the decomposition engine.

Tables are ``uint64`` word arrays; tables narrower than 6 variables keep their
pattern replicated across the single word.  Everything here works on scratch
copies owned by the caller.
"""
import numpy as np
from numba import njit

U64 = np.uint64
ONE = np.uint64(1)
ZERO = np.uint64(0)

VAR_MASKS = np.array([
    0xAAAAAAAAAAAAAAAA,
    0xCCCCCCCCCCCCCCCC,
    0xF0F0F0F0F0F0F0F0,
    0xFF00FF00FF00FF00,
    0xFFFF0000FFFF0000,
    0xFFFFFFFF00000000,
], dtype=np.uint64)

MODE_TERNARY = 0
MODE_BINARY = 1
MODE_BALANCED = 2


@njit(cache=True)
def popcount(x):
    x = x - ((x >> U64(1)) & U64(0x5555555555555555))
    x = (x & U64(0x3333333333333333)) + ((x >> U64(2)) & U64(0x3333333333333333))
    x = (x + (x >> U64(4))) & U64(0x0F0F0F0F0F0F0F0F)
    return int((x * U64(0x0101010101010101)) >> U64(56))


@njit(cache=True)
def swap_inplace(w, i, j):
    if i == j:
        return
    if i > j:
        i, j = j, i
    if j < 6:
        shift = U64((1 << j) - (1 << i))
        m = VAR_MASKS[i] & ~VAR_MASKS[j]
        keep = ~(m | (m << shift))
        for t in range(w.size):
            x = w[t]
            w[t] = (x & keep) | ((x & m) << shift) | ((x >> shift) & m)
    elif i < 6:
        s = U64(1 << i)
        m = VAR_MASKS[i]
        step = 1 << (j - 6)
        for t in range(w.size):
            if t & step == 0:
                lo = w[t]
                hi = w[t + step]
                w[t] = (lo & ~m) | ((hi << s) & m)
                w[t + step] = (hi & m) | ((lo >> s) & ~m)
    else:
        a = 1 << (i - 6)
        b = 1 << (j - 6)
        for t in range(w.size):
            if (t & a) != 0 and (t & b) == 0:
                u = t - a + b
                tmp = w[t]
                w[t] = w[u]
                w[u] = tmp


@njit(cache=True)
def fill_slices(w, n, p, out):
    """Write the ``2**(n-p)`` slices of ``2**p`` bits (p <= 6) into ``out``."""
    count = 1 << (n - p)
    if p == 6:
        for i in range(count):
            out[i] = w[i]
        return count
    per = 64 >> p
    width = 1 << p
    mask = (ONE << U64(width)) - ONE
    for i in range(count):
        out[i] = (w[i // per] >> U64((i % per) * width)) & mask
    return count


@njit(cache=True)
def _bounded_distinct(buf, count, keys, stamp, gen, limit):
    """Distinct values among ``buf[:count]``, giving up once ``limit`` is reached."""
    hmask = keys.size - 1
    mu = 0
    for i in range(count):
        v = buf[i]
        h = (v * U64(0x9E3779B97F4A7C15)) >> U64(40)
        slot = int(h) & hmask
        while stamp[slot] == gen and keys[slot] != v:
            slot = (slot + 1) & hmask
        if stamp[slot] != gen:
            stamp[slot] = gen
            keys[slot] = v
            mu += 1
            if mu >= limit:
                return mu
    return mu


@njit(cache=True)
def smallest_multiplicity(w, n, p, n_late, seq_out, seq_in):
    """Scan free sets in revolving-door order, one swap per step.

    ``w`` has the late variables at the bottom and the first free set
    (positions ``0..p-1``) already in place.  ``seq_out[s]``/``seq_in[s]`` are
    the variables leaving/entering the free set at step ``s``.  Returns the
    smallest multiplicity and the free set achieving it as a bitmask over the
    variables of ``w``.
    """
    at = np.arange(n)
    where = np.arange(n)
    nslices = 1 << (n - p)
    buf = np.empty(nslices, dtype=np.uint64)
    size = 1
    while size < 2 * nslices:
        size <<= 1
    keys = np.empty(size, dtype=np.uint64)
    stamp = np.zeros(size, dtype=np.int64)
    gen = 1
    fill_slices(w, n, p, buf)
    best = _bounded_distinct(buf, nslices, keys, stamp, gen, nslices + 1)
    best_mask = (1 << p) - 1
    for s in range(seq_out.size):
        if best <= 1:
            break
        o = seq_out[s]
        a = seq_in[s]
        qo = where[o]
        qa = where[a]
        swap_inplace(w, qo, qa)
        at[qo] = a
        at[qa] = o
        where[a] = qo
        where[o] = qa
        gen += 1
        fill_slices(w, n, p, buf)
        mu = _bounded_distinct(buf, nslices, keys, stamp, gen, best)
        if mu < best:
            best = mu
            mask = 0
            for q in range(p):
                mask |= 1 << at[q]
            best_mask = mask
    return best, best_mask


@njit(cache=True)
def _pair_index(a, b, mu):
    # a < b
    return a * mu - (a * (a + 1)) // 2 + (b - a - 1)


@njit(cache=True)
def minimize_word(on, care, nvars):
    """Greedy don't-care support reduction on a single word.

    Returns (kept variable count, completed onset, kept-variable mask).
    """
    kept = nvars
    kept_mask = (1 << nvars) - 1
    for v in range(nvars):
        m = VAR_MASKS[v]
        s = U64(1 << v)
        on0 = on & ~m
        on1 = (on & m) >> s
        c0 = care & ~m
        c1 = (care & m) >> s
        if ((on0 ^ on1) & c0 & c1) != ZERO:
            continue
        om = on0 | on1
        cm = c0 | c1
        on = om | (om << s)
        care = cm | (cm << s)
        kept -= 1
        kept_mask &= ~(1 << v)
    return kept, on, kept_mask


@njit(cache=True)
def _count_candidates(mu, mode):
    if mode == MODE_TERNARY:
        return 2 * 3 ** (mu - 1)
    if mode == MODE_BINARY:
        return 1 << (mu - 1)
    # subsets of size mu/2 containing i-set 0
    total = 1
    r = mu // 2 - 1
    for i in range(r):
        total = total * (mu - 1 - i) // (i + 1)
    return total


@njit(cache=True)
def build_candidates(isets, mu, nvars, mode, keep_trivial):
    """Enumerate dichotomies over ``mu`` i-sets (single-word i-sets).

    Returns arrays (on, off, onset, care, cost, cover_lo, cover_hi, completed).
    I-set 0 is never in the OFF side (symmetry break).  Candidates that
    distinguish no pair are dropped unless ``keep_trivial``.
    """
    cap = _count_candidates(mu, mode)
    on_a = np.empty(cap, dtype=np.int64)
    off_a = np.empty(cap, dtype=np.int64)
    onset_a = np.empty(cap, dtype=np.uint64)
    care_a = np.empty(cap, dtype=np.uint64)
    cost_a = np.empty(cap, dtype=np.int64)
    lo_a = np.empty(cap, dtype=np.uint64)
    hi_a = np.empty(cap, dtype=np.uint64)
    done_a = np.empty(cap, dtype=np.uint64)
    full = (1 << mu) - 1
    touch_lo = np.zeros(mu, dtype=np.uint64)
    touch_hi = np.zeros(mu, dtype=np.uint64)
    for a in range(mu):
        for b in range(a + 1, mu):
            idx = _pair_index(a, b, mu)
            if idx < 64:
                bit = ONE << U64(idx)
                touch_lo[a] |= bit
                touch_lo[b] |= bit
            else:
                bit = ONE << U64(idx - 64)
                touch_hi[a] |= bit
                touch_hi[b] |= bit
    # OR of i-sets / pair-touch masks over every subset of i-sets
    sub_set = np.zeros(full + 1, dtype=np.uint64)
    sub_lo = np.zeros(full + 1, dtype=np.uint64)
    sub_hi = np.zeros(full + 1, dtype=np.uint64)
    for s in range(1, full + 1):
        j = 0
        while not (s >> j) & 1:
            j += 1
        r = s & (s - 1)
        sub_set[s] = sub_set[r] | isets[j]
        sub_lo[s] = sub_lo[r] | touch_lo[j]
        sub_hi[s] = sub_hi[r] | touch_hi[j]
    count = 0
    if mode == MODE_TERNARY:
        total = 2 * 3 ** (mu - 1)
    elif mode == MODE_BINARY:
        total = 1 << (mu - 1)
    else:
        total = cap
    rest_set = (1 << (mu // 2 - 1)) - 1  # Gosper walk over the other i-sets
    for code in range(total):
        if mode == MODE_TERNARY:
            # digit 0 in {ON, DC}; digits 1.. in {ON, OFF, DC}
            on = 0
            off = 0
            if code % 2 == 0:
                on = 1
            rest = code // 2
            for j in range(1, mu):
                d = rest % 3
                rest //= 3
                if d == 0:
                    on |= 1 << j
                elif d == 1:
                    off |= 1 << j
        elif mode == MODE_BINARY:
            on = (code << 1) | 1
            off = full & ~on
        else:
            on = (rest_set << 1) | 1
            off = full & ~on
            if rest_set != 0:
                c = rest_set & -rest_set
                r = rest_set + c
                rest_set = (((r ^ rest_set) >> 2) // c) | r
        if not keep_trivial and (on == 0 or off == 0):
            continue
        onset = sub_set[on]
        care = onset | sub_set[off]
        # cross pairs = (pairs touching ON) & (pairs touching OFF)
        lo = sub_lo[on] & sub_lo[off]
        hi = sub_hi[on] & sub_hi[off]
        kept, done, _ = minimize_word(onset, care, nvars)
        on_a[count] = on
        off_a[count] = off
        onset_a[count] = onset
        care_a[count] = care
        cost_a[count] = kept
        lo_a[count] = lo
        hi_a[count] = hi
        done_a[count] = done
        count += 1
    return (on_a[:count], off_a[:count], onset_a[:count], care_a[:count],
            cost_a[:count], lo_a[:count], hi_a[:count], done_a[:count])


@njit(cache=True)
def _covers_all(sel, nsel, lo, hi, all_lo, all_hi, skip):
    cl = ZERO
    ch = ZERO
    for s in range(nsel):
        if s != skip:
            cl |= lo[sel[s]]
            ch |= hi[sel[s]]
    return cl, ch


@njit(cache=True)
def local_search(sel, nsel, lo, hi, cost, all_lo, all_hi, max_passes):
    """Single-column replacement (or removal) moves that lower the total cost."""
    ncand = lo.size
    for _ in range(max_passes):
        improved = False
        s = 0
        while s < nsel:
            cl, ch = _covers_all(sel, nsel, lo, hi, all_lo, all_hi, s)
            need_lo = all_lo & ~cl
            need_hi = all_hi & ~ch
            if need_lo == ZERO and need_hi == ZERO:
                # redundant column
                for t in range(s, nsel - 1):
                    sel[t] = sel[t + 1]
                nsel -= 1
                improved = True
                continue
            current = sel[s]
            best = -1
            best_cost = cost[current]
            for c in range(ncand):
                if cost[c] < best_cost and (lo[c] & need_lo) == need_lo and (hi[c] & need_hi) == need_hi:
                    dup = False
                    for t in range(nsel):
                        if sel[t] == c:
                            dup = True
                    if not dup:
                        best = c
                        best_cost = cost[c]
            if best >= 0:
                sel[s] = best
                improved = True
            s += 1
        if not improved:
            break
    return nsel


@njit(cache=True)
def greedy_cover(lo, hi, cost, all_lo, all_hi, limit):
    """Pick columns covering the most uncovered rows; ties by cost then index.

    Returns (selection array, count); count is -1 if more than ``limit``
    columns would be needed or some row cannot be covered.
    """
    sel = np.empty(max(limit, 1) + 1, dtype=np.int64)
    nsel = 0
    un_lo = all_lo
    un_hi = all_hi
    while un_lo != ZERO or un_hi != ZERO:
        if nsel >= limit:
            return sel, -1
        best = -1
        best_gain = 0
        best_cost = 0
        for c in range(lo.size):
            gain = popcount(lo[c] & un_lo) + popcount(hi[c] & un_hi)
            if gain > best_gain or (gain == best_gain and gain > 0 and cost[c] < best_cost):
                best = c
                best_gain = gain
                best_cost = cost[c]
        if best < 0:
            return sel, -1
        sel[nsel] = best
        nsel += 1
        un_lo &= ~lo[best]
        un_hi &= ~hi[best]
    return sel, nsel


@njit(cache=True)
def exact_cover(lo, cost, rows, limit):
    """Minimum-cost cover with at most ``limit`` columns (rows <= 16).

    Dynamic programming over sets of covered rows.  Equal costs keep the
    first column found, then the fewest columns.
    """
    size = 1 << rows
    full = size - 1
    inf = np.int64(1) << 60
    best = np.full((limit + 1, size), inf, dtype=np.int64)
    par_col = np.full((limit + 1, size), -1, dtype=np.int64)
    par_state = np.zeros((limit + 1, size), dtype=np.int64)
    best[0, 0] = 0
    for c in range(1, limit + 1):
        for s in range(size):
            b = best[c - 1, s]
            if b == inf:
                continue
            for j in range(lo.size):
                t = s | np.int64(lo[j])
                if t == s:
                    continue
                v = b + cost[j]
                if v < best[c, t]:
                    best[c, t] = v
                    par_col[c, t] = j
                    par_state[c, t] = s
    sel = np.empty(max(limit, 1) + 1, dtype=np.int64)
    used = -1
    for c in range(1, limit + 1):
        if best[c, full] < inf and (used < 0 or best[c, full] < best[used, full]):
            used = c
    if used < 0:
        return sel, -1
    s = full
    for c in range(used, 0, -1):
        sel[c - 1] = par_col[c, s]
        s = par_state[c, s]
    return sel, used


@njit(cache=True)
def binary_code_cover(on, off, mu, limit):
    """Columns of the plain binary encoding (i-set 0 kept in the ON side)."""
    bits = 0
    while (1 << bits) < mu:
        bits += 1
    sel = np.empty(max(limit, 1) + 1, dtype=np.int64)
    if bits > limit:
        return sel, -1
    full = (1 << mu) - 1
    for b in range(bits):
        want_on = 0
        for j in range(mu):
            if ((j >> b) & 1) == 0:
                want_on |= 1 << j
        want_off = full & ~want_on
        found = -1
        for c in range(on.size):
            if on[c] == want_on and off[c] == want_off:
                found = c
                break
        if found < 0:
            return sel, -1
        sel[b] = found
    return sel, bits


@njit(cache=True)
def slices_to_classes(w, n, p):
    """Classify BS assignments by their free-set slice (first-occurrence order)."""
    count = 1 << (n - p)
    vals = np.empty(count, dtype=np.uint64)
    fill_slices(w, n, p, vals)
    order = np.argsort(vals, kind="mergesort")
    class_of = np.empty(count, dtype=np.int64)
    # assign provisional ids per run, remember first occurrence of each
    first = np.empty(count, dtype=np.int64)
    ids = np.empty(count, dtype=np.int64)
    nid = 0
    for r in range(count):
        i = order[r]
        if r == 0 or vals[i] != vals[order[r - 1]]:
            first[nid] = i
            nid += 1
        ids[i] = nid - 1
    rank = np.argsort(first[:nid], kind="mergesort")
    relabel = np.empty(nid, dtype=np.int64)
    for new in range(nid):
        relabel[rank[new]] = new
    uniq = np.empty(nid, dtype=np.uint64)
    for i in range(count):
        class_of[i] = relabel[ids[i]]
        uniq[class_of[i]] = vals[i]
    return class_of, uniq
