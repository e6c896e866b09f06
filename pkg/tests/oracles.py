"""Brute-force reference implementations used to freeze expected values.

Everything here works on plain ints and per-assignment evaluation and
shares no code with the package beyond data classes.
"""
from __future__ import annotations

import itertools
import math

import numpy as np


def bit(bits: int, i: int) -> int:
    return (bits >> i) & 1


def table_from(fn, n: int) -> int:
    out = 0
    for m in range(1 << n):
        if fn([(m >> j) & 1 for j in range(n)]):
            out |= 1 << m
    return out


def cofactor(bits: int, n: int, var: int, value: int) -> int:
    """Cofactor kept at width n: f(x) with x_var forced."""
    out = 0
    for m in range(1 << n):
        src = (m | (1 << var)) if value else (m & ~(1 << var))
        out |= bit(bits, src) << m
    return out


def swap(bits: int, n: int, i: int, j: int) -> int:
    out = 0
    for m in range(1 << n):
        a, b = (m >> i) & 1, (m >> j) & 1
        src = m & ~(1 << i) & ~(1 << j) | (b << i) | (a << j)
        out |= bit(bits, src) << m
    return out


def support(bits: int, n: int) -> set[int]:
    sup = set()
    for v in range(n):
        for m in range(1 << n):
            if not (m >> v) & 1 and bit(bits, m) != bit(bits, m | (1 << v)):
                sup.add(v)
                break
    return sup


def fs_slices(bits: int, n: int, fs) -> list[tuple[int, ...]]:
    """Free-set slice for every bound-set assignment (bound vars in ascending order)."""
    fs = sorted(fs)
    bs = [v for v in range(n) if v not in fs]
    out = []
    for b in range(1 << len(bs)):
        base = sum(((b >> i) & 1) << v for i, v in enumerate(bs))
        row = []
        for a in range(1 << len(fs)):
            m = base | sum(((a >> i) & 1) << v for i, v in enumerate(fs))
            row.append(bit(bits, m))
        out.append(tuple(row))
    return out


def multiplicity(bits: int, n: int, fs) -> int:
    return len(set(fs_slices(bits, n, fs)))


def low_slices(bits: int, n: int, p: int) -> int:
    """Distinct 2**p-bit groups of the table (free set = low variables)."""
    mask = (1 << (1 << p)) - 1
    return len({(bits >> (j << p)) & mask for j in range(1 << (n - p))})


def smallest_multiplicity(bits: int, n: int, p: int, forced=()) -> int:
    forced = set(forced)
    rest = [v for v in range(n) if v not in forced]
    return min(multiplicity(bits, n, forced | set(c))
               for c in itertools.combinations(rest, p - len(forced)))


def min_completion_support(onset: int, care: int, n: int) -> int:
    """Smallest support over every completion of the don't-care bits."""
    dcs = [m for m in range(1 << n) if not bit(care, m)]
    best = n
    for fill in range(1 << len(dcs)):
        t = onset
        for i, m in enumerate(dcs):
            if (fill >> i) & 1:
                t |= 1 << m
        best = min(best, len(support(t, n)))
    return best


def pair_mask(on: int, off: int, mu: int) -> int:
    """Seed dichotomies (a, b), a < b, split by an ON/OFF assignment of i-sets."""
    out, idx = 0, 0
    for a in range(mu):
        for b in range(a + 1, mu):
            ia, ib = (on >> a) & 1, (on >> b) & 1
            oa, ob = (off >> a) & 1, (off >> b) & 1
            if (ia and ob) or (oa and ib):
                out |= 1 << idx
            idx += 1
    return out


def min_cover_cost(masks, costs, mu: int, max_columns: int) -> int | None:
    """Exact minimum total cost of at most ``max_columns`` columns covering every pair.

    Dynamic programming over covered-pair sets; only the cheapest column per
    distinct mask matters.
    """
    rows = mu * (mu - 1) // 2
    full = (1 << rows) - 1
    cheapest: dict[int, int] = {}
    for m, c in zip(masks, costs):
        if m and c < cheapest.get(m, math.inf):
            cheapest[m] = c
    size = 1 << rows
    inf = np.iinfo(np.int64).max // 4
    best = np.full(size, inf, dtype=np.int64)
    best[0] = 0
    states = np.arange(size)
    answer = inf
    for _ in range(max_columns):
        nxt = best.copy()
        for m, c in cheapest.items():
            np.minimum.at(nxt, states | m, best + c)
        best = nxt
        answer = min(answer, int(best[full]))
    return None if answer >= inf else answer


def bfs_levels(num_pis: int, ands) -> list[int]:
    """Longest path from the inputs via Kahn's algorithm (ands: list of fanin literal pairs)."""
    n = 1 + num_pis + len(ands)
    fanouts = [[] for _ in range(n)]
    indeg = [0] * n
    for i, (a, b) in enumerate(ands):
        node = 1 + num_pis + i
        for f in (a >> 1, b >> 1):
            fanouts[f].append(node)
            indeg[node] += 1
    level = [0] * n
    queue = [v for v in range(n) if indeg[v] == 0]
    while queue:
        v = queue.pop()
        for w in fanouts[v]:
            level[w] = max(level[w], level[v] + 1)
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return level


def all_cuts(num_pis: int, ands, limit: int) -> list[set[frozenset[int]]]:
    """Every cut with at most ``limit`` leaves, from the definition
    cuts(n) = {{n}} + {A | B : A in cuts(a), B in cuts(b)}.

    Unions never shrink, so dropping sets above ``limit`` early is exact.
    """
    out: list[set[frozenset[int]]] = [set() for _ in range(1 + num_pis + len(ands))]
    out[0] = {frozenset()}
    for v in range(1, num_pis + 1):
        out[v] = {frozenset([v])}
    for i, (a, b) in enumerate(ands):
        node = 1 + num_pis + i
        cuts = {frozenset([node])}
        for x in out[a >> 1]:
            for y in out[b >> 1]:
                u = x | y
                if len(u) <= limit:
                    cuts.add(u)
        out[node] = cuts
    return out


def minimal_cuts(cuts: set[frozenset[int]]) -> set[frozenset[int]]:
    return {c for c in cuts if not any(o < c for o in cuts)}
