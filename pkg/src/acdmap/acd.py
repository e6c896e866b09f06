"""Ashenhurst-Curtis decomposition of single-output functions into two LUT levels.

``f(bs, ss, fs) = g(h(bs, ss), ss, fs)``: the composition ``g`` is a
multiplexer whose data inputs are the distinct free-set cofactors (FS
functions) and whose select lines are the BS functions ``h`` plus shared
variables passed straight through.

Two entry points matter to the mapper:

* :func:`evaluate` checks, without solving the encoding problem, whether a
  decomposition exists with the late-arriving variables in the free set and
  reports the per-variable delay increments.
* :func:`decompose` builds the decomposition: i-sets, dichotomy candidates,
  minimum-cost covering, encoding and composition.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import _kernels as K
from .truthtable import (
    TernaryTable,
    TruthTable,
    VarPermutation,
    compose as tt_compose,
    expand,
    move_vars_to_bottom,
    shrink_to_support,
)

MAX_ACD_VARS = 16
MAX_BS_VARS = 6  # i-sets must fit one 64-bit word
LOCAL_SEARCH_PASSES = 100
FALLBACK_FREE_SETS = 64
EXACT_COVER_MU = 5  # up to 10 seed pairs: solve the covering exactly


class DecompositionError(Exception):
    """No two-level decomposition could be built."""


# -- data -------------------------------------------------------------------

@dataclass(frozen=True)
class MultiplicityResult:
    mu: int
    fs_vars: tuple[int, ...]
    fs_functions: tuple[TruthTable, ...]
    class_of: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class BsCandidate:
    on_isets: int
    off_isets: int
    function: TernaryTable
    covered_seeds: int
    cost: int


@dataclass(frozen=True)
class DelayProfile:
    feasible: bool
    increments: tuple[int, ...]
    mu: int | None
    fs_vars: frozenset[int]

    @property
    def num_fs(self) -> int:
        return len(self.fs_vars)

    def delay(self, arrivals: Sequence[int]) -> int | None:
        """Arrival at the cut root given leaf arrivals (``None`` if infeasible)."""
        if not self.feasible:
            return None
        return max(a + d for a, d in zip(arrivals, self.increments))


@dataclass(frozen=True)
class BsFunction:
    table: TruthTable  # over len(support) variables
    support: tuple[int, ...]  # original variable of each table input
    is_buffer: bool = False


@dataclass(frozen=True)
class AcdResult:
    """A two-level decomposition expressed over the original variables.

    Composition input ``i`` is ``fs_vars[i]`` for ``i < len(fs_vars)`` and the
    output of ``bs_functions[i - len(fs_vars)]`` above that.  Buffers stand
    for shared-set variables wired straight into the composition.
    """

    num_vars: int
    composition: TruthTable
    fs_vars: tuple[int, ...]
    bs_functions: tuple[BsFunction, ...]
    codes: tuple[tuple[int, ...], ...]
    mu: int

    @property
    def ss_vars(self) -> tuple[int, ...]:
        return tuple(b.support[0] for b in self.bs_functions if b.is_buffer)

    @property
    def num_luts(self) -> int:
        return 1 + sum(1 for b in self.bs_functions if not b.is_buffer)

    @property
    def bs_vars(self) -> frozenset[int]:
        used = set()
        for b in self.bs_functions:
            if not b.is_buffer:
                used.update(b.support)
        return frozenset(used) - set(self.ss_vars)


# -- free sets --------------------------------------------------------------

@lru_cache(maxsize=None)
def _revolving_door(n: int, r: int) -> tuple[tuple[int, ...], ...]:
    """r-subsets of range(n); consecutive subsets differ by one exchange."""
    if r == 0:
        return ((),)
    if r == n:
        return (tuple(range(n)),)
    head = _revolving_door(n - 1, r)
    tail = tuple(c + (n - 1,) for c in reversed(_revolving_door(n - 1, r - 1)))
    return head + tail


@lru_cache(maxsize=None)
def _exchange_sequence(n_free: int, r: int) -> tuple[np.ndarray, np.ndarray]:
    combos = _revolving_door(n_free, r)
    outs, ins = [], []
    for prev, cur in zip(combos, combos[1:]):
        (o,) = set(prev) - set(cur)
        (a,) = set(cur) - set(prev)
        outs.append(o)
        ins.append(a)
    return np.array(outs, dtype=np.int64), np.array(ins, dtype=np.int64)


def enumerate_free_sets(n: int, p: int, forced: Iterable[int] = ()) -> Iterator[frozenset[int]]:
    """All p-subsets of range(n) containing ``forced``.

    The first set is ``forced`` plus the least significant remaining
    variables; each next set differs from the previous one by exchanging a
    single free variable with a bound one.
    """
    forced = frozenset(forced)
    if not len(forced) <= p <= n or any(not 0 <= v < n for v in forced):
        raise ValueError(f"need |forced| <= p <= n, got {len(forced)}, {p}, {n}")
    free = [v for v in range(n) if v not in forced]
    for combo in _revolving_door(len(free), p - len(forced)):
        yield forced | {free[i] for i in combo}


# -- multiplicity -----------------------------------------------------------

def _words(tt: TruthTable) -> np.ndarray:
    nwords = tt.nbits // 64
    return np.frombuffer(tt.bits.to_bytes(8 * nwords, "little"), dtype="<u8").astype(np.uint64)


def _slice_keys(tt: TruthTable, p: int) -> tuple[np.ndarray, np.ndarray]:
    """(class_of, unique slice values) with classes in first-occurrence order."""
    n = tt.num_vars
    if p <= 6:
        return K.slices_to_classes(_words(tt), n, p)
    rows = _words(tt).reshape(1 << (n - p), 1 << (p - 6))
    _, first, inverse = np.unique(rows, axis=0, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    class_of = rank[inverse.ravel()]
    uniq = rows[np.sort(first)]
    return class_of, uniq


def column_multiplicity(tt: TruthTable, p: int) -> MultiplicityResult:
    """Distinct 2**p-bit slices of ``tt`` (free set = variables 0..p-1)."""
    n = tt.num_vars
    if not 0 <= p < n:
        raise ValueError(f"free set size {p} must be below {n}")
    class_of, uniq = _slice_keys(tt, p)
    if p <= 6:
        fs = tuple(TruthTable.from_value(int(u), p) for u in uniq)
    else:
        fs = tuple(TruthTable(p, int.from_bytes(row.astype("<u8").tobytes(), "little")) for row in uniq)
    class_of.setflags(write=False)
    return MultiplicityResult(len(fs), tuple(range(p)), fs, class_of)


def _smallest_multiplicity(tt: TruthTable, p: int, n_late: int) -> tuple[int, frozenset[int]]:
    n = tt.num_vars
    r = p - n_late
    outs, ins = _exchange_sequence(n - n_late, r)
    if p > 6:
        best, best_fs = None, frozenset()
        for fs in enumerate_free_sets(n, p, range(n_late)):
            moved, _ = move_vars_to_bottom(tt, fs)
            mu = column_multiplicity(moved, p).mu
            if best is None or mu < best:
                best, best_fs = mu, fs
        return best, best_fs
    mu, mask = K.smallest_multiplicity(_words(tt), n, p, n_late, outs + n_late, ins + n_late)
    return int(mu), frozenset(v for v in range(n) if (mask >> v) & 1)


def compute_smallest_multiplicity(tt: TruthTable, p: int, n_late: int) -> tuple[int, frozenset[int]]:
    """Minimum multiplicity over free sets of size ``p`` holding variables 0..n_late-1."""
    if not 0 <= n_late <= p < tt.num_vars:
        raise ValueError(f"need n_late <= p < num_vars, got {n_late}, {p}, {tt.num_vars}")
    return _smallest_multiplicity(tt, p, n_late)


def evaluate(tt: TruthTable, k: int, late: Iterable[int] = (), *,
             prefer_larger_fs: bool = False) -> DelayProfile:
    """Check for a two-level decomposition with every late variable in the free set.

    Free-set sizes are scanned upward from ``max(n - k, |late|)``; the scan
    continues while the multiplicity fits the remaining ``k - p`` select
    lines and strictly improves (or ties, with ``prefer_larger_fs``).
    """
    n = tt.num_vars
    late = sorted(set(late))
    if not 2 <= k <= 6:
        raise ValueError(f"LUT size {k} not supported (2..6)")
    if n <= k:
        raise ValueError(f"function with {n} inputs already fits a {k}-LUT")
    if n > MAX_ACD_VARS:
        raise ValueError(f"at most {MAX_ACD_VARS} variables")
    if any(not 0 <= v < n for v in late):
        raise ValueError(f"late variables {late} out of range")

    moved, perm = move_vars_to_bottom(tt, late)
    at = perm.inverse().perm
    best_mu = math.inf
    best_fs: frozenset[int] = frozenset()
    smallest_seen = None
    for p in range(max(n - k, len(late)), k):
        mu, fs = _smallest_multiplicity(moved, p, len(late))
        smallest_seen = mu if smallest_seen is None else min(smallest_seen, mu)
        better = mu <= best_mu if prefer_larger_fs else mu < best_mu
        if mu <= 1 << (k - p) and better:
            best_mu = mu
            best_fs = frozenset(at[q] for q in fs)
            continue
        break
    if best_mu is math.inf:
        return DelayProfile(False, (), smallest_seen, frozenset())
    incr = tuple(1 if v in best_fs else 2 for v in range(n))
    return DelayProfile(True, incr, int(best_mu), best_fs)


# -- encoding ---------------------------------------------------------------

def build_isets(m: MultiplicityResult) -> list[TruthTable]:
    """One indicator function per FS function over the bound-set assignments."""
    nbs = int(math.log2(len(m.class_of)))
    out = []
    for j in range(m.mu):
        packed = np.packbits((m.class_of == j).astype(np.uint8), bitorder="little")
        out.append(TruthTable.from_value(int.from_bytes(packed.tobytes(), "little"), nbs))
    return out


def candidate_mode(mu: int, k_minus_p: int) -> int:
    if mu & (mu - 1) == 0 and mu == 1 << k_minus_p:
        return K.MODE_BALANCED
    if mu > 8:
        return K.MODE_BINARY
    return K.MODE_TERNARY


def _iset_words(isets: Sequence[TruthTable]) -> np.ndarray:
    nvars = isets[0].num_vars
    if nvars > MAX_BS_VARS:
        raise ValueError(f"bound sets above {MAX_BS_VARS} variables are not supported")
    return np.array([t.bits for t in isets], dtype=np.uint64)


def _candidate_arrays(isets: Sequence[TruthTable], mu: int, k_minus_p: int, keep_trivial=False):
    if not 2 <= mu <= 16:
        raise ValueError(f"multiplicity {mu} outside 2..16")
    if len(isets) != mu:
        raise ValueError("need one i-set per FS function")
    return K.build_candidates(_iset_words(isets), mu, isets[0].num_vars,
                              candidate_mode(mu, k_minus_p), keep_trivial)


def enumerate_bs_candidates(isets: Sequence[TruthTable], mu: int, k_minus_p: int, *,
                            keep_trivial: bool = False) -> list[BsCandidate]:
    """Dichotomies over the i-sets, each with its cost and covered seed pairs.

    ``k_minus_p`` is the number of available select lines; with exactly
    ``mu == 2**k_minus_p`` only balanced splits can be part of a valid code.
    """
    on, off, onset, care, cost, lo, hi, _ = _candidate_arrays(isets, mu, k_minus_p, keep_trivial)
    nvars = isets[0].num_vars
    out = []
    for i in range(len(on)):
        fn = TernaryTable(TruthTable(nvars, int(onset[i])), TruthTable(nvars, int(care[i])))
        out.append(BsCandidate(int(on[i]), int(off[i]), fn,
                               int(lo[i]) | (int(hi[i]) << 64), int(cost[i])))
    return out


def _all_rows(mu: int) -> tuple[np.uint64, np.uint64]:
    rows = mu * (mu - 1) // 2
    lo = (1 << min(rows, 64)) - 1
    hi = (1 << max(rows - 64, 0)) - 1
    return np.uint64(lo), np.uint64(hi)


def _cover(on, off, lo, hi, cost, mu: int, max_columns: int) -> list[int] | None:
    if mu <= EXACT_COVER_MU:
        sel, count = K.exact_cover(lo, cost, mu * (mu - 1) // 2, max_columns)
        return None if count < 0 else [int(c) for c in sel[:count]]
    all_lo, all_hi = _all_rows(mu)
    sel, count = K.greedy_cover(lo, hi, cost, all_lo, all_hi, max_columns)
    if count < 0:
        sel, count = K.binary_code_cover(on, off, mu, max_columns)
        if count < 0:
            return None
    count = K.local_search(sel, count, lo, hi, cost, all_lo, all_hi, LOCAL_SEARCH_PASSES)
    return [int(c) for c in sel[:count]]


def solve_covering(candidates: Sequence[BsCandidate], mu: int, max_columns: int) -> list[int] | None:
    """Minimum-cost cover of all seed dichotomies with at most ``max_columns`` columns.

    Exact for ``mu <= 5``; above that, greedy (most newly covered rows, then
    lower cost, then lower index) followed by single-column replacement moves.  Returns candidate indices,
    or ``None`` when no cover within ``max_columns`` was found.
    """
    if mu < 2:
        return []
    if not candidates:
        return None
    mask64 = (1 << 64) - 1
    lo = np.array([c.covered_seeds & mask64 for c in candidates], dtype=np.uint64)
    hi = np.array([c.covered_seeds >> 64 for c in candidates], dtype=np.uint64)
    cost = np.array([c.cost for c in candidates], dtype=np.int64)
    on = np.array([c.on_isets for c in candidates], dtype=np.int64)
    off = np.array([c.off_isets for c in candidates], dtype=np.int64)
    return _cover(on, off, lo, hi, cost, mu, max_columns)


def compose(codes: Sequence[int | Iterable[int]], fs_functions: Sequence[TruthTable],
            p: int, m: int, ss_count: int = 0) -> TruthTable:
    """Composition table: FS variables at the bottom, ``m + ss_count`` selectors above.

    ``codes[j]`` is the selector value (or collection of values) that picks
    ``fs_functions[j]``.  Unused selector values copy the FS function of the
    nearest used code (Hamming distance, then lowest code).
    """
    width = m + ss_count
    owner: dict[int, int] = {}
    for j, c in enumerate(codes):
        for code in ([c] if isinstance(c, int) else c):
            if not 0 <= code < 1 << width:
                raise ValueError(f"code {code} does not fit {width} selector bits")
            if code in owner:
                raise ValueError(f"duplicate code {code:0{width}b}")
            owner[code] = j
    if not owner:
        raise ValueError("no codes given")
    used = sorted(owner)
    value = 0
    for t in range(1 << width):
        j = owner.get(t)
        if j is None:
            nearest = min(used, key=lambda c: ((c ^ t).bit_count(), c))
            j = owner[nearest]
        value |= fs_functions[j].value << (t << p)
    return TruthTable.from_value(value, p + width)


# -- full decomposition ------------------------------------------------------

def _decompose_with_fs(tt: TruthTable, k: int, fs: Iterable[int]) -> AcdResult | None:
    n = tt.num_vars
    moved, perm = move_vars_to_bottom(tt, fs)
    at = perm.inverse().perm
    p = len(set(fs))
    nbs = n - p
    if nbs > MAX_BS_VARS or p > 6:
        return None
    fs_vars = tuple(at[q] for q in range(p))
    bs_vars = tuple(at[q] for q in range(p, n))
    class_of, uniq = K.slices_to_classes(_words(moved), n, p)
    mu = len(uniq)
    max_sel = k - p
    if mu > 1 << max_sel:
        return None
    fs_functions = [TruthTable.from_value(int(u), p) for u in uniq]
    if mu == 1:
        return AcdResult(n, fs_functions[0], fs_vars, (), ((0,),), 1)

    m = MultiplicityResult(mu, tuple(range(p)), tuple(fs_functions), class_of)
    isets = build_isets(m)
    on, off, _, _, cost, lo, hi, done = _candidate_arrays(isets, mu, max_sel)
    sel = _cover(on, off, lo, hi, cost, mu, max_sel)
    if sel is None:
        return None

    selectors: list[TruthTable] = []
    bs_functions: list[BsFunction] = []
    for c in sel:
        h = TruthTable(nbs, int(done[c]))
        small, sup = shrink_to_support(h)
        if len(sup) > k:
            return None
        if len(sup) == 1:
            x = TruthTable.var(sup[0], nbs)
            selectors.append(x)
            bs_functions.append(BsFunction(TruthTable.var(0, 1), (bs_vars[sup[0]],), True))
            continue
        selectors.append(h)
        bs_functions.append(BsFunction(small, tuple(bs_vars[s] for s in sup)))

    xs = np.arange(1 << nbs, dtype=np.uint64)
    code_of = np.zeros(1 << nbs, dtype=np.int64)
    for i, h in enumerate(selectors):
        code_of |= ((np.uint64(h.bits) >> xs) & np.uint64(1)).astype(np.int64) << i
    owner: dict[int, int] = {}
    for code, cls in set(zip(code_of.tolist(), class_of.tolist())):
        if owner.setdefault(code, cls) != cls:
            raise AssertionError("selected dichotomies do not separate the FS functions")
    codes = [sorted(c for c, j in owner.items() if j == cls) for cls in range(mu)]
    composition = compose(codes, fs_functions, p, len(selectors))
    return AcdResult(n, composition, fs_vars, tuple(bs_functions),
                     tuple(tuple(c) for c in codes), mu)


def _free_sets_by_multiplicity(tt: TruthTable, p: int, n_late: int, max_mu: int,
                               limit: int = FALLBACK_FREE_SETS) -> list[tuple[int, frozenset[int]]]:
    """Free sets holding variables 0..n_late-1 with multiplicity <= max_mu, lowest first."""
    found = []
    for fs in enumerate_free_sets(tt.num_vars, p, range(n_late)):
        moved, _ = move_vars_to_bottom(tt, fs)
        mu = column_multiplicity(moved, p).mu
        if mu <= max_mu:
            found.append((mu, tuple(sorted(fs)), fs))
    found.sort(key=lambda t: t[:2])
    return [(mu, fs) for mu, _, fs in found[:limit]]


def _size(r: AcdResult) -> tuple[int, int]:
    edges = r.composition.num_vars + sum(len(b.support) for b in r.bs_functions if not b.is_buffer)
    return r.num_luts, edges


def decompose(tt: TruthTable, k: int, late: Iterable[int] = (), *,
              profile: DelayProfile | None = None) -> AcdResult:
    """Decompose ``tt`` into k-LUTs with every late variable in the free set.

    Uses the free set found by :func:`evaluate` first.  If that fails, other
    free sets are tried, including smaller ones whose bound set is wider than
    ``k`` (support minimization must then bring each BS function under ``k``
    inputs); the first free-set size with any success returns its smallest
    result.
    """
    late = tuple(sorted(set(late)))
    if profile is None:
        profile = evaluate(tt, k, late)
    if profile.feasible:
        result = _decompose_with_fs(tt, k, profile.fs_vars)
        if result is not None:
            return result
    n = tt.num_vars
    moved, perm = move_vars_to_bottom(tt, late)
    at = perm.inverse().perm
    for p in range(max(len(late), 1), k):
        if n - p > MAX_BS_VARS:
            continue
        if not profile.feasible and p >= max(n - k, len(late)):
            break  # nothing fits at evaluate's first size, so nothing larger fits
        best = None
        for _, fs in _free_sets_by_multiplicity(moved, p, len(late), 1 << (k - p)):
            fs = frozenset(at[q] for q in fs)
            if profile.feasible and fs == profile.fs_vars:
                continue
            result = _decompose_with_fs(tt, k, fs)
            if result is not None and (best is None or _size(result) < _size(best)):
                best = result
        if best is not None:
            return best
    raise DecompositionError(f"no decomposition into {k}-LUTs with late set {list(late)}")


def verify_acd(r: AcdResult, original: TruthTable, perm: VarPermutation | None = None) -> bool:
    """Recompose the two-level network on all assignments and compare.

    With ``perm``, result variables are positions of a reordered table whose
    original variable ``u`` sits at ``perm.perm[u]``.
    """
    n = original.num_vars
    if r.num_vars != n:
        return False
    orig = perm.inverse().perm if perm is not None else tuple(range(n))
    inputs = [TruthTable.var(orig[v], n) for v in r.fs_vars]
    for b in r.bs_functions:
        inputs.append(expand(b.table, [orig[v] for v in b.support], n))
    if len(inputs) != r.composition.num_vars:
        return False
    if not inputs:
        return r.composition.is_const() and original.is_const() and \
            bool(r.composition.bits) == bool(original.bits)
    return tt_compose(r.composition, inputs) == original


__all__ = [
    "AcdResult", "BsCandidate", "BsFunction", "DecompositionError", "DelayProfile",
    "MultiplicityResult", "build_isets", "column_multiplicity", "compose",
    "compute_smallest_multiplicity", "decompose", "enumerate_bs_candidates",
    "enumerate_free_sets", "evaluate", "solve_covering", "verify_acd",
]
