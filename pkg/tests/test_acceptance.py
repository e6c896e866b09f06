"""Acceptance criteria, one PASS/FAIL line each at the stated tolerance.

Under pytest the lines are repeated in an "acceptance criteria" section of
the terminal summary.  Also runnable on its own:

    python tests/test_acceptance.py
"""
import math
import random
import sys
import time
from functools import lru_cache

import pytest

import conftest
import oracles
from acdmap.acd import (
    DecompositionError,
    build_isets,
    column_multiplicity,
    compose,
    compute_smallest_multiplicity,
    decompose,
    enumerate_bs_candidates,
    evaluate,
    solve_covering,
    verify_acd,
)
from acdmap.aig import random_aig, read_aiger
from acdmap.bench import late_sets, run_bench
from acdmap.lutnet import equiv_check, stats
from acdmap.mapper import check_delay_contract, map_aig
from acdmap.truthtable import TruthTable

K = 6
F = 0x8804800184148111


def report(name: str, ok: bool, detail: str) -> bool:
    line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


# -- worked example -------------------------------------------------------------

def worked_chain():
    f = TruthTable.from_value(F, 6)
    m = column_multiplicity(f, 2)
    isets = build_isets(m)
    cands = enumerate_bs_candidates(isets, m.mu, 2)
    sel = solve_covering(cands, m.mu, 2)
    g = compose([0, 1, 2, 3], [TruthTable.from_value(v, 2) for v in (0x8, 0x4, 0x0, 0x1)], 2, 2)
    r = decompose(f, 4)
    return f, m, isets, cands, sel, g, r


def test_worked_example_chain():
    worked_chain()  # warm the compiled kernels
    runs = []
    for _ in range(20):
        start = time.perf_counter()
        f, m, isets, cands, sel, g, r = worked_chain()
        runs.append(time.perf_counter() - start)
    ms = 1000 * min(runs)
    iset_of = {t.value: s.value for t, s in zip(m.fs_functions, isets)}
    chosen = [cands[i] for i in sel]
    bs = [b for b in r.bs_functions if not b.is_buffer]
    checks = {
        "mu=4": m.mu == 4,
        "FS functions": {t.value for t in m.fs_functions} == {0x8, 0x0, 0x4, 0x1},
        "i-set(0x8)=0xC888": iset_of[0x8] == 0xC888,
        "cover cost 6": sum(c.cost for c in chosen) == 6,
        "BS {0x1177,0x2727}": sorted(c.function.onset.value for c in chosen) == [0x1177, 0x2727],
        "3-var BS": all(c.cost == 3 for c in chosen) and all(len(b.support) == 3 for b in bs),
        "composition 0x1048": g.value == 0x1048,
        "3 LUTs": r.num_luts == 3,
        "verify_acd": verify_acd(r, f),
        "< 10 ms": ms < 10,
    }
    failed = [k for k, ok in checks.items() if not ok]
    assert report("worked-example chain", not failed,
                  f"{len(checks) - len(failed)}/{len(checks)} checks, chain {ms:.2f} ms"
                  + (f", failed: {', '.join(failed)}" if failed else ""))


# -- recomposition soundness ------------------------------------------------------

def test_recomposition_soundness():
    start = time.perf_counter()
    decomposed = unsound = misses = pairs = feasible = 0
    for n in range(7, 12):
        rng = random.Random(1000 + n)
        for i in range(10_000):
            tt = TruthTable.from_value(rng.getrandbits(1 << n), n)
            for late in late_sets(rng, n, i % 6):
                pairs += 1
                prof = evaluate(tt, K, late)
                if not prof.feasible:
                    continue
                feasible += 1
                try:
                    r = decompose(tt, K, late, profile=prof)
                except DecompositionError:
                    misses += 1
                    continue
                decomposed += 1
                unsound += not verify_acd(r, tt)
    seconds = time.perf_counter() - start
    ok = unsound == 0 and seconds < 300
    assert report("recomposition soundness", ok,
                  f"{decomposed} decompositions from {pairs} (function, late set) pairs, "
                  f"{unsound} failed verify_acd, {misses} feasible pairs not decomposed, "
                  f"{seconds:.0f} s")


# -- oracle equivalence -----------------------------------------------------------

def random_isets(rng, mu: int, nvars: int):
    cls = list(range(mu)) + [rng.randrange(mu) for _ in range((1 << nvars) - mu)]
    rng.shuffle(cls)
    return [TruthTable.from_value(sum(1 << i for i, c in enumerate(cls) if c == j), nvars)
            for j in range(mu)]


def test_oracle_equivalence():
    rng = random.Random(7)
    mult_bad = 0
    for n in range(6, 12):
        for _ in range(1000):
            p = rng.randint(1, n - 1)
            bits = rng.getrandbits(1 << n)
            if rng.random() < 0.5:
                # few distinct slices, so small multiplicities get exercised too
                slices = [rng.getrandbits(1 << p) for _ in range(rng.randint(1, 6))]
                bits = sum(rng.choice(slices) << (b << p) for b in range(1 << (n - p)))
            got = column_multiplicity(TruthTable.from_value(bits, n), p).mu
            mult_bad += got != oracles.low_slices(bits, n, p)
    cover_bad = 0
    for _ in range(200):
        mu = rng.randint(2, 5)
        isets = random_isets(rng, mu, rng.randint(3, 6))
        cols = (mu - 1).bit_length() + rng.randint(0, 1)
        cands = enumerate_bs_candidates(isets, mu, cols)
        sel = solve_covering(cands, mu, cols)
        want = oracles.min_cover_cost([c.covered_seeds for c in cands], [c.cost for c in cands], mu, cols)
        got = None if sel is None else sum(cands[i].cost for i in sel)
        cover_bad += got != want
    assert report("oracle equivalence", mult_bad == 0 and cover_bad == 0,
                  f"multiplicity {6000 - mult_bad}/6000 match, covering {200 - cover_bad}/200 match")


# -- monotonicity ---------------------------------------------------------------------

def test_monotonicity():
    rng = random.Random(11)
    violations = checked = 0
    for _ in range(1000):
        tt = TruthTable.from_value(rng.getrandbits(128), 7)
        n_late = rng.randint(0, 2)
        ok = {}
        for p in range(max(1, n_late), K):
            mu, _ = compute_smallest_multiplicity(tt, p, n_late)
            ok[p] = mu <= 1 << (K - p)
        for p in ok:
            if p + 1 in ok:
                checked += 1
                violations += not ok[p] and ok[p + 1]
    assert report("monotonicity", violations == 0,
                  f"{violations} violations over {checked} (P, P+1) pairs on 1000 functions")


# -- candidate counts -------------------------------------------------------------

def closed_form_cases():
    for mu in range(2, 17):
        for k_minus_p in range(1, 6):
            if mu > 1 << k_minus_p:
                continue
            if mu == 1 << k_minus_p:
                yield mu, k_minus_p, math.comb(mu, mu // 2) // 2
            elif mu <= 8:
                yield mu, k_minus_p, 2 * 3 ** (mu - 1)
            else:
                yield mu, k_minus_p, 2 ** (mu - 1)


def test_candidate_closed_forms():
    bad = []
    cases = list(closed_form_cases())
    for mu, k_minus_p, want in cases:
        isets = random_isets(random.Random(mu * 8 + k_minus_p), mu, 6)
        got = len(enumerate_bs_candidates(isets, mu, k_minus_p, keep_trivial=True))
        if got != want:
            bad.append(f"mu={mu},k-p={k_minus_p}: {got}!={want}")
    assert report("candidate-count closed forms", not bad,
                  f"{len(cases) - len(bad)}/{len(cases)} (mu, k-P) cases exact" + (f"; {bad}" if bad else ""))


# -- mapper ----------------------------------------------------------------------------

def benchmarks():
    for name in ("adder", "bar", "max", "sin"):
        yield name, read_aiger(conftest.EPFL / f"{name}.aag")
    for seed in range(3):
        yield f"random{seed}", random_aig(24, 600, 12, seed=seed, window=60)


@lru_cache(maxsize=None)
def mapped():
    start = time.perf_counter()
    rows = []
    for name, aig in benchmarks():
        for l in (0, 8):
            r = map_aig(aig, K, l)
            rows.append((name, l, aig, r, stats(r.network), equiv_check(r.network, aig, patterns=1024)))
    return rows, time.perf_counter() - start


def test_mapper_correctness():
    rows, seconds = mapped()
    problems = []
    depth = {}
    for name, l, aig, r, s, mismatches in rows:
        depth[name, l] = s.depth
        if mismatches:
            problems.append(f"{name} l={l}: {mismatches} mismatching bits")
        if s.depth != r.state.depth:
            problems.append(f"{name} l={l}: realized depth {s.depth} vs arrival {r.state.depth}")
    names = sorted({name for name, *_ in rows})
    for name in names:
        if depth[name, 8] > depth[name, 0]:
            problems.append(f"{name}: depth {depth[name, 8]} with l=8 > {depth[name, 0]} with l=0")
    if depth["bar", 8] != 4:
        problems.append(f"bar depth {depth['bar', 8]} != 4")
    if seconds >= 120:
        problems.append(f"{seconds:.0f} s")
    summary = ", ".join(f"{n} {depth[n, 0]}->{depth[n, 8]}" for n in names)
    assert report("mapper correctness", not problems,
                  f"{len(names)} benchmarks, 64x1024 patterns, depth l=0->l=8: {summary}; "
                  f"{seconds:.0f} s" + (f"; {problems}" if problems else ""))


def leaf_path_lengths(net, w):
    local = set(w.luts)
    lengths = {}

    def walk(node, dist):
        if node in local:
            for f in net.lut_of(node).fanins:
                walk(f, dist + 1)
        else:
            lengths.setdefault(node, set()).add(dist)

    walk(w.root >> 1, 0)
    return lengths


def test_delay_contract():
    rows, _ = mapped()
    cuts = fs_paths = other_paths = 0
    bad = []
    for name, l, aig, r, s, _ in rows:
        bad += [f"{name}: {p}" for p in check_delay_contract(r)]
        for w in r.wide:
            cuts += 1
            lengths = leaf_path_lengths(r.network, w)
            for leaf in w.fs_leaves:
                fs_paths += 1
                if lengths.get(leaf) != {1}:
                    bad.append(f"{name} node {w.node}: FS leaf {leaf} via {lengths.get(leaf)}")
            for leaf in w.other_leaves:
                other_paths += 1
                if leaf not in lengths or max(lengths[leaf]) > 2:
                    bad.append(f"{name} node {w.node}: leaf {leaf} via {lengths.get(leaf)}")
    assert report("delay contract", cuts > 0 and not bad,
                  f"{cuts} wide cuts, {fs_paths} FS leaves through exactly 1 LUT, "
                  f"{other_paths} other leaves through at most 2, {len(bad)} violations"
                  + (f"; {bad[:3]}" if bad else ""))


# -- bench trend ------------------------------------------------------------------------

def test_bench_trend():
    easy = run_bench("random", 8, 0, samples=1000, seed=1)
    hard = run_bench("random", 11, 5, samples=1000, seed=1)
    ok = easy.success_rate >= 95 and hard.success_rate <= 5
    assert report("bench trend", ok,
                  f"8 vars/0 late {easy.success_rate:.2f}% (>= 95), "
                  f"11 vars/5 late {hard.success_rate:.2f}% (<= 5)")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-p", "no:cacheprovider"]))
