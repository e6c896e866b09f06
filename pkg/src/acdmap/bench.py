"""Success-rate experiments for the decomposition check.

Each sampled function gets up to ten distinct late-variable sets; a
(function, late set) pair succeeds when :func:`acd.evaluate` finds a
decomposition.  Every sample draws from its own generator seeded by
``(seed, index)`` so results do not depend on how samples are split
across worker processes.
"""
from __future__ import annotations

import math
import random
import time
from itertools import combinations
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .acd import DecompositionError, decompose, evaluate, verify_acd
from .aig import read_aiger
from .cuts import enumerate_cuts
from .truthtable import TruthTable, shrink_to_support

MAX_LATE_SETS = 10


@dataclass
class BenchReport:
    source: str
    num_vars: int
    num_late: int
    k: int
    samples: int
    pairs: int = 0
    feasible: int = 0
    mu_sum: int = 0
    decomposed: int = 0
    verified: int = 0
    seconds: float | None = field(default=None)

    @property
    def success_rate(self) -> float:
        return 100.0 * self.feasible / self.pairs if self.pairs else 0.0

    @property
    def mean_mu(self) -> float | None:
        return self.mu_sum / self.feasible if self.feasible else None

    def as_dict(self) -> dict:
        d = asdict(self)
        d["success_rate"] = round(self.success_rate, 4)
        d["mean_mu"] = None if self.mean_mu is None else round(self.mean_mu, 4)
        if d["seconds"] is None:
            del d["seconds"]
        return d

    def as_text(self) -> str:
        mu = "-" if self.mean_mu is None else f"{self.mean_mu:.2f}"
        lines = [
            f"source     {self.source}",
            f"vars       {self.num_vars}   late {self.num_late}   k {self.k}",
            f"samples    {self.samples}   (function, late set) pairs {self.pairs}",
            f"success    {self.feasible}/{self.pairs} = {self.success_rate:.2f}%",
            f"mean mu    {mu}",
        ]
        if self.decomposed or self.verified:
            lines.append(f"decomposed {self.decomposed}   verified {self.verified}")
        if self.seconds is not None:
            lines.append(f"time       {self.seconds:.3f} s")
        return "\n".join(lines)


def late_sets(rng: random.Random, num_vars: int, num_late: int) -> list[tuple[int, ...]]:
    """Up to ten distinct late-variable sets (all of them when fewer exist)."""
    total = math.comb(num_vars, num_late)
    if total <= MAX_LATE_SETS:
        return [tuple(c) for c in combinations(range(num_vars), num_late)]
    found: list[tuple[int, ...]] = []
    seen = set()
    while len(found) < MAX_LATE_SETS:
        s = tuple(sorted(rng.sample(range(num_vars), num_late)))
        if s not in seen:
            seen.add(s)
            found.append(s)
    return found


def _sample_rng(seed: int, index: int) -> random.Random:
    return random.Random(f"{seed}:{index}")


def random_functions(num_vars: int, count: int, seed: int) -> list[TruthTable]:
    return [TruthTable.from_value(_sample_rng(seed, i).getrandbits(1 << num_vars), num_vars)
            for i in range(count)]


def harvest_functions(path: str, num_vars: int, count: int, seed: int,
                      cuts_per_node: int = 8) -> list[TruthTable]:
    """Distinct cut functions with exactly ``num_vars`` support variables.

    Cuts are ranked widest first so that truncation keeps the candidates.
    """
    aig = read_aiger(path)
    found: dict[int, TruthTable] = {}
    widest = lambda c: (-len(c.leaves), c.leaves)
    for cuts in enumerate_cuts(aig, max(num_vars, 2), cuts_per_node, key=widest):
        for c in cuts:
            if len(c.leaves) != num_vars:
                continue
            small, sup = shrink_to_support(c.function)
            if len(sup) == num_vars and small.bits not in found:
                found[small.bits] = small
    pool = sorted(found.values(), key=lambda t: t.bits)
    random.Random(seed).shuffle(pool)
    return pool[:count]


def _run_one(args) -> tuple[int, int, int, int, int]:
    tt, index, seed, num_late, k, verify = args
    rng = _sample_rng(seed, index)
    rng.getrandbits(1 << tt.num_vars)  # same stream position as random_functions
    pairs = feasible = mu_sum = decomposed = verified = 0
    for late in late_sets(rng, tt.num_vars, num_late):
        pairs += 1
        prof = evaluate(tt, k, late)
        if prof.feasible:
            feasible += 1
            mu_sum += prof.mu
        if verify and prof.feasible:
            try:
                r = decompose(tt, k, late, profile=prof)
            except DecompositionError:
                continue
            decomposed += 1
            verified += verify_acd(r, tt)
    return pairs, feasible, mu_sum, decomposed, verified


def run_bench(source: str = "random", num_vars: int = 8, num_late: int = 0, samples: int = 100,
              seed: int = 0, k: int = 6, verify: bool = False, jobs: int = 1,
              timing: bool = False) -> BenchReport:
    if not 0 <= num_late < k:
        raise ValueError(f"late set size must be in [0, {k - 1}]")
    if num_vars <= k:
        raise ValueError(f"need more than {k} variables")
    start = time.perf_counter()
    if source == "random":
        funcs = random_functions(num_vars, samples, seed)
        label = "random"
    elif source.startswith("harvest:"):
        path = source.split(":", 1)[1]
        funcs = harvest_functions(path, num_vars, samples, seed)
        label = f"harvested cut functions from {path}"
    else:
        raise ValueError(f"unknown source {source!r}")
    report = BenchReport(label, num_vars, num_late, k, len(funcs))
    work = [(tt, i, seed, num_late, k, verify) for i, tt in enumerate(funcs)]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(jobs) as ex:
            results = list(ex.map(_run_one, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        results = [_run_one(w) for w in work]
    for pairs, feasible, mu_sum, decomposed, verified in results:
        report.pairs += pairs
        report.feasible += feasible
        report.mu_sum += mu_sum
        report.decomposed += decomposed
        report.verified += verified
    if timing:
        report.seconds = time.perf_counter() - start
    return report
