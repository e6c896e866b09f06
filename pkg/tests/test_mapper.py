import random

import pytest

from acdmap.acd import evaluate
from acdmap.aig import Aig, and_tree, lit, random_aig, simulate_pos
from acdmap.cuts import Cut
from acdmap.lutnet import equiv_check, stats
from acdmap.mapper import (
    WideInfo,
    check_delay_contract,
    cut_area_estimate,
    cut_delay,
    map_aig,
    realize,
    Mapper,
)
from acdmap.truthtable import TruthTable


def parity(n):
    t = TruthTable.const(n)
    for v in range(n):
        t ^= TruthTable.var(v, n)
    return t


def shannon(aig, bits, inputs):
    """AIG for the table ``bits`` over input literals; the last input is expanded first."""
    memo = {}

    def build(value, n):
        full = (1 << (1 << n)) - 1
        if value in (0, full):
            return int(value == full)
        if (value, n) in memo:
            return memo[(value, n)]
        half = 1 << (n - 1)
        lo, hi = value & ((1 << half) - 1), value >> half
        if lo == hi:
            res = build(lo, n - 1)
        else:
            x = inputs[n - 1]
            t1 = aig.add_and(x, build(hi, n - 1))
            t0 = aig.add_and(x ^ 1, build(lo, n - 1))
            res = aig.add_and(t1 ^ 1, t0 ^ 1) ^ 1
        memo[(value, n)] = res
        return res

    return build(bits, len(inputs))


def late_leaf_fixture(seed: int) -> Aig:
    """Root function of two late signals and six inputs, late signals at the bottom of the cone."""
    rng = random.Random(seed)
    aig = Aig(12)
    z = [lit(i) for i in range(7, 13)]
    y0 = aig.add_and(aig.add_and(z[0], z[1]) ^ 1, z[2])
    y1 = aig.add_and(aig.add_and(z[3], z[4] ^ 1) ^ 1, z[5] ^ 1)
    root = shannon(aig, rng.getrandbits(256), [y0, y1] + [lit(i) for i in range(1, 7)])
    aig.add_po(root)
    return aig


# -- cut delay and area ------------------------------------------------------------

def test_cut_delay_six_leaves():
    arrival = [0, 1, 3, 2, 0, 3, 1]
    assert cut_delay(Cut.of((1, 2, 3, 4, 5, 6)), arrival, 6) == 4


def test_cut_delay_wide_feasible():
    arrival = [0] + [5, 5] + [3] * 6
    cut = Cut.of(tuple(range(1, 9)), parity(8))
    assert cut_delay(cut, arrival, 6) == 6
    info = cut.extra
    assert isinstance(info, WideInfo) and info.late == (1, 2) and info.mu == 2


def test_cut_delay_wide_infeasible():
    rng = random.Random(1)
    while True:
        tt = TruthTable.from_value(rng.getrandbits(256), 8)
        if not evaluate(tt, 6, range(5)).feasible:
            break
    arrival = [0] + [4] * 5 + [1] * 3
    assert cut_delay(Cut.of(tuple(range(1, 9)), tt), arrival, 6) is None


def test_cut_delay_too_many_late_leaves():
    arrival = [0] + [2] * 8
    assert cut_delay(Cut.of(tuple(range(1, 9)), parity(8)), arrival, 6) is None


def test_cut_delay_wide_cut_with_small_support():
    tt = TruthTable.var(0, 8) & TruthTable.var(7, 8)
    cut = Cut.of(tuple(range(1, 9)), tt)
    assert cut_delay(cut, [0] + [3] * 8, 6) == 4
    assert cut.extra.inputs == (1, 8) and cut.extra.mu is None
    assert cut_area_estimate(cut) == 1


@pytest.mark.parametrize("mu,area", [(None, 1), (2, 2), (4, 3), (5, 4), (16, 5)])
def test_area_estimate(mu, area):
    cut = Cut.of(tuple(range(1, 9)))
    cut.extra = WideInfo(tuple(range(1, 9)), TruthTable.const(8), (1,), mu)
    assert cut_area_estimate(cut) == area


def test_area_estimate_small_cut():
    assert cut_area_estimate(Cut.of((1, 2, 3))) == 1


# -- mapping -------------------------------------------------------------------------

def test_and8_tree_depth_two():
    aig = and_tree(8)
    r = map_aig(aig, 6, 0)
    assert stats(r.network).depth == 2 == r.state.depth
    assert equiv_check(r.network, aig) == 0


@pytest.mark.parametrize("seed", range(3))
def test_late_leaves_go_through_one_lut(seed):
    aig = late_leaf_fixture(seed)
    base, wide = map_aig(aig, 6, 0), map_aig(aig, 6, 8)
    assert stats(base.network).depth == 3
    assert stats(wide.network).depth == 2 == wide.state.depth
    assert len(wide.wide) == 1
    assert equiv_check(wide.network, aig) == 0
    assert check_delay_contract(wide) == []


def test_all_equal_arrivals_keep_depth_two():
    rng = random.Random(2)
    aig = Aig(8)
    aig.add_po(shannon(aig, rng.getrandbits(256), [lit(i) for i in range(1, 9)]))
    for l in (0, 8):
        r = map_aig(aig, 6, l)
        assert stats(r.network).depth == 2
        assert equiv_check(r.network, aig) == 0


def test_exact_area_is_one_lut_per_cover_node():
    aig = random_aig(10, 150, 5, seed=3)
    r = map_aig(aig, 6, 0)
    cover = r.state.cover()
    assert not r.wide
    assert len(r.network.luts) <= len(cover)
    assert equiv_check(r.network, aig) == 0


@pytest.mark.parametrize("seed", range(6))
def test_random_aigs(seed):
    aig = random_aig(16, 300, 8, seed=seed, window=60)
    results = {l: map_aig(aig, 6, l) for l in (0, 8, 10)}
    for l, r in results.items():
        s = stats(r.network)
        assert equiv_check(r.network, aig) == 0
        assert s.depth == r.state.depth
        assert check_delay_contract(r) == []
    assert results[8].state.depth <= results[0].state.depth
    assert results[10].state.depth <= results[0].state.depth


def test_state_invariants():
    aig = random_aig(14, 250, 6, seed=11, window=50)
    r = map_aig(aig, 6, 8)
    st = r.state
    cover = set(st.cover())
    for node in cover:
        assert st.required[node] >= st.arrival[node]
        for leaf in st.best[node].extra.inputs if isinstance(st.best[node].extra, WideInfo) else st.best[node].leaves:
            assert leaf in cover or aig.is_pi(leaf) or leaf == 0


def test_area_recovery_keeps_delay():
    aig = random_aig(16, 400, 8, seed=12, window=60)
    mapper = Mapper(aig, 6, 8)
    first = mapper.run(passes=1).depth
    full = mapper.run(passes=5)
    assert full.depth <= first
    r = realize(full)
    assert stats(r.network).depth == full.depth
    assert equiv_check(r.network, aig) == 0


def test_mapper_rejects_bad_sizes():
    with pytest.raises(ValueError):
        Mapper(and_tree(4), 7, 8)
    with pytest.raises(ValueError):
        Mapper(and_tree(4), 6, 12)


def test_constant_outputs():
    aig = Aig(2)
    aig.add_po(0)
    aig.add_po(1)
    aig.add_po(lit(1, True))
    r = map_aig(aig, 6, 8)
    assert r.network.pos == [0, 1, 3]
    assert equiv_check(r.network, aig) == 0


def test_delay_contract_detects_long_fs_path():
    from dataclasses import replace
    r = map_aig(late_leaf_fixture(0), 6, 8)
    w = r.wide[0]
    assert check_delay_contract(r) == []
    # declaring the bound-set leaves as free-set leaves must be flagged
    r.wide[0] = replace(w, fs_leaves=w.fs_leaves + w.other_leaves, other_leaves=())
    assert any("FS leaf" in p for p in check_delay_contract(r))


def test_absorbed_node_costs_nothing():
    aig = Aig(2)
    a_or_b = aig.add_and(lit(1, True), lit(2, True)) ^ 1
    aig.add_po(aig.add_and(lit(1), a_or_b))  # a & (a | b) == a
    r = map_aig(aig, 6, 0)
    assert r.network.luts == [] and r.network.pos == [lit(1)]
    assert r.state.depth == 0 and r.state.stats.aliases >= 1


def test_functionally_constant_output():
    aig = Aig(2)
    ab = aig.add_and(lit(1), lit(2))
    aig.add_po(aig.add_and(ab, lit(1, True)))  # (a & b) & !a
    aig.add_po(aig.add_and(ab, lit(1, True)) ^ 1)
    r = map_aig(aig, 6, 8)
    assert r.network.pos == [0, 1] and r.network.luts == []
    assert equiv_check(r.network, aig) == 0


@pytest.mark.parametrize("seed", range(3))
def test_redundant_graphs_report_realized_depth(seed):
    # dense random graphs are full of constant and duplicate nodes
    aig = random_aig(24, 600, 12, seed=seed, window=60)
    for l in (0, 8):
        r = map_aig(aig, 6, l)
        assert r.state.stats.aliases > 0
        assert stats(r.network).depth == r.state.depth
        assert equiv_check(r.network, aig) == 0
        assert check_delay_contract(r) == []
