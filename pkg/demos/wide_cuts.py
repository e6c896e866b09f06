"""A circuit where one wide cut saves a level.

Two signals y0 and y1 arrive one level after the six primary inputs x1..x6
and feed an 8-input function.  With 6-LUTs alone the 8-input function needs
two levels on top of y0/y1.  Allowing 8-leaf cuts lets the mapper put y0 and
y1 on the free set of a decomposition, one LUT away from the output.

    python demos/wide_cuts.py
"""
import random

from acdmap.aig import Aig, lit
from acdmap.lutnet import equiv_check, stats
from acdmap.mapper import check_delay_contract, map_aig


def shannon(aig, bits, inputs):
    """AIG for the truth table ``bits`` over literal list ``inputs``."""
    memo = {}

    def build(value, n):
        full = (1 << (1 << n)) - 1
        if value in (0, full):
            return int(value == full)
        if (value, n) not in memo:
            half = 1 << (n - 1)
            lo, hi = value & ((1 << half) - 1), value >> half
            if lo == hi:
                memo[value, n] = build(lo, n - 1)
            else:
                x = inputs[n - 1]
                t1 = aig.add_and(x, build(hi, n - 1))
                t0 = aig.add_and(x ^ 1, build(lo, n - 1))
                memo[value, n] = aig.add_and(t1 ^ 1, t0 ^ 1) ^ 1
        return memo[value, n]

    return build(bits, len(inputs))


aig = Aig(12)
z = [lit(i) for i in range(7, 13)]
y0 = aig.add_and(aig.add_and(z[0], z[1]) ^ 1, z[2])
y1 = aig.add_and(aig.add_and(z[3], z[4] ^ 1) ^ 1, z[5] ^ 1)
aig.add_po(shannon(aig, random.Random(0).getrandbits(256), [y0, y1] + [lit(i) for i in range(1, 7)]))

for l in (0, 8):
    r = map_aig(aig, 6, l)
    s = stats(r.network)
    print(f"l={l}: {s.luts} LUTs, depth {s.depth}, wide cuts {len(r.wide)},",
          f"mismatches {equiv_check(r.network, aig)}")
    for w in r.wide:
        print(f"  wide cut at node {w.node}: free-set leaves {w.fs_leaves},",
              f"{len(w.luts)} LUTs, contract violations {len(check_delay_contract(r))}")
