"""Map the bundled EPFL designs with and without wide cuts.

    python demos/map_benchmarks.py
"""
import time
from pathlib import Path

from acdmap.aig import read_aiger
from acdmap.lutnet import equiv_check, stats
from acdmap.mapper import map_aig

EPFL = Path(__file__).resolve().parent.parent / "benchmarks" / "epfl"

print(f"{'design':8}{'ANDs':>7}  {'l=0 luts/depth':>15}  {'l=8 luts/depth':>15}  wide  time")
for name in ("adder", "bar", "max", "sin"):
    aig = read_aiger(EPFL / f"{name}.aag")
    start = time.perf_counter()
    base, wide = map_aig(aig, 6, 0), map_aig(aig, 6, 8)
    seconds = time.perf_counter() - start
    assert equiv_check(base.network, aig) == 0 and equiv_check(wide.network, aig) == 0
    b, w = stats(base.network), stats(wide.network)
    print(f"{name:8}{aig.num_ands:7}  {b.luts:>9}/{b.depth:<5}  {w.luts:>9}/{w.depth:<5}"
          f"  {len(wide.wide):4}  {seconds:.1f} s")
