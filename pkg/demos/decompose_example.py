"""Walk one 6-input function through the decomposition, step by step.

    python demos/decompose_example.py
"""
from acdmap.acd import (
    build_isets,
    column_multiplicity,
    decompose,
    enumerate_bs_candidates,
    solve_covering,
    verify_acd,
)
from acdmap.truthtable import tt_from_hex, tt_to_hex

f = tt_from_hex("8804800184148111", 6)
print("f =", tt_to_hex(f), "over x0..x5, target: 4-input LUTs")

# Free set {x0, x1}: one 4-bit slice of f per assignment of x2..x5.
m = column_multiplicity(f, 2)
print(f"\n{1 << 4} slices over the free set, {m.mu} distinct:",
      ", ".join(tt_to_hex(t) for t in m.fs_functions))
print("so ceil(log2 mu) =", (m.mu - 1).bit_length(), "bound-set functions are needed")

# Each distinct slice marks where it occurs among the bound-set assignments.
isets = build_isets(m)
for t, s in zip(m.fs_functions, isets):
    print(f"  slice {tt_to_hex(t)} occurs at {s.value:016b}")

# Candidate bound-set functions split the slices in two; pick a cheapest
# set that tells every pair of slices apart.
cands = enumerate_bs_candidates(isets, m.mu, 2)
sel = solve_covering(cands, m.mu, 2)
print(f"\n{len(cands)} candidates; chosen:")
for i in sel:
    c = cands[i]
    print(f"  {tt_to_hex(c.function.onset)} with support {c.cost}")

r = decompose(f, 4)
print(f"\ndecompose: {r.num_luts} LUTs, composition {tt_to_hex(r.composition)},",
      "verified" if verify_acd(r, f) else "NOT verified")
for b in r.bs_functions:
    kind = "buffer" if b.is_buffer else tt_to_hex(b.table)
    print(f"  bound-set function {kind} over x{', x'.join(map(str, b.support))}")
