"""Priority cuts over an AIG.

A cut of node ``n`` is a set of nodes (leaves) such that every path from a
primary input to ``n`` passes through a leaf.  Cuts of an AND node are made
by merging one cut of each fanin; the cut function is built by expanding the
fanin functions onto the merged leaf set, either during the merge or later
through :func:`ensure_function`.

When one leaf lies inside the cone of another, the leaf values are not
independent and different constructions may disagree on assignments that
never occur; every one of them computes the node correctly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .aig import Aig, iter_cone, lit_node
from .truthtable import TruthTable, from_bits, stretch_bits, widen_bits

MAX_CUT_SIZE = 11


def leaf_signature(leaves: Iterable[int]) -> int:
    sig = 0
    for leaf in leaves:
        sig |= 1 << ((leaf * 0x9E3779B1 >> 7) & 63)
    return sig


@dataclass(slots=True)
class Cut:
    leaves: tuple[int, ...]
    signature: int
    function: TruthTable | None = None
    # filled in by the mapper
    delay: int = 0
    area: float = 0.0
    extra: object = field(default=None, repr=False)
    # (fanin cut, complemented, fanin cut, complemented) until the function is built
    sources: tuple | None = field(default=None, repr=False)

    @classmethod
    def of(cls, leaves: Sequence[int], function: TruthTable | None = None) -> "Cut":
        leaves = tuple(leaves)
        return cls(leaves, leaf_signature(leaves), function)

    @property
    def size(self) -> int:
        return len(self.leaves)

    def dominates(self, other: "Cut") -> bool:
        """True when this cut's leaves are a subset of ``other``'s."""
        if self.signature & ~other.signature:
            return False
        if len(self.leaves) > len(other.leaves):
            return False
        return set(self.leaves).issubset(other.leaves)


def trivial_cut(node: int) -> Cut:
    return Cut.of((node,), TruthTable.var(0, 1))


def merge_leaves(a: tuple[int, ...], b: tuple[int, ...], limit: int) -> tuple[int, ...] | None:
    if a == b:
        return a
    merged = tuple(sorted(set(a).union(b)))
    return merged if len(merged) <= limit else None


def remove_dominated(cuts: list[Cut]) -> list[Cut]:
    """Drop cuts whose leaf set contains another cut's leaf set (keeps input order)."""
    by_size = sorted(range(len(cuts)), key=lambda i: len(cuts[i].leaves))
    kept: list[int] = []
    for i in by_size:
        c = cuts[i]
        if not any(cuts[j].dominates(c) for j in kept):
            kept.append(i)
    keep = set(kept)
    return [c for i, c in enumerate(cuts) if i in keep]


def _placed(cut: Cut, complemented: bool, pos: dict[int, int], n: int, nbits: int) -> int:
    f = cut.function
    bits = stretch_bits(widen_bits(f.bits, f.num_vars, n), nbits, [pos[x] for x in cut.leaves])
    return bits ^ ((1 << nbits) - 1) if complemented else bits


def merged_function(a: Cut, a_compl: bool, b: Cut, b_compl: bool, leaves: tuple[int, ...]) -> TruthTable:
    """Function of the AND of two fanin cuts over the merged ``leaves``."""
    n = len(leaves)
    nbits = max(64, 1 << n)
    pos = {leaf: i for i, leaf in enumerate(leaves)}
    return from_bits(_placed(a, a_compl, pos, n, nbits) & _placed(b, b_compl, pos, n, nbits), n)


def ensure_function(cut: Cut) -> TruthTable:
    """Build the function of a cut made by ``merge_cut_pairs(..., False)``."""
    if cut.function is None:
        a, a_compl, b, b_compl = cut.sources
        ensure_function(a)
        ensure_function(b)
        cut.function = merged_function(a, a_compl, b, b_compl, cut.leaves)
        cut.sources = None
    return cut.function


def merge_cut_pairs(aig: Aig, node: int, cut_sets: Sequence[list[Cut]], limit: int,
                    with_functions: bool) -> list[Cut]:
    """All distinct merges of one cut per fanin with at most ``limit`` leaves.

    Without ``with_functions`` each cut remembers its fanin pair so that
    :func:`ensure_function` can build the function on demand.
    """
    fa, fb = aig.fanins(node)
    na, nb = lit_node(fa), lit_node(fb)
    seen: dict[tuple[int, ...], Cut] = {}
    for ca in cut_sets[na]:
        for cb in cut_sets[nb]:
            if len(ca.leaves) + len(cb.leaves) > limit and \
                    (ca.signature | cb.signature).bit_count() > limit:
                continue
            leaves = merge_leaves(ca.leaves, cb.leaves, limit)
            if leaves is None or leaves in seen:
                continue
            cut = Cut.of(leaves)
            if with_functions:
                cut.function = merged_function(ca, bool(fa & 1), cb, bool(fb & 1), leaves)
            else:
                cut.sources = (ca, bool(fa & 1), cb, bool(fb & 1))
            seen[leaves] = cut
    return list(seen.values())


def enumerate_cuts(aig: Aig, l: int, C: int | None = 8,
                   key: Callable[[Cut], object] | None = None, *,
                   with_functions: bool = True) -> list[list[Cut]]:
    """Cut sets for every node, the trivial cut last.

    ``C=None`` keeps every non-dominated cut.  ``key`` orders cuts before
    truncation to ``C`` (default: fewer leaves first, then leaf ids).
    """
    if not 2 <= l <= MAX_CUT_SIZE:
        raise ValueError(f"cut size must be in [2, {MAX_CUT_SIZE}], got {l}")
    if C is not None and C < 2:
        raise ValueError("need at least two cuts per node")
    order = key or (lambda c: (len(c.leaves), c.leaves))
    const_cut = Cut.of((), TruthTable.const(0))
    sets: list[list[Cut]] = [[const_cut]]
    for node in range(1, aig.num_pis + 1):
        sets.append([trivial_cut(node)])
    for node in aig.and_nodes():
        cands = remove_dominated(merge_cut_pairs(aig, node, sets, l, with_functions))
        cands.sort(key=order)
        if C is not None:
            cands = cands[:C]
        cands.append(trivial_cut(node))
        sets.append(cands)
    return sets


def cut_function(aig: Aig, node: int, leaves: Sequence[int]) -> TruthTable:
    """Function of ``node`` over ``leaves`` (leaf ``i`` is variable ``i``) by cone simulation."""
    n = len(leaves)
    if n > MAX_CUT_SIZE + 5:
        raise ValueError("too many leaves")
    ref = TruthTable.const(n, True)
    full = ref.bits
    values = {0: 0}
    for i, leaf in enumerate(leaves):
        values[leaf] = TruthTable.var(i, n).bits
    if node in values:
        return TruthTable(n, values[node])
    for m in iter_cone(aig, node, leaves):
        a, b = aig.fanins(m)
        va = values[a >> 1] ^ (full if a & 1 else 0)
        vb = values[b >> 1] ^ (full if b & 1 else 0)
        values[m] = va & vb
    return TruthTable(n, values[node])


def is_cut(aig: Aig, node: int, leaves: Iterable[int]) -> bool:
    """Every path from a PI to ``node`` passes through a leaf."""
    stop = set(leaves)
    stack, seen = [node], set()
    while stack:
        m = stack.pop()
        if m in stop or m in seen or m == 0:
            continue
        seen.add(m)
        if aig.is_pi(m):
            return False
        a, b = aig.fanins(m)
        stack.extend((lit_node(a), lit_node(b)))
    return True
