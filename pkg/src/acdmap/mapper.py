"""Delay-oriented LUT mapping with wide cuts realized by two-level decomposition.

The first pass picks, for every node, the cut with the earliest arrival.
Cuts with more than ``k`` leaves are admitted when :func:`acd.evaluate`
finds a decomposition that keeps the latest leaves one LUT away from the
root; their delay is then ``D + 1`` just like a k-feasible cut.  Later passes
recover area with k-feasible cuts under the required times of the current
cover (area flow, then exact local area).  Each node may always keep the cut
it had in the previous pass, which is what lets wide cuts survive.

Cut functions are reduced the same way :meth:`LutNetwork.add_lut` reduces
them, so delays count only the inputs a LUT really gets.  A node whose
function is a constant or a (possibly inverted) other node becomes an alias
that costs no LUT and no level.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .acd import DecompositionError, DelayProfile, decompose, evaluate
from .aig import Aig, lit_node
from .cuts import Cut, cut_function, ensure_function, merge_cut_pairs, remove_dominated, trivial_cut
from .lutnet import LutNetwork
from .truthtable import TruthTable, fold_literals

INF = math.inf


@dataclass(frozen=True)
class WideInfo:
    """Realization data for a cut: the inputs its reduced function uses.

    ``inputs`` are nodes the function depends on and ``function`` is over
    them.  ``mu`` is set for cuts with more than ``k`` inputs, which need a
    decomposition; ``late`` are the inputs forced into its free set.
    """
    inputs: tuple[int, ...]
    function: TruthTable = field(repr=False)
    late: tuple[int, ...] = ()
    mu: int | None = None


def cut_inputs(cut: Cut) -> tuple[int, ...]:
    info = cut.extra
    return info.inputs if isinstance(info, WideInfo) else cut.leaves


@dataclass
class MapStats:
    wide_selected: int = 0
    wide_evaluated: int = 0
    wide_infeasible: int = 0
    fallbacks: int = 0
    aliases: int = 0


@dataclass
class MappingState:
    aig: Aig
    k: int
    l: int
    best: list[Cut | None]
    arrival: list[float]
    required: list[float] = field(default_factory=list)
    area_flow: list[float] = field(default_factory=list)
    map_refs: list[int] = field(default_factory=list)
    banned: set[tuple[int, tuple[int, ...]]] = field(default_factory=set)
    stats: MapStats = field(default_factory=MapStats)

    @property
    def depth(self) -> int:
        return int(max((self.arrival[lit_node(p)] for p in self.aig.pos), default=0))

    def cover(self) -> list[int]:
        """AND nodes used by the mapping, in topological order."""
        used = [False] * self.aig.num_nodes
        stack = [lit_node(p) for p in self.aig.pos]
        while stack:
            n = stack.pop()
            if used[n] or not self.aig.is_and(n):
                continue
            used[n] = True
            stack.extend(cut_inputs(self.best[n]))
        return [n for n in self.aig.and_nodes() if used[n]]


def _is_alias(cut: Cut) -> bool:
    info = cut.extra
    return isinstance(info, WideInfo) and len(info.inputs) <= 1


def cut_area_estimate(cut: Cut) -> int:
    """LUTs for a cut: 0 for an alias, 1 for a single LUT, ``ceil(log2 mu) + 1`` when decomposed."""
    info = cut.extra
    if isinstance(info, WideInfo):
        if info.mu is not None:
            return max(1, math.ceil(math.log2(info.mu))) + 1
        if len(info.inputs) <= 1:
            return 0
    return 1


def leaf_increments(cut: Cut) -> list[int]:
    """Levels added on the way from each of :func:`cut_inputs` to the root."""
    info = cut.extra
    if isinstance(info, WideInfo):
        if info.mu is not None:
            late = set(info.late)
            return [1 if x in late else 2 for x in info.inputs]
        if len(info.inputs) <= 1:
            return [0] * len(info.inputs)
    return [1] * len(cut_inputs(cut))


def cut_arrival(cut: Cut, arrival) -> float:
    """Arrival at the root of a cut whose realization is already fixed."""
    inputs = cut_inputs(cut)
    if not inputs:
        return 0
    return max(arrival[x] + d for x, d in zip(inputs, leaf_increments(cut)))


class _EvalCache:
    def __init__(self):
        self.table: dict[tuple[int, int, int, tuple[int, ...]], DelayProfile] = {}

    def get(self, tt: TruthTable, k: int, late: tuple[int, ...]) -> DelayProfile:
        key = (tt.num_vars, tt.bits, k, late)
        prof = self.table.get(key)
        if prof is None:
            prof = evaluate(tt, k, late)
            self.table[key] = prof
        return prof


def _folded_delay(cut: Cut, small: TruthTable, inputs: tuple[int, ...], arrival, k: int,
                  cache: _EvalCache | None) -> int | None:
    if len(inputs) <= 1:
        cut.extra = WideInfo(inputs, small)
        return arrival[inputs[0]] if inputs else 0
    top = max(arrival[x] for x in inputs)
    if len(inputs) <= k:
        cut.extra = WideInfo(inputs, small)
        return top + 1
    late = tuple(i for i, x in enumerate(inputs) if arrival[x] == top)
    if len(late) >= k:
        return None
    prof = (cache or _EvalCache()).get(small, k, late)
    if not prof.feasible:
        return None
    cut.extra = WideInfo(inputs, small, tuple(inputs[i] for i in late), prof.mu)
    return top + 1


def cut_delay(cut: Cut, arrival, k: int, cache: _EvalCache | None = None,
              literal=None) -> int | None:
    """Delay of ``cut`` given leaf arrivals, or ``None`` if it must be discarded.

    Without ``cut.function`` the cut must have at most ``k`` leaves and every
    leaf counts.  With it, the function is reduced to the inputs it depends
    on (``literal`` maps a leaf to the signal literal standing for it); of
    those, the ones at the maximum arrival are the late set and the others
    are at least one level earlier, so the +2 they may pay through a
    bound-set LUT never exceeds the late inputs' +1.  Sets ``cut.extra``.
    """
    if cut.function is None:
        if len(cut.leaves) > k:
            raise ValueError("a cut with more than k leaves needs its function")
        return 1 + max((arrival[x] for x in cut.leaves), default=-1)
    lits = [literal(x) if literal else 2 * x for x in cut.leaves]
    small, inputs = fold_literals(cut.function, lits)
    return _folded_delay(cut, small, inputs, arrival, k, cache)


class Mapper:
    def __init__(self, aig: Aig, k: int = 6, l: int = 8, C: int = 8):
        if k < 2 or k > 6:
            raise ValueError(f"LUT size {k} not supported")
        if l and not k < l <= 11:
            raise ValueError(f"wide cut size must satisfy k < l <= 11 (or 0), got {l}")
        self.aig, self.k, self.l, self.C = aig, k, l, C
        self.cache = _EvalCache()
        # node -> literal of the constant or node it is equal to
        self.alias: dict[int, int] = {}
        self._folds: dict[tuple[int, tuple[int, ...]], tuple[TruthTable, tuple[int, ...]]] = {}

    def _literal(self, node: int) -> int:
        return self.alias.get(node, 2 * node)

    def _fold(self, node: int, cut: Cut) -> tuple[TruthTable, tuple[int, ...]]:
        key = (node, cut.leaves)
        found = self._folds.get(key)
        if found is None:
            f = ensure_function(cut)
            lits = [self._literal(x) for x in cut.leaves]
            found = fold_literals(f, lits)
            self._folds[key] = found
        return found

    def _note_alias(self, node: int, cut: Cut):
        if node not in self.alias:
            info = cut.extra
            if info.inputs:
                self.alias[node] = 2 * info.inputs[0] + (info.function.value != 0b10)
            else:
                self.alias[node] = int(bool(info.function.bits))

    # -- passes --------------------------------------------------------------
    def run(self, passes: int = 5, banned=frozenset()) -> MappingState:
        aig = self.aig
        n = aig.num_nodes
        fanouts = aig.fanout_counts()
        self.est_refs = [max(1.0, float(f)) for f in fanouts]
        state = MappingState(aig, self.k, self.l, [None] * n, [0] * n,
                             area_flow=[0.0] * n, banned=set(banned))
        self._delay_pass(state)
        schedule = ["flow", "flow", "exact", "exact"]
        for kind in schedule[:max(0, passes - 1)]:
            self._set_required(state)
            self._update_est_refs(state)
            if kind == "flow":
                self._area_flow_pass(state)
            else:
                self._exact_area_pass(state)
        self._set_required(state)
        state.stats.aliases = len(self.alias)
        return state

    def _delay_pass(self, st: MappingState):
        aig, k = self.aig, self.k
        width = self.l if self.l else k
        sets: list[list[Cut]] = [[Cut.of((), TruthTable.const(0))]]
        sets += [[trivial_cut(v)] for v in range(1, aig.num_pis + 1)]
        arr = st.arrival
        for node in aig.and_nodes():
            cands = remove_dominated(merge_cut_pairs(aig, node, sets, width, False))
            folded = {}
            for c in cands:
                small, inputs = folded[c.leaves] = self._fold(node, c)
                if len(inputs) <= k:
                    c.delay = _folded_delay(c, small, inputs, arr, k, None)
                else:
                    # what it costs if admitted
                    c.delay = 1 + max(arr[x] for x in inputs)
            cands.sort(key=lambda c: (not _is_alias(c), c.delay, len(c.leaves), c.leaves))
            kept: list[Cut] = []
            for c in cands:
                if len(kept) >= self.C:
                    break
                if c.extra is None:
                    c = self._admit_wide(st, node, c, *folded[c.leaves])
                    if c is None:
                        continue
                c.area = self._flow(st, c)
                kept.append(c)
            kept.sort(key=lambda c: (not _is_alias(c), c.delay, c.area, len(c.leaves), c.leaves))
            best = kept[0]
            if _is_alias(best):
                self._note_alias(node, best)
            st.best[node] = best
            arr[node] = best.delay
            st.area_flow[node] = best.area / self.est_refs[node]
            sets.append(kept + [trivial_cut(node)])

    def _admit_wide(self, st: MappingState, node: int, cut: Cut, small: TruthTable,
                    inputs: tuple[int, ...]) -> Cut | None:
        if (node, cut.leaves) in st.banned:
            return None
        st.stats.wide_evaluated += 1
        d = _folded_delay(cut, small, inputs, st.arrival, self.k, self.cache)
        if d is None:
            st.stats.wide_infeasible += 1
            return None
        cut.delay = d
        return cut

    def _flow(self, st: MappingState, cut: Cut) -> float:
        return cut_area_estimate(cut) + sum(st.area_flow[x] for x in cut_inputs(cut))

    def _kfeasible_sets_step(self, sets, node):
        """k-feasible candidates; alias-like ones are dropped because the
        folds already made for the fanouts treat this node as a real signal
        (aliases are only decided in the delay pass)."""
        cands = remove_dominated(merge_cut_pairs(self.aig, node, sets, self.k, False))
        out = []
        for c in cands:
            small, inputs = self._fold(node, c)
            if len(inputs) > 1:
                c.extra = WideInfo(inputs, small)
                out.append(c)
        return out

    def _area_flow_pass(self, st: MappingState):
        aig, arr, req = self.aig, st.arrival, st.required
        sets: list[list[Cut]] = [[Cut.of((), TruthTable.const(0))]]
        sets += [[trivial_cut(v)] for v in range(1, aig.num_pis + 1)]
        for node in aig.and_nodes():
            cands = self._kfeasible_sets_step(sets, node)
            for c in cands:
                c.delay = cut_arrival(c, arr)
                c.area = self._flow(st, c)
            cands.sort(key=lambda c: (c.area, c.delay, len(c.leaves), c.leaves))
            kept = cands[:self.C]
            prev = st.best[node]
            prev.delay = cut_arrival(prev, arr)
            prev.area = self._flow(st, prev)
            choice = prev
            if node not in self.alias:
                for c in kept:
                    if c.delay <= req[node] and \
                            (c.area, c.delay, len(c.leaves)) < (choice.area, choice.delay, len(choice.leaves)):
                        choice = c
            st.best[node] = choice
            arr[node] = choice.delay
            st.area_flow[node] = choice.area / self.est_refs[node]
            sets.append(kept + [trivial_cut(node)])

    def _exact_area_pass(self, st: MappingState):
        aig, arr, req = self.aig, st.arrival, st.required
        refs = self._reference_counts(st)
        best = st.best

        def ref(cut: Cut) -> int:
            area = cut_area_estimate(cut)
            for x in cut_inputs(cut):
                refs[x] += 1
                if refs[x] == 1 and aig.is_and(x):
                    area += ref(best[x])
            return area

        def deref(cut: Cut) -> int:
            area = cut_area_estimate(cut)
            for x in cut_inputs(cut):
                refs[x] -= 1
                if refs[x] == 0 and aig.is_and(x):
                    area += deref(best[x])
            return area

        def exact(cut: Cut) -> int:
            a = ref(cut)
            deref(cut)
            return a

        sets: list[list[Cut]] = [[Cut.of((), TruthTable.const(0))]]
        sets += [[trivial_cut(v)] for v in range(1, aig.num_pis + 1)]
        for node in aig.and_nodes():
            cands = self._kfeasible_sets_step(sets, node)
            for c in cands:
                c.delay = cut_arrival(c, arr)
                c.area = self._flow(st, c)
            cands.sort(key=lambda c: (c.area, c.delay, len(c.leaves), c.leaves))
            kept = cands[:self.C]
            prev = best[node]
            if node in self.alias:
                prev.delay = cut_arrival(prev, arr)
                arr[node] = prev.delay
                st.area_flow[node] = self._flow(st, prev) / self.est_refs[node]
                sets.append(kept + [trivial_cut(node)])
                continue
            used = refs[node] > 0
            if used:
                deref(prev)
            prev.delay = cut_arrival(prev, arr)
            choice, choice_key = prev, (exact(prev), prev.delay, len(prev.leaves))
            for c in kept:
                if c.delay > req[node]:
                    continue
                key = (exact(c), c.delay, len(c.leaves))
                if key < choice_key:
                    choice, choice_key = c, key
            best[node] = choice
            if used:
                ref(choice)
            arr[node] = choice.delay
            st.area_flow[node] = self._flow(st, choice) / self.est_refs[node]
            sets.append(kept + [trivial_cut(node)])

    # -- cover bookkeeping ------------------------------------------------------
    def _reference_counts(self, st: MappingState) -> list[int]:
        refs = [0] * self.aig.num_nodes
        for p in self.aig.pos:
            refs[lit_node(p)] += 1
        for n in st.cover():
            for x in cut_inputs(st.best[n]):
                refs[x] += 1
        return refs

    def _set_required(self, st: MappingState):
        aig = self.aig
        target = st.depth
        req = [INF] * aig.num_nodes
        for p in aig.pos:
            req[lit_node(p)] = target
        for n in reversed(st.cover()):
            cut = st.best[n]
            for x, d in zip(cut_inputs(cut), leaf_increments(cut)):
                req[x] = min(req[x], req[n] - d)
        st.required = req
        st.map_refs = self._reference_counts(st)

    def _update_est_refs(self, st: MappingState):
        self.est_refs = [max(1.0, (2.0 * e + r) / 3.0) for e, r in zip(self.est_refs, st.map_refs)]


@dataclass
class WideRealization:
    """How a wide cut was implemented (for delay-contract checks)."""
    node: int
    root: int  # literal of the cut output in the LUT network
    fs_leaves: tuple[int, ...]  # network node ids
    other_leaves: tuple[int, ...]
    luts: tuple[int, ...]  # network node ids of the LUTs created for this cut


@dataclass
class MapResult:
    state: MappingState
    network: LutNetwork
    wide: list[WideRealization]
    signal: dict[int, int]  # AIG node -> network literal


def realize(state: MappingState) -> MapResult:
    """Turn the cover into LUTs; wide cuts go through :func:`decompose`.

    Raises :class:`DecompositionError` (with ``.node``/``.leaves`` set) when a
    selected wide cut cannot be decomposed.
    """
    aig, k = state.aig, state.k
    net = LutNetwork(aig.num_pis, aig.pi_names)
    signal = {0: 0}
    for v in range(1, aig.num_pis + 1):
        signal[v] = 2 * v
    wide: list[WideRealization] = []
    for node in state.cover():
        cut = state.best[node]
        info = cut.extra
        if not isinstance(info, WideInfo):
            tt = cut_function(aig, node, cut.leaves)
            signal[node] = net.add_lut([signal[x] for x in cut.leaves], tt)
            continue
        fanins = [signal[x] for x in info.inputs]
        if info.mu is None:
            signal[node] = net.add_lut(fanins, info.function)
            continue
        late = [i for i, x in enumerate(info.inputs) if x in set(info.late)]
        try:
            r = decompose(info.function, k, late)
        except DecompositionError as exc:
            exc.node, exc.leaves = node, cut.leaves
            raise
        first = len(net.luts)
        sel = []
        for b in r.bs_functions:
            if b.is_buffer:
                sel.append(fanins[b.support[0]])
            else:
                sel.append(net.add_lut([fanins[v] for v in b.support], b.table))
        root = net.add_lut([fanins[v] for v in r.fs_vars] + sel, r.composition)
        signal[node] = root
        fs = tuple(fanins[v] >> 1 for v in r.fs_vars)
        others = tuple(fanins[v] >> 1 for v in range(len(fanins)) if v not in set(r.fs_vars))
        created = tuple(net.lut_node(i) for i in range(first, len(net.luts)))
        wide.append(WideRealization(node, root, fs, others, created))
    for i, p in enumerate(aig.pos):
        net.add_po(signal[lit_node(p)] ^ (p & 1), aig.po_names[i])
    state.stats.wide_selected = len(wide)
    return MapResult(state, net, wide, signal)


def map_aig(aig: Aig, k: int = 6, l: int = 8, passes: int = 5, C: int = 8,
            max_fallbacks: int = 1000) -> MapResult:
    """Map and realize; wide cuts that fail to decompose are banned and the mapping redone."""
    banned: set = set()
    mapper = Mapper(aig, k, l, C)
    for attempt in range(max_fallbacks + 1):
        state = mapper.run(passes, banned)
        state.stats.fallbacks = attempt
        try:
            return realize(state)
        except DecompositionError as exc:
            banned.add((exc.node, exc.leaves))
    raise RuntimeError("too many decomposition fallbacks")


def check_delay_contract(result: MapResult) -> list[str]:
    """Structural check of every realized wide cut; returns violations.

    Folding in the LUT network may only shorten paths (a leaf can become the
    root itself, or a constant), so bounds are upper bounds and the constant
    node is ignored.
    """
    net = result.network
    problems = []
    for w in result.wide:
        local = set(w.luts)
        root = w.root >> 1
        # all path lengths from each leaf to the root inside the local LUTs
        lengths: dict[int, set[int]] = {}

        def walk(node: int, dist: int):
            if node in local:
                for f in net.lut_of(node).fanins:
                    walk(f, dist + 1)
            else:
                lengths.setdefault(node, set()).add(dist)

        if root in local:
            walk(root, 0)
        else:
            lengths.setdefault(root, set()).add(0)
        for leaf in w.fs_leaves:
            if leaf in lengths and max(lengths[leaf]) > 1:
                problems.append(f"node {w.node}: FS leaf {leaf} reaches the root via {sorted(lengths[leaf])} LUTs")
        for leaf in w.other_leaves:
            if leaf in lengths and max(lengths[leaf]) > 2:
                problems.append(f"node {w.node}: leaf {leaf} reaches the root via {sorted(lengths[leaf])} LUTs")
        lengths.pop(0, None)
        for leaf in lengths:
            if leaf not in w.fs_leaves and leaf not in w.other_leaves:
                problems.append(f"node {w.node}: LUT input {leaf} is not a cut leaf")
    return problems
