"""Combinational and-inverter graphs and AIGER I/O.

Edges are AIGER-style literals: ``2 * node + complemented``.  Node 0 is the
constant false, nodes ``1..num_pis`` are primary inputs and AND nodes follow
in topological order.
"""
from __future__ import annotations

import io
import random
from dataclasses import dataclass, field
from typing import BinaryIO, Iterable, TextIO


class AigerError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class UnsupportedAiger(AigerError):
    pass


def lit(node: int, complemented: bool = False) -> int:
    return 2 * node + int(complemented)


def lit_node(literal: int) -> int:
    return literal >> 1


def lit_compl(literal: int) -> bool:
    return bool(literal & 1)


@dataclass
class Aig:
    num_pis: int
    ands: list[tuple[int, int]] = field(default_factory=list)
    pos: list[int] = field(default_factory=list)
    pi_names: list[str | None] = field(default_factory=list)
    po_names: list[str | None] = field(default_factory=list)
    comments: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.pi_names:
            self.pi_names = [None] * self.num_pis
        if not self.po_names:
            self.po_names = [None] * len(self.pos)
        for i, (a, b) in enumerate(self.ands):
            node = self.num_pis + 1 + i
            if lit_node(a) >= node or lit_node(b) >= node:
                raise ValueError(f"AND node {node} has a fanin that is not older")

    @property
    def num_ands(self) -> int:
        return len(self.ands)

    @property
    def num_nodes(self) -> int:
        return 1 + self.num_pis + len(self.ands)

    @property
    def num_pos(self) -> int:
        return len(self.pos)

    def is_pi(self, node: int) -> bool:
        return 1 <= node <= self.num_pis

    def is_and(self, node: int) -> bool:
        return node > self.num_pis

    def fanins(self, node: int) -> tuple[int, int]:
        return self.ands[node - self.num_pis - 1]

    def and_nodes(self) -> range:
        return range(self.num_pis + 1, self.num_nodes)

    def add_pi(self, name: str | None = None) -> int:
        if self.ands:
            raise ValueError("inputs must be created before AND nodes")
        self.num_pis += 1
        self.pi_names.append(name)
        return lit(self.num_pis)

    def add_and(self, a: int, b: int) -> int:
        self.ands.append((a, b))
        return lit(self.num_nodes - 1)

    def add_po(self, literal: int, name: str | None = None):
        self.pos.append(literal)
        self.po_names.append(name)

    def fanout_counts(self) -> list[int]:
        counts = [0] * self.num_nodes
        for a, b in self.ands:
            counts[lit_node(a)] += 1
            counts[lit_node(b)] += 1
        for p in self.pos:
            counts[lit_node(p)] += 1
        return counts

    def pi_name(self, i: int) -> str:
        return self.pi_names[i] or f"pi{i}"

    def po_name(self, i: int) -> str:
        return self.po_names[i] or f"po{i}"


def topo_levels(aig: Aig) -> list[int]:
    """Unit-delay level of every node (constant and PIs at 0)."""
    level = [0] * aig.num_nodes
    for node in aig.and_nodes():
        a, b = aig.fanins(node)
        level[node] = 1 + max(level[lit_node(a)], level[lit_node(b)])
    return level


def depth(aig: Aig) -> int:
    level = topo_levels(aig)
    return max((level[lit_node(p)] for p in aig.pos), default=0)


def simulate(aig: Aig, inputs: list[int], full: int) -> list[int]:
    """Bit-parallel simulation; returns one word per node (positive polarity)."""
    if len(inputs) != aig.num_pis:
        raise ValueError(f"need {aig.num_pis} input words, got {len(inputs)}")
    values = [0] * aig.num_nodes
    values[1:aig.num_pis + 1] = inputs
    for node in aig.and_nodes():
        a, b = aig.fanins(node)
        va = values[a >> 1] ^ (full if a & 1 else 0)
        vb = values[b >> 1] ^ (full if b & 1 else 0)
        values[node] = va & vb
    return values


def simulate_pos(aig: Aig, inputs: list[int], full: int) -> list[int]:
    values = simulate(aig, inputs, full)
    return [values[p >> 1] ^ (full if p & 1 else 0) for p in aig.pos]


# -- AIGER reading ------------------------------------------------------------

def _ints(line: str, count: int, lineno: int) -> list[int]:
    parts = line.split()
    if len(parts) != count:
        raise AigerError(f"expected {count} numbers, got {line!r}", lineno)
    try:
        values = [int(x) for x in parts]
    except ValueError:
        raise AigerError(f"malformed literal in {line!r}", lineno) from None
    if any(v < 0 for v in values):
        raise AigerError(f"negative literal in {line!r}", lineno)
    return values


def _parse_header(line: str) -> tuple[str, list[int]]:
    parts = line.split()
    if not parts or parts[0] not in ("aag", "aig"):
        raise AigerError("missing 'aag'/'aig' header", 1)
    try:
        nums = [int(x) for x in parts[1:]]
    except ValueError:
        raise AigerError(f"malformed header {line!r}", 1) from None
    if len(nums) < 5 or any(n < 0 for n in nums):
        raise AigerError(f"malformed header {line!r}", 1)
    if len(nums) > 5 and any(nums[5:]):
        raise UnsupportedAiger("bad/constraint/justice/fairness sections are not supported", 1)
    if nums[2]:
        raise UnsupportedAiger("latches are not supported (combinational AIGs only)", 1)
    return parts[0], nums[:5]


def _read_binary_uint(data: bytes, pos: int) -> tuple[int, int]:
    value, shift = 0, 0
    while True:
        if pos >= len(data):
            raise AigerError("truncated binary AND section")
        byte = data[pos]
        pos += 1
        value |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return value, pos
        shift += 7


def parse_aiger(source: bytes | str | BinaryIO | TextIO) -> Aig:
    """Parse a combinational AIGER file (ASCII ``aag`` or binary ``aig``)."""
    if hasattr(source, "read"):
        source = source.read()
    data = source.encode() if isinstance(source, str) else bytes(source)
    nl = data.find(b"\n")
    header_line = (data if nl < 0 else data[:nl]).decode("ascii", "replace")
    kind, (m, ni, _, no, na) = _parse_header(header_line)
    rest = b"" if nl < 0 else data[nl + 1:]

    if kind == "aag":
        lines = rest.decode("utf-8", "replace").split("\n")
        lineno = 2
        idx = 0

        def next_line():
            nonlocal idx, lineno
            if idx >= len(lines):
                raise AigerError("unexpected end of file", lineno)
            text = lines[idx]
            idx += 1
            lineno += 1
            return text, lineno - 1

        inputs = []
        for _ in range(ni):
            text, ln = next_line()
            (v,) = _ints(text, 1, ln)
            if v < 2 or v & 1:
                raise AigerError(f"bad input literal {v}", ln)
            inputs.append((v, ln))
        outputs = []
        for _ in range(no):
            text, ln = next_line()
            outputs.append((_ints(text, 1, ln)[0], ln))
        ands = []
        for _ in range(na):
            text, ln = next_line()
            ands.append((*_ints(text, 3, ln), ln))
        tail = lines[idx:]
        tail_start = lineno
    else:
        inputs = [(2 * (i + 1), None) for i in range(ni)]
        text = rest.decode("latin-1")
        out_lines = text.split("\n", no)
        if len(out_lines) < no:
            raise AigerError("unexpected end of file in outputs")
        outputs = []
        for i in range(no):
            outputs.append((_ints(out_lines[i], 1, 2 + i)[0], 2 + i))
        consumed = sum(len(s) + 1 for s in out_lines[:no])
        pos = consumed
        ands = []
        for i in range(na):
            lhs = 2 * (ni + i + 1)
            d0, pos = _read_binary_uint(rest, pos)
            d1, pos = _read_binary_uint(rest, pos)
            r0 = lhs - d0
            r1 = r0 - d1
            if r0 < 0 or r1 < 0:
                raise AigerError(f"bad delta encoding for AND {lhs}")
            ands.append((lhs, r0, r1, None))
        tail = rest[pos:].decode("utf-8", "replace").split("\n")
        tail_start = None

    return _build(m, inputs, outputs, ands, tail, tail_start)


def _build(m, inputs, outputs, ands, tail, tail_start) -> Aig:
    max_lit = 2 * m + 1
    defined: dict[int, tuple] = {}
    for v, ln in inputs:
        if v > max_lit:
            raise AigerError(f"literal {v} exceeds maximum variable index {m}", ln)
        if v >> 1 in defined:
            raise AigerError(f"variable {v >> 1} defined twice", ln)
        defined[v >> 1] = ("i",)
    for lhs, r0, r1, ln in ands:
        if lhs & 1 or lhs < 2:
            raise AigerError(f"bad AND output literal {lhs}", ln)
        for v in (lhs, r0, r1):
            if v > max_lit:
                raise AigerError(f"literal {v} exceeds maximum variable index {m}", ln)
        if lhs >> 1 in defined:
            raise AigerError(f"variable {lhs >> 1} defined twice", ln)
        defined[lhs >> 1] = ("a", r0, r1, ln)

    aig = Aig(len(inputs))
    remap = {0: 0}  # AIGER variable -> our literal (positive phase)
    for i, (v, _) in enumerate(inputs):
        remap[v >> 1] = lit(i + 1)

    def resolve(literal: int, ln) -> int:
        var = literal >> 1
        if var not in remap:
            _define(var, ln)
        return remap[var] ^ (literal & 1)

    def _define(var: int, ln):
        # iterative DFS so deep graphs do not hit the recursion limit
        stack = [(var, False)]
        on_path: set[int] = set()
        while stack:
            cur, expanded = stack.pop()
            if cur in remap:
                continue
            entry = defined.get(cur)
            if entry is None:
                raise AigerError(f"undefined variable {cur}", ln)
            _, r0, r1, aln = entry
            if not expanded:
                if cur in on_path:
                    raise AigerError(f"combinational cycle through variable {cur}", aln)
                on_path.add(cur)
                stack.append((cur, True))
                for x in (r1 >> 1, r0 >> 1):
                    if x not in remap:
                        if x in on_path:
                            raise AigerError(f"combinational cycle through variable {x}", aln)
                        stack.append((x, False))
                continue
            on_path.discard(cur)
            a = remap[r0 >> 1] ^ (r0 & 1)
            b = remap[r1 >> 1] ^ (r1 & 1)
            remap[cur] = _and_with_constants(aig, a, b)

    for lhs, _, _, ln in ands:
        resolve(lhs, ln)
    for v, ln in outputs:
        if v > max_lit:
            raise AigerError(f"literal {v} exceeds maximum variable index {m}", ln)
        aig.add_po(resolve(v, ln))

    pi_names: list[str | None] = [None] * aig.num_pis
    po_names: list[str | None] = [None] * aig.num_pos
    for offset, text in enumerate(tail):
        ln = None if tail_start is None else tail_start + offset
        if text == "c" or text.startswith("c "):
            aig.comments = [t for t in tail[offset + 1:]]
            while aig.comments and aig.comments[-1] == "":
                aig.comments.pop()
            break
        if not text.strip():
            continue
        kind, _, name = text.partition(" ")
        try:
            pos = int(kind[1:])
        except ValueError:
            raise AigerError(f"malformed symbol line {text!r}", ln) from None
        if kind[0] == "i" and 0 <= pos < len(pi_names):
            pi_names[pos] = name
        elif kind[0] == "o" and 0 <= pos < len(po_names):
            po_names[pos] = name
        elif kind[0] == "l":
            raise UnsupportedAiger("latch symbol in a combinational file", ln)
        else:
            raise AigerError(f"symbol {text!r} refers to nothing", ln)
    aig.pi_names = pi_names
    aig.po_names = po_names
    return aig


def _and_with_constants(aig: Aig, a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    if a == 1:
        return b
    if b == 1:
        return a
    return aig.add_and(a, b)


def read_aiger(path) -> Aig:
    with open(path, "rb") as fh:
        return parse_aiger(fh.read())


# -- AIGER writing --------------------------------------------------------------

def write_aag(aig: Aig, stream: TextIO | None = None) -> str | None:
    """Write the canonical ASCII form; returns the text if no stream is given."""
    out = io.StringIO() if stream is None else stream
    m = aig.num_nodes - 1
    out.write(f"aag {m} {aig.num_pis} 0 {aig.num_pos} {aig.num_ands}\n")
    for i in range(aig.num_pis):
        out.write(f"{2 * (i + 1)}\n")
    for p in aig.pos:
        out.write(f"{p}\n")
    for node in aig.and_nodes():
        a, b = aig.fanins(node)
        out.write(f"{2 * node} {a} {b}\n")
    for i, name in enumerate(aig.pi_names):
        if name is not None:
            out.write(f"i{i} {name}\n")
    for i, name in enumerate(aig.po_names):
        if name is not None:
            out.write(f"o{i} {name}\n")
    if aig.comments:
        out.write("c\n")
        for line in aig.comments:
            out.write(f"{line}\n")
    return out.getvalue() if stream is None else None


# -- generators used by tests and demos -------------------------------------------

def random_aig(num_pis: int, num_ands: int, num_pos: int, seed: int | None = None,
               window: int | None = None) -> Aig:
    """Random AIG; fanins are drawn from the most recent ``window`` nodes."""
    rng = random.Random(seed)
    aig = Aig(num_pis)
    for _ in range(num_ands):
        top = aig.num_nodes - 1
        low = 1 if window is None else max(1, top - window + 1)
        a = rng.randint(low, top)
        b = rng.randint(low, top)
        while b == a and top > low:
            b = rng.randint(low, top)
        aig.add_and(lit(a, rng.random() < 0.5), lit(b, rng.random() < 0.5))
    candidates = list(range(aig.num_nodes - 1, 0, -1))
    for i in range(num_pos):
        node = candidates[i % len(candidates)]
        aig.add_po(lit(node, rng.random() < 0.5))
    return aig


def and_tree(num_inputs: int) -> Aig:
    """Balanced AND of ``num_inputs`` PIs with one output."""
    aig = Aig(num_inputs)
    layer = [lit(i + 1) for i in range(num_inputs)]
    while len(layer) > 1:
        nxt = [aig.add_and(layer[i], layer[i + 1]) for i in range(0, len(layer) - 1, 2)]
        if len(layer) % 2:
            nxt.append(layer[-1])
        layer = nxt
    aig.add_po(layer[0])
    return aig


def from_truth_table(tt, name: str | None = None) -> Aig:
    """Sum-of-minterms-free AIG for a truth table via Shannon expansion."""
    aig = Aig(tt.num_vars)
    memo: dict[tuple[int, int], int] = {}

    def build(value: int, nvars: int) -> int:
        full = (1 << (1 << nvars)) - 1
        if value == 0:
            return 0
        if value == full:
            return 1
        key = (value, nvars)
        if key in memo:
            return memo[key]
        half = 1 << (nvars - 1)
        lo, hi = value & ((1 << half) - 1), value >> half
        if lo == hi:
            res = build(lo, nvars - 1)
        else:
            x = lit(nvars)
            t1 = _and_with_constants(aig, x, build(hi, nvars - 1))
            t0 = _and_with_constants(aig, x ^ 1, build(lo, nvars - 1))
            res = _and_with_constants(aig, t1 ^ 1, t0 ^ 1) ^ 1
        memo[key] = res
        return res

    aig.add_po(build(tt.value, tt.num_vars), name)
    return aig


def iter_cone(aig: Aig, root: int, leaves: Iterable[int]) -> list[int]:
    """AND nodes strictly inside the cut, in topological order.

    The constant node never needs to be a leaf.
    """
    stop = set(leaves) | {0}
    seen: set[int] = set()
    order: list[int] = []
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if node in seen or node in stop:
            continue
        if not aig.is_and(node):
            raise ValueError(f"node {node} is outside the cut leaves {sorted(stop)}")
        seen.add(node)
        stack.append((node, True))
        a, b = aig.fanins(node)
        stack.append((lit_node(b), False))
        stack.append((lit_node(a), False))
    return order
