"""Mapped k-LUT networks: statistics, BLIF output and simulation checks.

Signals are literals like in the AIG: ``2 * id + complemented`` with id 0
the constant, ids ``1..num_pis`` the inputs and LUT outputs above that.
LUT fanins are always positive; complements are folded into the LUT
function, so only primary outputs carry an inversion flag.
"""
from __future__ import annotations

import io
import random
from dataclasses import dataclass
from typing import NamedTuple, Sequence, TextIO

from .aig import Aig, simulate_pos
from .truthtable import TruthTable, compose_bits, fold_literals


@dataclass(frozen=True)
class Lut:
    fanins: tuple[int, ...]  # node ids
    function: TruthTable


class NetStats(NamedTuple):
    luts: int
    edges: int
    depth: int


class LutNetwork:
    def __init__(self, num_pis: int, pi_names: Sequence[str | None] | None = None):
        self.num_pis = num_pis
        self.pi_names = list(pi_names) if pi_names else [None] * num_pis
        self.luts: list[Lut] = []
        self.pos: list[int] = []
        self.po_names: list[str | None] = []

    def lut_node(self, index: int) -> int:
        return self.num_pis + 1 + index

    def lut_of(self, node: int) -> Lut:
        return self.luts[node - self.num_pis - 1]

    def is_lut(self, node: int) -> bool:
        return node > self.num_pis

    @property
    def num_nodes(self) -> int:
        return 1 + self.num_pis + len(self.luts)

    def add_lut(self, fanins: Sequence[int], function: TruthTable) -> int:
        """Add ``function(fanins)`` and return its literal.

        Complemented and constant fanins are folded into the table, repeated
        fanins merged and unused ones dropped; a result that is a constant or
        a (possibly inverted) fanin creates no LUT.
        """
        if len(fanins) != function.num_vars:
            raise ValueError("one fanin literal per table variable")
        small, nodes = fold_literals(function, fanins)
        if not nodes:
            return int(bool(small.bits))
        if len(nodes) == 1:
            return 2 * nodes[0] + (small.value != 0b10)
        self.luts.append(Lut(nodes, small))
        return 2 * self.lut_node(len(self.luts) - 1)

    def add_po(self, literal: int, name: str | None = None):
        self.pos.append(literal)
        self.po_names.append(name)

    def levels(self) -> list[int]:
        level = [0] * self.num_nodes
        for i, lut in enumerate(self.luts):
            level[self.lut_node(i)] = 1 + max((level[f] for f in lut.fanins), default=0)
        return level

    def simulate(self, inputs: Sequence[int], full: int) -> list[int]:
        values = [0] * self.num_nodes
        values[1:self.num_pis + 1] = inputs
        for i, lut in enumerate(self.luts):
            words = [values[f] for f in lut.fanins]
            values[self.lut_node(i)] = compose_bits(lut.function.value, len(words), words, full)
        return values

    def simulate_pos(self, inputs: Sequence[int], full: int) -> list[int]:
        values = self.simulate(inputs, full)
        return [values[p >> 1] ^ (full if p & 1 else 0) for p in self.pos]


def stats(net: LutNetwork) -> NetStats:
    """(LUT count, edge count, depth); depth is the longest PI-to-PO LUT path."""
    level = net.levels()
    depth = max((level[p >> 1] for p in net.pos), default=0)
    return NetStats(len(net.luts), sum(len(l.fanins) for l in net.luts), depth)


# -- BLIF -------------------------------------------------------------------------

def isop(on: int, upper: int, num_vars: int) -> list[str]:
    """Irredundant cube cover between ``on`` and ``upper`` (Minato-Morreale).

    Cubes are strings over ``01-``, character ``i`` for variable ``i``.
    """
    cubes, _ = _isop(on, upper, num_vars)
    return ["".join(c) for c in cubes]


def _isop(lower: int, upper: int, n: int):
    full = (1 << (1 << n)) - 1
    if lower == 0:
        return [], 0
    if upper == full:
        return [["-"] * n], full
    half = 1 << (n - 1)
    m = (1 << half) - 1
    l0, l1, u0, u1 = lower & m, lower >> half, upper & m, upper >> half
    c0, r0 = _isop(l0 & ~u1, u0, n - 1)
    c1, r1 = _isop(l1 & ~u0, u1, n - 1)
    c2, r2 = _isop((l0 & ~r0) | (l1 & ~r1), u0 & u1, n - 1)
    cubes = [c + ["0"] for c in c0] + [c + ["1"] for c in c1] + [c + ["-"] for c in c2]
    cover = (r0 | r2) | ((r1 | r2) << half)
    return cubes, cover


def _blif_names(net: LutNetwork) -> list[str]:
    names = ["$false"] + [net.pi_names[i] or f"pi{i}" for i in range(net.num_pis)]
    names += [f"n{net.lut_node(i)}" for i in range(len(net.luts))]
    return names


def write_blif(net: LutNetwork, stream: TextIO | None = None, model: str = "top") -> str | None:
    out = io.StringIO() if stream is None else stream
    names = _blif_names(net)
    po_names = [net.po_names[i] or f"po{i}" for i in range(len(net.pos))]
    out.write(f".model {model}\n")
    out.write(".inputs " + " ".join(names[1:net.num_pis + 1]) + "\n")
    out.write(".outputs " + " ".join(po_names) + "\n")
    for i, lut in enumerate(net.luts):
        ins = " ".join(names[f] for f in lut.fanins)
        out.write(f".names {ins} {names[net.lut_node(i)]}\n")
        value = lut.function.value
        for cube in isop(value, value, lut.function.num_vars):
            out.write(f"{cube} 1\n")
    pi_set = set(names[1:net.num_pis + 1])
    for name, lit in zip(po_names, net.pos):
        node, inv = lit >> 1, lit & 1
        if node == 0:
            out.write(f".names {name}\n" + ("1\n" if inv else ""))
        elif names[node] == name and not inv:
            continue
        else:
            if name in pi_set:
                raise ValueError(f"output {name!r} clashes with an input name")
            out.write(f".names {names[node]} {name}\n{'0' if inv else '1'} 1\n")
    out.write(".end\n")
    return out.getvalue() if stream is None else None


def read_blif(text: str) -> LutNetwork:
    """Minimal reader for the combinational BLIF produced by :func:`write_blif`."""
    lines = []
    for raw in text.splitlines():
        raw = raw.split("#", 1)[0].rstrip()
        if lines and lines[-1].endswith("\\"):
            lines[-1] = lines[-1][:-1] + " " + raw
        else:
            lines.append(raw)
    inputs: list[str] = []
    outputs: list[str] = []
    gates: list[tuple[list[str], str, list[str]]] = []
    for line in lines:
        parts = line.split()
        if not parts:
            continue
        if parts[0] == ".inputs":
            inputs += parts[1:]
        elif parts[0] == ".outputs":
            outputs += parts[1:]
        elif parts[0] == ".names":
            gates.append((parts[1:-1], parts[-1], []))
        elif parts[0] in (".model", ".end"):
            continue
        elif parts[0].startswith("."):
            raise ValueError(f"unsupported BLIF construct {parts[0]}")
        else:
            gates[-1][2].append(line)
    net = LutNetwork(len(inputs), inputs)
    signal = {name: 2 * (i + 1) for i, name in enumerate(inputs)}
    pending = {g[1]: g for g in gates}

    def build(name: str) -> int:
        if name in signal:
            return signal[name]
        ins, out, rows = pending[name]
        fanins = [build(x) for x in ins]
        n = len(ins)
        value = 0
        for row in rows:
            if n == 0:
                cube, val = "", row.strip()
            else:
                cube, val = row.split()
            if val != "1":
                raise ValueError("only ON-set covers are supported")
            for m in range(1 << n):
                if all(c == "-" or int(c) == (m >> i) & 1 for i, c in enumerate(cube)):
                    value |= 1 << m
        signal[name] = net.add_lut(fanins, TruthTable.from_value(value, n))
        return signal[name]

    for name in outputs:
        net.add_po(build(name), name)
    return net


# -- equivalence by simulation ------------------------------------------------------

def _pattern_words(num_pis: int, patterns: int, seed: int) -> tuple[list[int], int]:
    if num_pis <= 16:
        nbits = 1 << num_pis
        full = (1 << nbits) - 1
        words = []
        for i in range(num_pis):
            block = ((1 << (1 << i)) - 1) << (1 << i)
            w = 0
            for start in range(0, nbits, 2 << i):
                w |= block << start
            words.append(w)
        return words, full
    rng = random.Random(seed)
    nbits = 64 * patterns
    return [rng.getrandbits(nbits) for _ in range(num_pis)], (1 << nbits) - 1


def equiv_check(net: LutNetwork, aig: Aig, patterns: int = 1024, seed: int = 0) -> int:
    """Mismatching PO bits over ``patterns`` random 64-bit words (exhaustive up to 16 PIs)."""
    if net.num_pis != aig.num_pis or len(net.pos) != aig.num_pos:
        raise ValueError(f"interface mismatch: {net.num_pis}/{len(net.pos)} vs "
                         f"{aig.num_pis}/{aig.num_pos} inputs/outputs")
    words, full = _pattern_words(aig.num_pis, patterns, seed)
    got = net.simulate_pos(words, full)
    want = simulate_pos(aig, words, full)
    return sum((a ^ b).bit_count() for a, b in zip(got, want))
