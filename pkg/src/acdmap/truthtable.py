"""Bit-parallel truth tables for Boolean functions of up to 16 variables.

A table is a bit string: bit ``i`` holds ``f(a)`` for the assignment whose
binary encoding ``sum(a_j << j)`` equals ``i``.  Variable ``num_vars - 1`` is
the most significant one.  The bits live in a Python ``int`` of
``max(64, 2**num_vars)`` bits; tables with fewer than six variables replicate
their ``2**num_vars``-bit pattern across the whole 64-bit block so that the
word masks below work unchanged for every width.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

MAX_VARS = 16

_HEX_RE = re.compile(r"^[0-9a-fA-F]+$")


def _nbits(num_vars: int) -> int:
    return max(64, 1 << num_vars)


@lru_cache(maxsize=None)
def _full(nbits: int) -> int:
    return (1 << nbits) - 1


@lru_cache(maxsize=None)
def _var_mask(nbits: int, var: int) -> int:
    """Bits where variable ``var`` is 1, over a table of ``nbits`` bits."""
    width = 1 << var
    period = b"\x00" * (width // 8) + b"\xff" * (width // 8) if var >= 3 else None
    if period is None:
        word = 0
        for i in range(64):
            if (i >> var) & 1:
                word |= 1 << i
        return int.from_bytes(word.to_bytes(8, "little") * (nbits // 64), "little")
    return int.from_bytes(period * (nbits // (2 * width)), "little")


@lru_cache(maxsize=None)
def _swap_mask(nbits: int, i: int, j: int) -> int:
    # positions with a_i = 1 and a_j = 0 (i < j)
    return _var_mask(nbits, i) & ~_var_mask(nbits, j) & _full(nbits)


def _replicate(value: int, num_vars: int) -> int:
    """Spread a ``2**num_vars``-bit pattern over a full 64-bit block."""
    if num_vars >= 6:
        return value
    width = 1 << num_vars
    value &= (1 << width) - 1
    while width < 64:
        value |= value << width
        width <<= 1
    return value


@dataclass(frozen=True, slots=True)
class TruthTable:
    num_vars: int
    bits: int

    def __post_init__(self):
        if not 0 <= self.num_vars <= MAX_VARS:
            raise ValueError(f"num_vars must be in [0, {MAX_VARS}], got {self.num_vars}")
        if self.bits < 0 or self.bits >> _nbits(self.num_vars):
            raise ValueError("bits out of range for the table width")
        if self.num_vars < 6 and _replicate(self.bits, self.num_vars) != self.bits:
            raise ValueError("tables under 6 variables must replicate their pattern")

    # construction --------------------------------------------------------
    @classmethod
    def from_value(cls, value: int, num_vars: int) -> "TruthTable":
        """Build from the low ``2**num_vars`` bits of ``value``."""
        return cls(num_vars, _replicate(value & ((1 << (1 << num_vars)) - 1), num_vars))

    @classmethod
    def const(cls, num_vars: int, value: bool = False) -> "TruthTable":
        return cls(num_vars, _full(_nbits(num_vars)) if value else 0)

    @classmethod
    def var(cls, index: int, num_vars: int) -> "TruthTable":
        if not 0 <= index < num_vars:
            raise ValueError(f"variable {index} out of range for {num_vars} vars")
        return cls(num_vars, _var_mask(_nbits(num_vars), index))

    @classmethod
    def from_function(cls, fn, num_vars: int) -> "TruthTable":
        """Tabulate ``fn(bits)`` where ``bits`` is a tuple ``(a_0, ..., a_{n-1})``."""
        value = 0
        for i in range(1 << num_vars):
            if fn(tuple((i >> j) & 1 for j in range(num_vars))):
                value |= 1 << i
        return cls.from_value(value, num_vars)

    # views ---------------------------------------------------------------
    @property
    def value(self) -> int:
        """The canonical ``2**num_vars``-bit value (no replication)."""
        return self.bits & ((1 << (1 << self.num_vars)) - 1)

    @property
    def blocks(self) -> tuple[int, ...]:
        n = _nbits(self.num_vars) // 64
        raw = self.bits.to_bytes(8 * n, "little")
        return tuple(int.from_bytes(raw[8 * i: 8 * i + 8], "little") for i in range(n))

    @property
    def nbits(self) -> int:
        return _nbits(self.num_vars)

    def bit(self, index: int) -> int:
        return (self.bits >> index) & 1

    def __call__(self, *assignment: int) -> int:
        index = 0
        for j, a in enumerate(assignment):
            index |= (a & 1) << j
        return self.bit(index)

    def count_ones(self) -> int:
        return self.value.bit_count()

    def is_const(self) -> bool:
        return self.bits == 0 or self.bits == _full(self.nbits)

    def to_hex(self) -> str:
        return tt_to_hex(self)

    def __repr__(self) -> str:
        return f"TruthTable({self.num_vars}, {self.to_hex()})"

    # bitwise algebra -----------------------------------------------------
    def _check(self, other: "TruthTable"):
        if other.num_vars != self.num_vars:
            raise ValueError("truth tables have different widths")

    def __and__(self, other: "TruthTable") -> "TruthTable":
        self._check(other)
        return TruthTable(self.num_vars, self.bits & other.bits)

    def __or__(self, other: "TruthTable") -> "TruthTable":
        self._check(other)
        return TruthTable(self.num_vars, self.bits | other.bits)

    def __xor__(self, other: "TruthTable") -> "TruthTable":
        self._check(other)
        return TruthTable(self.num_vars, self.bits ^ other.bits)

    def __invert__(self) -> "TruthTable":
        return TruthTable(self.num_vars, self.bits ^ _full(self.nbits))


@dataclass(frozen=True, slots=True)
class TernaryTable:
    """Incompletely specified function: ``onset`` is only meaningful where ``care`` is 1."""

    onset: TruthTable
    care: TruthTable

    def __post_init__(self):
        if self.onset.num_vars != self.care.num_vars:
            raise ValueError("onset and care must have the same width")
        if self.onset.bits & ~self.care.bits:
            raise ValueError("onset bits outside the care set")

    @property
    def num_vars(self) -> int:
        return self.onset.num_vars


@dataclass(frozen=True, slots=True)
class VarPermutation:
    """``perm[v]`` is the current position of original variable ``v``."""

    perm: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"not a permutation: {self.perm}")

    @classmethod
    def identity(cls, n: int) -> "VarPermutation":
        return cls(tuple(range(n)))

    def inverse(self) -> "VarPermutation":
        inv = [0] * len(self.perm)
        for v, p in enumerate(self.perm):
            inv[p] = v
        return VarPermutation(tuple(inv))

    def var_at(self, position: int) -> int:
        return self.perm.index(position)

    def __len__(self) -> int:
        return len(self.perm)


# -- hex encoding -----------------------------------------------------------

def tt_from_hex(text: str, num_vars: int) -> TruthTable:
    """Parse a hex truth table, most significant digit first.

    ``num_vars <= 2`` uses a single digit holding the ``2**num_vars`` low bits.
    """
    if not 0 <= num_vars <= MAX_VARS:
        raise ValueError(f"num_vars must be in [0, {MAX_VARS}]")
    digits = text.strip()
    if digits[:2].lower() == "0x":
        digits = digits[2:]
    if not digits or not _HEX_RE.match(digits):
        raise ValueError(f"malformed hex truth table: {text!r}")
    expected = max(1, 1 << max(num_vars - 2, 0)) if num_vars >= 2 else 1
    if len(digits) != expected:
        raise ValueError(
            f"expected {expected} hex digits for {num_vars} variables, got {len(digits)}")
    value = int(digits, 16)
    if value >> (1 << num_vars):
        raise ValueError(f"value {text!r} does not fit {num_vars} variables")
    return TruthTable.from_value(value, num_vars)


def tt_to_hex(tt: TruthTable) -> str:
    digits = max(1, 1 << max(tt.num_vars - 2, 0)) if tt.num_vars >= 2 else 1
    return "0x" + format(tt.value, f"0{digits}x")


# -- cofactors, swaps, support ---------------------------------------------

def _check_var(tt: TruthTable, var: int):
    if not 0 <= var < tt.num_vars:
        raise ValueError(f"variable {var} out of range for {tt.num_vars} vars")


def cofactor(tt: TruthTable, var: int, polarity: int) -> TruthTable:
    """Cofactor w.r.t. ``var``; the result keeps its width and ignores ``var``."""
    _check_var(tt, var)
    mask = _var_mask(tt.nbits, var)
    shift = 1 << var
    if polarity:
        half = tt.bits & mask
        return TruthTable(tt.num_vars, half | (half >> shift))
    half = tt.bits & ~mask & _full(tt.nbits)
    return TruthTable(tt.num_vars, half | (half << shift))


def _swap_bits(bits: int, nbits: int, i: int, j: int) -> int:
    if i > j:
        i, j = j, i
    shift = (1 << j) - (1 << i)
    mask = _swap_mask(nbits, i, j)
    return (bits & ~(mask | (mask << shift))) | ((bits & mask) << shift) | ((bits >> shift) & mask)


def swap_vars(tt: TruthTable, i: int, j: int) -> TruthTable:
    _check_var(tt, i)
    _check_var(tt, j)
    if i == j:
        return tt
    return TruthTable(tt.num_vars, _swap_bits(tt.bits, tt.nbits, i, j))


def depends_on(tt: TruthTable, var: int) -> bool:
    mask = _var_mask(tt.nbits, var)
    return ((tt.bits & mask) >> (1 << var)) != (tt.bits & ~mask & _full(tt.nbits))


def support(tt: TruthTable) -> frozenset[int]:
    return frozenset(v for v in range(tt.num_vars) if depends_on(tt, v))


def permute(tt: TruthTable, perm: Sequence[int]) -> TruthTable:
    """Move variable ``v`` to position ``perm[v]`` (``perm`` a bijection)."""
    n = tt.num_vars
    if sorted(perm) != list(range(n)):
        raise ValueError(f"not a permutation of {n} variables: {perm}")
    at = list(range(n))  # position -> variable
    where = list(range(n))  # variable -> position
    bits = tt.bits
    for v in range(n):
        target = perm[v]
        current = where[v]
        if current == target:
            continue
        other = at[target]
        bits = _swap_bits(bits, tt.nbits, current, target)
        at[current], at[target] = other, v
        where[other], where[v] = current, target
    return TruthTable(n, bits)


def move_vars_to_bottom(tt: TruthTable, variables: Iterable[int]) -> tuple[TruthTable, VarPermutation]:
    """Swap the given variables into positions ``0..len-1`` (ascending order).

    Returns the reordered table and the permutation (original -> position).
    """
    wanted = sorted(set(variables))
    for v in wanted:
        _check_var(tt, v)
    where = list(range(tt.num_vars))
    at = list(range(tt.num_vars))
    bits = tt.bits
    for target, v in enumerate(wanted):
        current = where[v]
        if current == target:
            continue
        other = at[target]
        bits = _swap_bits(bits, tt.nbits, current, target)
        at[current], at[target] = other, v
        where[other], where[v] = current, target
    return TruthTable(tt.num_vars, bits), VarPermutation(tuple(where))


def shrink(tt: TruthTable, num_vars: int) -> TruthTable:
    """Drop the top variables; they must not be in the support."""
    if num_vars > tt.num_vars:
        raise ValueError("cannot shrink to a wider table")
    return TruthTable.from_value(tt.bits, num_vars)


def extend(tt: TruthTable, num_vars: int) -> TruthTable:
    """Add redundant variables on top."""
    if num_vars < tt.num_vars:
        raise ValueError("cannot extend to a narrower table")
    bits = tt.value
    width = 1 << tt.num_vars
    target = _nbits(num_vars)
    while width < target:
        bits |= bits << width
        width <<= 1
    return TruthTable(num_vars, bits)


def shrink_to_support(tt: TruthTable) -> tuple[TruthTable, tuple[int, ...]]:
    """Return the function over its support and the support (ascending)."""
    sup = tuple(sorted(support(tt)))
    moved, _ = move_vars_to_bottom(tt, sup)
    return shrink(moved, len(sup)), sup


def expand(tt: TruthTable, positions: Sequence[int], num_vars: int) -> TruthTable:
    """Re-express ``tt`` in a wider space: its variable ``i`` becomes ``positions[i]``."""
    if len(positions) != tt.num_vars:
        raise ValueError("need one position per variable")
    if len(set(positions)) != len(positions) or any(not 0 <= p < num_vars for p in positions):
        raise ValueError(f"bad target positions {positions} for {num_vars} vars")
    wide = extend(tt, num_vars)
    if all(a < b for a, b in zip(positions, positions[1:])):
        # increasing targets: place variables top-down with plain swaps
        bits, nbits = wide.bits, wide.nbits
        for i in range(tt.num_vars - 1, -1, -1):
            if positions[i] != i:
                bits = _swap_bits(bits, nbits, i, positions[i])
        return TruthTable(num_vars, bits)
    rest = iter(p for p in range(num_vars) if p not in set(positions))
    perm = list(positions) + [next(rest) for _ in range(num_vars - tt.num_vars)]
    return permute(wide, perm)


# -- raw-bit paths ------------------------------------------------------------
# Cut enumeration and mapping handle millions of small tables; these skip the
# TruthTable validation and work on the bits directly.

_WORD_VARS = tuple(_var_mask(64, v) for v in range(6))


def from_bits(bits: int, num_vars: int) -> TruthTable:
    """Wrap bits that are already a valid table of ``num_vars`` variables."""
    t = object.__new__(TruthTable)
    object.__setattr__(t, "num_vars", num_vars)
    object.__setattr__(t, "bits", bits)
    return t


def stretch_bits(bits: int, nbits: int, positions: Sequence[int]) -> int:
    """Move variable ``i`` to ``positions[i]`` (strictly increasing).

    The table must not depend on the positions being vacated, which holds
    when ``bits`` is a narrower table widened to ``nbits``.
    """
    for i in range(len(positions) - 1, -1, -1):
        p = positions[i]
        if p != i:
            bits = _swap_bits(bits, nbits, i, p)
    return bits


def widen_bits(bits: int, num_vars: int, new_vars: int) -> int:
    """Replicate a table of ``num_vars`` variables to ``new_vars`` variables."""
    width = _nbits(num_vars)
    target = _nbits(new_vars)
    while width < target:
        bits |= bits << width
        width <<= 1
    return bits


def fold_literals(tt: TruthTable, literals: Sequence[int]) -> tuple[TruthTable, tuple[int, ...]]:
    """Specialize ``tt`` to input signals given as literals.

    Literal ``2 * node + c`` feeds variable ``i``; node 0 is the constant
    ``c``.  Complements and constants are folded into the table, variables fed
    by the same node are merged, and unused ones dropped.  Returns the
    function over the remaining nodes and those nodes, in variable order.
    """
    n = tt.num_vars
    if len(literals) != n:
        raise ValueError("one literal per table variable")
    nbits = _nbits(n)
    full = _full(nbits)
    vm = _WORD_VARS if nbits == 64 else [_var_mask(nbits, v) for v in range(n)]
    bits = tt.bits
    first: dict[int, int] = {}
    for i, lit in enumerate(literals):
        node = lit >> 1
        if node and not lit & 1 and node not in first:
            first[node] = i
            continue
        mask = vm[i]
        shift = 1 << i
        if node == 0:
            half = (bits & mask) >> shift if lit & 1 else bits & ~mask & full
            bits = half | (half << shift)
            continue
        if lit & 1:
            bits = ((bits & mask) >> shift) | ((bits & ~mask & full) << shift)
        j = first.get(node)
        if j is None:
            first[node] = i
            continue
        # x_i := x_j
        hi = (bits & mask) >> shift
        lo = bits & ~mask & full
        xj = vm[j]
        half = (hi & xj) | (lo & ~xj & full)
        bits = half | (half << shift)
    sup = [v for v in range(n) if ((bits & vm[v]) >> (1 << v)) != (bits & ~vm[v] & full)]
    for target, v in enumerate(sup):
        if v != target:
            bits = _swap_bits(bits, nbits, target, v)
    m = len(sup)
    bits &= (1 << (1 << m)) - 1
    return from_bits(_replicate(bits, m), m), tuple(literals[v] >> 1 for v in sup)


# -- functional composition -------------------------------------------------

def compose_bits(gbits: int, m: int, inputs: Sequence[int], full: int) -> int:
    """Evaluate ``g`` (``2**m`` bits in ``gbits``) on bit-parallel input words.

    ``inputs[i]`` is the bit-parallel value of g's variable ``i``; ``full`` is
    the all-ones word of the same width.
    """
    if gbits == 0:
        return 0
    if m == 0:
        return full
    if gbits == (1 << (1 << m)) - 1:
        return full
    half = 1 << (m - 1)
    lo = gbits & ((1 << half) - 1)
    hi = gbits >> half
    if lo == hi:
        return compose_bits(lo, m - 1, inputs, full)
    x = inputs[m - 1]
    return (x & compose_bits(hi, m - 1, inputs, full)) | (
        (x ^ full) & compose_bits(lo, m - 1, inputs, full))


def compose(g: TruthTable, inputs: Sequence[TruthTable]) -> TruthTable:
    """Functional composition ``g(inputs[0], ..., inputs[m-1])``."""
    if len(inputs) != g.num_vars:
        raise ValueError(f"g has {g.num_vars} inputs, got {len(inputs)} functions")
    if not inputs:
        raise ValueError("composition needs at least one input to fix the width")
    n = inputs[0].num_vars
    if any(t.num_vars != n for t in inputs):
        raise ValueError("inputs must share one width")
    full = _full(_nbits(n))
    return TruthTable(n, compose_bits(g.value, g.num_vars, [t.bits for t in inputs], full))


# -- don't-care aware support ----------------------------------------------

def minimize_ternary(t: TernaryTable) -> tuple[TruthTable, frozenset[int]]:
    """Greedily drop variables (ascending index) whose cofactors are compatible.

    Returns the completion (remaining don't-cares set to 0) and the kept
    variables.  The completion depends only on the kept variables.
    """
    n = t.num_vars
    nbits = _nbits(n)
    full = _full(nbits)
    on, care = t.onset.bits, t.care.bits
    kept = set(range(n))
    for v in range(n):
        mask = _var_mask(nbits, v)
        shift = 1 << v
        on0, on1 = on & ~mask & full, (on & mask) >> shift
        care0, care1 = care & ~mask & full, (care & mask) >> shift
        if (on0 ^ on1) & care0 & care1:
            continue
        on_m, care_m = on0 | on1, care0 | care1
        on, care = on_m | (on_m << shift), care_m | (care_m << shift)
        kept.discard(v)
    return TruthTable(n, on), frozenset(kept)


def ternary_support_size(t: TernaryTable) -> int:
    return len(minimize_ternary(t)[1])
