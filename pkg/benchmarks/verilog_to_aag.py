"""Convert a flat gate-level Verilog netlist into an ASCII AIGER file.

Handles the primitive-gate style used by synthesized EPFL netlists:
``and/nand/or/nor/xor/xnor/not/buf`` instances, escaped identifiers,
``assign`` of plain nets or constants.  Multi-input gates become balanced
AND trees.

    python benchmarks/verilog_to_aag.py bar.v benchmarks/epfl/bar.aag
"""
import re
import sys

from acdmap.aig import Aig, write_aag

TOKEN = re.compile(r"\\\S+|[A-Za-z_][\w$]*(?:\[\d+\])?|1'b[01]|\d+|[(),;=~]")
GATES = {"and", "nand", "or", "nor", "xor", "xnor", "not", "buf"}


def tokenize(text):
    text = re.sub(r"//[^\n]*", "", text)
    text = re.sub(r"/\*.*?\*/", "", text, flags=re.S)
    for tok in TOKEN.findall(text):
        yield tok[1:] if tok.startswith("\\") else tok


def statements(tokens):
    stmt = []
    for tok in tokens:
        if tok == ";":
            yield stmt
            stmt = []
        elif tok in ("endmodule",):
            continue
        else:
            stmt.append(tok)


def parse(text):
    inputs, outputs, gates, assigns = [], [], {}, {}
    for stmt in statements(tokenize(text)):
        head = stmt[0]
        if head in ("input", "output"):
            names = [t for t in stmt[1:] if t != ","]
            (inputs if head == "input" else outputs).extend(names)
        elif head in GATES:
            inner = stmt[stmt.index("(") + 1:len(stmt) - 1 - stmt[::-1].index(")")]
            pins = [t for t in inner if t != ","]
            gates[pins[0]] = (head, pins[1:])
        elif head == "assign":
            lhs, rhs = stmt[1], stmt[3:]
            assigns[lhs] = rhs
        elif head in ("module", "wire"):
            continue
        else:
            raise ValueError(f"unsupported statement: {' '.join(stmt[:6])}")
    return inputs, outputs, gates, assigns


def build(inputs, outputs, gates, assigns, comment):
    aig = Aig(0)
    signal = {"1'b0": 0, "1'b1": 1}
    for name in inputs:
        signal[name] = aig.add_pi(name)

    def and_all(lits):
        lits = list(lits)
        while len(lits) > 1:
            nxt = [aig.add_and(lits[i], lits[i + 1]) for i in range(0, len(lits) - 1, 2)]
            if len(lits) % 2:
                nxt.append(lits[-1])
            lits = nxt
        return lits[0]

    def xor2(a, b):
        return aig.add_and(aig.add_and(a, b ^ 1) ^ 1, aig.add_and(a ^ 1, b) ^ 1) ^ 1

    def resolve(root):
        stack = [root]
        while stack:
            net = stack[-1]
            if net in signal:
                stack.pop()
                continue
            if net in assigns:
                rhs = assigns[net]
                src = rhs[-1]
                if src not in signal:
                    stack.append(src)
                    continue
                signal[net] = signal[src] ^ (1 if rhs[0] == "~" else 0)
                stack.pop()
                continue
            kind, ins = gates[net]
            missing = [x for x in ins if x not in signal]
            if missing:
                stack.extend(missing)
                continue
            lits = [signal[x] for x in ins]
            if kind in ("and", "nand"):
                out = and_all(lits) ^ (kind == "nand")
            elif kind in ("or", "nor"):
                out = and_all([x ^ 1 for x in lits]) ^ (kind == "or")
            elif kind in ("xor", "xnor"):
                out = lits[0]
                for x in lits[1:]:
                    out = xor2(out, x)
                out ^= kind == "xnor"
            elif kind == "not":
                out = lits[0] ^ 1
            else:
                out = lits[0]
            signal[net] = out
            stack.pop()

    for name in outputs:
        resolve(name)
        aig.add_po(signal[name], name)
    aig.comments = [comment]
    return aig


def main(argv):
    src, dst = argv[1], argv[2]
    with open(src) as fh:
        parsed = parse(fh.read())
    aig = build(*parsed, comment=f"converted from {src.rsplit('/', 1)[-1]} by verilog_to_aag.py")
    with open(dst, "w") as fh:
        write_aag(aig, fh)
    print(f"{dst}: {aig.num_pis} inputs, {aig.num_pos} outputs, {aig.num_ands} ANDs")


if __name__ == "__main__":
    main(sys.argv)
