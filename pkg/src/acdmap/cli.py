"""Command line: ``acdmap map | decompose | bench``.

Exit codes: 0 success, 1 infeasible decomposition or failed verification,
2 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from .acd import DecompositionError, decompose, evaluate, verify_acd
from .aig import AigerError, read_aiger
from .bench import run_bench
from .lutnet import equiv_check, stats, write_blif
from .mapper import check_delay_contract, map_aig
from .truthtable import expand, tt_from_hex, tt_to_hex

EXIT_OK, EXIT_INFEASIBLE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _emit(report: dict, text: str, as_json: bool):
    if as_json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(text)


def cmd_map(args) -> int:
    try:
        aig = read_aiger(args.input)
    except (OSError, AigerError) as exc:
        raise InputError(f"{args.input}: {exc}") from None
    start = time.perf_counter()
    result = map_aig(aig, args.K, args.Z, args.passes, args.C)
    elapsed = time.perf_counter() - start
    s = stats(result.network)
    report = {
        "input": args.input,
        "k": args.K,
        "l": args.Z,
        "luts": s.luts,
        "edges": s.edges,
        "depth": s.depth,
        "mapped_arrival": result.state.depth,
        "wide_cuts": len(result.wide),
        "acd_fallbacks": result.state.stats.fallbacks,
    }
    if args.timing:
        report["seconds"] = round(elapsed, 3)
    status = EXIT_OK
    if args.verify:
        mismatches = equiv_check(result.network, aig, seed=args.seed)
        contract = check_delay_contract(result)
        report["mismatches"] = mismatches
        report["delay_contract_violations"] = len(contract)
        if mismatches or contract:
            status = EXIT_INFEASIBLE
    if args.output:
        try:
            with open(args.output, "w") as fh:
                write_blif(result.network, fh, model=_model_name(args.input))
        except OSError as exc:
            raise InputError(f"{args.output}: {exc}") from None
    text = "\n".join(f"{key:<26}{value}" for key, value in report.items())
    _emit(report, text, args.json)
    return status


def _model_name(path: str) -> str:
    base = path.replace("\\", "/").rsplit("/", 1)[-1]
    return base.rsplit(".", 1)[0] or "top"


def _parse_late(text: str | None, n: int) -> list[int]:
    if not text:
        return []
    try:
        late = sorted({int(x) for x in text.split(",") if x.strip()})
    except ValueError:
        raise InputError(f"bad late list {text!r}") from None
    if any(not 0 <= v < n for v in late):
        raise InputError(f"late variables must be in [0, {n - 1}]")
    return late


def _vars(vs) -> str:
    return " ".join(f"x{v}" for v in vs) or "-"


def cmd_decompose(args) -> int:
    n = args.vars
    if not 1 <= n <= 11:
        raise InputError("--vars must be in [1, 11]")
    if not 2 <= args.K <= 6:
        raise InputError("-K must be in [2, 6]")
    try:
        tt = tt_from_hex(args.tt, n)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    late = _parse_late(args.late, n)
    report: dict = {"function": tt_to_hex(tt), "vars": n, "k": args.K, "late": late}
    if n <= args.K:
        report.update(feasible=True, luts=1, note="fits a single LUT")
        _emit(report, f"{tt_to_hex(tt)} fits a single {args.K}-LUT", args.json)
        return EXIT_OK
    if len(late) >= args.K:
        raise InputError(f"at most {args.K - 1} late variables")
    prof = evaluate(tt, args.K, late)
    try:
        r = decompose(tt, args.K, late, profile=prof)
    except DecompositionError:
        report.update(feasible=False, smallest_mu=prof.mu)
        _emit(report, f"no decomposition into {args.K}-LUTs with late set {late}"
                      f" (smallest multiplicity {prof.mu})", args.json)
        return EXIT_INFEASIBLE
    ok = verify_acd(r, tt)
    bs = [b for b in r.bs_functions if not b.is_buffer]
    bound = sorted({v for b in bs for v in b.support})
    bs_wide = [expand(b.table, [bound.index(v) for v in b.support], len(bound)) for b in bs]
    comp_inputs = [f"x{v}" for v in r.fs_vars]
    j = 0
    for b in r.bs_functions:
        if b.is_buffer:
            comp_inputs.append(f"x{b.support[0]}")
        else:
            comp_inputs.append(f"h{j}")
            j += 1
    report.update(
        feasible=True,
        mu=r.mu,
        fs=list(r.fs_vars),
        bs=sorted(r.bs_vars),
        ss=list(r.ss_vars),
        bs_functions=[{"table": tt_to_hex(b.table), "inputs": list(b.support),
                       "bound_set_table": tt_to_hex(w)} for b, w in zip(bs, bs_wide)],
        composition={"table": tt_to_hex(r.composition), "inputs": comp_inputs},
        codes=[list(c) for c in r.codes],
        luts=r.num_luts,
        verified=ok,
    )
    lines = [
        f"function     {tt_to_hex(tt)} ({n} vars), k={args.K}, late={late}",
        f"multiplicity {r.mu}",
        f"free set     {_vars(r.fs_vars)}",
        f"bound set    {_vars(sorted(r.bs_vars))}",
        f"shared set   {_vars(r.ss_vars)}",
    ]
    for i, (b, wide) in enumerate(zip(bs, bs_wide)):
        lines.append(f"h{i}           {tt_to_hex(b.table)} over {_vars(b.support)}"
                     f" ({tt_to_hex(wide)} over the bound set)")
    lines.append(f"composition  {tt_to_hex(r.composition)} over {' '.join(comp_inputs)}")
    lines.append(f"LUTs         {r.num_luts}")
    lines.append(f"verified     {'yes' if ok else 'NO'}")
    _emit(report, "\n".join(lines), args.json)
    return EXIT_OK if ok else EXIT_INFEASIBLE


def cmd_bench(args) -> int:
    if args.samples < 0:
        raise InputError("--samples must be >= 0")
    try:
        report = run_bench(args.source, args.vars, args.late, args.samples, args.seed,
                           args.K, args.verify, args.jobs, args.timing)
    except (ValueError, OSError, AigerError) as exc:
        raise InputError(str(exc)) from None
    _emit(report.as_dict(), report.as_text(), args.json)
    if args.verify and report.verified != report.decomposed:
        return EXIT_INFEASIBLE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="acdmap", description="LUT mapping with two-level decomposition of wide cuts")
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("map", help="map an AIGER file into k-LUTs")
    m.add_argument("input")
    m.add_argument("-K", type=int, default=6, help="LUT size")
    m.add_argument("-Z", type=int, default=8, help="wide cut size (0 disables decomposition)")
    m.add_argument("-C", type=int, default=8, help="cuts kept per node")
    m.add_argument("--passes", type=int, default=5)
    m.add_argument("--seed", type=int, default=0, help="seed for --verify patterns")
    m.add_argument("--verify", action="store_true", help="simulate against the AIG")
    m.add_argument("--json", action="store_true")
    m.add_argument("--timing", action="store_true", help="include wall time in the report")
    m.add_argument("-o", "--output", help="BLIF output path")
    m.set_defaults(func=cmd_map)

    d = sub.add_parser("decompose", help="decompose one function given as hex")
    d.add_argument("--tt", required=True, help="truth table in hex, variable 0 least significant")
    d.add_argument("--vars", type=int, required=True)
    d.add_argument("-K", type=int, default=6)
    d.add_argument("--late", help="comma separated late variables")
    d.add_argument("--json", action="store_true")
    d.set_defaults(func=cmd_decompose)

    b = sub.add_parser("bench", help="decomposition success rates")
    b.add_argument("--source", default="random", help="random | harvest:FILE.aag")
    b.add_argument("--vars", type=int, default=8)
    b.add_argument("--late", type=int, default=0)
    b.add_argument("--samples", type=int, default=100)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("-K", type=int, default=6)
    b.add_argument("--verify", action="store_true", help="also decompose and recompose")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--json", action="store_true")
    b.add_argument("--timing", action="store_true")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.command == "map" and args.Z and not args.K < args.Z <= 11:
        print(f"error: -Z must satisfy K < Z <= 11 or be 0", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
