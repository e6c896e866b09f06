import json
import random

import pytest

from acdmap.aig import write_aag
from acdmap.cli import main
from acdmap.lutnet import read_blif, stats
from acdmap.truthtable import TruthTable, tt_to_hex

from test_mapper import late_leaf_fixture


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_decompose_example(capsys):
    code, out, _ = run(capsys, "decompose", "--tt", "8804800184148111", "--vars", "6", "-K", "4")
    assert code == 0
    assert "multiplicity 4" in out
    assert "composition  0x1048 over x0 x1 h0 h1" in out
    assert "LUTs         3" in out and "verified     yes" in out


def test_decompose_example_json(capsys):
    code, rep = run_json(capsys, "decompose", "--tt", "0x8804800184148111", "--vars", "6", "-K", "4")
    assert code == 0
    assert rep["mu"] == 4 and rep["luts"] == 3 and rep["verified"] is True
    assert rep["fs"] == [0, 1] and rep["ss"] == []
    assert sorted(b["bound_set_table"] for b in rep["bs_functions"]) == ["0x1177", "0x2727"]
    assert rep["composition"]["table"] == "0x1048"


def test_decompose_parity_with_late_inputs(capsys):
    t = TruthTable.const(11)
    for v in range(11):
        t ^= TruthTable.var(v, 11)
    code, rep = run_json(capsys, "decompose", "--tt", tt_to_hex(t), "--vars", "11", "--late", "0,1,2,3,4")
    assert code == 0
    assert rep["mu"] == 2 and rep["fs"] == [0, 1, 2, 3, 4] and rep["verified"]


def test_decompose_infeasible(capsys):
    bits = random.Random(3).getrandbits(2048)
    code, rep = run_json(capsys, "decompose", "--tt", f"{bits:0512x}", "--vars", "11", "--late", "0,1,2,3,4")
    assert code == 1
    assert rep["feasible"] is False and rep["smallest_mu"] > 2


def test_decompose_small_function(capsys):
    code, out, _ = run(capsys, "decompose", "--tt", "CA", "--vars", "3")
    assert code == 0 and "single 6-LUT" in out


@pytest.mark.parametrize("argv", [
    ["decompose", "--tt", "zz", "--vars", "3"],
    ["decompose", "--tt", "CA", "--vars", "12"],
    ["decompose", "--tt", "CA", "--vars", "3", "-K", "7"],
    ["decompose", "--tt", "1" * 128, "--vars", "9", "--late", "0,x"],
    ["decompose", "--tt", "1" * 128, "--vars", "9", "--late", "9"],
    ["decompose", "--tt", "1" * 128, "--vars", "9", "--late", "0,1,2,3,4,5"],
    ["map", "missing.aag"],
    ["map", "x.aag", "-Z", "6"],
    ["bench", "--samples", "-1"],
    ["bench", "--vars", "6"],
    ["bench", "--source", "nowhere"],
    ["frobnicate"],
    [],
])
def test_bad_input_exit_two(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_map_malformed_file(capsys, tmp_path):
    bad = tmp_path / "bad.aag"
    bad.write_text("aag 3 2 0 1 1\n2\n4\n6\n6 2\n")
    code, _, err = run(capsys, "map", str(bad))
    assert code == 2 and "bad.aag" in err


def test_map_bar(capsys, epfl, tmp_path):
    out = tmp_path / "bar.blif"
    code, rep = run_json(capsys, "map", str(epfl / "bar.aag"), "--verify", "-o", str(out))
    assert code == 0
    assert rep["depth"] == rep["mapped_arrival"] == 4
    assert rep["mismatches"] == 0 and rep["delay_contract_violations"] == 0
    assert "seconds" not in rep
    net = read_blif(out.read_text())
    assert stats(net) == (rep["luts"], rep["edges"], rep["depth"])


def test_map_wide_cuts_reduce_depth(capsys, tmp_path):
    path = tmp_path / "late.aag"
    with open(path, "w") as fh:
        write_aag(late_leaf_fixture(0), fh)
    _, base = run_json(capsys, "map", str(path), "-Z", "0", "--verify")
    _, wide = run_json(capsys, "map", str(path), "-Z", "8", "--verify")
    assert base["depth"] == 3 and wide["depth"] == 2
    assert wide["wide_cuts"] == 1 and wide["mismatches"] == 0


def test_map_is_deterministic(capsys, tmp_path):
    path = tmp_path / "late.aag"
    with open(path, "w") as fh:
        write_aag(late_leaf_fixture(1), fh)
    first = run(capsys, "map", str(path), "--verify", "-o", str(tmp_path / "a.blif"))
    second = run(capsys, "map", str(path), "--verify", "-o", str(tmp_path / "b.blif"))
    assert first[1].replace("a.blif", "") == second[1].replace("b.blif", "")
    assert (tmp_path / "a.blif").read_text() == (tmp_path / "b.blif").read_text()


def test_bench_zero_samples(capsys):
    code, rep = run_json(capsys, "bench", "--samples", "0")
    assert code == 0
    assert rep["pairs"] == 0 and rep["success_rate"] == 0.0


def test_bench_random_is_deterministic(capsys):
    argv = ["bench", "--vars", "9", "--late", "2", "--samples", "20", "--seed", "5", "--verify"]
    code, a = run_json(capsys, *argv)
    _, b = run_json(capsys, *argv)
    assert code == 0 and a == b
    assert a["pairs"] == 200 and a["decomposed"] == a["verified"] == a["feasible"]


def test_bench_text_and_timing(capsys):
    code, out, _ = run(capsys, "bench", "--vars", "8", "--samples", "5", "--timing")
    assert code == 0
    assert "success" in out and "time" in out


def test_bench_harvest(capsys, epfl):
    code, rep = run_json(capsys, "bench", "--source", f"harvest:{epfl / 'bar.aag'}",
                         "--vars", "7", "--samples", "10")
    assert code == 0 and rep["samples"] > 0 and rep["pairs"] > 0
