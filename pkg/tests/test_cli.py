import io
import json
import subprocess
import sys

import pytest

from trivalent import cli
from trivalent.semantics import format_valuation, parse_valuation


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_check_counter():
    code, out, _ = invoke("check", "--scheme", "SK/SK", "--standard", "tt", "p | (q & ~q) => p")
    assert code == 0
    assert out == "invalid\ncounter: p=0, q=1/2\n"


def test_check_valid():
    code, out, _ = invoke("check", "--scheme", "SK/SK", "--standard", "st", "p | (q & ~q) => p")
    assert (code, out) == (0, "valid\n")


def test_interpolate_example():
    code, out, _ = invoke("interpolate", "--scheme", "SK/SK", "--std1", "ss", "--std2", "tt", "p | (q & ~q)", "p | q")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "outcome: interpolant"
    assert lines[1].startswith("interpolant: ")
    assert "leg 1 (ss): valid" in lines
    assert "leg 2 (tt): valid" in lines


def test_interpolate_blocked():
    code, out, _ = invoke("interpolate", "--scheme", "SK/SK", "--std1", "ss", "--std2", "tt", "p | q", "q | ~q")
    assert code == 0
    assert "outcome: no_interpolant" in out
    assert "block: ss_blocked" in out
    assert "(confirmed by clone search)" in out


def test_interpolate_other_standards_use_clone_search():
    code, out, _ = invoke("interpolate", "--json", "--scheme", "SK/SK", "--std1", "tt", "--std2", "st", "p | (q & ~q)", "p")
    assert code == 0
    rec = json.loads(out)
    assert rec["outcome"] == "no_interpolant" and rec["certificate"] == "clone-none"
    code, out, _ = invoke("interpolate", "--json", "--scheme", "SK/SK", "--std1", "st", "--std2", "st", "p & q", "p | r")
    rec = json.loads(out)
    assert rec["outcome"] == "interpolant" and rec["strategy"] in ("classical", "C", "D", "E", "F", "clone-search")


def test_eval():
    code, out, _ = invoke("eval", "--scheme", "WK/WK", "--valuation", "p=1,q=1/2", "p | q")
    assert (code, out) == (0, "1/2\n")


def test_schemes_lists_sixteen():
    code, out, _ = invoke("schemes")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 16
    assert lines[0].split()[0] == "SK/SK"
    assert lines[0].split()[1:] == ["0∧1/2=0", "1/2∧0=0", "1∨1/2=1", "1/2∨1=1"]
    assert len({line.split()[0] for line in lines}) == 16


def test_clone_command():
    code, out, _ = invoke("clone", "--scheme", "SK/SK", "--arity", "1", "--dump")
    assert code == 0
    assert out.splitlines()[0] == "SK/SK arity 1: 4 elements"
    assert len(out.splitlines()) == 5


def test_clone_arity_cap(monkeypatch):
    code, _, err = invoke("clone", "--scheme", "SK/SK", "--arity", "3")
    assert code == 1 and "cap" in err
    monkeypatch.setenv("TRIVALENT_ARITY_CAP", "1")
    assert invoke("clone", "--scheme", "SK/SK", "--arity", "2")[0] == 1


def test_table_schemes(verdicts, golden):
    code, out, _ = invoke("table", "--kind", "schemes", "--format", "text")
    assert code == 0
    assert out == golden["schemes"]


def test_classify_single_cell():
    code, out, _ = invoke("classify", "--scheme", "WK/LMK", "--std1", "ss", "--std2", "tt")
    assert code == 0
    assert out.startswith("WK/LMK ss/tt fails  p & q => ")
    assert out.rstrip().endswith("[clone-none]")


def test_classify_scheme(verdicts):
    code, out, _ = invoke("classify", "--scheme", "SK/SK")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 25
    assert sum(" holds " in line for line in lines) == 4


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["check", "--scheme", "SK/SK", "p => p"],
        ["check", "--scheme", "XX/SK", "--standard", "ss", "p => p"],
        ["check", "--scheme", "SK/SK", "--standard", "zz", "p => p"],
        ["check", "--scheme", "SK/SK", "--standard", "ss", "p & => p"],
        ["check", "--scheme", "SK/SK", "--standard", "ss", "p"],
        ["eval", "--scheme", "SK/SK", "--valuation", "p=1", "p & q"],
        ["eval", "--scheme", "SK/SK", "--valuation", "p=7", "p"],
        ["clone", "--scheme", "SK/SK", "--arity", "0"],
        ["table", "--kind", "bogus"],
        ["classify", "--jobs", "0"],
    ],
)
def test_usage_errors_exit_one(argv):
    code, out, err = invoke(*argv)
    assert code == 1
    assert out == ""
    assert err


def test_usage_error_prints_synopsis():
    _, _, err = invoke("check", "--scheme", "SK/SK", "p => p")
    assert "usage:" in err


def test_internal_error_exits_two(monkeypatch):
    def broken(args):
        raise AssertionError("inconsistent")

    monkeypatch.setitem(cli._COMMANDS, "schemes", broken)
    code, _, err = invoke("schemes")
    assert code == 2 and "internal error" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "--scheme", "SK/SK", "--valuation", "p=1/2", "~p"],
        ["check", "--scheme", "LMK/SK", "--standard", "ss", "p & q => q"],
        ["interpolate", "--scheme", "LMK/SK", "--std1", "ss", "--std2", "tt", "p & q", "(q | r) & (p | ~r)"],
        ["classify", "--scheme", "WK/WK", "--std1", "st", "--std2", "st"],
        ["table", "--kind", "independent", "--format", "csv"],
        ["schemes"],
        ["clone", "--scheme", "WK/WK", "--arity", "2"],
    ],
)
def test_json_records_parse(argv, verdicts):
    code, out, _ = invoke(argv[0], "--json", *argv[1:])
    assert code == 0
    rec = json.loads(out)
    assert isinstance(rec, dict) and rec


def test_json_fields():
    _, out, _ = invoke("check", "--json", "--scheme", "SK/SK", "--standard", "tt", "p | (q & ~q) => p")
    rec = json.loads(out)
    assert rec == {"scheme": "SK/SK", "standard": "tt", "inference": "p | (q & ~q) => p", "valid": False, "counter": "p=0, q=1/2"}
    _, out, _ = invoke("interpolate", "--json", "--scheme", "SK/SK", "--std1", "ss", "--std2", "tt", "p | (q & ~q)", "p | q")
    rec = json.loads(out)
    assert set(rec) >= {"outcome", "chi", "ss_leg", "tt_leg", "atoms_ok", "block", "certificate", "strategy"}
    assert rec["ss_leg"] and rec["tt_leg"] and rec["atoms_ok"]


def test_valuation_flag_round_trip():
    for text in ("p=1,q=1/2,r=0", "p=0", "a=1/2,b=1"):
        v = parse_valuation(text)
        assert parse_valuation(format_valuation(v)) == v
        code, out, _ = invoke("eval", "--json", "--scheme", "SK/SK", "--valuation", format_valuation(v), next(iter(v)))
        assert json.loads(out)["valuation"] == format_valuation(v)


def test_module_entry_point_is_utf8():
    proc = subprocess.run(
        [sys.executable, "-m", "trivalent", "eval", "--scheme", "SK/SK", "--valuation", "p=1/2", "p"],
        capture_output=True, env={"PYTHONIOENCODING": "ascii", "PATH": ""},
    )
    assert proc.returncode == 0
    assert proc.stdout.decode("utf-8") == "1/2\n"
    proc = subprocess.run([sys.executable, "-m", "trivalent", "schemes"], capture_output=True, env={"PYTHONIOENCODING": "ascii"})
    assert proc.returncode == 0 and "∧" in proc.stdout.decode("utf-8")
