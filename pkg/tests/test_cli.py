import io
import json
import subprocess
import sys

import pytest

from conftest import TREFOIL_RH
from knotheta.cli import run
from knotheta.harness import bundled_corpus_path


def call(*argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err, stdin=io.StringIO(stdin))
    return code, out.getvalue(), err.getvalue()


def test_jones_of_unknot():
    assert call("jones", "--pd", "U") == (0, "q + q^-1\n", "")


def test_homfly_of_two_unlink():
    assert call("homfly", "--pd", "U U")[:2] == (0, "a*z^-1 - a^-1*z^-1\n")


def test_verify_trefoil():
    code, out, _ = call("verify", "--pd", TREFOIL_RH, "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["passed"] is True
    assert all(c["passed"] for c in doc["checks"])
    assert set(doc) == {"input", "invariant", "variables", "polynomial", "timings", "checks", "passed"}


@pytest.mark.parametrize("cmd", ["jones", "homfly", "homfly-statesum", "theta-j", "theta-h", "alexander"])
def test_json_schema(cmd):
    code, out, _ = call(cmd, "--gauss", "O1+U2+O3+U1+O2+U3+", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert set(doc) == {"input", "invariant", "variables", "polynomial", "timings"}
    assert doc["invariant"] == cmd and doc["timings"] == {}
    assert doc["input"] == {"gauss": "O1+U2+O3+U1+O2+U3+"}


def test_engines_agree_through_cli():
    outs = {cmd: call(cmd, "--pd", TREFOIL_RH)[1] for cmd in ("homfly", "homfly-statesum", "theta-h")}
    assert len(set(outs.values())) == 1
    assert call("jones", "--pd", TREFOIL_RH)[1] == call("theta-j", "--pd", TREFOIL_RH)[1]
    assert call("alexander", "--pd", TREFOIL_RH)[1] == "t - 1 + t^-1\n"


def test_half_powers_only_when_needed():
    assert call("alexander", "--pd", "X[4,1,3,2] X[2,3,1,4]")[1].count("s") > 0


def test_output_identical_across_threads():
    outs = {call("theta-j", "--pd", TREFOIL_RH, "--threads", str(t), "--format", "json")[1]
            for t in (1, 2, 4)}
    assert len(outs) == 1


def test_exit_codes():
    assert call("jones", "--pd", "X[1,2,3")[0] == 1
    assert call("jones", "--pd", TREFOIL_RH, "--max-crossings", "2")[0] == 2
    assert call("jones")[0] == 1
    assert call("jones", "--pd", "U", "--gauss", "O1+U1+")[0] == 1
    assert call("theta-h", "--pd", TREFOIL_RH, "--cut-basepoint", "9")[0] == 1


def test_file_and_stdin(tmp_path):
    f = tmp_path / "k.pd"
    f.write_text(TREFOIL_RH + "  # right-handed trefoil\n")
    ref = call("jones", "--pd", TREFOIL_RH)[1]
    assert call("jones", "--file", str(f))[1] == ref
    assert call("jones", "--file", "-", stdin=TREFOIL_RH)[1] == ref
    assert call("jones", "--file", str(tmp_path / "missing"))[0] == 1


def test_ledger_and_surface_dump():
    code, out, _ = call("theta-h", "--pd", TREFOIL_RH, "--ledger", "--dump-surface", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and len(doc["ledger"]) == len(doc["surface"]) == 4
    code, out, _ = call("theta-j", "--pd", "X[1,1,2,2]", "--ledger")
    assert code == 0 and len(out.splitlines()) == 3


def test_literal_flag():
    assert "s" in call("theta-j", "--pd", "U", "--literal")[1]


def test_timings_flag():
    doc = json.loads(call("jones", "--pd", "U", "--format", "json", "--timings")[1])
    assert set(doc["timings"]) == {"parse", "compute"}


def test_outer_edge_does_not_change_values():
    ref = call("theta-h", "--pd", TREFOIL_RH)[1]
    for e in range(1, 7):
        assert call("theta-h", "--pd", TREFOIL_RH, "--outer-edge", str(e))[1] == ref


def test_batch(tmp_path):
    assert call("batch", str(bundled_corpus_path()))[0] == 0
    bad = tmp_path / "bad.csv"
    bad.write_text("name,pd,aliases,expected_jones,expected_homfly\n"
                   "unknot,U,,,\nbroken,\"X[1,2\",,,\nwrong,U,\"X[1,1,2,2]\",q^3,\n")
    assert call("batch", str(bad))[0] == 1
    code, out, err = call("batch", str(bad), "--lenient")
    assert code == 3 and "line 3" in err and "wrong: FAIL" in out


def test_verify_failure_exit_code(tmp_path):
    bad = tmp_path / "one.csv"
    bad.write_text("name,pd,aliases,expected_jones,expected_homfly\nx,U,\"X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]\",,\n")
    assert call("batch", str(bad))[0] == 3


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "knotheta", "jones", "--pd", "U"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "q + q^-1\n"
