import io
import subprocess
import sys

import pytest

from gammaloop.cli import run
from gammaloop.table import read_loop


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), stdout=buf)
    return code, buf.getvalue()


@pytest.fixture
def g21_files(tmp_path):
    group = tmp_path / "c21.loop"
    code, _ = call("construct", "--family", "semidirect", "--params", "7", "3", "2", "--out", str(group))
    assert code == 0
    gamma = tmp_path / "g21-gamma.loop"
    assert call("gamma", "--from-group", "--in", str(group), "--out", str(gamma))[0] == 0
    return group, gamma


def test_construct_cyclic():
    code, out = call("construct", "--family", "cyclic", "--params", "7")
    assert code == 0
    assert "loop 7" in out.splitlines()


def test_roundtrip_exit_zero(g21_files):
    _, gamma = g21_files
    code, out = call("roundtrip", "--as", "gamma", "--in", str(gamma))
    assert code == 0 and out.startswith("status=pass")


def test_roundtrip_precondition_is_exit_two(g21_files):
    group, _ = g21_files
    bruck = group.parent / "b.loop"
    call("bruck", "--from-group", "--in", str(group), "--out", str(bruck))
    code, out = call("roundtrip", "--as", "gamma", "--in", str(bruck))
    assert code == 2 and out.startswith("status=error")


def test_gamma_then_bruck_equals_bruck_from_group(g21_files, tmp_path):
    group, gamma = g21_files
    a, b = tmp_path / "a.loop", tmp_path / "b.loop"
    call("bruck", "--from-gamma", "--in", str(gamma), "--out", str(a))
    call("bruck", "--from-group", "--in", str(group), "--out", str(b))
    assert a.read_text() != "" and read_loop(str(a)) == read_loop(str(b))
    c = tmp_path / "c.loop"
    call("gamma", "--from-bruck", "--in", str(a), "--out", str(c))
    assert read_loop(str(c)) == read_loop(str(gamma))


def test_check_exit_codes(g21_files):
    _, gamma = g21_files
    assert call("check", "--variety", "gamma,automorphic", "--in", str(gamma))[0] == 0
    code, out = call("check", "--variety", "gamma,associative", "--in", str(gamma))
    assert code == 1 and out.startswith("status=fail")
    assert "associative.witness=" in out
    assert call("check", "--variety", "nonsense", "--in", str(gamma))[0] == 2
    assert call("check", "--identity", "x*y = yx", "--in", str(gamma))[0] == 2


def test_check_identity_file(g21_files, tmp_path):
    _, gamma = g21_files
    ids = tmp_path / "g.ids"
    ids.write_text("# commutative\nx*y = y*x\n")
    assert call("check", "--identities", str(ids), "--in", str(gamma))[0] == 0


def test_missing_file_is_input_error():
    code, out = call("check", "--variety", "gamma", "--in", "/nonexistent.loop")
    assert code == 2


def test_unknown_flag_rejected():
    with pytest.raises(SystemExit) as info:
        call("construct", "--family", "cyclic", "--params", "3", "--bogus")
    assert info.value.code == 2


def test_normalize_flag(tmp_path):
    p = tmp_path / "swapped.loop"
    p.write_text("loop 3\n1 2 0\n2 0 1\n0 1 2\n")
    assert call("convert", "--in", str(p))[0] == 2
    code, out = call("convert", "--in", str(p), "--normalize")
    assert code == 0 and out.splitlines()[1] == "0 1 2"


def test_analyze(g21_files):
    _, gamma = g21_files
    code, out = call("analyze", "--in", str(gamma), "--derived", "--sylow", "7", "--audit")
    assert code == 0
    assert "derived.orders=21,7,1" in out and "sylow7.order=7" in out


def test_iso(g21_files, tmp_path):
    group, gamma = g21_files
    assert call("iso", "--in", str(gamma), "--against", str(gamma))[0] == 0
    assert call("iso", "--in", str(group), "--against", str(gamma))[0] == 1


def test_search_writes_solutions(tmp_path):
    code, out = call("search", "--order", "6", "--gamma", "--up-to-iso", "--out-dir", str(tmp_path / "s"))
    assert code == 0 and "solutions=2" in out and "complete=true" in out
    assert len(list((tmp_path / "s").glob("*.loop"))) == 2


def test_search_budget_reported():
    code, out = call("search", "--order", "9", "--budget-ms", "20")
    assert "complete=false" in out and "stopped=wall-budget" in out


def test_experiment_example():
    code, out = call("experiment", "example-2.8")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "status=pass"
    assert "gamma=pass" in lines and "automorphic=fail" in lines


def test_output_is_byte_identical_across_runs_and_jobs(g21_files):
    _, gamma = g21_files
    a = call("analyze", "--in", str(gamma), "--center", "--derived", "--subloops")[1]
    b = call("--jobs", "4", "analyze", "--in", str(gamma), "--center", "--derived", "--subloops")[1]
    assert a == b


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gammaloop", "construct", "--family", "cyclic",
                           "--params", "3"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == "# cyclic(3)\nloop 3\n0 1 2\n1 2 0\n2 0 1\n"
