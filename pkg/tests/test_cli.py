import json
import subprocess
import sys
from pathlib import Path

import pytest

from fhsets.cli import main
from fhsets.constructions import construct_3p, cyclotomic_bncrdp
from fhsets.files import dumps, load, loads, save

FIXTURES = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_construct_then_verify(tmp_path, capsys):
    out = tmp_path / "tv.json"
    code, text, _ = run(capsys, "construct", "tv", "--t", 2, "--v", 5, "-o", out)
    assert code == 0 and "(10, 2, 2; 5)" in text
    df = load(out)
    assert df.parameters == {"n": 10, "M": 2, "l": 5}
    code, text, _ = run(capsys, "verify", out)
    report = json.loads(text)
    assert code == 0 and report["pass"]
    assert report["profile"]["H"] == 2
    assert report["verdict"]["optimal"]


def test_construct_to_stdout_is_byte_identical(capsys):
    first = run(capsys, "construct", "threep", "--p", 13)[1]
    second = run(capsys, "construct", "threep", "--p", 13)[1]
    assert first == second
    assert first == dumps(loads(first).obj, parameters={"n": 39, "M": 2, "l": 10})


def test_verify_report_file_and_timing(tmp_path, capsys):
    src = tmp_path / "a.json"
    run(capsys, "construct", "a", "--p", 2, "--m", 3, "--u", 2, "-o", src)
    rep = tmp_path / "r.json"
    code, text, _ = run(capsys, "verify", src, "--report", rep, "--timing")
    assert code == 0
    report = json.loads(rep.read_text())
    assert "timing_s" in report
    assert report["profile"]["witness"].keys() == {"i", "j", "tau"}


def test_lowered_claim_fails(tmp_path, capsys):
    path = tmp_path / "s.json"
    save(construct_3p(13).fhs_set.with_claim(3), path)
    code, text, _ = run(capsys, "verify", path)
    assert code == 1
    claim = json.loads(text)["claims"][0]
    assert claim == {"name": "lambda", "expected": 3, "observed": 4, "pass": False}


def test_wrong_parameter_claim_fails(tmp_path, capsys):
    path = tmp_path / "s.json"
    save(construct_3p(13).fhs_set, path, parameters={"n": 39, "M": 2, "l": 11})
    assert run(capsys, "verify", path)[0] == 1


def test_optimality_claim_checked(tmp_path, capsys):
    path = tmp_path / "s.json"
    save(construct_3p(13).fhs_set, path, parameters={"optimal": False})
    assert run(capsys, "verify", path)[0] == 1


def test_structural_verification_agrees(tmp_path, capsys):
    path = tmp_path / "s.json"
    run(capsys, "construct", "threev", "--primes", 13, 17, "-o", path)
    code, text, _ = run(capsys, "verify", path, "--structural")
    assert code == 0
    assert json.loads(text)["profile"] == {"method": "structural", "H": 4}


def test_verify_relative_packing_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    save(cyclotomic_bncrdp(13, 4), path)
    code, text, _ = run(capsys, "verify", path)
    assert code == 0 and json.loads(text)["check"]["ok"]


@pytest.mark.parametrize("argv", [
    ("construct", "tv", "--t", 2, "--v", 4),
    ("construct", "threep", "--p", 5),
    ("construct", "vw", "--v", 25, "--e", 2),
    ("construct", "qv", "--v", 17, "--e", 2, "--w", 17, "--e-prime", 2),
    ("construct", "nv", "--w", 7),
    ("bounds", 0, 2, 3),
])
def test_parameter_errors_exit_two(argv, capsys):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_missing_file_exits_three(tmp_path, capsys):
    assert run(capsys, "verify", tmp_path / "nope.json")[0] == 3


def test_corrupt_file_exits_four(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"schema_version": 1, "kind": "fhs-set"}')
    code, _, err = run(capsys, "verify", bad)
    assert code == 4 and "schema error" in err


def test_bounds_table(capsys):
    code, text, _ = run(capsys, "bounds", 195, 2, 49)
    assert code == 0
    assert "peng-fan-second" in text and "peng-fan-simplified" in text
    code, text, _ = run(capsys, "bounds", 195, 2, 49, "--json")
    data = json.loads(text)
    assert data["bounds"]["peng-fan-second"] == 4 == data["bounds"]["peng-fan-simplified"]


def test_bounds_classifies_seventy_two(capsys):
    code, text, _ = run(capsys, "bounds", 72, 2, 9, "--lambda", 9)
    assert code == 0 and text.rstrip().endswith("lambda=9: not-optimal")


def test_bounds_single_sequence(capsys):
    data = json.loads(run(capsys, "bounds", 7, 1, 7, "--json")[1])
    assert data["bounds"]["lempel-greenberger"] == 0
    assert data["bounds"]["peng-fan-simplified"] is None


def test_export_import_round_trip(tmp_path, capsys):
    src, csv, back = tmp_path / "s.json", tmp_path / "s.csv", tmp_path / "b.json"
    run(capsys, "construct", "tv", "--t", 3, "--v", 7, "-o", src)
    assert run(capsys, "export", src, "-o", csv)[0] == 0
    assert csv.read_text().startswith("# n=21,M=2,l=7,lambda=3\n")
    assert run(capsys, "import", csv, "-o", back)[0] == 0
    assert load(back).content_hash == load(src).content_hash
    rows = run(capsys, "export", src, "--format", "rows")[1]
    assert len(rows.splitlines()) == 2


def test_export_rejects_designs(tmp_path, capsys):
    path = tmp_path / "r.json"
    save(cyclotomic_bncrdp(5, 2), path)
    assert run(capsys, "export", path)[0] == 2


def test_nv_and_kn_from_base_file(tmp_path, capsys):
    base = tmp_path / "base.json"
    run(capsys, "construct", "threep", "--p", 13, "-o", base)
    nv = tmp_path / "nv.json"
    code, text, _ = run(capsys, "construct", "nv", "--base", base, "--w", 11, "-o", nv)
    assert code == 0 and "(429, 2, 4; 110)" in text
    code, text, _ = run(capsys, "construct", "kn", "--base", base, "--t", 2, "-o", tmp_path / "kn.json")
    assert code == 0 and "(78, 1, 8; 10)" in text


def test_qv_from_fixture(tmp_path, capsys):
    out = tmp_path / "qv.json"
    code, text, _ = run(capsys, "construct", "qv", "--base", FIXTURES / "qv_base_p3_pp3_m3_a13_b2.json",
                        "--v", 29, "--e", 2, "--w", 29, "--e-prime", 2, "-o", out)
    assert code == 0 and "(65598, 4, 6; 11354)" in text


def test_catalog_lists_families(capsys):
    code, text, _ = run(capsys, "catalog")
    assert code == 0
    tags = [ln.split()[0] for ln in text.splitlines() if ln and not ln.startswith(" ")]
    assert tags == ["a", "tv", "threep", "cyclotomic", "threev", "nv", "vw", "kn", "qv"]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "fhsets", "bounds", "15", "2", "4", "--json"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["bounds"]["peng-fan-first"] == 4
