import subprocess
import sys
from pathlib import Path

import pytest

from labelfree import __version__
from labelfree.cli import main

FIXTURES = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_spes3(capsys):
    code, out, _ = run(capsys, "run", "spes3")
    assert code == 0
    assert "0.918295834054" in out


def test_spes3_fermion(capsys):
    code, out, _ = run(capsys, "run", "spes3_fermion.scn")
    assert code == 0 and "0.918295834054" in out


def test_overlap_boson(capsys):
    code, out, _ = run(capsys, "run", "spes3_overlap_boson")
    assert code == 0 and "0.970950594455" in out


def test_overlap_fermion(capsys):
    code, out, _ = run(capsys, "run", "spes3_overlap_fermion")
    assert code == 0
    assert any(l.startswith("entropy") and l.endswith("1.000000000000") for l in out.splitlines())


def test_bell_overlap(capsys):
    code, out, _ = run(capsys, "run", "bell_overlap")
    assert code == 0
    lines = {tuple(l.split()[2:4]) for l in out.splitlines() if l.startswith("bell")}
    assert ("concurrence", "1.000000000000") in lines
    assert ("B_max", "2.828427124746") in lines


def test_csv_is_stable(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["run", "bell_overlap", "--csv", str(a)]) == 0
    assert main(["run", "bell_overlap", "--csv", str(b)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text(encoding="utf-8").splitlines()
    assert text[0] == "task,name,quantity,value"
    assert "slocc,coincidence,overlap l,0.707106781187+0j" in text


def test_corrupted_fixture_exit_2(capsys):
    code, _, err = run(capsys, "run", str(FIXTURES / "corrupted.scn"))
    assert code == 2
    assert len(err.strip().splitlines()) == 1


def test_scenario_errors_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.scn"
    bad.write_text("[system]\nstatistics = boson\nmodes = L\n[task]\nkind = norm\nstate = ghost\n", encoding="utf-8")
    code, _, err = run(capsys, "run", str(bad))
    assert code == 1 and "ghost" in err
    code, _, err = run(capsys, "run", str(tmp_path / "missing.scn"))
    assert code == 1
    null = tmp_path / "null.scn"
    null.write_text(
        "[system]\nstatistics = fermion\nmodes = L\n[single]\na = L | ↑\n"
        "[state s]\nkind = terms\nterm = 1 : a, a\n[task]\nkind = entropy\nstate = s\n",
        encoding="utf-8",
    )
    code, _, err = run(capsys, "run", str(null))
    assert code == 1 and "null" in err


def test_scenario_verify_task(tmp_path, capsys):
    f = tmp_path / "v.scn"
    f.write_text("[system]\nstatistics = fermion\nmodes = A, B\n[task]\nkind = verify\nlevels = 2\n", encoding="utf-8")
    code, out, _ = run(capsys, "run", str(f))
    assert code == 0 and "failed" in out


def test_verify_fermion_seeded(capsys):
    code, out, _ = run(capsys, "verify", "--statistics", "fermion", "--seed", "11", "--scenarios", "20", "--levels", "3")
    assert code == 0
    row = next(l for l in out.splitlines() if "pair rule, disjoint" in l)
    assert float(row.split()[-4]) <= 1e-10


def test_version_and_entry_point():
    res = subprocess.run([sys.executable, "-m", "labelfree.cli", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and __version__ in res.stdout


def test_list(capsys):
    code, out, _ = run(capsys, "list")
    assert code == 0 and "spes3.scn" in out
