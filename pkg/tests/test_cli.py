import subprocess
import sys

import pytest

from nquasi.cli import main
from nquasi.fixtures import IRREDUCIBLE4_SHA256, digest, irreducible4
from nquasi.generate import cyclic_table
from nquasi.io import format_qtable, parse_qtable


def run(*args):
    return main([str(a) for a in args])


@pytest.fixture
def files(tmp_path):
    xor = tmp_path / "xor.qtable"
    xor.write_text("qtable v1 order=2 arity=2\n0 1\n1 0\n")
    broken = tmp_path / "broken.qtable"
    broken.write_text("qtable v1 order=2 arity=2\n0 1\n0 0\n")
    garbage = tmp_path / "garbage.qtable"
    garbage.write_text("not a table\n")
    irr4 = tmp_path / "irr4.qtable"
    assert run("fixture", "irreducible4", "--out", irr4) == 0
    return dict(xor=xor, broken=broken, garbage=garbage, irr4=irr4, dir=tmp_path)


def test_fixture_digest():
    fx = irreducible4()
    assert digest(fx.table) == IRREDUCIBLE4_SHA256
    assert fx.provenance


def test_check_exit_codes(files, capsys):
    assert run("check", files["xor"]) == 0
    assert run("check", files["broken"]) == 1
    assert run("check", files["garbage"]) == 2
    assert run("check", files["irr4"]) == 0
    assert run("check", files["dir"] / "missing") == 2
    out = capsys.readouterr().out
    assert "min_distance=2" in out


def test_check_mdscode(files):
    out = files["dir"] / "x.mds"
    assert run("fixture", "irreducible4", "--format", "mdscode", "--out", out) == 0
    assert run("check", out, "--format", "mdscode") == 0


def test_reduce(files, capsys, tmp_path):
    assert run("reduce", files["irr4"]) == 0
    assert "irreducible" in capsys.readouterr().out
    g = tmp_path / "g.qtable"
    assert run("gen", "group", "--order", 4, "--arity", 3, "--out", g) == 0
    assert parse_qtable(g.read_text()) == cyclic_table(4, 3)
    assert run("reduce", g) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[1] == "outer order=4 arity=2"
    assert run("reduce", files["xor"]) == 0
    assert "leaf order=2 arity=2 irreducible" in capsys.readouterr().out
    assert run("reduce", files["broken"]) == 1


def test_theorem1(files, capsys, tmp_path):
    assert run("theorem1", files["irr4"]) == 0
    out = capsys.readouterr().out
    assert "k=3" in out and "hypothesis not met" in out
    assert run("theorem1", files["xor"]) == 2
    a = tmp_path / "a.qtable"
    assert run("gen", "planted-superposition", "--order", 4, "--groups", "0,4,5;1,6;2;3", "--seed", 3, "--out", a) == 0
    assert run("--threads", 2, "theorem1", a, "--strict") == 0
    out = capsys.readouterr().out
    assert "groups: 0,4,5 1,6 2 3" in out and "theorem1 v1" in out


@pytest.mark.parametrize("kind,extra", [
    ("group", ["--arity", 3]),
    ("random-isotope-of-group", ["--arity", 3]),
    ("random-search-irreducible", ["--arity", 3]),
    ("planted-superposition", ["--groups", "0,4,5;1,6;2;3"]),
    ("planted-superposition", ["--groups", "0,2;1,3;4", "--outer", "random"]),
])
def test_gen_deterministic_and_valid(tmp_path, kind, extra):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run("gen", kind, "--order", 4, "--seed", 9, *extra, "--out", a) == 0
    assert run("gen", kind, "--order", 4, "--seed", 9, *extra, "--out", b) == 0
    assert a.read_text() == b.read_text()
    assert run("check", a) == 0


def test_gen_outer_from_file(tmp_path):
    k = tmp_path / "k"
    k.write_text(format_qtable(cyclic_table(3, 2)))
    out = tmp_path / "m"
    assert run("gen", "planted-superposition", "--order", 3, "--groups", "0,3;1;2", "--outer", k, "--out", out) == 0
    assert run("check", out) == 0


def test_gen_budget_exhausted(tmp_path, capsys):
    # every ternary quasigroup of order 2 is reducible
    assert run("gen", "random-search-irreducible", "--order", 2, "--arity", 3, "--budget", 5, "--out", tmp_path / "x") == 1
    assert "no irreducible" in capsys.readouterr().err


def test_gen_bad_groups(tmp_path):
    assert run("gen", "planted-superposition", "--order", 3, "--groups", "0,a;1", "--out", tmp_path / "x") == 2
    assert run("gen", "planted-superposition", "--order", 3, "--out", tmp_path / "x") == 2


def test_isotopic(files, tmp_path, capsys):
    assert run("isotopic", files["irr4"], files["irr4"]) == 0
    g0, g1 = tmp_path / "g0", tmp_path / "g1"
    g0.write_text(format_qtable(cyclic_table(4, 2)))
    g1.write_text(format_qtable(cyclic_table(4, 2, shift=1)))
    capsys.readouterr()
    assert run("isotopic", g0, g1) == 0
    assert len(capsys.readouterr().out.splitlines()) == 3
    # cyclic group versus the Klein group, confirmed by enumeration in the isotopy tests
    klein = tmp_path / "klein"
    klein.write_text("qtable v1 order=4 arity=2\n0 1 2 3\n1 0 3 2\n2 3 0 1\n3 2 1 0\n")
    assert run("isotopic", g0, klein) == 1
    assert "not isotopic" in capsys.readouterr().out
    assert run("isotopic", g0, files["xor"]) == 1


def test_console_script_entry(files):
    result = subprocess.run([sys.executable, "-m", "nquasi.cli", "check", str(files["xor"])], capture_output=True, text=True)
    assert result.returncode == 0
    assert result.stdout.startswith("valid")


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
