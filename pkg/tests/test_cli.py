"""CLI surface: subcommands, formats, exit codes, determinism."""

import json
import math
from fractions import Fraction

import pytest

from cantorsum.cli import main, parse_system, parse_u, UsageError
from cantorsum.digits import Irrational


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parse_u_forms():
    assert parse_u("1/3", False) == Fraction(1, 3)
    assert parse_u("7", False) == Fraction(7)
    irr = parse_u("1.4142", True)
    assert isinstance(irr, Irrational) and irr.value == pytest.approx(1.4142)
    with pytest.raises(UsageError, match="ambiguous"):
        parse_u("1.4142", False)
    with pytest.raises(UsageError):
        parse_u("0/3", False)
    with pytest.raises(UsageError):
        parse_u("a/b", False)


def test_parse_system_forms():
    assert parse_system("base4").base == 4
    assert parse_system("square:3").base == 9
    assert parse_system("mixed:2:3").base == 6
    with pytest.raises(UsageError):
        parse_system("hex")
    with pytest.raises(UsageError):
        parse_system("square:4")  # non-prime surfaces as a usage error


def test_classify_json(capsys):
    code, out, _ = run_cli(capsys, "classify", "--u", "1/1")
    assert code == 0
    doc = json.loads(out)
    assert doc["branch"] == "SingularThinCase"
    assert doc["dimUpperBound"] == pytest.approx(math.log(3) / math.log(4))
    assert doc["n0"] == "1" and doc["nu"] == "3"


def test_classify_families(capsys):
    code, out, _ = run_cli(capsys, "classify", "--u", "1/3", "--family", "square:3")
    assert code == 0 and json.loads(out)["branch"] == "IntervalCase"
    code, out, _ = run_cli(capsys, "classify", "--u", "1/2", "--family", "kenyon")
    assert code == 0 and json.loads(out)["branch"] == "PositiveMeasure"
    code, out, _ = run_cli(capsys, "classify", "--u", "1/1", "--family", "multidim:2")
    doc = json.loads(out)
    assert doc["branch"] == "SingularThinCase"
    assert doc["dimUpperBound"] == pytest.approx(2 * math.log(3) / math.log(4))
    code, out, _ = run_cli(capsys, "classify", "--u", "2.718", "--irrational")
    assert json.loads(out)["branch"] == "IrrationalCase"


def test_collide_json(capsys):
    code, out, _ = run_cli(capsys, "collide", "--u", "1/3", "--nmax", "6")
    doc = json.loads(out)
    assert code == 0
    assert doc["found"] is True and doc["level"] == "2" and doc["nu"] == "14"
    a, b, a2, b2 = (int(doc["collisions"][0][k]) for k in ("A", "B", "A2", "B2"))
    assert 3 * a + b == 3 * a2 + b2


def test_vn_json(capsys):
    code, out, _ = run_cli(capsys, "vn", "--u", "1/3", "--n", "2")
    doc = json.loads(out)
    assert code == 0
    assert (doc["u"], doc["base"], doc["level"], doc["nu"]) == ("1/3", "4", "2", "14")
    assert {c["key"] for c in doc["collisions"]} == {"4", "16"}
    for c in doc["collisions"]:
        a, b, a2, b2, key = (int(c[k]) for k in ("A", "B", "A2", "B2", "key"))
        assert (a, b) != (a2, b2)
        assert 3 * a + b == 3 * a2 + b2 == key


def test_cover_csv(capsys):
    code, out, _ = run_cli(capsys, "cover", "--u", "2", "--nmax", "3")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,nu_n,union_measure,union_measure_float,boxdim"
    assert lines[1].startswith("1,4,1/1,1.0,")
    assert lines[3].startswith("3,64,1/1,1.0,")


def test_fourier_probe_csv(capsys):
    code, out, _ = run_cli(capsys, "fourier", "--u", "1/3", "--probe", "2:5")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "t,J,abs_value,tail_bound"
    vals = [float(line.split(",")[2]) for line in lines[1:]]
    assert len(vals) == 4
    assert max(vals) - min(vals) < 1e-8


def test_fourier_single_t(capsys):
    code, out, _ = run_cli(capsys, "fourier", "--u", "1/3", "--t", "100.0")
    assert code == 0 and len(out.strip().splitlines()) == 2


def test_fourier_requires_mode(capsys):
    code, _, err = run_cli(capsys, "fourier", "--u", "1/3")
    assert code == 1 and "fourier needs" in err


def test_raster_outputs(tmp_path, capsys):
    pgm = tmp_path / "b.pgm"
    code, out, _ = run_cli(capsys, "raster", "--resolution", "64", "--pgm", str(pgm))
    assert code == 0
    assert out.splitlines()[0] == "resolution,depth,occupied_fraction"
    assert pgm.read_bytes().startswith(b"P5\n64 64\n255\n")


def test_raster_usage_error(capsys):
    code, _, err = run_cli(capsys, "raster", "--resolution", "8")
    assert code == 1 and "resolution" in err


def test_sweep_csv_and_threads(capsys):
    code, out1, _ = run_cli(capsys, "sweep", "--pmax", "6", "--qmax", "6", "--nmax", "5")
    assert code == 0
    lines = out1.strip().splitlines()
    assert lines[0] == "p,q,branch,n0,nu,coherent"
    assert all(line.endswith(",true") for line in lines[1:])
    code, out2, _ = run_cli(capsys, "sweep", "--pmax", "6", "--qmax", "6", "--nmax", "5", "--threads", "2")
    assert code == 0 and out2 == out1  # byte-identical across thread counts


def test_resource_cap_exit_code(capsys):
    code, _, err = run_cli(capsys, "vn", "--u", "1/3", "--n", "14")
    assert code == 2 and "cap" in err
    # caps are flags, not constants
    code, _, _ = run_cli(capsys, "collide", "--u", "1/1", "--nmax", "13", "--materialize-cap", "13")
    assert code == 0


def test_usage_errors(capsys):
    code, _, err = run_cli(capsys, "classify", "--u", "0.5")
    assert code == 1 and "ambiguous" in err
    code, _, err = run_cli(capsys, "classify", "--u", "0/3")
    assert code == 1
    code, _, err = run_cli(capsys, "frobnicate")
    assert code == 1
    code, _, err = run_cli(capsys, "classify", "--u", "1/2", "--family", "warp:9")
    assert code == 1 and "family" in err


def test_output_to_file(tmp_path, capsys):
    out_path = tmp_path / "c.json"
    code, out, _ = run_cli(capsys, "classify", "--u", "2/3", "-o", str(out_path))
    assert code == 0 and out == ""
    doc = json.loads(out_path.read_text())
    assert doc["branch"] == "IntervalCase"


def test_determinism(capsys):
    _, out1, _ = run_cli(capsys, "cover", "--u", "5/3", "--nmax", "6")
    _, out2, _ = run_cli(capsys, "cover", "--u", "5/3", "--nmax", "6")
    assert out1 == out2


def test_selftest_passes(capsys):
    code, out, _ = run_cli(capsys, "selftest")
    assert code == 0
    assert "FAIL" not in out
    assert "checks passed" in out
