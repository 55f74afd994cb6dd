import csv
import io
import json
import subprocess
import sys

import pytest

from jordanlab.cli import run

GL2F5 = {"field": {"p": 5, "e": 1}, "n": 2, "generators": [[[2, 0], [0, 1]], [[4, 1], [4, 0]]]}
SL2F3 = {"field": {"p": 3, "e": 1}, "vars": 4, "polys": ["x11*x22-x12*x21-1"]}


@pytest.fixture
def files(tmp_path):
    g = tmp_path / "g.json"
    g.write_text(json.dumps(GL2F5))
    v = tmp_path / "v.json"
    v.write_text(json.dumps(SL2F3))
    return tmp_path, str(g), str(v)


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_decompose(files, capsys):
    _, g, _ = files
    assert run(["group", "decompose", "--in", g]) == 0
    doc = _json(capsys)
    assert doc["schema"] == "jordanlab/1"
    assert [s["order"] for s in doc["series"]] == [480, 240, 4, 1]
    assert doc["certificates"]["certified"]


def test_output_is_deterministic(files, capsys):
    tmp, g, _ = files
    a, b = tmp / "a.json", tmp / "b.json"
    assert run(["group", "decompose", "--in", g, "--out", str(a)]) == 0
    assert run(["group", "decompose", "--in", g, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_group_info_and_close(files, capsys):
    _, g, _ = files
    assert run(["group", "close", "--in", g]) == 0
    assert _json(capsys)["order"] == 480
    assert run(["group", "census", "--in", g]) == 0
    assert _json(capsys)["count_un"] == 25


def test_cap_group(files, capsys):
    _, g, _ = files
    assert run(["group", "close", "--in", g, "--cap-group", "10"]) == 2


def test_variety_points_and_dim(files, capsys):
    _, _, v = files
    assert run(["variety", "points", "--in", v]) == 0
    assert _json(capsys)["count"] == 24
    assert run(["variety", "dim", "--in", v, "--ktest", "2"]) == 0
    assert _json(capsys)["dimension"] == 3


def test_bounds(capsys):
    assert run(["bounds", "eval", "R27", "n=2"]) == 0
    assert _json(capsys)["value"] == "pow(2, pow(2, 8589934592))"
    assert run(["bounds", "eval", "R21", "d=3", "degV=2", "dimV=2", "D=16", "--output", "C"]) == 0
    assert _json(capsys)["value"] == str(12 ** 9)
    assert run(["bounds", "audit", "AUD5"]) == 0
    assert _json(capsys)["summary"]["SKIPPED"] == 1
    assert run(["bounds", "eval", "R99"]) == 2


def test_catalog_csv(capsys):
    assert run(["bounds", "catalog", "--max-order", "200", "--format", "csv"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert {r["tag"] for r in rows} >= {"A1(4)", "A1(7)"}


def test_dimest_csv(capsys):
    assert run(["dimest", "run", "--family", "SL2", "--kind", "UNIPOTENT_CONE", "--q", "5,7", "--format", "csv"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert [r["count"] for r in rows] == ["25", "49"]


def test_usage_errors(files, capsys):
    _, g, _ = files
    assert run(["group", "decompose", "--in", "/nonexistent.json"]) == 2
    assert run(["group", "nope"]) == 2
    assert run(["group", "decompose", "--in", g, "--format", "csv"]) == 2
    assert run(["group", "decompose", "--in", g, "--p", "3"]) == 2
    assert run(["dimest", "run", "--family", "SL2", "--kind", "UNIPOTENT_CONE", "--q", "6"]) == 2


def test_dry_run(files, capsys):
    _, g, _ = files
    assert run(["group", "decompose", "--in", g, "--dry-run"]) == 0
    assert _json(capsys)["valid"] is True


def test_escape_negative(files, tmp_path, capsys):
    _, g, v = files
    gens = {"field": {"p": 3}, "n": 2, "generators": [[[2, 0], [0, 1]]]}
    path = tmp_path / "c.json"
    path.write_text(json.dumps(gens))
    assert run(["group", "escape", "--in", str(path), "--variety", v]) == 1


def test_module_entry_point(files):
    _, g, _ = files
    out = subprocess.run([sys.executable, "-m", "jordanlab", "group", "close", "--in", g],
                         capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["order"] == 480
