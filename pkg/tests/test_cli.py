import io
import json
import os

import pytest

from orbifukaya.cli import run

from conftest import DATA


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def path(name):
    return os.path.join(DATA, name)


def test_header_lines():
    code, text = call("validate", path("triangle.surf"))
    lines = text.splitlines()
    assert code == 0
    assert lines[0] == "# orbifukaya 0.1.0 validate"
    assert lines[1].startswith("# input sha256 ") and len(lines[1].split()[-1]) == 16
    assert "verdict: valid" in text


def test_validate_dissection():
    code, text = call("validate", path("example1.dis"))
    assert code == 0 and "orbifold triangle: 1,2,3" in text


def test_invalid_surface_names_the_face(tmp_path):
    bad = open(path("triangle.surf")).read().replace("deg Q 1 = 1", "deg Q 1 = 3")
    f = tmp_path / "bad.surf"
    f.write_text(bad)
    code, text = call("validate", str(f))
    assert code == 1
    assert "corner degree sum" in text and "(a0, a1, a2)" in text


def test_usage_errors():
    assert call("frobnicate")[0] == 2
    assert call("hom", path("hexagon.surf"))[0] == 2
    assert call("validate", "/nonexistent/file.surf")[0] == 2


def test_stasheff_command():
    code, text = call("stasheff", path("band.surf"), "--max-n", "5")
    assert code == 0 and "violations: 0" in text
    code, text = call("stasheff", path("symband.surf"), "--max-n", "6", "--sample", "50", "--seed", "4")
    assert code == 0 and "violations: 0" in text


def test_hom_command():
    code, text = call("hom", path("hexagon.surf"), "--from", "tag(X,-)",
                      "--to", "tilde(X1=X1,X2=X2,a0=a0,a1=a1,a2=a2,sign=-)", "--degrees=-1..1")
    assert code == 0
    rows = [l.split() for l in text.splitlines() if l[:1] in "-0123456789" and len(l.split()) == 2]
    assert {int(a): int(b) for a, b in rows} == {-1: 0, 0: 1, 1: 0}


def test_hom_bad_object():
    code, text = call("hom", path("hexagon.surf"), "--from", "tag(X1,+)", "--to", "obj(X)")
    assert code == 1 and "error" in text


def test_endo_and_out(tmp_path):
    out = tmp_path / "ex2.quiver"
    code, text = call("endo", path("example2.dis"), "--out", str(out))
    assert code == 0
    body = out.read_text()
    assert "relation: +1*a2.a5 -1*a1.a4.a3" in body
    assert "coxeter 1 1 0 0 1 1" in body


def test_endo_surface_objects():
    code, text = call("endo", path("hexagon.surf"), "--objects", "tag(X,+);obj(X1);obj(X2)")
    assert code == 0 and "arrow a1: X^+ -> {X1}" in text


def test_tilt_and_emit_data(tmp_path):
    target = tmp_path / "fan.json"
    code, text = call("tilt", path("fan.dis"), f"--emit-data={target}")
    assert code == 0 and "tilting: yes" in text
    payload = json.loads(target.read_text())
    assert payload["command"] == "tilt" and payload["exit"] == 0


def test_tilt_non_rigid(tmp_path):
    text = open(path("fan.dis")).read().replace("tagP=- ", "tagP=+ ").replace("tagP=-", "tagP=+")
    f = tmp_path / "bad.dis"
    f.write_text(text)
    code, out = call("tilt", str(f))
    assert code == 1


def test_dn_small(tmp_path):
    code, text = call("dn", "--rank", "4", "--out", str(tmp_path))
    assert code == 0
    assert "non-skew-gentle iso classes:" in text
    assert (tmp_path / "summary.txt").exists()
    assert len(list(tmp_path.glob("*.quiver"))) == 51


def test_dn_rank_check(tmp_path):
    assert call("dn", "--rank", "2", "--out", str(tmp_path))[0] == 2
