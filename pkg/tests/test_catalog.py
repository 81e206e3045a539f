import os

import pytest

from orbifukaya.catalog import (build_entries, candidate_arcs, classify, coxeter_check,
                                dynkin_coxeter, enumerate_dissections, family, summary_text,
                                write_catalog)
from orbifukaya.orbifold import load_dissection, parse_dissection, validate_dissection

from conftest import DATA


@pytest.fixture(scope="module")
def d4():
    return classify(build_entries(enumerate_dissections(4)), 4)


def test_candidate_count():
    # 2 C(m, 2) chord classes and 2m tagged orbifold arcs
    assert len(candidate_arcs(4)) == 2 * 6 + 8


def test_rank_three():
    ds = enumerate_dissections(3)
    assert all(validate_dissection(d).ok for d in ds)
    assert all(len(d.arcs) == 3 for d in ds)


def test_rank_too_small():
    with pytest.raises(ValueError):
        enumerate_dissections(2)


def test_enumeration_has_no_duplicates():
    ds = enumerate_dissections(4)
    keys = {tuple(sorted(a.to_text().split(":", 1)[1] for a in d.arcs)) for d in ds}
    assert len(keys) == len(ds)


def test_d4_catalog(d4):
    # regression values for rank 4
    assert len(d4.entries) == 51
    assert len(d4.classes) == 11
    assert all(coxeter_check(e) for e in d4.entries)
    assert all(e.tilting.tilting for e in d4.entries)


def test_renumbered_entries_round_trip(d4):
    for e in d4.entries[:10]:
        d = parse_dissection(e.dissection.to_text())
        assert validate_dissection(d).ok


def test_families_of_examples():
    assert family(load_dissection(os.path.join(DATA, "example2.dis"))) == "4 orbifold arcs"
    assert family(load_dissection(os.path.join(DATA, "fan.dis"))) == "skew-gentle"
    assert family(load_dissection(os.path.join(DATA, "example1.dis"))).startswith("2 orbifold arcs")


def test_write_catalog(d4, tmp_path):
    write_catalog(d4, tmp_path)
    files = sorted(os.listdir(tmp_path))
    assert "summary.txt" in files
    assert len([f for f in files if f.endswith(".dis")]) == 51
    text = (tmp_path / "summary.txt").read_text()
    assert text == summary_text(d4)
    assert f"non-skew-gentle iso classes: {len(d4.non_skew_gentle_classes())}" in text
    assert "coxeter polynomial of type D4: 51/51" in text


def test_dynkin_coxeter_d4():
    assert dynkin_coxeter("D", 4) == [1, 1, 0, 1, 1]
