import os

import pytest
from hypothesis import given, strategies as st

from orbifukaya.surface import (InvolutionError, ParseError, ValidationError, load_surface,
                                parse_surface, validate_fullness, validate_involution)

from conftest import DATA

NAMES = ["triangle", "band", "hexagon", "symband", "dtband", "dtflip", "yconfig", "torus"]

TRIANGLE = open(os.path.join(DATA, "triangle.surf")).read()


def surf(name):
    return load_surface(os.path.join(DATA, name + ".surf"))


@pytest.mark.parametrize("name", NAMES)
def test_bundled_surfaces_round_trip(name):
    s = surf(name)
    t = parse_surface(s.to_text())
    assert t.to_text() == s.to_text()
    assert len(t.disc_faces()) - len(t.arcs) == t.euler()


@pytest.mark.parametrize("name", NAMES)
def test_bundled_surfaces_are_full(name):
    assert validate_fullness(surf(name)).ok


def test_triangle_faces():
    s = surf("triangle")
    kinds = sorted((f.kind, f.n_sides()) for f in s.disc_faces())
    # one polygon with three corners and a boundary face on each unmarked segment
    assert kinds.count(("FullyMarkedDisc", 3)) == 1
    assert len(kinds) == 4
    a0 = s.mseg_by_label("a0")
    assert s.degree(a0) == 0 and s.label(a0) == "a0"


def test_concat_labels():
    s = surf("band")
    c2, b1 = s.mseg_by_label("c2"), s.mseg_by_label("b1")
    both = s.mseg_by_label("c2*b1")
    assert s.degree(both) == s.degree(c2) + s.degree(b1)


def test_bad_degree_sum_names_the_face():
    text = TRIANGLE.replace("deg Q 1 = 1", "deg Q 1 = 2")
    with pytest.raises(ValidationError, match="corner degree sum 2"):
        parse_surface(text)


def test_unknown_directive():
    with pytest.raises(ParseError, match="unknown directive"):
        parse_surface(TRIANGLE + "colour red\n")


def test_missing_header():
    with pytest.raises(ParseError):
        parse_surface("genus 0\n")


def test_involution_must_cover_arcs():
    text = open(os.path.join(DATA, "hexagon.surf")).read()
    text = text.replace(" X1<->gX1", "")
    with pytest.raises(InvolutionError):
        parse_surface(text)


def test_involution_on_plain_surface():
    with pytest.raises(InvolutionError):
        validate_involution(surf("triangle"))


def test_shift_and_delete():
    s = surf("band")
    t = s.shift_arc("X", 1)
    assert t.arcs == s.arcs
    u = s.without_arcs(["X"])
    assert "X" not in u.arcs and len(u.arcs) == len(s.arcs) - 1


@given(st.integers(-3, 3), st.integers(-3, 3))
def test_with_degrees_round_trip(d0, d1):
    s = surf("triangle").with_degrees({("P", 1): d0, ("R", 1): d1, ("Q", 1): 1 - d0 - d1})
    t = parse_surface(s.to_text())
    assert t.degree(t.mseg_by_label("a0")) == d0
    assert t.degree(t.mseg_by_label("a1")) == d1
