import os

import pytest

from orbifukaya.fukaya import FullnessError, build_category, induced_involution, subsystem_functor
from orbifukaya.surface import load_surface, parse_surface

from conftest import DATA


def surf(name):
    return load_surface(os.path.join(DATA, name + ".surf"))


def test_triangle_disc_sequence():
    fc = build_category(surf("triangle"))
    # mu^3 around the disc returns the unit of the first source
    assert fc.mu("a2", "a1", "a0") == {"1:X0": 1}
    assert fc.mu("a0", "a2", "a1") == {"1:X1": 1}
    assert fc.mu("a1", "a0", "a2") == {"1:X2": 1}


def test_mu2_concatenation_sign():
    fc = build_category(surf("band"))
    s = fc.surface
    # mu^2(b, a) = (-1)^{|a|} ba with a = b1 the first segment travelled
    b1 = s.mseg_by_label("b1")
    assert fc.mu("c2", "b1") == {"c2*b1": (-1) ** s.degree(b1)}


def test_hexagon_mu4():
    fc = build_category(surf("hexagon"))
    assert fc.mu("a1", "a0*ga2", "ga1", "ga0*a2") == {"1:X2": 1}
    assert fc.mu("a0*ga2", "ga1", "ga0*a2", "a1") == {"1:X1": 1}


def test_no_collisions_on_bundled():
    for name in ["triangle", "band", "hexagon", "symband", "dtband", "yconfig", "torus"]:
        assert build_category(surf(name)).collisions == []


def test_unglued_has_fewer_products():
    s = surf("band")
    assert len(build_category(s, glue=False).cat.table) < len(build_category(s).cat.table)


def test_involution_is_strict():
    fc = build_category(surf("hexagon"))
    act = induced_involution(fc)
    assert not act.check()
    m = fc.m("a0")
    (gm,) = act.mor(m)
    assert fc.label(gm) == "ga0"


def test_subsystem_inclusion():
    s = surf("band")
    small = build_category(s.without_arcs(["X"]))
    F = subsystem_functor(small, build_category(s))
    assert not F.check()


def test_missing_boundary_arc():
    text = open(os.path.join(DATA, "triangle.surf")).read()
    # dropping X2 leaves a face whose boundary walk crosses an unmarked segment
    s = parse_surface(text, validate=False).without_arcs(["X2"])
    with pytest.raises(FullnessError):
        build_category(s)
