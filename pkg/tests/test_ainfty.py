import os

from hypothesis import given, strategies as st

from orbifukaya.ainfty import check_stasheff, sgn
from orbifukaya.fukaya import build_category
from orbifukaya.surface import load_surface

from conftest import DATA


def cat_of(name, degrees=None):
    s = load_surface(os.path.join(DATA, name + ".surf"))
    if degrees:
        s = s.with_degrees(degrees)
    return build_category(s)


def test_sgn():
    assert sgn(0) == 1 and sgn(3) == -1 and sgn(-2) == 1


def test_strict_units():
    fc = cat_of("triangle")
    cat = fc.cat
    a = fc.m("a0")
    one_src, one_tgt = cat.units[a.src], cat.units[a.tgt]
    assert cat.mu((a, one_src)) == {a: 1}
    assert cat.mu((one_tgt, a)) == {a: (-1) ** a.deg}
    assert not cat.mu((one_src,))


def test_sampled_mode_agrees():
    cat = cat_of("symband").cat
    assert check_stasheff(cat, max_n=6, mode="sampled", seed=3, trials=200).ok


def test_broken_product_is_detected():
    fc = cat_of("triangle")
    cat = fc.cat
    key = next(k for k in cat.table if len(k) == 3)
    cat.table[key] = {m: 2 * c for m, c in cat.table[key].items()}
    assert not check_stasheff(cat, max_n=4).ok


@given(st.integers(-2, 2), st.integers(-2, 2))
def test_stasheff_random_triangle_grading(d0, d1):
    fc = cat_of("triangle", {("P", 1): d0, ("R", 1): d1, ("Q", 1): 1 - d0 - d1})
    assert check_stasheff(fc.cat, max_n=6).ok


@given(st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2))
def test_stasheff_random_band_grading(a1, c, a2):
    fc = cat_of("band", {("T", 1): a1, ("T", 2): c, ("T", 3): 1 - a1 - c,
                          ("B", 1): a2, ("B", 2): c, ("B", 3): 1 - a2 - c})
    assert check_stasheff(fc.cat, max_n=6).ok
