import os
from fractions import Fraction as Fr

import pytest
from hypothesis import given, strategies as st

from orbifukaya.fukaya import build_category
from orbifukaya.surface import load_surface
from orbifukaya.twisted import (MaurerCartanViolation, NotUpperTriangular, TwistedComplex, TwMor,
                                _terms, direct_sum, hom_dims, is_h0_isomorphism, mu1, mu2,
                                parse_tw, permute, shift_complex, single)

from conftest import DATA


@pytest.fixture(scope="module")
def tri():
    return build_category(load_surface(os.path.join(DATA, "triangle.surf")))


@pytest.fixture(scope="module")
def band():
    return build_category(load_surface(os.path.join(DATA, "band.surf")))


def test_terms():
    assert _terms("-2*c1 + c2") == [(-2, "c1"), (1, "c2")]
    assert _terms("1/2*a0*ga2 - c1*b2") == [(Fr(1, 2), "a0*ga2"), (-1, "c1*b2")]


def test_parse_cone(tri):
    W = parse_tw("tw { summand X1[1]; summand X2[0]; delta 0 1 = a1 }", tri)
    assert W.summands == [("X1", 1), ("X2", 0)]
    assert hom_dims(W, W, -2, 2) == {-2: 0, -1: 0, 0: 1, 1: 0, 2: 0}


def test_parse_errors(tri):
    with pytest.raises(ValueError, match="unknown arc"):
        parse_tw("tw { summand Q[0] }", tri)
    with pytest.raises(ValueError, match="degree"):
        parse_tw("tw { summand X1[0]; summand X2[0]; delta 0 1 = a1 }", tri)
    with pytest.raises(NotUpperTriangular):
        TwistedComplex(tri.cat, [("X2", 0), ("X1", 1)], {(1, 0, tri.m("a1")): 1})


def test_maurer_cartan_violation(band):
    # two arrows whose composite does not cancel
    m = band.m
    with pytest.raises(MaurerCartanViolation):
        TwistedComplex(band.cat, [("Z1", 0), ("X", 0), ("Y", -1)],
                       {(0, 1, m("b1")): 1, (1, 2, m("c2")): 1})


def test_triangle_iso_has_inverse(tri):
    # X1[|a0|] -> X2[-|a2|] is isomorphic to X0
    d0, d2 = 0, 1
    Xt = TwistedComplex(tri.cat, [("X1", d0), ("X2", -d2)], {(0, 1, tri.m("a1")): 1})
    f = TwMor(single(tri.cat, "X0"), Xt, {(0, 0, tri.m("a0")): 1})
    ok, inv = is_h0_isomorphism(f)
    assert ok and inv.src is Xt
    assert hom_dims(Xt, Xt, -2, 2)[0] == 1


def test_shift_moves_hom(tri):
    X = single(tri.cat, "X0")
    for k in (-1, 0, 2):
        Y = shift_complex(single(tri.cat, "X1"), k)
        d = hom_dims(X, Y, -4, 4)
        base = hom_dims(X, single(tri.cat, "X1"), -4, 4)
        assert all(d[l] == base.get(l + k, 0) for l in range(-3, 3))


def test_direct_sum_and_permute(tri):
    A, B = single(tri.cat, "X0"), single(tri.cat, "X1")
    S = direct_sum(A, B)
    P = permute(S, [1, 0])
    assert hom_dims(S, S, -2, 2) == hom_dims(P, P, -2, 2)
    dS = hom_dims(S, S, -2, 2)
    parts = [hom_dims(u, v, -2, 2) for u in (A, B) for v in (A, B)]
    assert dS == {l: sum(p[l] for p in parts) for l in dS}


def test_mu1_of_unit(band):
    m = band.m
    B = TwistedComplex(band.cat, [("X", 0), ("Y", -1)], {(0, 1, m("c1")): 1, (0, 1, m("c2")): -1})
    assert mu1(B.unit()).is_zero()
    assert mu2(B.unit(), B.unit()) == B.unit()


@given(st.sampled_from([Fr(1), Fr(-1), Fr(2), Fr(1, 3), Fr(-5, 2)]))
def test_band_family_endomorphisms(lam):
    band = build_category(load_surface(os.path.join(DATA, "band.surf")))
    m = band.m
    B = TwistedComplex(band.cat, [("X", 0), ("Y", -1)], {(0, 1, m("c1")): 1, (0, 1, m("c2")): -lam})
    assert {l: v for l, v in hom_dims(B, B, -2, 2).items() if v} == {0: 1, 1: 1}
