import os
from fractions import Fraction as Fr

import pytest

from orbifukaya.fukaya import build_category, induced_involution
from orbifukaya.skew import (ConfigurationError, NotIdempotent, ParameterError, SkewCategory,
                             build_double_tagged, build_symmetric_band, build_tilde_arc,
                             corner_dims, make_split, pair_object, split_isomorphic, tag,
                             tilde_sign, whole)
from orbifukaya.surface import load_surface
from orbifukaya.twisted import hom_dims, single

from conftest import DATA


def skew(name):
    fc = build_category(load_surface(os.path.join(DATA, name + ".surf")))
    return fc, SkewCategory(fc.cat, induced_involution(fc))


@pytest.fixture(scope="module")
def hexagon():
    return skew("hexagon")


def test_tags_split_the_whole(hexagon):
    fc, sk = hexagon
    Xp, Xm = tag(sk, "X", 1), tag(sk, "X", -1)
    W = whole(sk, single(fc.cat, "X"))
    total = corner_dims(W, W, -2, 2)
    parts = [corner_dims(a, b, -2, 2) for a in (Xp, Xm) for b in (Xp, Xm)]
    assert total == {l: sum(p[l] for p in parts) for l in total}
    assert Xp.complement().idem == Xm.idem


def test_tag_is_not_a_pair(hexagon):
    fc, sk = hexagon
    with pytest.raises(ConfigurationError):
        tag(sk, "X1", 1)


def test_non_idempotent_rejected(hexagon):
    fc, sk = hexagon
    W = single(fc.cat, "X")
    e = {(0, 0, 0, fc.cat.units["X"]): Fr(2)}
    with pytest.raises(NotIdempotent):
        make_split(sk, W, e)


def test_skew_mu2_twists_by_g(hexagon):
    # Hom({X1},{X2}) = Hom(X1, X2) + Hom(gX1, X2) as graded spaces
    fc, sk = hexagon
    d = corner_dims(pair_object(sk, "X1"), pair_object(sk, "X2"), -2, 2)
    a = hom_dims(single(fc.cat, "X1"), single(fc.cat, "X2"), -2, 2)
    b = hom_dims(single(fc.cat, "gX1"), single(fc.cat, "X2"), -2, 2)
    assert d == {l: a[l] + b[l] for l in d}


def test_isomorphic_tags(hexagon):
    fc, sk = hexagon
    assert split_isomorphic(tag(sk, "X", 1), tag(sk, "X", 1))
    assert not split_isomorphic(tag(sk, "X", 1), tag(sk, "X", -1))


def test_tilde_configuration_errors(hexagon):
    fc, sk = hexagon
    with pytest.raises(ConfigurationError):
        build_tilde_arc(fc, sk, ("X2", "X1", "a0", "a1", "a2"))


def test_tilde_sign_two_summands():
    for s1 in range(-2, 3):
        assert tilde_sign([0], s1) == (-1) ** (s1 % 2)
    assert tilde_sign([1, 1], 0) == -1


def test_double_tagged_parameters():
    fc, sk = skew("dtband")
    with pytest.raises(ParameterError):
        build_double_tagged(fc, sk, "X", "Y", "c", 0, 0, 2, 1)
    with pytest.raises(ConfigurationError):
        build_double_tagged(fc, sk, "X", "Y", "c", 0, 5, 1, 1)
    with pytest.raises(ConfigurationError):
        build_double_tagged(fc, sk, "Z", "Y", "c", 0, 0, 1, 1)


def test_double_tagged_sum_is_band():
    fc, sk = skew("dtband")
    B = build_double_tagged(fc, sk, "X", "Y", "c", 0, 0, 1, 1)
    C = build_double_tagged(fc, sk, "X", "Y", "c", 0, 0, -1, -1)
    assert B.base == C.base
    assert B.complement().idem == C.idem


def test_symmetric_band_rejects_zero():
    fc, sk = skew("symband")
    with pytest.raises(ParameterError):
        build_symmetric_band(fc, sk, "X3", "X4", "a", "a1", 0, 0)
