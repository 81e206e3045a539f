import os

import pytest
from hypothesis import given, strategies as st

from orbifukaya.fukaya import build_category, induced_involution
from orbifukaya.objects import (Context, ObjectSyntaxError, parse_object, parse_object_list,
                                split_top)
from orbifukaya.skew import SkewCategory, corner_dims
from orbifukaya.surface import load_surface

from conftest import DATA


def ctx(name, skew=True):
    fc = build_category(load_surface(os.path.join(DATA, name + ".surf")))
    return Context(fc, SkewCategory(fc.cat, induced_involution(fc)) if skew else None)


def test_split_top():
    assert split_top("a(b,c),d") == ["a(b,c)", "d"]
    assert split_top("tw{x; y};obj(X)", ";") == ["tw{x; y}", "obj(X)"]


def test_constructors():
    c = ctx("dtband")
    B = parse_object("dband(X=X,Y=Y,c=c,p=0,q=0,eP=+,eQ=-)", c)
    T = parse_object("tag(X,-)", c)
    assert corner_dims(B, T, -2, 2)[0] in (0, 1)
    assert parse_object("shift(tag(X,+),2)", c).base.summands == [("X", 2)]


def test_plain_surface_objects():
    c = ctx("triangle", skew=False)
    W = parse_object("tw{ summand X1[0]; summand X2[-1]; delta 0 1 = a1 }", c)
    X = parse_object("obj(X0)", c)
    assert corner_dims(X, W, -1, 1) == {-1: 0, 0: 1, 1: 0}
    with pytest.raises(ObjectSyntaxError, match="involution"):
        parse_object("tag(X0,+)", c)


@pytest.mark.parametrize("bad", ["obj(Q)", "tag(X)", "dband(X=X)", "nonsense", "frob(X)",
                                 "sband(X3=X3,X4=X4,a=a,a2=a1,colour=red)", "tag(X,*)"])
def test_syntax_errors(bad):
    with pytest.raises(ObjectSyntaxError):
        parse_object(bad, ctx("symband") if "sband" in bad else ctx("dtband"))


def test_object_list():
    objs = parse_object_list("tag(X,+);tag(X,-);obj(Z)", ctx("dtband"))
    assert len(objs) == 3


@given(st.integers(-3, 3), st.sampled_from(["+", "-"]))
def test_shift_round_trip(k, s):
    c = ctx("hexagon")
    A = parse_object(f"shift(tag(X,{s}),{k})", c)
    B = parse_object(f"tag(X,{s})", c)
    assert corner_dims(B, A, -4, 4) == {l: int(l == -k) for l in range(-4, 5)}
