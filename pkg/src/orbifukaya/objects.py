"""The object mini-language of the command line.

    obj(X)                          the arc X ({X} when the surface has an involution)
    tag(X,+)                        X^+ for a G-invariant arc X
    shift(<object>,m)               shift by m
    dband(X=..,Y=..,c=..,p=0,q=0,eP=+,eQ=-)
    sband(X3=..,X4=..,a=..,a2=..,p=0,lambda=1,sign=+)
    tilde(X1=..,X2=..,a0=..,a1=..,a2=..,sign=+)
    tw{ summand X[0]; ...; delta 0 1 = ... }

On a surface without an involution objects live in Tw of the Fukaya category
itself; they are wrapped as split objects with the identity idempotent so
that Hom tables and endomorphism algebras are computed the same way.
"""
import re
from fractions import Fraction

from .skew import (SplitObject, build_double_tagged, build_symmetric_band, build_tilde_arc, tag,
                   whole)
from .twisted import TW, parse_tw, single


class ObjectSyntaxError(ValueError):
    pass


class Context:
    def __init__(self, fc, sk=None):
        self.fc, self.sk = fc, sk
        self.layer = sk if sk is not None else TW

    def wrap(self, W, name):
        if self.sk is not None:
            return whole(self.sk, W, name=name)
        return SplitObject(TW, W, TW.unit(W), name=name)

    def need_sk(self, what):
        if self.sk is None:
            raise ObjectSyntaxError(f"{what} needs a surface with an involution")
        return self.sk


def split_top(text, sep=","):
    """Split at ``sep`` outside brackets and braces."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if "".join(cur).strip():
        out.append("".join(cur).strip())
    return out


def _sign(v):
    if v in ("+", "+1", "1"):
        return 1
    if v in ("-", "-1"):
        return -1
    raise ObjectSyntaxError(f"expected a sign, got {v!r}")


def _kwargs(args, required, optional=()):
    kw = {}
    for a in args:
        k, eq, v = a.partition("=")
        if not eq:
            raise ObjectSyntaxError(f"expected key=value, got {a!r}")
        kw[k.strip()] = v.strip()
    missing = [k for k in required if k not in kw]
    if missing:
        raise ObjectSyntaxError(f"missing {', '.join(missing)}")
    extra = set(kw) - set(required) - set(optional)
    if extra:
        raise ObjectSyntaxError(f"unknown key {sorted(extra)[0]}")
    return kw


_CALL = re.compile(r"(\w+)\s*\((.*)\)", re.S)


def parse_object(text, ctx):
    text = text.strip()
    if text.startswith("tw"):
        try:
            W = parse_tw(text.replace("tw{", "tw {", 1), ctx.fc)
        except ValueError as e:
            raise ObjectSyntaxError(str(e)) from e
        return ctx.wrap(W, text)
    m = _CALL.fullmatch(text)
    if not m:
        raise ObjectSyntaxError(f"cannot parse object {text!r}")
    head, args = m.group(1), split_top(m.group(2))
    fc = ctx.fc
    if head == "obj":
        if len(args) != 1 or args[0] not in fc.cat.objects:
            raise ObjectSyntaxError(f"obj needs one arc of the surface, got {m.group(2)!r}")
        name = "{" + args[0] + "}" if ctx.sk is not None else args[0]
        return ctx.wrap(single(fc.cat, args[0]), name)
    if head == "tag":
        if len(args) != 2:
            raise ObjectSyntaxError("tag(X,sign)")
        return tag(ctx.need_sk("tag"), args[0], _sign(args[1]))
    if head == "shift":
        if len(args) != 2:
            raise ObjectSyntaxError("shift(object,m)")
        return parse_object(args[0], ctx).shifted(int(args[1]))
    if head == "dband":
        kw = _kwargs(args, ("X", "Y", "c"), ("p", "q", "eP", "eQ"))
        return build_double_tagged(fc, ctx.need_sk("dband"), kw["X"], kw["Y"], kw["c"],
                                   int(kw.get("p", 0)), int(kw.get("q", 0)),
                                   _sign(kw.get("eP", "+")), _sign(kw.get("eQ", "+")))
    if head == "sband":
        kw = _kwargs(args, ("X3", "X4", "a", "a2"), ("p", "lambda", "sign"))
        return build_symmetric_band(fc, ctx.need_sk("sband"), kw["X3"], kw["X4"], kw["a"], kw["a2"],
                                    int(kw.get("p", 0)), Fraction(kw.get("lambda", "1")),
                                    _sign(kw.get("sign", "+")))
    if head == "tilde":
        kw = _kwargs(args, ("X1", "X2", "a0", "a1", "a2"), ("sign",))
        tri = (kw["X1"], kw["X2"], kw["a0"], kw["a1"], kw["a2"])
        return build_tilde_arc(fc, ctx.need_sk("tilde"), tri, _sign(kw.get("sign", "+")))
    raise ObjectSyntaxError(f"unknown object constructor {head}")


def parse_object_list(text, ctx):
    return [parse_object(t, ctx) for t in split_top(text, ";")]
