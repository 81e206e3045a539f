"""Twisted complexes over a tabulated A-infinity category.

A complex is a list of summands ``(object, shift)`` (the object X[shift]) and
a strictly upper triangular connection ``delta`` stored as
``{(i, j, mor): coeff}``: the component ``coeff * s^(m_j - m_i) (x) mor`` from
summand i to summand j > i.  Morphisms between complexes use the same
``(i, j, mor)`` keys.
"""
import re
from fractions import Fraction

from .ainfty import NotComposable, add_into, sgn
from .linalg import Echelon, GradedComplex, Matrix, cohomology


class NotUpperTriangular(ValueError):
    pass


class MaurerCartanViolation(ValueError):
    def __init__(self, msg, residue=None):
        super().__init__(msg)
        self.residue = residue


class NotACocycle(ValueError):
    pass


class _Trie:
    __slots__ = ("kids", "value")

    def __init__(self):
        self.kids = {}
        self.value = None


def _trie(cat):
    t = getattr(cat, "_tw_trie", None)
    if t is not None:
        return t
    root = _Trie()
    for key, val in cat.full_table().items():
        node = root
        for m in reversed(key):
            node = node.kids.setdefault(m, _Trie())
        node.value = val
    cat._tw_trie = root
    return root


class TwistedComplex:
    def __init__(self, cat, summands, delta=None, name=None, check=True):
        self.cat = cat
        self.summands = [(X, int(m)) for X, m in summands]
        self.delta = {}
        for (i, j, mor), c in (delta or {}).items():
            c = Fraction(c)
            if c:
                self.delta[(i, j, mor)] = self.delta.get((i, j, mor), 0) + c
        self.name = name
        self._out = {}
        for (i, j, mor), c in self.delta.items():
            self._out.setdefault(i, []).append((j, mor, c))
        if check:
            self.validate()

    def __len__(self):
        return len(self.summands)

    def shift(self, i):
        return self.summands[i][1]

    def obj(self, i):
        return self.summands[i][0]

    def key(self):
        return (tuple(self.summands), tuple(sorted(((i, j, repr(m)), c) for (i, j, m), c in self.delta.items())))

    def __eq__(self, other):
        return isinstance(other, TwistedComplex) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        parts = [f"{X}[{m}]" for X, m in self.summands]
        return f"Tw({' + '.join(parts)}; {len(self.delta)} arrows)"

    def validate(self):
        for (i, j, mor), c in self.delta.items():
            if not i < j:
                raise NotUpperTriangular(f"delta component {i}->{j} is not above the diagonal")
            if mor.src != self.obj(i) or mor.tgt != self.obj(j):
                raise ValueError(f"delta component {i}->{j} has the wrong objects")
            d = mor.deg + self.shift(i) - self.shift(j)
            if d != 1:
                raise ValueError(f"delta component {i}->{j} has degree {d}, expected 1")
        res = mc_residue(self)
        if res:
            raise MaurerCartanViolation("Maurer-Cartan equation fails", res)
        return self

    def out(self, i):
        return self._out.get(i, ())

    def unit(self):
        return TwMor(self, self, {(i, i, self.cat.units[X]): 1 for i, (X, m) in enumerate(self.summands)})


class TwMor:
    """An element of Hom_Tw(src, tgt)."""

    def __init__(self, src, tgt, comps=None):
        self.src = src
        self.tgt = tgt
        self.comps = {}
        for k, c in (comps or {}).items():
            c = Fraction(c)
            if c:
                self.comps[k] = self.comps.get(k, 0) + c

    def degrees(self):
        return {key_degree(self.src, self.tgt, k) for k in self.comps}

    @property
    def degree(self):
        ds = self.degrees()
        if len(ds) > 1:
            raise ValueError("inhomogeneous morphism")
        return ds.pop() if ds else 0

    def __add__(self, other):
        return TwMor(self.src, self.tgt, add_into(dict(self.comps), other.comps))

    def __sub__(self, other):
        return TwMor(self.src, self.tgt, add_into(dict(self.comps), other.comps, -1))

    def __rmul__(self, c):
        return TwMor(self.src, self.tgt, {k: c * v for k, v in self.comps.items()})

    def __neg__(self):
        return (-1) * self

    def __eq__(self, other):
        return (isinstance(other, TwMor) and self.src == other.src and self.tgt == other.tgt
                and self.comps == other.comps)

    def is_zero(self):
        return not self.comps

    def __bool__(self):
        return bool(self.comps)

    def __repr__(self):
        return "TwMor(" + " + ".join(f"{c}*[{i}->{j}]{m.key}" for (i, j, m), c in sorted(
            self.comps.items(), key=lambda kv: (kv[0][0], kv[0][1], repr(kv[0][2])))) + ")"


def key_degree(src, tgt, key):
    i, j, mor = key
    return mor.deg + src.shift(i) - tgt.shift(j)


def mc_residue(w):
    out = {}
    _dfs(w.cat, [w], [], out, need_delta=True)
    return {k: v for k, v in out.items() if v}


def _dfs(cat, complexes, inputs, out, need_delta=False):
    """Sum over delta insertions of mu_addZ.

    ``complexes`` = [W_0, ..., W_n]; ``inputs`` = [a_1, ..., a_n] as comps
    dicts with a_k : W_{k-1} -> W_k.  Adds into ``out`` keyed (i, j, mor).
    """
    root = _trie(cat)
    n = len(inputs)
    W0 = complexes[0]

    def rec(k, cur, node, coeff, phisum, sexp, start, used):
        if k == n and node.value is not None and (used or not need_delta) and node is not root:
            last = complexes[n]
            for mo, c in node.value.items():
                key = (start, cur, mo)
                v = out.get(key, 0) + sgn(sexp) * coeff * c
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        W = complexes[k]
        # insert a delta of W_k
        for j, mor, c in W.out(cur):
            child = node.kids.get(mor)
            if child is None:
                continue
            pd = W.shift(cur) - W.shift(j)
            rec(k, j, child, coeff * c, phisum + pd, sexp + phisum * mor.rdeg, start, True)
        if k < n:
            V = complexes[k + 1]
            for (i, j, mor), c in inputs[k].items():
                if i != cur:
                    continue
                child = node.kids.get(mor)
                if child is None:
                    continue
                pd = W.shift(i) - V.shift(j)
                rec(k + 1, j, child, coeff * c, phisum + pd, sexp + phisum * mor.rdeg, start, used)

    for s0 in range(len(W0)):
        rec(0, s0, root, Fraction(1), 0, 0, s0, False)


def mu_tw(*morphisms):
    """mu^n_Tw(a_n, ..., a_1)."""
    ms = list(morphisms)
    if not ms:
        raise ValueError("need at least one morphism")
    first = list(reversed(ms))
    for a, b in zip(first, first[1:]):
        if a.tgt != b.src:
            raise NotComposable("complex chain broken")
    complexes = [first[0].src] + [m.tgt for m in first]
    out = {}
    _dfs(first[0].src.cat, complexes, [m.comps for m in first], out)
    return TwMor(complexes[0], complexes[-1], out)


def mu1(a):
    return mu_tw(a)


def mu2(b, a):
    return mu_tw(b, a)


def product(b, a):
    """Cohomological product [b][a] = (-1)^{|a|} mu^2(b, a)."""
    return sgn(a.degree) * mu_tw(b, a)


# -- Hom complexes -------------------------------------------------------------

class TwLayer:
    """Hom spaces between twisted complexes, in the shape the generic
    cohomology and isomorphism routines expect."""

    def basis(self, A, B):
        out = {}
        for i, (X, m) in enumerate(A.summands):
            for j, (Y, n) in enumerate(B.summands):
                for mor in A.cat.basis(X, Y):
                    out.setdefault(mor.deg + m - n, []).append((i, j, mor))
        return out

    def mu1(self, A, B, comps):
        return mu_tw(TwMor(A, B, comps)).comps

    def mu2(self, b, a, A, B, C):
        return mu_tw(TwMor(B, C, b), TwMor(A, B, a)).comps

    def unit(self, A):
        return A.unit().comps


TW = TwLayer()


class HomComplex:
    """Cochain complex Hom(A, B) with basis keys and the mu^1 matrices."""

    def __init__(self, layer, A, B, degrees=None):
        self.layer, self.A, self.B = layer, A, B
        self.basis = layer.basis(A, B)
        self.index = {k: {key: n for n, key in enumerate(keys)} for k, keys in self.basis.items()}
        self._d = {}
        self.degrees = sorted(self.basis)

    def dim(self, k):
        return len(self.basis.get(k, ()))

    def vec(self, comps, k):
        idx = self.index.get(k, {})
        v = [Fraction(0)] * len(idx)
        for key, c in comps.items():
            if key not in idx:
                raise ValueError(f"component {key} is not in degree {k}")
            v[idx[key]] = c
        return v

    def elem(self, vec, k):
        return {key: c for key, c in zip(self.basis.get(k, ()), vec) if c}

    def d(self, k):
        if k not in self._d:
            ent = {}
            for col, key in enumerate(self.basis.get(k, ())):
                img = self.layer.mu1(self.A, self.B, {key: Fraction(1)})
                for key2, c in img.items():
                    ent[(self.index[k + 1][key2], col)] = c
            self._d[k] = Matrix(self.dim(k + 1), self.dim(k), ent)
        return self._d[k]

    def graded(self, ks):
        spaces, diff = {}, {}
        for k in ks:
            for kk in (k - 1, k, k + 1):
                spaces[kk] = self.basis.get(kk, [])
        for k in ks:
            diff[k - 1] = self.d(k - 1)
            diff[k] = self.d(k)
        return GradedComplex(spaces, diff)

    def cohomology(self, k):
        dim, reps = cohomology(self.graded([k]), k)
        return dim, [self.elem(r, k) for r in reps]

    def coboundary_echelon(self, k):
        e = Echelon()
        for col in self.d(k - 1).transpose().row_dicts():
            e.add(col)
        return e

    def is_coboundary(self, comps, k):
        e = self.coboundary_echelon(k)
        v = self.vec(comps, k)
        return not e.reduce({i: c for i, c in enumerate(v) if c})

    def total_dims(self):
        return {k: self.cohomology(k)[0] for k in self.degrees}


def hom_complex(w1, w2):
    return HomComplex(TW, w1, w2)


def hom_cohomology(w1, w2, k):
    return HomComplex(TW, w1, w2).cohomology(k)


def hom_dims(w1, w2, lo=None, hi=None, layer=TW):
    hc = HomComplex(layer, w1, w2)
    ks = hc.degrees if lo is None else range(lo, hi + 1)
    return {k: hc.cohomology(k)[0] for k in ks}


def _solve_iso(layer, A, B, f):
    """Find h : B -> A of degree 0 with mu1 h = 0, [h][f] = 1_A, [f][h] = 1_B
    up to coboundaries.  Returns h (comps) or None."""
    hBA = HomComplex(layer, B, A)
    hAA = HomComplex(layer, A, A)
    hBB = HomComplex(layer, B, B)
    nh, n1, n2 = hBA.dim(0), hAA.dim(-1), hBB.dim(-1)
    rows_cyc, rows_a, rows_b = hBA.dim(1), hAA.dim(0), hBB.dim(0)
    ent = {}
    # unknown layout: h (nh) | b1 (n1) | b2 (n2)
    for col, key in enumerate(hBA.basis.get(0, ())):
        e = {key: Fraction(1)}
        for k2, c in layer.mu1(B, A, e).items():
            ent[(hBA.index[1][k2], col)] = c
        for k2, c in layer.mu2(e, f, A, B, A).items():
            ent[(rows_cyc + hAA.index[0][k2], col)] = c
        for k2, c in layer.mu2(f, e, B, A, B).items():
            ent[(rows_cyc + rows_a + hBB.index[0][k2], col)] = c
    dA = hAA.d(-1)
    for (r, c), v in dA.entries.items():
        ent[(rows_cyc + r, nh + c)] = v
    dB = hBB.d(-1)
    for (r, c), v in dB.entries.items():
        ent[(rows_cyc + rows_a + r, nh + n1 + c)] = v
    M = Matrix(rows_cyc + rows_a + rows_b, nh + n1 + n2, ent)
    rhs = [Fraction(0)] * M.rows
    for k2, c in layer.unit(A).items():
        rhs[rows_cyc + hAA.index[0][k2]] += c
    for k2, c in layer.unit(B).items():
        rhs[rows_cyc + rows_a + hBB.index[0][k2]] += c
    from .linalg import solve_affine
    x = solve_affine(M, rhs)
    if x is None:
        return None
    return hBA.elem(x[:nh], 0)


def is_h0_isomorphism(f, layer=TW, A=None, B=None):
    """(True, inverse) if the degree-0 cocycle f is invertible in H^0."""
    if isinstance(f, TwMor):
        A, B, comps = f.src, f.tgt, f.comps
        if f.comps and f.degree != 0:
            raise ValueError("f must have degree 0")
    else:
        comps = f
    if layer.mu1(A, B, comps):
        raise NotACocycle("f is not closed")
    h = _solve_iso(layer, A, B, comps)
    if h is None:
        return False, None
    return True, (TwMor(B, A, h) if layer is TW else h)


def equal_in_cohomology(layer, A, B, x, y, k):
    hc = HomComplex(layer, A, B)
    diff = add_into(dict(x), y, -1)
    return hc.is_coboundary(diff, k)


# -- constructions -------------------------------------------------------------

def shift_complex(w, m):
    return TwistedComplex(w.cat, [(X, s + m) for X, s in w.summands], dict(w.delta),
                          name=w.name, check=False)


def apply_functor_tw(F, w):
    delta = {}
    for (i, j, mor), c in w.delta.items():
        for m2, c2 in F.mor(mor).items():
            delta[(i, j, m2)] = delta.get((i, j, m2), 0) + c * c2
    return TwistedComplex(F.target, [(F.obj(X), s) for X, s in w.summands], delta,
                          name=w.name, check=False)


def apply_functor_mor(F, a, src=None, tgt=None):
    src = src or apply_functor_tw(F, a.src)
    tgt = tgt or apply_functor_tw(F, a.tgt)
    comps = {}
    for (i, j, mor), c in a.comps.items():
        for m2, c2 in F.mor(mor).items():
            comps[(i, j, m2)] = comps.get((i, j, m2), 0) + c * c2
    return TwMor(src, tgt, comps)


def pull_back_tw(F, w):
    """Inverse of apply_functor_tw along an injective basis map F: rewrites a
    complex of the target category whose entries all lie in the image."""
    inv = {}
    for m, c in F.mor_map.items():
        (img, v), = c.items()
        inv[img] = (m, v)
    for X in F.source.objects:
        inv[F.target.units[F.obj(X)]] = (F.source.units[X], 1)
    objs = {F.obj(X): X for X in F.source.objects}
    delta = {}
    for (i, j, mor), c in w.delta.items():
        if mor not in inv:
            raise ValueError(f"{mor.key} is not in the image")
        m, v = inv[mor]
        delta[(i, j, m)] = delta.get((i, j, m), 0) + c / v
    try:
        summands = [(objs[X], s) for X, s in w.summands]
    except KeyError as e:
        raise ValueError(f"object {e.args[0]} is not in the image") from None
    return TwistedComplex(F.source, summands, delta, name=w.name)


def single(cat, X, shift=0):
    return TwistedComplex(cat, [(X, shift)], {}, name=f"{X}[{shift}]" if shift else X, check=False)


def permute(w, order):
    """Reorder summands (order[k] = old index of new summand k); rechecks."""
    pos = {old: new for new, old in enumerate(order)}
    delta = {(pos[i], pos[j], m): c for (i, j, m), c in w.delta.items()}
    return TwistedComplex(w.cat, [w.summands[o] for o in order], delta, name=w.name)


def direct_sum(*ws):
    summands, delta, off = [], {}, 0
    for w in ws:
        summands.extend(w.summands)
        for (i, j, m), c in w.delta.items():
            delta[(i + off, j + off, m)] = c
        off += len(w)
    return TwistedComplex(ws[0].cat, summands, delta, check=False)


def mor_from_terms(src, tgt, terms):
    """Build a TwMor from [(coeff, i, j, mor)]."""
    comps = {}
    for c, i, j, mor in terms:
        comps[(i, j, mor)] = comps.get((i, j, mor), 0) + Fraction(c)
    return TwMor(src, tgt, comps)


_TW_BLOCK = re.compile(r"^\s*tw\s*\{(.*)\}\s*$", re.S)


def parse_tw(text, fc):
    """``tw { summand X[0]; summand Y[-1]; delta 0 1 = -1 * c1 + c2 }``.

    Summand indices in delta lines are 0-based; labels are M-segment names of
    the surface (``a0``, ``a0*ga2``, ``P[0:2]``) or units ``1:X``.
    """
    m = _TW_BLOCK.match(text)
    if not m:
        raise ValueError("expected tw { ... }")
    summands, delta = [], {}
    for stmt in m.group(1).split(";"):
        stmt = stmt.strip()
        if not stmt:
            continue
        if stmt.startswith("summand"):
            sm = re.fullmatch(r"summand\s+([^\s\[]+)\s*\[\s*(-?\d+)\s*\]", stmt)
            if not sm:
                sm2 = re.fullmatch(r"summand\s+(\S+)", stmt)
                if not sm2:
                    raise ValueError(f"bad summand {stmt!r}")
                summands.append((sm2.group(1), 0))
            else:
                summands.append((sm.group(1), int(sm.group(2))))
        elif stmt.startswith("delta"):
            dm = re.fullmatch(r"delta\s+(\d+)\s+(\d+)\s*=\s*(.+)", stmt)
            if not dm:
                raise ValueError(f"bad delta {stmt!r}")
            i, j = int(dm.group(1)), int(dm.group(2))
            for coeff, label in _terms(dm.group(3)):
                mor = fc.m(label)
                delta[(i, j, mor)] = delta.get((i, j, mor), 0) + coeff
        else:
            raise ValueError(f"unknown statement {stmt!r}")
    for X, _ in summands:
        if X not in fc.cat.objects:
            raise ValueError(f"unknown arc {X}")
    return TwistedComplex(fc.cat, summands, delta)


_COEFF = re.compile(r"\s*([+-]?\s*(?:\d+(?:/\d+)?)?)\s*\*\s*(.+)")


def _terms(expr):
    """``-2*c1 + 1/2*a0*ga2 - c2`` -> [(coeff, label)].  A leading factor is
    a coefficient only when it is a number; labels may contain ``*``."""
    out = []
    expr = expr.replace("-", "+-")
    for t in expr.split("+"):
        t = t.strip()
        if not t:
            continue
        sign = 1
        if t.startswith("-"):
            sign, t = -1, t[1:].strip()
        m = _COEFF.fullmatch(t)
        if m and m.group(1).strip():
            out.append((sign * Fraction(m.group(1).replace(" ", "")), m.group(2).strip()))
        else:
            out.append((Fraction(sign), t))
    return out
