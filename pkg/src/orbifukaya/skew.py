"""The skew-group category (Tw A) * G for G = Z/2, split objects and the
tagged constructions.

A morphism {W} -> {W'} is stored as ``{(h, i, j, mor): coeff}``: the
component ``mor`` of g^h W -> W' from summand i of g^h W to summand j of W'.
Objects of the split closure are pairs (W, e) with e a chain-level idempotent.
"""
from fractions import Fraction

from .ainfty import NotComposable, add_into, sgn
from .linalg import Echelon
from .twisted import (HomComplex, TwistedComplex, TwMor, _dfs, apply_functor_tw, is_h0_isomorphism,
                      shift_complex)


class NotIdempotent(ValueError):
    def __init__(self, msg, defect=None):
        super().__init__(msg)
        self.defect = defect


class NotCocycle(ValueError):
    def __init__(self, msg, residue=None):
        super().__init__(msg)
        self.residue = residue


class ConfigurationError(ValueError):
    pass


class ParameterError(ValueError):
    pass


class SkewCategory:
    """(Tw A) * G for a strict involution ``action`` of A."""

    def __init__(self, cat, action):
        self.cat = cat
        self.action = action
        self._g = {}

    def g(self, W):
        """gW, cached so that g(gW) is W itself."""
        k = id(W)
        if k not in self._g:
            gW = apply_functor_tw(self.action.g, W)
            self._g[k] = (W, gW)
            self._g[id(gW)] = (gW, W)
        return self._g[k][1]

    def gpow(self, W, h):
        return self.g(W) if h % 2 else W

    def g_comps(self, comps):
        out = {}
        for (i, j, mor), c in comps.items():
            for m2, c2 in self.action.mor(mor).items():
                k = (i, j, m2)
                out[k] = out.get(k, 0) + c * c2
        return {k: v for k, v in out.items() if v}

    def gpow_comps(self, comps, h):
        return self.g_comps(comps) if h % 2 else comps

    # -- layer interface for HomComplex / is_h0_isomorphism --------------------
    def basis(self, A, B):
        out = {}
        for h in (0, 1):
            gA = self.gpow(A, h)
            for i, (X, m) in enumerate(gA.summands):
                for j, (Y, n) in enumerate(B.summands):
                    for mor in self.cat.basis(X, Y):
                        out.setdefault(mor.deg + m - n, []).append((h, i, j, mor))
        return out

    def mu1(self, A, B, comps):
        return self.mu([(A, B, comps)])

    def mu2(self, b, a, A, B, C):
        return self.mu([(B, C, b), (A, B, a)])

    def unit(self, A):
        return {(0, i, i, self.cat.units[X]): Fraction(1) for i, (X, m) in enumerate(A.summands)}

    def mu(self, morphisms):
        """mu^n on [(src, tgt, comps)] given as (a_n, ..., a_1)."""
        first = list(reversed(morphisms))
        for (s1, t1, _), (s2, t2, _) in zip(first, first[1:]):
            if t1 is not s2 and t1 != s2:
                raise NotComposable("skew morphisms do not compose")
        n = len(first)
        parts = []
        for A, B, comps in first:
            split = ({}, {})
            for (h, i, j, mor), c in comps.items():
                split[h][(i, j, mor)] = c
            parts.append(split)
        out = {}
        # choose a tag h_k for every input; input k is transported by the
        # product of the tags that come after it
        for tags in range(1 << n):
            hs = [(tags >> k) & 1 for k in range(n)]
            if any(not parts[k][hs[k]] for k in range(n)):
                continue
            after = [sum(hs[k + 1:]) % 2 for k in range(n)]
            total = sum(hs) % 2
            complexes = [self.gpow(first[0][0], total)]
            inputs = []
            for k in range(n):
                complexes.append(self.gpow(first[k][1], after[k]))
                inputs.append(self.gpow_comps(parts[k][hs[k]], after[k]))
            res = {}
            _dfs(self.cat, complexes, inputs, res)
            for (i, j, mor), c in res.items():
                key = (total, i, j, mor)
                v = out.get(key, 0) + c
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return out


class SkewMor:
    def __init__(self, sk, src, tgt, comps):
        self.sk, self.src, self.tgt = sk, src, tgt
        self.comps = {k: Fraction(v) for k, v in comps.items() if v}

    def part(self, h):
        """The Tw component g^h W -> W'."""
        return TwMor(self.sk.gpow(self.src, h), self.tgt,
                     {(i, j, m): c for (hh, i, j, m), c in self.comps.items() if hh == h})

    def __eq__(self, other):
        return isinstance(other, SkewMor) and self.comps == other.comps

    def __repr__(self):
        return f"SkewMor({len(self.comps)} terms)"


def mu_skew(sk, *morphisms):
    out = sk.mu([(m.src, m.tgt, m.comps) for m in morphisms])
    return SkewMor(sk, morphisms[-1].src, morphisms[0].tgt, out)


def tensor_g(sk, a, h):
    """a (x) g^h for a Tw morphism a : g^h W -> W'."""
    return {(h, i, j, m): c for (i, j, m), c in a.comps.items()}


class SplitObject:
    def __init__(self, sk, base, idem, name=None):
        self.sk = sk
        self.base = base
        self.idem = {k: Fraction(v) for k, v in idem.items() if v}
        self.name = name

    def __repr__(self):
        return f"Split({self.name or self.base!r})"

    def shifted(self, m):
        W = shift_complex(self.base, m)
        return SplitObject(self.sk, W, dict(self.idem), name=f"{self.name}[{m}]" if self.name else None)

    def complement(self):
        e = add_into(dict(self.sk.unit(self.base)), self.idem, -1)
        return SplitObject(self.sk, self.base, e, name=f"1-{self.name}" if self.name else None)


def make_split(sk, base, e, name=None, check=True):
    obj = SplitObject(sk, base, e, name)
    if check:
        validate_split(obj)
    return obj


def validate_split(obj):
    sk, W, e = obj.sk, obj.base, obj.idem
    hc = HomComplex(sk, W, W)
    for key in e:
        if key not in hc.index.get(0, {}):
            raise ValueError("idempotent must have degree 0")
    d = sk.mu1(W, W, e)
    if d:
        raise NotCocycle("mu^1(e) != 0", d)
    ee = sk.mu2(e, e, W, W, W)
    defect = add_into(dict(ee), e, -1)
    if defect:
        raise NotIdempotent("mu^2(e, e) != e", defect)
    return obj


def whole(sk, W, name=None):
    """{W} with the identity idempotent."""
    return SplitObject(sk, W, sk.unit(W), name=name)


def phi_idempotent(sk, W, phi, sign=1):
    """e = 1/2 (1 (x) 1 + sign * phi (x) g) for phi : gW -> W."""
    e = {k: Fraction(1, 2) * v for k, v in sk.unit(W).items()}
    for (i, j, m), c in phi.items():
        k = (1, i, j, m)
        e[k] = e.get(k, 0) + Fraction(sign, 2) * c
    return e


def check_phi(sk, W, phi):
    """mu^2_Tw(phi, g phi) = 1_W and mu^1 phi = 0; returns the defects."""
    gW = sk.g(W)
    f = TwMor(gW, W, phi)
    gf = TwMor(W, gW, sk.g_comps(phi))
    from .twisted import mu_tw
    d1 = mu_tw(f).comps
    d2 = add_into(dict(mu_tw(f, gf).comps), W.unit().comps, -1)
    return d1, d2


def corner_hom(A, B, ell):
    """Cohomology in degree ell of e_B Hom({W_A}, {W_B}) e_A.

    The idempotents act on H^ell(Hom(W_A, W_B)) by an idempotent operator;
    the corner is its image.  Returns (dim, representatives).
    """
    sk = A.sk
    hc = HomComplex(sk, A.base, B.base)
    dim, reps = hc.cohomology(ell)
    if not dim:
        return 0, []
    bounds = hc.coboundary_echelon(ell)
    out = []
    for r in reps:
        x = sk.mu2(r, A.idem, A.base, A.base, B.base)
        y = sk.mu2(B.idem, x, A.base, B.base, B.base)
        v = hc.vec(y, ell)
        if bounds.add({i: c for i, c in enumerate(v) if c}):
            out.append(y)
    return len(out), out


class CornerSpace:
    """H^ell of the corner e_B Hom(W_A, W_B) e_A with a fixed basis of
    representatives, and coordinates of corner cocycles in that basis."""

    def __init__(self, A, B, ell=0):
        self.A, self.B, self.ell = A, B, ell
        self.hc = HomComplex(A.sk, A.base, B.base)
        self.dim, self.reps = corner_hom(A, B, ell)
        self._bounds = self.hc.coboundary_echelon(ell)
        # augmented echelon: coboundaries, then the representatives tagged
        # by extra coordinates so that reduction reads off coefficients
        self._width = self.hc.dim(ell)
        self._ech = Echelon()
        for row in self._bounds.pivots.values():
            self._ech.add(dict(row))
        for k, r in enumerate(self.reps):
            v = self._vec(r)
            v[self._width + k] = Fraction(-1)
            self._ech.add(v)

    def _vec(self, comps):
        v = self.hc.vec(comps, self.ell)
        return {i: c for i, c in enumerate(v) if c}

    def coords(self, y):
        """Coefficients of the class of y in the basis ``reps``."""
        red = self._ech.reduce(self._vec(y))
        if any(i < self._width for i in red):
            raise NotCocycle("element is not a corner cocycle of this degree", red)
        return [red.get(self._width + k, Fraction(0)) for k in range(self.dim)]

    def elem(self, coords):
        out = {}
        for c, r in zip(coords, self.reps):
            if c:
                add_into(out, r, c)
        return out


def compose(sk, b, a, A, B, C):
    """[b][a] = (-1)^{|a|} mu^2(b, a) for a of degree ``|a|`` in the corner
    A -> B; here only degree 0 is needed, where the sign is +1."""
    return sk.mu2(b, a, A.base, B.base, C.base)


def corner_dims(A, B, lo, hi):
    return {ell: corner_hom(A, B, ell)[0] for ell in range(lo, hi + 1)}


def degree_window(A, B, pad=1):
    """Degrees where Hom(W_A, W_B) has chains, widened by ``pad``."""
    ks = HomComplex(A.sk, A.base, B.base).degrees
    if not ks:
        return 0, -1
    return min(ks) - pad, max(ks) + pad


def split_isomorphic(A, B):
    """Decide A = B in H^0 of the split closure by an exact affine solve on
    the corner complexes: f in e_B Hom e_A, h in e_A Hom e_B with
    [h][f] = e_A and [f][h] = e_B."""
    sk = A.sk
    fdim, freps = corner_hom(A, B, 0)
    hdim, hreps = corner_hom(B, A, 0)
    if not fdim or not hdim:
        return False
    # the corner of H^0 End is a unital algebra with unit [e]; solve over
    # the product of representative spaces in cohomology
    from itertools import product as iproduct
    hAA = HomComplex(sk, A.base, A.base)
    hBB = HomComplex(sk, B.base, B.base)
    if fdim == 1 and hdim == 1:
        f, h = freps[0], hreps[0]
        hf = sk.mu2(h, f, A.base, B.base, A.base)
        fh = sk.mu2(f, h, B.base, A.base, B.base)
        return _proportional_mod(hAA, hf, A.idem) and _proportional_mod(hBB, fh, B.idem)
    raise NotImplementedError("isomorphism test for corners of dimension > 1")


def _proportional_mod(hc, x, e):
    """x = c * e modulo coboundaries for some nonzero c."""
    bounds = hc.coboundary_echelon(0)
    vx = hc.vec(x, 0)
    ve = hc.vec(e, 0)
    rx = bounds.reduce({i: c for i, c in enumerate(vx) if c})
    re_ = bounds.reduce({i: c for i, c in enumerate(ve) if c})
    if not rx or not re_:
        return False
    j = min(re_)
    c = rx.get(j, 0) / re_[j]
    if not c:
        return False
    return all(rx.get(k, 0) == c * v for k, v in re_.items()) and set(rx) <= set(re_)


# -- constructions of tagged objects -------------------------------------------

def _g_arc(sk, X):
    return sk.action.obj(X)


def tag(sk, X, sign, shift=0):
    """X^sign for a G-invariant arc X: e = 1/2 (1 (x) 1 + sign 1_X (x) g)."""
    if _g_arc(sk, X) != X:
        raise ConfigurationError(f"{X} is not G-invariant")
    W = TwistedComplex(sk.cat, [(X, shift)], {}, name=X, check=False)
    e = phi_idempotent(sk, W, {(0, 0, sk.cat.units[X]): 1}, sign)
    return make_split(sk, W, e, name=f"{X}^{'+' if sign > 0 else '-'}")


def pair_object(sk, X, shift=0):
    """{X} for an arc that is not G-invariant; isomorphic to the image of X
    in the skew category (its corner with gX is the whole {X})."""
    W = TwistedComplex(sk.cat, [(X, shift)], {}, name=X, check=False)
    return whole(sk, W, name="{" + X + "}")


def _mor(fc, x):
    return fc.m(x) if isinstance(x, str) else x


def tilde_sign(reduced, sigma1):
    """Coefficient of phi: (-1)^{sigma1 + sum_{i<j} ||c_i|| ||c_j||} for the
    chain corners c_i.  With two summands this is (-1)^{|a0|}; the correction
    term makes e^{+phi} match X^+ for longer chains."""
    e = sigma1
    for i in range(len(reduced)):
        for j in range(i + 1, len(reduced)):
            e += reduced[i] * reduced[j]
    return sgn(e)


def tilde_object(fc, sk, corners, sigma1, sign=1, name=None):
    """The split object of a G-invariant arc crossing the polygon S_1 .. S_r
    gS_1 .. gS_r.

    ``corners`` is [d, c_1, ..., c_{r-1}] with d : gS_r -> S_1 and
    c_i : S_i -> S_{i+1}; ``sigma1`` is the degree of the corner from the arc
    to S_1.  The complex is S_1[sigma1] -> ... -> S_r and phi : gX~ -> X~ has
    the single component d."""
    d = _mor(fc, corners[0])
    chain = [_mor(fc, c) for c in corners[1:]]
    summands = [(d.tgt, sigma1)]
    delta = {}
    for i, c in enumerate(chain):
        if c.src != summands[-1][0]:
            raise ConfigurationError(f"corner {i + 1} does not leave summand {i}")
        summands.append((c.tgt, summands[-1][1] + c.deg - 1))
        delta[(i, i + 1, c)] = Fraction(1)
    r = len(summands)
    if d.src != _g_arc(sk, summands[-1][0]):
        raise ConfigurationError("the closing corner must run from g of the last summand")
    W = TwistedComplex(fc.cat, summands, delta, name=name or "~".join(X for X, _ in summands))
    phi = {(r - 1, 0, d): Fraction(tilde_sign([c.deg - 1 for c in chain], sigma1))}
    d1, d2 = check_phi(sk, W, phi)
    if d1 or d2:
        raise ConfigurationError("mu^2(phi, g phi) != 1 for this configuration")
    e = phi_idempotent(sk, W, phi, sign)
    return make_split(sk, W, e, name=f"{W.name}^{'+' if sign > 0 else '-'}phi")


def build_tilde_arc(fc, sk, triangle, sign=1):
    """X~ = X1[|a0|] -> X2[-|a2|] for the triangle (X1, X2, a0, a1, a2) of
    a G-invariant arc X: a0 : X -> X1, a1 : X1 -> X2, a2 : X2 -> X.

    phi is the corner a0 g(a2) : gX2 -> X1."""
    X1, X2, a0, a1, a2 = triangle
    s = fc.surface
    m0, m1, m2 = (_mor(fc, x) for x in (a0, a1, a2))
    X = m0.src
    if _g_arc(sk, X) != X:
        raise ConfigurationError(f"{X} is not G-invariant")
    if (m0.tgt, m1.src, m1.tgt, m2.src, m2.tgt) != (X1, X1, X2, X2, X):
        raise ConfigurationError("corners do not form the triangle X -> X1 -> X2 -> X")
    if m0.deg + m1.deg + m2.deg != 1:
        raise ConfigurationError("corner degrees do not sum to 1")
    seg2 = fc.mseg_of[m2]
    ga2 = type(seg2)(s.involution.seg_map[seg2.seg], seg2.lo, seg2.hi)
    d = s.concat(ga2, fc.mseg_of[m0])
    if d is None:
        raise ConfigurationError("a0 and g(a2) are not adjacent")
    return tilde_object(fc, sk, [fc.mor_of[d], m1], m0.deg, sign, name=f"{X1}~{X2}")


def band_complex(fc, X, Y, c1, c2, p, q, lam, name=None):
    """X[p] -> Y[q-1] with delta = s^{||c||} (x) (c1 + lam (-1)^{||c||} c2)."""
    m1, m2 = fc.m(c1), fc.m(c2)
    if m1.deg != m2.deg:
        raise ConfigurationError("the two band corners must have the same degree")
    if p + m1.deg != q:
        raise ConfigurationError(f"need p + |c| = q, got p={p}, |c|={m1.deg}, q={q}")
    delta = {(0, 1, m1): Fraction(1)}
    delta[(0, 1, m2)] = delta.get((0, 1, m2), 0) + Fraction(lam) * sgn(m1.deg - 1)
    return TwistedComplex(fc.cat, [(X, p), (Y, q - 1)], delta, name=name or f"B({X},{Y})")


def build_double_tagged(fc, sk, X, Y, c, p, q, eP, eQ):
    """B^{eP,eQ}: X[p] -> Y[q-1] with delta lam (-1)^{||c||} c + gc, lam = eP eQ,
    split by 1_X (x) (1 + eP (-1)^p g)/2 + 1_Y (x) (1 + eQ (-1)^{q-1} g)/2."""
    if eP not in (1, -1) or eQ not in (1, -1):
        raise ParameterError("signs must be +1 or -1")
    lam = eP * eQ
    if _g_arc(sk, X) != X or _g_arc(sk, Y) != Y:
        raise ConfigurationError("X and Y must be G-invariant")
    mc = fc.m(c)
    gc = next(iter(sk.action.mor(mc)))
    if (mc.src, mc.tgt) != (X, Y) or gc == mc:
        raise ConfigurationError(f"{c} must run from {X} to {Y} and differ from its g-image")
    if p + mc.deg != q:
        raise ConfigurationError(f"need p + |c| = q, got p={p}, |c|={mc.deg}, q={q}")
    delta = {(0, 1, mc): Fraction(lam) * sgn(mc.deg - 1), (0, 1, gc): Fraction(1)}
    W = TwistedComplex(fc.cat, [(X, p), (Y, q - 1)], delta, name=f"B({X},{Y})")
    phi = {(0, 0, fc.cat.units[X]): eP * sgn(p), (1, 1, fc.cat.units[Y]): eQ * sgn(q - 1)}
    d1, d2 = check_phi(sk, W, phi)
    if d1 or d2:
        raise ConfigurationError("phi is not an involutive isomorphism gB -> B")
    e = phi_idempotent(sk, W, phi, 1)
    s = lambda x: "+" if x > 0 else "-"
    return make_split(sk, W, e, name=f"B^{s(eP)}{s(eQ)}")


def build_symmetric_band(fc, sk, X3, X4, a, a2, p, lam, sign=1):
    """The G-invariant band X3[p], gX3[p] -> X4[p-1], gX4[p-1] with arrows
    lam a, g(a2), lam g(a), a2, split by e^{sign 1_B}.

    ``a`` runs X3 -> X4 and ``a2`` (the corner a') runs gX3 -> X4."""
    lam = Fraction(lam)
    if not lam:
        raise ParameterError("lambda must be nonzero")
    gX3, gX4 = _g_arc(sk, X3), _g_arc(sk, X4)
    ma, ma2 = fc.m(a), fc.m(a2)
    if (ma.src, ma.tgt) != (X3, X4) or (ma2.src, ma2.tgt) != (gX3, X4):
        raise ConfigurationError("corners do not match the symmetric band configuration")
    if ma.deg != 0 or ma2.deg != 0:
        raise ConfigurationError("the band corners must have degree 0")
    ga = next(iter(sk.action.mor(ma)))
    ga2 = next(iter(sk.action.mor(ma2)))
    delta = {(0, 2, ma): lam, (0, 3, ga2): Fraction(1), (1, 3, ga): lam, (1, 2, ma2): Fraction(1)}
    W = TwistedComplex(fc.cat, [(X3, p), (gX3, p), (X4, p - 1), (gX4, p - 1)], delta, name="B")
    gW = sk.g(W)
    # gW lists gX3, X3, gX4, X4: phi matches the summands back up
    U = fc.cat.units
    phi = {(0, 1, U[gX3]): 1, (1, 0, U[X3]): 1, (2, 3, U[gX4]): 1, (3, 2, U[X4]): 1}
    d1, d2 = check_phi(sk, W, phi)
    if d1 or d2:
        raise ConfigurationError("the swap is not an involutive isomorphism gB -> B")
    e = phi_idempotent(sk, W, phi, sign)
    return make_split(sk, W, e, name=f"B^{'+' if sign > 0 else '-'}")


# -- moving split objects between categories -----------------------------------

def transport_split(obj, W, check=False):
    """Conjugate the idempotent of ``obj`` to a complex W that is
    isomorphic to its base in H^0 Tw: e' = f e f^{-1}.  The result is an
    idempotent up to homotopy, so it is not validated by default."""
    from .twisted import hom_cohomology
    sk, B = obj.sk, obj.base
    d, reps = hom_cohomology(B, W, 0)
    for r in reps:
        ok, inv = is_h0_isomorphism(TwMor(B, W, r))
        if ok:
            break
    else:
        raise ConfigurationError("the complexes are not isomorphic in H^0")
    f = {(0,) + k: v for k, v in r.items()}
    h = {(0,) + k: v for k, v in inv.comps.items()}
    e = sk.mu2(f, sk.mu2(obj.idem, h, W, B, B), W, B, W)
    return make_split(sk, W, e, name=obj.name, check=check)


def pull_back_split(F, sk_small, obj):
    """Rewrite a split object of the big skew category whose entries lie in
    the image of the strict inclusion F."""
    from .twisted import pull_back_tw
    W = pull_back_tw(F, obj.base)
    inv = {}
    for m, c in F.mor_map.items():
        (img, v), = c.items()
        inv[img] = (m, v)
    for X in F.source.objects:
        inv[F.target.units[F.obj(X)]] = (F.source.units[X], 1)
    comps = {}
    for (h, i, j, mor), c in obj.idem.items():
        if mor not in inv:
            raise ConfigurationError(f"{mor.key} is not in the image")
        m, v = inv[mor]
        comps[(h, i, j, m)] = comps.get((h, i, j, m), 0) + c / v
    return SplitObject(sk_small, W, comps, name=obj.name)
