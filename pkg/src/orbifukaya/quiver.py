"""Finite-dimensional basic algebras given by structure constants, their
Gabriel quivers with relations, and derived invariants.

An algebra here is a small category: vertices u, finite-dimensional spaces
Hom(u, v) with fixed bases, and a composition table.  Paths are written in
travel order, so the path (a, b) with a: u -> v and b: v -> w is the
composite b o a.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from math import gcd

from .linalg import Echelon, Matrix, kernel_basis


class NotBasicReducible(ValueError):
    pass


class FDAlgebra:
    """``dims[(u, v)]`` is dim Hom(u, v); ``mul[(u, v, w)]`` maps a pair of
    basis indices (i in Hom(v, w), j in Hom(u, v)) to a coordinate dict in
    Hom(u, w); ``unit[u]`` is the coordinate dict of the identity of u."""

    def __init__(self, vertices, dims, mul, unit, mul_fn=None):
        self.vertices = list(vertices)
        self.dims = {k: v for k, v in dims.items() if v}
        self.mul = dict(mul)
        self.unit = unit
        self.mul_fn = mul_fn    # computes a missing table on demand

    def table(self, u, v, w):
        if (u, v, w) not in self.mul:
            ok = self.dim(u, v) and self.dim(v, w) and self.dim(u, w)
            self.mul[(u, v, w)] = self.mul_fn(u, v, w) if ok and self.mul_fn else {}
        return self.mul[(u, v, w)]

    def restrict(self, keep):
        keep = list(keep)
        dims = {(u, v): n for (u, v), n in self.dims.items() if u in keep and v in keep}
        mul = {k: t for k, t in self.mul.items() if all(x in keep for x in k)}
        return FDAlgebra(keep, dims, mul, {u: self.unit[u] for u in keep}, self.mul_fn)

    def dim(self, u, v):
        return self.dims.get((u, v), 0)

    def total_dim(self):
        return sum(self.dims.values())

    def compose(self, b, a, u, v, w):
        """b o a for coordinate dicts a in Hom(u, v), b in Hom(v, w)."""
        out = {}
        table = self.table(u, v, w)
        for i, x in b.items():
            for j, y in a.items():
                for k, c in table.get((i, j), {}).items():
                    out[k] = out.get(k, 0) + x * y * c
        return {k: c for k, c in out.items() if c}

    def radical_of_end(self, u):
        """rad End(u) by Dickson's criterion (characteristic 0): x is in the
        radical iff tr(L_{xy}) = 0 for all y."""
        n = self.dim(u, u)
        if n == 0:
            return []

        def trace_left(x):
            t = Fraction(0)
            for j in range(n):
                t += self.compose(x, {j: Fraction(1)}, u, u, u).get(j, 0)
            return t
        gram = [[trace_left(self.compose({i: Fraction(1)}, {j: Fraction(1)}, u, u, u))
                 for j in range(n)] for i in range(n)]
        rad = kernel_basis(Matrix.from_rows(gram))
        if n - len(rad) != 1:
            raise NotBasicReducible(f"End({u}) is not local")
        return [{k: c for k, c in enumerate(v) if c} for v in rad]


def is_iso(alg, u, v):
    """u = v iff some g o f (f: u -> v, g: v -> u) is a unit of the local
    ring End(u)."""
    if u == v:
        return True
    fs, gs = alg.dim(u, v), alg.dim(v, u)
    if not fs or not gs:
        return False
    rad = Echelon()
    for r in alg.radical_of_end(u):
        rad.add(r)
    for i in range(gs):
        for j in range(fs):
            x = alg.compose({i: Fraction(1)}, {j: Fraction(1)}, u, v, u)
            if rad.reduce(x):
                return True
    return False


def _fmt_coeff(c):
    s = "+" if c > 0 else "-"
    return f"{s}{abs(c)}"


@dataclass
class QuiverPresentation:
    vertices: list
    arrows: list                      # (name, source, target)
    relations: list                   # [[(coeff, path), ...], ...]
    cartan: list                      # cartan[u][v] = dim Hom(u, v)
    coxeter: list                     # integer coefficients, leading first
    ideal: list = field(default_factory=list)   # basis of I up to max_len + 1
    max_len: int = 4
    complete: bool = True
    dim: int = 0

    def arrow(self, name):
        return next(a for a in self.arrows if a[0] == name)

    def to_text(self):
        lines = [f"vertex {v}" for v in self.vertices]
        lines += [f"arrow {n}: {s} -> {t}" for n, s, t in self.arrows]
        for r in self.relations:
            terms = " ".join(f"{_fmt_coeff(c)}*{'.'.join(p)}" for c, p in r)
            lines.append(f"relation: {terms}")
        for row in self.cartan:
            lines.append("cartan " + " ".join(str(x) for x in row))
        lines.append("coxeter " + " ".join(str(x) for x in self.coxeter))
        if not self.complete:
            lines.append(f"# relations not certified up to length {self.max_len}")
        return "\n".join(lines) + "\n"

    def cartan_det(self):
        return _det([[Fraction(x) for x in r] for r in self.cartan])


def _det(m):
    m = [list(r) for r in m]
    n, d = len(m), Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return d


def _inverse(m):
    n = len(m)
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [r[n:] for r in a]


def charpoly(m):
    """Characteristic polynomial det(xI - m), coefficients leading first
    (Faddeev-LeVerrier)."""
    n = len(m)
    m = [[Fraction(x) for x in r] for r in m]
    coeffs = [Fraction(1)]
    mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A (M_{k-1} + c_{k-1} I)
        prev = [[mk[i][j] + (coeffs[-1] if i == j else 0) for j in range(n)] for i in range(n)]
        mk = [[sum(m[i][t] * prev[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        coeffs.append(-sum(mk[i][i] for i in range(n)) / k)
    return coeffs


def coxeter_polynomial(cartan):
    c = [[Fraction(x) for x in r] for r in cartan]
    cinv_t = [list(r) for r in zip(*_inverse(c))]
    n = len(c)
    phi = [[-sum(cinv_t[i][t] * c[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
    out = charpoly(phi)
    if any(x.denominator != 1 for x in out):
        raise ValueError("Coxeter polynomial is not integral")
    return [int(x) for x in out]


def path_algebra_cartan(n, edges):
    """Cartan matrix of the path algebra of a quiver without oriented cycles
    (edges as (source, target) pairs); entry (u, v) counts paths u -> v."""
    succ = {u: [t for s, t in edges if s == u] for u in range(n)}
    c = [[0] * n for _ in range(n)]

    def walk(u, v):
        c[u][v] += 1
        for w in succ[v]:
            walk(u, w)
    for u in range(n):
        walk(u, u)
    return c


def dynkin_edges(kind, n):
    if kind == "A":
        return [(i, i + 1) for i in range(n - 1)]
    if kind == "D":
        return [(0, 2), (1, 2)] + [(i, i + 1) for i in range(2, n - 1)]
    raise ValueError(kind)


def _scaled(v):
    """Integer multiple of a rational vector, content 1, first entry positive."""
    den = 1
    for c in v.values():
        den = den * c.denominator // gcd(den, c.denominator)
    ints = {k: int(c * den) for k, c in v.items()}
    g = 0
    for x in ints.values():
        g = gcd(g, x)
    first = ints[min(ints)]
    s = 1 if first > 0 else -1
    return {k: Fraction(s * x // g) for k, x in ints.items()}


def presentation(alg, names, max_len=4):
    """Gabriel quiver and relations of a basic algebra (all End(u) local,
    no two vertices isomorphic)."""
    V = alg.vertices
    for i, u in enumerate(V):
        for v in V[i + 1:]:
            if is_iso(alg, u, v):
                raise NotBasicReducible(f"vertices {names[u]} and {names[v]} are isomorphic")
    rad = {}
    for u in V:
        for v in V:
            n = alg.dim(u, v)
            if u == v:
                rad[(u, v)] = alg.radical_of_end(u)
            elif n:
                rad[(u, v)] = [{k: Fraction(1)} for k in range(n)]
    rad2 = {}
    for (u, v), A in rad.items():
        for (v2, w), B in rad.items():
            if v2 != v:
                continue
            e = rad2.setdefault((u, w), Echelon())
            for b in B:
                for a in A:
                    e.add(alg.compose(b, a, u, v, w))
    arrows = []        # (name, u, v, value)
    for u in V:
        for v in V:
            e = rad2.get((u, v), Echelon())
            e = _copy_echelon(e)
            for x in rad.get((u, v), []):
                if e.add(x):
                    arrows.append((u, v, x))
    arrows = [(f"a{k + 1}", u, v, x) for k, (u, v, x) in enumerate(arrows)]
    # paths up to max_len + 1 in travel order
    paths = [((), u, u, dict(alg.unit[u])) for u in V]
    layer = [((a[0],), a[1], a[2], a[3]) for a in arrows]
    by_len = [paths, layer]
    for _ in range(max_len):
        nxt = []
        for p, u, v, x in by_len[-1]:
            for name, s, t, y in arrows:
                if s == v:
                    nxt.append((p + (name,), u, t, alg.compose(y, x, u, v, t)))
        by_len.append(nxt)
    allp = [p for layer in by_len for p in layer]
    # the algebra is generated by the arrows
    span = {}
    for p, u, v, x in allp:
        span.setdefault((u, v), Echelon()).add(x)
    if sum(len(e) for e in span.values()) != alg.total_dim():
        raise NotBasicReducible("arrows do not generate the algebra")
    col = {p[0]: k for k, p in enumerate(allp)}
    info = {p[0]: (p[1], p[2]) for p in allp}
    # kernel of evaluation on paths of length >= 1, per (u, v)
    ideal = Echelon()
    kernels = []
    for (u, v) in sorted({(p[1], p[2]) for p in allp}, key=lambda t: (V.index(t[0]), V.index(t[1]))):
        ps = [p for p in allp if p[1] == u and p[2] == v and len(p[0]) >= 1]
        if not ps:
            continue
        n = alg.dim(u, v)
        m = Matrix(n, len(ps), {(k, j): c for j, p in enumerate(ps) for k, c in p[3].items()})
        for kv in kernel_basis(m):
            vec = {col[ps[j][0]]: c for j, c in enumerate(kv) if c}
            ideal.add(vec)
            kernels.append(vec)
    # greedy generating set, shortest first
    def length(vec):
        return max(len(allp[j][0]) for j in vec)
    kernels.sort(key=lambda vec: (length(vec), sorted(vec)))
    closure = Echelon()
    gens = []
    max_total = max_len + 1
    for vec in kernels:
        if length(vec) > max_len:
            continue
        if not closure.reduce(vec):
            continue
        gens.append(vec)
        u, v = info[allp[min(vec)][0]]
        for lp, lu, lv, _ in allp:
            if lv != u:
                continue
            for rp, ru, rv, _ in allp:
                if ru != v:
                    continue
                out = {}
                ok = True
                for j, c in vec.items():
                    q = lp + allp[j][0] + rp
                    if len(q) > max_total:
                        ok = False
                        break
                    out[col[q]] = out.get(col[q], 0) + c
                if ok:
                    closure.add(out)
    complete = len(closure) == len(ideal) and all(
        not closure.reduce(r) for r in ideal.pivots.values())
    relations = []
    for vec in gens:
        s = _scaled(vec)
        relations.append([(c, allp[j][0]) for j, c in sorted(s.items())])
    cartan = [[alg.dim(u, v) for v in V] for u in V]
    try:
        cox = coxeter_polynomial(cartan)
    except ZeroDivisionError:
        cox = []
    ideal_rows = [{allp[j][0]: c for j, c in row.items()} for row in ideal.pivots.values()]
    return QuiverPresentation([names[u] for u in V],
                              [(n, names[u], names[v]) for n, u, v, _ in arrows],
                              relations, cartan, cox, ideal_rows, max_len, complete,
                              alg.total_dim())


def _copy_echelon(e):
    out = Echelon()
    out.pivots = {k: dict(v) for k, v in e.pivots.items()}
    return out


# -- isomorphism of presentations -------------------------------------------------

def _int_left_kernel(rows):
    """Z-basis of {y : sum y_i rows_i = 0} by unimodular row reduction."""
    r = len(rows)
    if not r:
        return []
    k = len(rows[0])
    m = [list(x) for x in rows]
    u = [[int(i == j) for j in range(r)] for i in range(r)]
    top = 0
    for c in range(k):
        while True:
            nz = [i for i in range(top, r) if m[i][c]]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(m[i][c]))
            m[top], m[p] = m[p], m[top]
            u[top], u[p] = u[p], u[top]
            done = True
            for i in range(top + 1, r):
                if m[i][c]:
                    q = m[i][c] // m[top][c]
                    m[i] = [a - q * b for a, b in zip(m[i], m[top])]
                    u[i] = [a - q * b for a, b in zip(u[i], u[top])]
                    if m[i][c]:
                        done = False
            if done:
                top += 1
                break
    return u[top:]


def _rref_rows(rows, order):
    e = Echelon()
    pos = {p: k for k, p in enumerate(order)}
    for row in rows:
        e.add({pos[p]: c for p, c in row.items()})
    return {order[j]: {order[k]: c for k, c in r.items()} for j, r in e.pivots.items()}


def _torus_match(P_rows, Q_rows, arrows):
    """Is there a scaling of arrows taking the span of P_rows to that of
    Q_rows?  Both are RREF dicts pivot -> row over the same path order."""
    if set(P_rows) != set(Q_rows):
        return False
    eqs, ratios = [], []
    idx = {a: k for k, a in enumerate(arrows)}

    def expo(path):
        v = [0] * len(arrows)
        for a in path:
            v[idx[a]] += 1
        return v
    for p, rp in P_rows.items():
        rq = Q_rows[p]
        if set(rp) != set(rq):
            return False
        ep = expo(p)
        for c, x in rp.items():
            if c == p:
                continue
            eqs.append([a - b for a, b in zip(expo(c), ep)])
            ratios.append(rq[c] / x)
    if not eqs:
        return True
    for y in _int_left_kernel(eqs):
        val = Fraction(1)
        for yi, r in zip(y, ratios):
            if yi:
                val *= r ** yi
        if val != 1:
            return False
    return True


def invariants(P):
    deg = sorted((sum(1 for a in P.arrows if a[1] == v), sum(1 for a in P.arrows if a[2] == v))
                 for v in P.vertices)
    return (len(P.vertices), len(P.arrows), len(P.ideal), P.dim, tuple(deg),
            tuple(sorted(sum(r) for r in P.cartan)), tuple(P.coxeter))


def isomorphic(P, Q):
    """Isomorphism of the presented algebras by vertex permutations, arrow
    bijections between parallel arrows and rescaling of arrows.  Both
    presentations must use the same length bound."""
    if P.max_len != Q.max_len or invariants(P) != invariants(Q):
        return False
    n = len(P.vertices)
    pv = {v: k for k, v in enumerate(P.vertices)}
    qv = {v: k for k, v in enumerate(Q.vertices)}
    par_p, par_q = {}, {}
    for a, s, t in P.arrows:
        par_p.setdefault((pv[s], pv[t]), []).append(a)
    for a, s, t in Q.arrows:
        par_q.setdefault((qv[s], qv[t]), []).append(a)
    q_arrows = [a for a, _, _ in Q.arrows]
    q_paths = sorted({p for r in Q.ideal for p in r} | set(), key=lambda p: (len(p), p))
    for perm in permutations(range(n)):
        if any(P.cartan[i][j] != Q.cartan[perm[i]][perm[j]] for i in range(n) for j in range(n)):
            continue
        if any(len(v) != len(par_q.get((perm[i], perm[j]), [])) for (i, j), v in par_p.items()):
            continue
        keys = sorted(par_p)
        choices = [permutations(par_q[(perm[i], perm[j])]) for i, j in keys]
        for combo in product(*choices):
            amap = {}
            for (i, j), img in zip(keys, combo):
                amap.update(zip(par_p[(i, j)], img))
            mapped = [{tuple(amap[a] for a in p): c for p, c in r.items()} for r in P.ideal]
            order = sorted({p for r in mapped for p in r} | set(q_paths), key=lambda p: (len(p), p))
            if _torus_match(_rref_rows(mapped, order), _rref_rows(Q.ideal, order), q_arrows):
                return True
    return False
