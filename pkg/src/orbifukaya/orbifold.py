"""Tagged dissections of a disc with one orbifold point of order two, their
lift to the double cover, and the objects and algebras they define.

The cover of the disc with m marked segments and one orbifold point is the
disc with 2m marked segments and g the half turn.  We model it concretely:
marked segment k of the cover sits at the point exp(i pi k / m) of the unit
circle, arcs are straight chords, lifts of orbifold arcs are diameters, and
the line field is horizontal (it is invariant under the half turn).  A graded
arc is then a chord together with a real lift Theta of its direction angle;
angles are kept in units of pi, so everything is an exact fraction.

Computations use the G-invariant system made of the lifted chords and the
boundary arcs.  The diameters all pass through the centre, so they are not
part of the system; each is built as a twisted complex over the central
polygon, split by its involution phi (see ``skew.tilde_object``).
"""
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .ainfty import sgn
from .quiver import FDAlgebra, NotBasicReducible, is_iso, presentation
from .fukaya import build_category, induced_involution
from .skew import (CornerSpace, SkewCategory, compose, corner_dims, degree_window,
                   pair_object, tilde_object)
from .surface import End, Involution, MSeg, Surface, validate_fullness


class DissectionError(ValueError):
    pass


class UnsolvableGrading(ValueError):
    pass


def _frac_part(x):
    return x - (x.numerator // x.denominator)


# -- arcs and dissections --------------------------------------------------------

@dataclass(frozen=True)
class TaggedArc:
    """An arc of the orbifold.  ``ends`` holds ("b", segment) or ("o", point)
    pairs, ``tags`` the sign at each end (0 at boundary ends).  For a chord,
    ``lift`` picks the isotopy class by naming the cover segments (i, j) of
    one lift; by default the shorter of (a, b) and (a, b + m) is used, and
    (a, b) when both are equally long."""
    id: str
    ends: tuple
    tags: tuple = (0, 0)
    shift: int = 0
    lift: tuple = None

    @property
    def kind(self):
        n_orb = sum(1 for k, _ in self.ends if k == "o")
        return ("chord", "orbifold", "double")[n_orb]

    @property
    def segment(self):
        """The boundary segment of an orbifold arc."""
        return next(v for k, v in self.ends if k == "b")

    @property
    def sign(self):
        """The tag of an orbifold arc at its orbifold end."""
        return next(t for (k, _), t in zip(self.ends, self.tags) if k == "o")

    def with_shift(self, shift):
        return TaggedArc(self.id, self.ends, self.tags, shift, self.lift)

    def with_sign(self, sign):
        tags = tuple(sign if k == "o" else 0 for k, _ in self.ends)
        return TaggedArc(self.id, self.ends, tags, self.shift, self.lift)

    def to_text(self):
        parts = [f"arc {self.id}:"] + [f"{k}:{v}" for k, v in self.ends]
        for name, (k, _), t in zip(("tagP", "tagQ"), self.ends, self.tags):
            if k == "o":
                parts.append(f"{name}={'+' if t > 0 else '-'}")
        if self.shift:
            parts.append(f"shift={self.shift}")
        if self.lift is not None:
            parts.append(f"lift={self.lift[0]}-{self.lift[1]}")
        return " ".join(parts)


def chord(id, a, b, lift=None, shift=0):
    return TaggedArc(str(id), (("b", a), ("b", b)), (0, 0), shift, tuple(lift) if lift else None)


def orbifold_arc(id, seg, sign=1, shift=0, point=0):
    return TaggedArc(str(id), (("o", point), ("b", seg)), (sign, 0), shift)


@dataclass
class TaggedDissection:
    marked: int
    arcs: list
    points: int = 1
    pieces: dict = field(default_factory=dict)   # point -> tuple of arc ids
    name: str = None

    def arc(self, id):
        return next(a for a in self.arcs if a.id == id)

    def expected_count(self):
        # m + b + 2g - 2 + 2x for the disc: b = 1, g = 0
        return self.marked + 1 - 2 + 2 * self.points

    def to_text(self):
        lines = [f"orbifold disc marked={self.marked} orbifoldpoints={self.points}"]
        if self.name:
            lines.insert(0, f"# {self.name}")
        lines += [a.to_text() for a in self.arcs]
        for p, ids in sorted(self.pieces.items()):
            lines.append(f"piece o:{p} -> {','.join(ids)}")
        return "\n".join(lines) + "\n"

    def with_arcs(self, arcs):
        return TaggedDissection(self.marked, list(arcs), self.points, {}, self.name)


_ARC = re.compile(r"arc\s+(\S+)\s*:\s*(.*)")


def parse_dissection(text):
    marked = points = None
    arcs, pieces = [], {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("orbifold"):
            words = line.split()
            if len(words) < 2 or words[1] != "disc":
                raise DissectionError(f"line {lineno}: only the disc is supported")
            for w in words[2:]:
                key, _, val = w.partition("=")
                if key == "marked":
                    marked = int(val)
                elif key == "orbifoldpoints":
                    points = int(val)
                else:
                    raise DissectionError(f"line {lineno}: unknown key {key}")
            continue
        m = _ARC.fullmatch(line)
        if m:
            words = m.group(2).split()
            ends, opts = [], {}
            for w in words:
                if "=" in w:
                    k, _, v = w.partition("=")
                    opts[k] = v
                else:
                    em = re.fullmatch(r"([bo]):(\d+)", w)
                    if not em:
                        raise DissectionError(f"line {lineno}: bad endpoint {w!r}")
                    ends.append((em.group(1), int(em.group(2))))
            if len(ends) != 2:
                raise DissectionError(f"line {lineno}: an arc has two endpoints")
            tags = []
            for (k, _), name in zip(ends, ("tagP", "tagQ")):
                if k == "o":
                    if name not in opts:
                        raise DissectionError(f"line {lineno}: missing {name} at an orbifold end")
                    if opts[name] not in "+-" or len(opts[name]) != 1:
                        raise DissectionError(f"line {lineno}: {name} must be + or -")
                    tags.append(1 if opts[name] == "+" else -1)
                else:
                    if name in opts:
                        raise DissectionError(f"line {lineno}: {name} given at a boundary end")
                    tags.append(0)
            lift = None
            if "lift" in opts:
                lm = re.fullmatch(r"(\d+)-(\d+)", opts["lift"])
                if not lm:
                    raise DissectionError(f"line {lineno}: lift must read i-j")
                lift = (int(lm.group(1)), int(lm.group(2)))
            unknown = set(opts) - {"tagP", "tagQ", "shift", "lift"}
            if unknown:
                raise DissectionError(f"line {lineno}: unknown option {sorted(unknown)[0]}")
            arcs.append(TaggedArc(m.group(1), tuple(ends), tuple(tags), int(opts.get("shift", 0)), lift))
            continue
        pm = re.fullmatch(r"piece\s+(?:o:)?(\d+)\s*->\s*(\S+)", line)
        if pm:
            pieces[int(pm.group(1))] = tuple(pm.group(2).split(","))
            continue
        raise DissectionError(f"line {lineno}: cannot parse {line!r}")
    if marked is None:
        raise DissectionError("missing 'orbifold disc' header")
    return TaggedDissection(marked, arcs, points if points is not None else 1, pieces)


def load_dissection(path):
    with open(path, encoding="utf-8") as fh:
        d = parse_dissection(fh.read())
    return d


# -- the cover ----------------------------------------------------------------------

class Cover:
    """The disc with 2m marked points, g the half turn."""

    def __init__(self, m):
        if m < 2:
            raise DissectionError("need at least two marked segments")
        self.m, self.n = m, 2 * m

    def g(self, k):
        return (k + self.m) % self.n

    def offset(self, k, j):
        return (j - k) % self.n

    def alpha(self, a, b):
        """Direction of the chord from a to b, modulo 1 (units of pi)."""
        return _frac_part(Fraction(a + b, self.n) + Fraction(1, 2))

    def ray(self, k, j):
        """Direction of the chord leaving point k towards j, as a real angle."""
        return Fraction(k, self.m) + Fraction(self.offset(k, j), self.n) + Fraction(1, 2)

    def crosses(self, c1, c2):
        """Straight chords with endpoints on the circle cross in the interior
        iff their endpoints interleave strictly."""
        a, b = c1
        c, d = c2
        if len({a, b, c, d}) < 4:
            return False
        inside = lambda x: 0 < self.offset(a, x) < self.offset(a, b)
        return inside(c) != inside(d)

    def chord_lifts(self, arc):
        """The two lifts (i, j) of a chord."""
        m, n = self.m, self.n
        (_, a), (_, b) = arc.ends
        if arc.lift is not None:
            i, j = arc.lift
        else:
            # the shorter of the two candidate chords, (a, b) on a tie
            dist = lambda x, y: min((y - x) % n, (x - y) % n)
            i, j = a, b
            if dist(a, b + m) < dist(a, b):
                j = b + m
        if i % m != a % m or j % m != b % m or not (0 <= i < n and 0 <= j < n):
            raise DissectionError(f"arc {arc.id}: lift {i}-{j} does not cover {a}-{b}")
        if i == j or self.offset(i, j) == m:
            raise DissectionError(f"arc {arc.id} cuts out a disc containing only the orbifold point"
                                  if self.offset(i, j) == m else f"arc {arc.id} is trivial")
        return (i, j), (self.g(i), self.g(j))

    def chord_key(self, arc):
        l1, l2 = self.chord_lifts(arc)
        return frozenset((frozenset(l1), frozenset(l2)))


def arc_curves(cover, arcs):
    """Geometric curves in the cover: ("c", (i, j)) for chord lifts and
    ("d", s) for the diameter of an orbifold arc at s.  Returns a dict curve
    -> list of arc ids (isotopic arcs share a curve)."""
    out = {}
    for a in arcs:
        if a.kind == "chord":
            for lift in cover.chord_lifts(a):
                out.setdefault(("c", lift), []).append(a.id)
        elif a.kind == "orbifold":
            s = a.segment
            if not 0 <= s < cover.m:
                raise DissectionError(f"arc {a.id}: no marked segment {s}")
            out.setdefault(("d", s), []).append(a.id)
        else:
            raise DissectionError(f"arc {a.id}: arcs between orbifold points need a second point")
    return out


def _endpoints(cover, curve):
    kind, v = curve
    if kind == "c":
        return v
    return (v, cover.g(v))


@dataclass
class Piece:
    kind: str            # "boundary" (type 1), "orbifold" (type 3) or "bad"
    sides: list          # curves along the face
    gaps: list           # numbers of unmarked segments on boundary stretches
    centre: tuple = ()   # (ray in, ray out) when the face has a corner at the centre
    reason: str = ""


def cover_faces(cover, curves):
    """Faces of the cover cut along ``curves`` (chords and diameters)."""
    n = cover.n
    at = {k: [] for k in range(n)}
    for c in curves:
        p, q = _endpoints(cover, c)
        at[p].append((-cover.offset(p, q), c, 0))
        at[q].append((-cover.offset(q, p), c, 1))
    verts = []
    for k in range(n):
        for _, c, e in sorted(at[k], key=lambda t: t[0]):
            verts.append((k, c, e))
    N = len(verts)
    if not N:
        return []
    index = {(c, e): v for v, (k, c, e) in enumerate(verts)}
    rays = sorted(c[1] for c in curves if c[0] == "d")
    ray_pts = sorted(set(rays) | {cover.g(s) for s in rays})

    def other_end(v):
        k, c, e = verts[v]
        return index[(c, 1 - e)]

    def ray_vertex(pt):
        for s in rays:
            if s == pt:
                return index[(("d", s), 0)]
            if cover.g(s) == pt:
                return index[(("d", s), 1)]

    seen = set()
    faces = []
    for start in range(N):
        if ("b", start) in seen:
            continue
        dart = ("b", start)
        sides, gaps, centre = [], [], ()
        while dart not in seen:
            seen.add(dart)
            kind, v = dart
            if kind == "b":
                w = (v + 1) % N
                k1, k2 = verts[v][0], verts[w][0]
                u = (k2 - k1) % n
                if w == 0 and u == 0:
                    u = n
                if u:
                    gaps.append(u)
                c = verts[w][1]
                if c[0] == "c":
                    dart = ("a", w)
                else:
                    dart = ("h", w)
            elif kind == "a":
                sides.append(verts[v][1])
                dart = ("b", other_end(v))
            else:
                # into the centre along a diameter, out along the next ray clockwise
                sides.append(verts[v][1])
                pt = verts[v][0]
                j = ray_pts.index(pt)
                out = ray_pts[j - 1]
                sides.append(verts[ray_vertex(out)][1])
                centre = (pt, out)
                dart = ("b", ray_vertex(out))
        if len(gaps) == 1 and gaps[0] == 1:
            faces.append(Piece("boundary", sides, gaps, centre))
        elif not gaps and centre and len(sides) == 3:
            faces.append(Piece("orbifold", sides, gaps, centre))
        else:
            why = ("more than one boundary stretch" if len(gaps) > 1 else
                   "a boundary stretch with several unmarked segments" if gaps else
                   "a polygon without boundary and without the orbifold point" if not centre else
                   f"a piece at the orbifold point with {len(sides)} sides")
            faces.append(Piece("bad", sides, gaps, centre, why))
    return faces


@dataclass
class DissectionReport:
    ok: bool
    problems: list
    pieces: list = field(default_factory=list)
    triangle: tuple = None   # arc ids of the type (3) piece, if any

    def raise_if_bad(self):
        if not self.ok:
            raise DissectionError("; ".join(self.problems))


def _pairwise_problems(cover, arcs, signs=True):
    """Problems with a collection of arcs.  Without ``signs`` only the
    structural conditions are checked (distinct, non-crossing), not the sign
    rules of a dissection."""
    problems = []
    ids = [a.id for a in arcs]
    if len(set(ids)) != len(ids):
        problems.append("arc ids are not unique")
    for a in arcs:
        for (k, v), t in zip(a.ends, a.tags):
            if k == "o" and v != 0:
                problems.append(f"arc {a.id}: unknown orbifold point {v}")
            if k == "o" and t not in (1, -1):
                problems.append(f"arc {a.id}: the tag at an orbifold end must be + or -")
            if k == "b" and not 0 <= v < cover.m:
                problems.append(f"arc {a.id}: no marked segment {v}")
    if problems:
        return problems
    try:
        curves = arc_curves(cover, arcs)
    except DissectionError as e:
        return [str(e)]
    for c, owners in curves.items():
        if c[0] == "c" and len(owners) > 1:
            problems.append(f"arcs {' and '.join(owners)} are isotopic chords")
        if c[0] == "d":
            if len(owners) > 2:
                problems.append(f"more than two arcs isotopic to {owners[0]}")
            elif len(owners) == 2:
                a, b = (next(x for x in arcs if x.id == o) for o in owners)
                # Taggings of isotopic copies: the rule depends on their
                # relative grading p, sign(a) = (-1)^{p-1} sign(b)
                p = a.shift - b.shift
                if (a.sign, a.shift) == (b.sign, b.shift):
                    problems.append(f"arcs {a.id} and {b.id} are equal")
                elif signs and a.sign != sgn(p - 1) * b.sign:
                    problems.append(f"isotopic arcs {a.id}, {b.id} violate the sign rule for shift {p}")
    cl = list(curves)
    for x in range(len(cl)):
        for y in range(x + 1, len(cl)):
            c1, c2 = cl[x], cl[y]
            if c1[0] == "d" and c2[0] == "d":
                continue
            if cover.crosses(_endpoints(cover, c1), _endpoints(cover, c2)):
                problems.append(f"arcs {curves[c1][0]} and {curves[c2][0]} cross")
    orb = [a for a in arcs if a.kind == "orbifold"]
    classes = {}
    for a in orb:
        classes.setdefault(a.segment, []).append(a)
    seen = {s: {a.sign for a in v} for s, v in classes.items()}
    if signs and len(classes) > 1:
        if any(len(v) > 1 for v in seen.values()) or len({next(iter(v)) for v in seen.values()}) > 1:
            problems.append("non-isotopic arcs at the orbifold point carry different signs")
    return problems


def validate_dissection(d, complete=True):
    """Check the conditions on a tagged dissection.  With complete=False only
    the pairwise conditions (a rigid collection) are checked."""
    if d.points != 1:
        return DissectionReport(False, ["only one orbifold point is supported for lifting"])
    cover = Cover(d.marked)
    problems = _pairwise_problems(cover, d.arcs)
    if problems or not complete:
        return DissectionReport(not problems, problems)
    orb = [a for a in d.arcs if a.kind == "orbifold"]
    if len(orb) < 2:
        problems.append("the orbifold point is the endpoint of fewer than two arcs")
    curves = arc_curves(cover, d.arcs)
    faces = cover_faces(cover, curves)
    if not any(c[0] == "d" for c in curves):
        problems.append("the orbifold point lies inside a piece")
    for f in faces:
        if f.kind == "bad":
            names = sorted({curves[c][0] for c in f.sides})
            problems.append(f"piece bounded by {','.join(names)} is {f.reason}")
    same_sign = bool(orb) and len({a.sign for a in orb}) == 1
    tri = [f for f in faces if f.kind == "orbifold"]
    n_tri = len(tri) // 2
    if n_tri != int(same_sign):
        problems.append(f"{n_tri} orbifold triangles for {int(same_sign)} same-sign orbifold points")
    triangle = None
    if tri:
        triangle = tuple(sorted({x for c in tri[0].sides for x in curves[c]}))
        given = d.pieces.get(0)
        if given is not None and set(given) != set(triangle):
            problems.append(f"piece o:0 is {','.join(triangle)}, not {','.join(given)}")
    elif d.pieces:
        problems.append("a piece is given but there is no orbifold triangle")
    if len(d.arcs) != d.expected_count():
        problems.append(f"{len(d.arcs)} arcs, expected {d.expected_count()}")
    return DissectionReport(not problems, problems, faces, triangle)


def is_skew_gentle(d):
    segs = [a.segment for a in d.arcs if a.kind == "orbifold"]
    return len(segs) != len(set(segs))


# -- gradings ---------------------------------------------------------------------

class Grading:
    """Theta lifts for every curve of a collection in the cover."""

    def __init__(self, cover, arcs, t):
        self.cover, self.t = cover, dict(t)
        self.arcs = {a.id: a for a in arcs}
        self.curves = arc_curves(cover, arcs)

    def theta(self, curve, t=None):
        p, q = _endpoints(self.cover, curve)
        if t is None:
            t = self.t[self.curves[curve][0]]
        return self.cover.alpha(p, q) + t

    def boundary_degree(self, k, src, tgt):
        """Degree of the boundary path at point k from curve src to curve tgt
        (src later along the boundary): the rotation from src to tgt
        measured against the grading."""
        c = self.cover

        def ray(curve):
            p, q = _endpoints(c, curve)
            return c.ray(k, q if p == k else p)
        x = self.theta(src) - self.theta(tgt) - (ray(src) - ray(tgt))
        if x.denominator != 1:
            raise AssertionError("non-integral boundary degree")
        return int(x)

    def crossing_index(self, c1, c2):
        """Index of the crossing of two diameters at the centre, c1 -> c2."""
        x = self.theta(c1) - self.theta(c2)
        return -((-x.numerator) // x.denominator)

    def ends_at(self, k):
        """Curves with an end at point k, in boundary order."""
        out = []
        for c in self.curves:
            p, q = _endpoints(self.cover, c)
            if p == k:
                out.append((-self.cover.offset(k, q), c))
            elif q == k:
                out.append((-self.cover.offset(k, p), c))
        return [c for _, c in sorted(out, key=lambda t: t[0])]


def _centre_chain(cover, curves, faces):
    """Orbifold arcs in the order Y_1, ..., Y_k read counterclockwise from the
    orbifold triangle; consecutive ones are joined by degree-0 morphisms."""
    rays = sorted(c[1] for c in curves if c[0] == "d")
    tri = next((f for f in faces if f.kind == "orbifold"), None)
    if tri is None or len(rays) < 2:
        return []
    pts = sorted(set(rays) | {cover.g(s) for s in rays})
    start = tri.centre[0]            # the ray on the counterclockwise side
    j = pts.index(start)
    chain = [pts[(j + i) % len(pts)] for i in range(len(rays))]
    return [("d", p % cover.m) for p in chain]


def solve_grading(d, cover=None):
    """Integer shifts t (one per arc) with
      - degree 0 on boundary paths between neighbouring arcs,
      - index 0 between neighbouring orbifold arcs read counterclockwise from
        the orbifold triangle,
      - equal shifts on isotopic orbifold arcs.
    Free variables are set to 0.  The result does not include arc.shift."""
    cover = cover or Cover(d.marked)
    curves = arc_curves(cover, d.arcs)
    faces = cover_faces(cover, curves)
    gr = Grading(cover, d.arcs, {a.id: 0 for a in d.arcs})
    edges = {}        # arc id -> [(other, c)] meaning t_self - t_other = c

    def link(a, b, c):
        edges.setdefault(a, []).append((b, c))
        edges.setdefault(b, []).append((a, -c))

    for owners in curves.values():
        for o in owners[1:]:
            link(owners[0], o, 0)
    for k in range(cover.m):
        ends = gr.ends_at(k)
        for tgt, src in zip(ends, ends[1:]):
            # deg = t_src - t_tgt + deg0 = 0
            deg0 = gr.boundary_degree(k, src, tgt)
            link(curves[src][0], curves[tgt][0], -deg0)
    chain = _centre_chain(cover, curves, faces)
    for y1, y2 in zip(chain, chain[1:]):
        link(curves[y1][0], curves[y2][0], -gr.crossing_index(y1, y2))
    t = {}
    for a in d.arcs:
        if a.id in t:
            continue
        t[a.id] = 0
        stack = [a.id]
        while stack:
            u = stack.pop()
            for v, c in edges.get(u, ()):
                want = t[u] - c
                if v not in t:
                    t[v] = want
                    stack.append(v)
                elif t[v] != want:
                    raise UnsolvableGrading(f"inconsistent degree conditions at arc {v}")
    return t


# -- lifting -------------------------------------------------------------------------

@dataclass
class Lift:
    dissection: TaggedDissection
    cover: Cover
    grading: Grading
    surface: Surface
    fc: object
    sk: SkewCategory
    names: dict          # curve -> arc name in the surface
    assignment: dict     # arc id -> list of SplitObject

    def objects(self):
        return [o for a in self.dissection.arcs for o in self.assignment[a.id]]


def _cover_surface(cover, gr, names):
    """The surface of the system: lifted chords plus boundary arcs."""
    n, m = cover.n, cover.m
    curves = {}
    theta = {}
    for c in gr.curves:
        if c[0] == "c":
            curves[c] = names[c]
            theta[c] = gr.theta(c)
    for k in range(n):
        c = ("c", (k, (k + 1) % n))
        rev = ("c", ((k + 1) % n, k))
        if c in curves or rev in curves:
            continue
        curves[c] = f"E{k}"
        names[c] = f"E{k}"
        theta[c] = cover.alpha(k, k + 1)
    at = {k: [] for k in range(n)}
    for c, nm in curves.items():
        p, q = c[1]
        at[p].append((-cover.offset(p, q), c, End(nm, 0)))
        at[q].append((-cover.offset(q, p), c, End(nm, 1)))
    toks, degrees = [], {}
    for k in range(n):
        es = sorted(at[k], key=lambda t: t[0])
        toks.append(("m", f"S{k}", tuple(e for _, _, e in es)))
        toks.append(("u", f"U{k}"))
        for i in range(1, len(es)):
            src, tgt = es[i][1], es[i - 1][1]
            ray = lambda c: cover.ray(k, c[1][1] if c[1][0] == k else c[1][0])
            x = theta[src] - theta[tgt] - (ray(src) - ray(tgt))
            degrees[(f"S{k}", i)] = int(x)
    amap = {}
    for c, nm in curves.items():
        p, q = c[1]
        gc = ("c", (cover.g(p), cover.g(q)))
        amap[nm] = (curves[gc], False)
    segs = {}
    for k in range(n):
        segs[f"S{k}"] = f"S{cover.g(k)}"
        segs[f"U{k}"] = f"U{cover.g(k)}"
    return Surface("cover", 0, 1, [("0", toks)], degrees, {}, Involution(amap, segs, 1), {})


def _diameter_object(lift_parts, s, theta_d, sign, name):
    cover, surf, fc, sk, theta_of = lift_parts
    ends = surf.seg_ends[f"S{s}"]

    def off(e):
        other = End(e.arc, 1 - e.end)
        return cover.offset(s, int(surf.end_pos[other][0][1:]))
    before = [p for p, e in enumerate(ends) if off(e) > cover.m]
    p1 = max(before)
    dseg = MSeg(f"S{s}", p1, p1 + 1)
    face = next(f for f in surf.faces() if dseg in f.corners)
    j = face.corners.index(dseg)
    seq = face.corners[j:] + face.corners[:j]
    r = len(seq) // 2
    S1 = surf.target(dseg).arc
    ray_d = cover.ray(s, cover.g(s))
    ray_1 = theta_of[S1][1](s)
    x = theta_d - theta_of[S1][0] - (ray_d - ray_1)
    sigma1 = int(x)
    corners = [fc.mor_of[c] for c in seq[:r]]
    return tilde_object(fc, sk, corners, sigma1, sign, name=name)


def lift_dissection(d, solve=True, check=True):
    """Lift ``d`` to the cover.  With ``solve`` the gradings come from
    ``solve_grading`` plus each arc's own shift; otherwise the arc shifts are
    used as they are."""
    if check:
        problems = _pairwise_problems(Cover(d.marked), d.arcs, signs=False)
        if problems:
            raise DissectionError("; ".join(problems))
    cover = Cover(d.marked)
    t0 = solve_grading(d, cover) if solve else {a.id: 0 for a in d.arcs}
    t = {a.id: t0[a.id] + a.shift for a in d.arcs}
    gr = Grading(cover, d.arcs, t)
    names = {}
    for a in d.arcs:
        if a.kind == "chord":
            l1, l2 = cover.chord_lifts(a)
            names[("c", l1)] = f"X{a.id}"
            names[("c", l2)] = f"gX{a.id}"
    surf = _cover_surface(cover, gr, names)
    rep = validate_fullness(surf)
    if not rep.ok:
        raise DissectionError("cover system is not full: " + "; ".join(rep.problems))
    fc = build_category(surf, max_corners=2 * len(surf.arcs) + 2)
    sk = SkewCategory(fc.cat, induced_involution(fc))
    # theta and ray direction of every arc of the system at either end
    theta_of = {}
    for c, nm in names.items():
        p, q = c[1]
        th = gr.theta(c) if c in gr.curves else cover.alpha(p, q)
        theta_of[nm] = (th, (lambda k, p=p, q=q: cover.ray(k, q if p == k else p)))
    parts = (cover, surf, fc, sk, theta_of)
    assignment = {}
    for a in d.arcs:
        if a.kind == "chord":
            l1, l2 = cover.chord_lifts(a)
            assignment[a.id] = [pair_object(sk, names[("c", l1)]), pair_object(sk, names[("c", l2)])]
        else:
            s = a.segment
            th = gr.theta(("d", s), t[a.id])
            obj = _diameter_object(parts, s, th, a.sign, f"X{a.id}")
            obj.name = f"X{a.id}^{'+' if a.sign > 0 else '-'}"
            assignment[a.id] = [obj]
    return Lift(d, cover, gr, surf, fc, sk, names, assignment)


# -- rigidity and tilting -----------------------------------------------------------

@dataclass
class RigidityReport:
    rigid: bool
    violations: list

    def __bool__(self):
        return self.rigid


def check_rigidity_combinatorial(arcs, marked, t=None):
    """Evaluate the local conditions for rigidity on a collection of graded
    tagged arcs; ``t`` gives the shift of every arc (default: arc.shift)."""
    cover = Cover(marked)
    if t is None:
        t = {a.id: a.shift for a in arcs}
    gr = Grading(cover, arcs, t)
    byid = {a.id: a for a in arcs}
    out = []
    curve_of = {o: c for c, owners in gr.curves.items() for o in owners}
    # isotopic copies
    for c, owners in gr.curves.items():
        for x in range(len(owners)):
            for y in range(x + 1, len(owners)):
                a, b = byid[owners[x]], byid[owners[y]]
                p = t[a.id] - t[b.id]
                if a.sign != sgn(p - 1) * b.sign:
                    out.append(f"isotopic arcs {a.id}, {b.id} with relative shift {p} "
                               f"need signs differing by (-1)^(p-1)")
    # M-segments between arcs sharing a boundary segment
    for k in range(cover.m):
        ends = []
        for c in gr.ends_at(k):
            for o in gr.curves[c]:
                p, q = _endpoints(cover, c)
                ray = cover.ray(k, q if p == k else p)
                ends.append((o, c, gr.theta(c, t[o]), ray))
        for x in range(len(ends)):
            for y in range(x + 1, len(ends)):
                tgt, src = ends[x], ends[y]
                if tgt[1] == src[1]:
                    continue
                deg = src[2] - tgt[2] - (src[3] - tgt[3])
                if deg != 0:
                    out.append(f"M-segment on segment {k} from {src[0]} to {tgt[0]} has degree {deg}")
    # crossings at the orbifold point
    orb = [a for a in arcs if a.kind == "orbifold"]
    for x in range(len(orb)):
        for y in range(x + 1, len(orb)):
            a, b = orb[x], orb[y]
            ca, cb = curve_of[a.id], curve_of[b.id]
            if ca == cb:
                continue
            if a.sign != b.sign:
                out.append(f"arcs {a.id}, {b.id} meet at the orbifold point with different signs")
            i = -((-(gr.theta(ca, t[a.id]) - gr.theta(cb, t[b.id]))).__floor__())
            if i not in (0, 1):
                out.append(f"arcs {a.id}, {b.id} meet at the orbifold point with indices {i}, {1 - i}")
    return RigidityReport(not out, out)


def max_degree_window():
    return int(os.environ.get("ORBIFUKAYA_MAX_DEGREE_WINDOW", "8"))


def hom_table(objects, window=None):
    """{(name_A, name_B): {degree: dim}} over the support of the Hom complexes,
    cut to [-window, window]."""
    w = max_degree_window() if window is None else window
    table = {}
    for A in objects:
        for B in objects:
            lo, hi = degree_window(A, B)
            lo, hi = max(lo, -w), min(hi, w)
            dims = {ell: n for ell, n in corner_dims(A, B, lo, hi).items() if n} if lo <= hi else {}
            table[(A.name, B.name)] = dims
    return table


@dataclass
class TiltingVerdict:
    rigid: bool
    count_ok: bool
    table: dict
    count: int
    expected: int

    @property
    def tilting(self):
        return self.rigid and self.count_ok


def is_tilting(lift, window=None):
    objs = lift.objects()
    table = hom_table(objs, window)
    rigid = all(ell == 0 for dims in table.values() for ell in dims)
    d = lift.dissection
    return TiltingVerdict(rigid, len(d.arcs) == d.expected_count(), table,
                          len(d.arcs), d.expected_count())


def _algebra_of(objects):
    """H^0 of the full subcategory on ``objects`` as an FDAlgebra."""
    n = len(objects)
    spaces = {}
    for u in range(n):
        for v in range(n):
            spaces[(u, v)] = CornerSpace(objects[u], objects[v], 0)
    dims = {k: cs.dim for k, cs in spaces.items()}
    unit = {u: {k: c for k, c in enumerate(spaces[(u, u)].coords(objects[u].idem)) if c}
            for u in range(n)}

    def mul_fn(u, v, w):
        A, B, C = objects[u], objects[v], objects[w]
        out = {}
        for i, b in enumerate(spaces[(v, w)].reps):
            for j, a in enumerate(spaces[(u, v)].reps):
                y = compose(A.sk, b, a, A, B, C)
                co = spaces[(u, w)].coords(y) if y else []
                out[(i, j)] = {k: c for k, c in enumerate(co) if c}
        return out
    return FDAlgebra(range(n), dims, {}, unit, mul_fn)


def basic_vertices(alg):
    """One vertex from every isomorphism class, in order."""
    keep = []
    for u in alg.vertices:
        if not any(is_iso(alg, k, u) for k in keep):
            keep.append(u)
    return keep


def algebra_presentation(objects, names=None, max_len=4):
    """Quiver with relations of H^0 End of the direct sum of ``objects``
    after merging isomorphic summands."""
    alg = _algebra_of(objects)
    keep = basic_vertices(alg)
    if names is None:
        names = [o.name for o in objects]
    return presentation(alg.restrict(keep), {u: names[u] for u in keep}, max_len)


def endo_algebra(lift, max_len=4):
    """Quiver with relations of the degree-0 endomorphism algebra of the
    object attached to the dissection."""
    objs = lift.objects()
    names = [o.name.strip("{}").replace("^", "") for o in objs]
    return algebra_presentation(objs, names, max_len)
