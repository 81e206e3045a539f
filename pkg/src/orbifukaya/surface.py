"""Combinatorial graded marked surfaces with a full arc system.

A surface is given by its boundary components, each a cyclic list of marked
segments (carrying arc ends in boundary-orientation order) and unmarked
segments.  Gradings are integers on minimal M-segments.  The M-segment
direction is opposite to the boundary orientation, so on a marked segment with
ends ``[e0, e1, ..., ek]`` the minimal segment ``i`` runs from ``e_i`` to
``e_{i-1}``.
"""
import re
from collections import namedtuple
from dataclasses import dataclass, field


class ParseError(ValueError):
    pass


class ValidationError(ValueError):
    pass


class InvolutionError(ValueError):
    pass


End = namedtuple("End", "arc end")


def other(e):
    return End(e.arc, 1 - e.end)


class MSeg(namedtuple("MSeg", "seg lo hi")):
    """Run of minimal segments lo+1..hi on one marked segment.

    It starts at the end in position ``hi`` and stops at position ``lo``.
    """
    __slots__ = ()


class Gap(namedtuple("Gap", "tokens")):
    """Corner of a face that walks over unmarked boundary."""
    __slots__ = ()


@dataclass
class Face:
    index: int
    ends: list          # source end of each corner, in walk order
    corners: list       # MSeg or Gap, corners[k] starts at ends[k]
    kind: str = "FullyMarkedDisc"

    @property
    def arcs(self):
        return [e.arc for e in self.ends]

    def n_sides(self):
        return len(self.ends)

    def gaps(self):
        return [c for c in self.corners if isinstance(c, Gap)]


@dataclass
class Involution:
    arc_map: dict       # arc -> (arc, swap)
    seg_map: dict       # segment id -> segment id
    fixedpoints: int = 0

    def end(self, e):
        b, sw = self.arc_map[e.arc]
        return End(b, 1 - e.end if sw else e.end)

    def arc(self, a):
        return self.arc_map[a][0]

    def invariant_arcs(self):
        return sorted(a for a, (b, sw) in self.arc_map.items() if a == b)


@dataclass
class Surface:
    name: str
    genus: int
    nbound: int
    components: list                      # [(bid, [token, ...])]
    degrees: dict = field(default_factory=dict)
    names: dict = field(default_factory=dict)
    involution: Involution = None
    holes: dict = field(default_factory=dict)   # bid -> End

    def __post_init__(self):
        self.seg_ends = {}
        self.seg_comp = {}
        self.marked = []
        self.unmarked = []
        self.end_pos = {}
        for bid, toks in self.components:
            for k, t in enumerate(toks):
                sid = t[1]
                if sid in self.seg_comp:
                    raise ValidationError(f"segment {sid} declared twice")
                self.seg_comp[sid] = (bid, k)
                if t[0] == "m":
                    self.marked.append(sid)
                    self.seg_ends[sid] = list(t[2])
                    for p, e in enumerate(t[2]):
                        if e in self.end_pos:
                            raise ValidationError(f"arc end {e.arc}.{e.end} appears twice")
                        self.end_pos[e] = (sid, p)
                else:
                    self.unmarked.append(sid)
        arcs = {e.arc for e in self.end_pos}
        for a in arcs:
            for k in (0, 1):
                if End(a, k) not in self.end_pos:
                    raise ValidationError(f"arc {a} is missing end {k}")
        self.arcs = sorted(arcs)
        for (sid, i) in self.degrees:
            if sid not in self.seg_ends or not 1 <= i < len(self.seg_ends[sid]):
                raise ValidationError(f"deg line for nonexistent minimal segment {sid} {i}")
        self._prefix = {}
        for sid, ends in self.seg_ends.items():
            acc = [0]
            for i in range(1, len(ends)):
                acc.append(acc[-1] + self.degrees.get((sid, i), 0))
            self._prefix[sid] = acc
        self._faces = None

    # -- M-segments --------------------------------------------------------
    def min_degree(self, sid, i):
        return self.degrees.get((sid, i), 0)

    def degree(self, m):
        p = self._prefix[m.seg]
        return p[m.hi] - p[m.lo]

    def source(self, m):
        return self.seg_ends[m.seg][m.hi]

    def target(self, m):
        return self.seg_ends[m.seg][m.lo]

    def msegments(self):
        out = []
        for sid in self.marked:
            k = len(self.seg_ends[sid])
            for lo in range(k):
                for hi in range(lo + 1, k):
                    out.append(MSeg(sid, lo, hi))
        return out

    def minimal_segments(self):
        return [(sid, i) for sid in self.marked for i in range(1, len(self.seg_ends[sid]))]

    def concat(self, a, b):
        """The M-segment a.b (a first, then b), or None."""
        if a.seg == b.seg and a.lo == b.hi:
            return MSeg(a.seg, b.lo, a.hi)
        return None

    def label(self, m):
        """Readable name: minimal names joined latest first, like ``a0*ga2``."""
        parts = []
        for i in range(m.lo + 1, m.hi + 1):
            parts.append(self.names.get((m.seg, i), f"{m.seg}{i}"))
        return "*".join(parts)

    def mseg_by_label(self, text):
        text = text.strip()
        for m in self.msegments():
            if self.label(m) == text:
                return m
        mm = re.fullmatch(r"(\S+?)\[(\d+):(\d+)\]", text)
        if mm and mm.group(1) in self.seg_ends:
            lo, hi = int(mm.group(2)), int(mm.group(3))
            if 0 <= lo < hi < len(self.seg_ends[mm.group(1)]):
                return MSeg(mm.group(1), lo, hi)
        raise KeyError(f"no M-segment called {text!r}")

    # -- faces ---------------------------------------------------------------
    def sigma(self, e):
        """(next end in M-direction, corner walked to reach it)."""
        sid, p = self.end_pos[e]
        if p > 0:
            return self.seg_ends[sid][p - 1], MSeg(sid, p - 1, p)
        bid, k = self.seg_comp[sid]
        toks = dict(self.components)[bid]
        crossed = []
        j = k
        while True:
            j = (j - 1) % len(toks)
            t = toks[j]
            if t[0] == "m" and t[2]:
                return t[2][-1], Gap(tuple(crossed))
            crossed.append(t[1])

    def phi(self, e):
        return other(self.sigma(e)[0])

    def faces(self):
        if self._faces is not None:
            return self._faces
        seen = set()
        faces = []
        for e0 in sorted(self.end_pos):
            if e0 in seen:
                continue
            ends, corners = [], []
            e = e0
            while e not in seen:
                seen.add(e)
                ends.append(e)
                corners.append(self.sigma(e)[1])
                e = self.phi(e)
            f = Face(len(faces), ends, corners)
            ng = len(f.gaps())
            f.kind = "FullyMarkedDisc" if ng == 0 else "DiscWithUnmarkedCorner"
            faces.append(f)
        for bid, e in self.holes.items():
            f = self.face_of(e, faces)
            f.kind = "Annulus"
        self._faces = faces
        return faces

    def face_of(self, e, faces=None):
        for f in faces or self.faces():
            if e in f.ends:
                return f
        raise KeyError(e)

    def disc_faces(self):
        return [f for f in self.faces() if f.kind != "Annulus"]

    def euler(self):
        return 2 - 2 * self.genus - self.nbound

    def corner_degree_sum(self, f):
        return sum(self.degree(c) for c in f.corners)

    # -- serialization -------------------------------------------------------
    def to_text(self):
        lines = [f"surface {self.name}", f"genus {self.genus}", f"boundaries {self.nbound}"]
        for bid, toks in self.components:
            parts = []
            for t in toks:
                if t[0] == "m":
                    parts.append(f"m({t[1]})[" + " ".join(f"{e.arc}.{e.end}" for e in t[2]) + "]")
                else:
                    parts.append(f"u({t[1]})")
            lines.append(f"boundary {bid}: " + " ".join(parts))
        for (sid, i) in self.minimal_segments():
            lines.append(f"deg {sid} {i} = {self.min_degree(sid, i)}")
        for (sid, i), nm in sorted(self.names.items()):
            lines.append(f"name {sid} {i} {nm}")
        for bid, e in sorted(self.holes.items()):
            lines.append(f"hole {bid}: {e.arc}.{e.end}")
        if self.involution:
            inv = self.involution
            done, parts = set(), []
            for a in sorted(inv.arc_map):
                b, sw = inv.arc_map[a]
                if a in done:
                    continue
                done |= {a, b}
                parts.append(f"{a}<->{b}" + ("!" if sw else ""))
            lines.append("involution arcs: " + " ".join(parts))
            done, parts = set(), []
            for s in sorted(inv.seg_map):
                if s in done:
                    continue
                done |= {s, inv.seg_map[s]}
                parts.append(f"{s}<->{inv.seg_map[s]}")
            lines.append("involution segs: " + " ".join(parts))
            lines.append(f"fixedpoints {inv.fixedpoints}")
        return "\n".join(lines) + "\n"

    def with_degrees(self, degrees, name=None):
        return Surface(name or self.name, self.genus, self.nbound, self.components,
                       dict(degrees), dict(self.names), self.involution, dict(self.holes))

    def shift_arc(self, arc, k=1, name=None):
        """Same curves with the grading of ``arc`` replaced by arc[k]: segments
        leaving the arc gain k, segments arriving lose k."""
        deg = {ms: self.min_degree(*ms) for ms in self.minimal_segments()}
        for e in (End(arc, 0), End(arc, 1)):
            sid, p = self.end_pos[e]
            if p >= 1:
                deg[(sid, p)] += k
            if p + 1 < len(self.seg_ends[sid]):
                deg[(sid, p + 1)] -= k
        return self.with_degrees(deg, name=name)

    def without_arcs(self, arcs, name=None):
        """The subsystem obtained by deleting ``arcs``; merged minimal segments
        keep their total degree and composite name."""
        arcs = set(arcs)
        comps, degrees, names = [], {}, {}
        for bid, toks in self.components:
            new = []
            for t in toks:
                if t[0] != "m":
                    new.append(t)
                    continue
                sid, ends = t[1], t[2]
                keep = [p for p, e in enumerate(ends) if e.arc not in arcs]
                new.append(("m", sid, tuple(ends[p] for p in keep)))
                for i in range(1, len(keep)):
                    m = MSeg(sid, keep[i - 1], keep[i])
                    degrees[(sid, i)] = self.degree(m)
                    names[(sid, i)] = self.label(m)
            comps.append((bid, new))
        inv = None
        if self.involution:
            if any(self.involution.arc(a) not in arcs for a in arcs):
                raise InvolutionError("deleted arcs must form a union of orbits")
            inv = Involution({a: v for a, v in self.involution.arc_map.items() if a not in arcs},
                             dict(self.involution.seg_map), self.involution.fixedpoints)
        holes = {b: e for b, e in self.holes.items() if e.arc not in arcs}
        if len(holes) != len(self.holes):
            raise ValidationError("a hole marker sits on a deleted arc")
        return Surface(name or self.name, self.genus, self.nbound, comps, degrees, names, inv, holes)


_TOKEN = re.compile(r"m\(\s*([^)\s]+)\s*\)\s*\[([^\]]*)\]|u\(\s*([^)\s]+)\s*\)")
_END = re.compile(r"([^\s.]+)\.([01])")


def _parse_tokens(text, lineno):
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"line {lineno}: cannot read boundary token at {text[pos:pos + 20]!r}")
        if m.group(1) is not None:
            ends = []
            for w in m.group(2).split():
                em = _END.fullmatch(w)
                if not em:
                    raise ParseError(f"line {lineno}: bad arc end {w!r}")
                ends.append(End(em.group(1), int(em.group(2))))
            toks.append(("m", m.group(1), tuple(ends)))
        else:
            toks.append(("u", m.group(3)))
        pos = m.end()
    return toks


def parse_surface(text, validate=True):
    name, genus, nbound = None, None, None
    comps, degrees, names, holes = [], {}, {}, {}
    arc_map, seg_map, fixed = None, None, 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("surface "):
                name = line.split(None, 1)[1].strip()
            elif line.startswith(("genus", "boundaries")) and not line.startswith("boundary "):
                words = line.split()
                if len(words) % 2:
                    raise ParseError(f"line {lineno}: expected key/value pairs")
                for key, val in zip(words[::2], words[1::2]):
                    if key == "genus":
                        genus = int(val)
                    elif key == "boundaries":
                        nbound = int(val)
                    else:
                        raise ParseError(f"line {lineno}: unknown key {key}")
            elif line.startswith("boundary "):
                head, _, rest = line.partition(":")
                bid = head.split()[1]
                comps.append((bid, _parse_tokens(rest, lineno)))
            elif line.startswith("deg "):
                m = re.fullmatch(r"deg\s+(\S+)\s+(\d+)\s*=\s*(-?\d+)", line)
                if not m:
                    raise ParseError(f"line {lineno}: bad deg line")
                degrees[(m.group(1), int(m.group(2)))] = int(m.group(3))
            elif line.startswith("name "):
                w = line.split()
                if len(w) != 4:
                    raise ParseError(f"line {lineno}: bad name line")
                names[(w[1], int(w[2]))] = w[3]
            elif line.startswith("hole "):
                m = re.fullmatch(r"hole\s+(\S+)\s*:\s*([^\s.]+)\.([01])", line)
                if not m:
                    raise ParseError(f"line {lineno}: bad hole line")
                holes[m.group(1)] = End(m.group(2), int(m.group(3)))
            elif line.startswith("involution arcs:"):
                arc_map = {}
                for w in line.split(":", 1)[1].split():
                    m = re.fullmatch(r"([^<\s]+)<->([^!\s]+)(!?)", w)
                    if not m:
                        raise ParseError(f"line {lineno}: bad involution pair {w!r}")
                    a, b, sw = m.group(1), m.group(2), bool(m.group(3))
                    for x, y in ((a, b), (b, a)):
                        if x in arc_map and arc_map[x] != (y, sw):
                            raise InvolutionError(f"arc {x} mapped twice")
                        arc_map[x] = (y, sw)
            elif line.startswith("involution segs:"):
                seg_map = {}
                for w in line.split(":", 1)[1].split():
                    m = re.fullmatch(r"([^<\s]+)<->(\S+)", w)
                    if not m:
                        raise ParseError(f"line {lineno}: bad involution pair {w!r}")
                    a, b = m.group(1), m.group(2)
                    for x, y in ((a, b), (b, a)):
                        if x in seg_map and seg_map[x] != y:
                            raise InvolutionError(f"segment {x} mapped twice")
                        seg_map[x] = y
            elif line.startswith("fixedpoints"):
                fixed = int(line.split()[1])
            else:
                raise ParseError(f"line {lineno}: unknown directive {line.split()[0]!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, (ParseError, InvolutionError)):
                raise
            raise ParseError(f"line {lineno}: {exc}") from None
    if name is None or genus is None or nbound is None:
        raise ParseError("surface, genus and boundaries lines are required")
    if len(comps) != nbound:
        raise ParseError(f"declared {nbound} boundaries but found {len(comps)}")
    inv = None
    if arc_map is not None or seg_map is not None:
        inv = Involution(arc_map or {}, seg_map or {}, fixed)
    s = Surface(name, genus, nbound, comps, degrees, names, inv, holes)
    if validate:
        validate_surface(s)
    return s


def load_surface(path):
    with open(path, encoding="utf-8") as fh:
        return parse_surface(fh.read())


def compute_faces(s):
    return s.faces()


def validate_surface(s):
    """Structural invariants, the disc rule and the involution (if any)."""
    for bid, toks in s.components:
        if not any(t[0] == "u" for t in toks):
            raise ValidationError(f"boundary {bid} has no unmarked segment")
        if not any(t[0] == "m" and t[2] for t in toks):
            if bid not in s.holes:
                raise ValidationError(f"boundary {bid} carries no arc ends; add a hole line")
            if any(t[0] == "m" for t in toks):
                raise ValidationError(f"boundary {bid}: marked segment without arcs")
    for bid in s.holes:
        if bid not in dict(s.components):
            raise ValidationError(f"hole line names unknown boundary {bid}")
    faces = s.faces()
    for f in faces:
        if f.kind == "FullyMarkedDisc":
            n = f.n_sides()
            if n < 3:
                raise ValidationError(f"face {f.index} is a {'digon' if n == 2 else 'monogon'}"
                                      f" with corners {describe_face(s, f)}")
            tot = s.corner_degree_sum(f)
            if tot != n - 2:
                raise ValidationError(f"face {f.index} ({describe_face(s, f)}) has corner degree"
                                      f" sum {tot}, expected {n - 2}")
    ndisc = len(s.disc_faces())
    if ndisc - len(s.arcs) != s.euler():
        raise ValidationError(f"Euler count {ndisc} faces - {len(s.arcs)} arcs != {s.euler()}")
    if s.involution is not None:
        validate_involution(s)
    return s


def describe_face(s, f):
    parts = []
    for c in f.corners:
        parts.append(s.label(c) if isinstance(c, MSeg) else "~" + "/".join(c.tokens))
    return "(" + ", ".join(parts) + ")"


@dataclass
class Report:
    ok: bool
    problems: list
    data: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def validate_fullness(s):
    problems = []
    faces = s.faces()
    sides = sum(f.n_sides() for f in faces)
    if sides != 2 * len(s.arcs):
        problems.append(f"face partition covers {sides} sides, expected {2 * len(s.arcs)}")
    trivial_disc = s.genus == 0 and s.nbound == 1
    for f in faces:
        gaps = f.gaps()
        if f.kind == "Annulus":
            if gaps:
                problems.append(f"annulus face {f.index} also has an unmarked corner")
            continue
        if len(gaps) > 1:
            problems.append(f"face {f.index} {describe_face(s, f)} has {len(gaps)} unmarked corners")
        for g in gaps:
            marked = [t for t in g.tokens if t in s.seg_ends]
            if marked or len(g.tokens) != 1:
                problems.append(f"face {f.index}: boundary walk crosses {'/'.join(g.tokens) or 'nothing'};"
                                " boundary arcs are missing there")
                continue
            if f.n_sides() != 1:
                u = g.tokens[0]
                bid, k = s.seg_comp[u]
                toks = dict(s.components)[bid]
                left, right = toks[(k - 1) % len(toks)][1], toks[(k + 1) % len(toks)][1]
                if trivial_disc and left == right and not s.arcs:
                    continue
                problems.append(f"missing boundary arc between M-segments {left} and {right}"
                                f" around {u}")
    for f in faces:
        if f.kind == "FullyMarkedDisc" and f.n_sides() < 3:
            problems.append(f"face {f.index} has fewer than three sides")
    return Report(not problems, problems, {"faces": len(faces)})


def validate_involution(s):
    inv = s.involution
    if inv is None:
        raise InvolutionError("surface has no involution")
    if set(inv.arc_map) != set(s.arcs):
        raise InvolutionError("involution must map every arc")
    allsegs = set(s.seg_comp)
    if set(inv.seg_map) != allsegs:
        raise InvolutionError("involution must map every segment")
    for a, (b, sw) in inv.arc_map.items():
        if inv.arc_map[b] != (a, sw):
            raise InvolutionError(f"arc map is not of order 2 at {a}")
        if a == b and not sw:
            raise InvolutionError(f"g fixes arc {a} pointwise; no arc may satisfy g(a)=a")
    for x, y in inv.seg_map.items():
        if inv.seg_map[y] != x:
            raise InvolutionError(f"segment map is not of order 2 at {x}")
        if x == y:
            raise InvolutionError(f"g fixes boundary segment {x}")
        if (x in s.seg_ends) != (y in s.seg_ends):
            raise InvolutionError(f"g maps marked to unmarked at {x}")
    for sid, ends in s.seg_ends.items():
        img = [inv.end(e) for e in ends]
        if img != s.seg_ends[inv.seg_map[sid]]:
            raise InvolutionError(f"ends of {sid} are not carried onto the ends of {inv.seg_map[sid]}")
        for i in range(1, len(ends)):
            if s.min_degree(sid, i) != s.min_degree(inv.seg_map[sid], i):
                raise InvolutionError(f"degree of minimal segment {sid} {i} is not g-invariant")
    comps = dict(s.components)
    for bid, toks in s.components:
        img = [inv.seg_map[t[1]] for t in toks]
        bid2 = s.seg_comp[img[0]][0]
        toks2 = [t[1] for t in comps[bid2]]
        k = toks2.index(img[0])
        if toks2[k:] + toks2[:k] != img:
            raise InvolutionError(f"cyclic order of boundary {bid} is not preserved")
    # faces go to faces
    faces = s.faces()
    key = {}
    for f in faces:
        for e in f.ends:
            key[e] = f.index
    inv_faces = 0
    for f in faces:
        imgs = {key[inv.end(e)] for e in f.ends}
        if len(imgs) != 1:
            raise InvolutionError(f"face {f.index} is not mapped to a face")
        if imgs == {f.index}:
            if f.kind == "Annulus":
                continue
            inv_faces += 1
    x = len(inv.invariant_arcs()) + inv.fixedpoints
    if inv.fixedpoints != inv_faces:
        raise InvolutionError(f"declared {inv.fixedpoints} isolated fixed points but"
                              f" {inv_faces} faces are g-invariant")
    chi = s.euler()
    if (chi + x) % 2:
        raise InvolutionError("Riemann-Hurwitz: chi + x is odd")
    chibar = (chi + x) // 2
    orbits = set()
    for bid, toks in s.components:
        bid2 = s.seg_comp[inv.seg_map[toks[0][1]]][0]
        orbits.add(frozenset((bid, bid2)))
    bbar = len(orbits)
    if (2 - chibar - bbar) % 2 or 2 - chibar - bbar < 0:
        raise InvolutionError("Riemann-Hurwitz: quotient genus is not a nonnegative integer")
    gbar = (2 - chibar - bbar) // 2
    mbar = len(s.marked) // 2
    return Report(True, [], {"x": x, "genus_bar": gbar, "boundaries_bar": bbar, "marked_bar": mbar})


def enumerate_msegments(s):
    """Rows (label, source arc end, target arc end, degree) for every M-segment."""
    return [(s.label(m), s.source(m), s.target(m), s.degree(m)) for m in s.msegments()]
