"""The A-infinity category of a full graded arc system.

Basis: M-segments plus units.  mu^1 = 0, mu^2 concatenates with the sign
(-1)^{|a|}, and the higher products come from polygons: fully marked faces,
and chains of such faces glued along shared arcs (immersed discs).  Corners
of an immersed disc may repeat when the chain wraps around an annulus.
"""
from collections import deque
from fractions import Fraction

from .ainfty import AInftyCategory, GroupAction, Mor, StrictFunctor, add_into, sgn
from .surface import Gap, MSeg, describe_face, other, validate_fullness


class FullnessError(ValueError):
    pass


class InvolutionError(ValueError):
    pass


def _canon(corners):
    n = len(corners)
    rots = [tuple(corners[i:] + corners[:i]) for i in range(n)]
    return min(rots)


MAX_CORNERS = 10


def polygons(s, max_corners=None):
    """Immersed polygons obtained by gluing fully marked faces along arcs, as
    canonical cyclic tuples of MSeg corners.

    On surfaces where a chain of faces can wrap around a core curve there are
    infinitely many; only those with at most ``max_corners`` corners are
    produced, which determines mu^n exactly for n <= max_corners.
    """
    faces = [f for f in s.disc_faces() if f.kind == "FullyMarkedDisc"]
    start_face = {}
    for f in faces:
        for k, e in enumerate(f.ends):
            start_face[e] = (f, k)
    if max_corners is None:
        max_corners = MAX_CORNERS
    seen = set()
    queue = deque()
    for f in faces:
        c = _canon(list(f.corners))
        if c not in seen:
            seen.add(c)
            queue.append(c)
    while queue:
        poly = list(queue.popleft())
        n = len(poly)
        for k in range(n):
            ck, ck1 = poly[k], poly[(k + 1) % n]
            e1 = s.target(ck)
            if e1 not in start_face:
                continue
            f2, j = start_face[e1]
            m = len(f2.corners)
            seq = [f2.corners[(j + t) % m] for t in range(m)]   # v, ..., w
            v, w = seq[0], seq[-1]
            left = s.concat(ck, v)
            right = s.concat(w, ck1)
            if left is None or right is None:
                continue
            new = [left] + seq[1:-1] + [right]
            rest = [poly[(k + 2 + t) % n] for t in range(n - 2)]
            new = new + rest
            if len(new) > max_corners:
                continue
            c = _canon(new)
            if c not in seen:
                seen.add(c)
                queue.append(c)
    return sorted(seen, key=lambda p: (len(p), p))


class FukayaCategory:
    def __init__(self, surface, glue=True, max_corners=None):
        self.surface = s = surface
        self.max_corners = max_corners or MAX_CORNERS
        self.mor_of = {}
        basis = []
        for m in s.msegments():
            mor = Mor(("m",) + tuple(m), s.source(m).arc, s.target(m).arc, s.degree(m))
            self.mor_of[m] = mor
            basis.append(mor)
        self.mseg_of = {v: k for k, v in self.mor_of.items()}
        table = {}
        # mu^2
        for a in s.msegments():
            for b in s.msegments():
                ab = s.concat(a, b)
                if ab is not None:
                    table[(self.mor_of[b], self.mor_of[a])] = {self.mor_of[ab]: sgn(s.degree(a))}
        self.polygons = polygons(s, self.max_corners) if glue else sorted(
            _canon(list(f.corners)) for f in s.disc_faces() if f.kind == "FullyMarkedDisc")
        self.collisions = []
        units = {X: Mor(("1", X), X, X, 0) for X in s.arcs}
        disc = {}
        for poly in self.polygons:
            n = len(poly)
            for r in range(n):
                seq = [poly[(r + t) % n] for t in range(n)]     # a_1 .. a_n
                a1, an = seq[0], seq[-1]
                X0 = s.source(a1).arc
                key = tuple(self.mor_of[c] for c in reversed(seq))
                self._put(disc, key, units[X0], 1)
                for b in s.msegments():
                    if b.seg == a1.seg and b.lo == a1.hi:
                        a1b = s.concat(b, a1)
                        key = tuple(self.mor_of[c] for c in reversed(seq[1:])) + (self.mor_of[a1b],)
                        self._put(disc, key, self.mor_of[b], sgn(s.degree(b)))
                    if b.seg == an.seg and b.hi == an.lo:
                        ban = s.concat(an, b)
                        key = (self.mor_of[ban],) + tuple(self.mor_of[c] for c in reversed(seq[:-1]))
                        self._put(disc, key, self.mor_of[b], 1)
        table.update(disc)
        self.cat = AInftyCategory(s.arcs, basis, table, name=s.name)

    def _put(self, table, key, out, coeff):
        cur = table.setdefault(key, {})
        if cur:
            self.collisions.append(key)
        add_into(cur, {out: Fraction(coeff)})

    # conveniences
    def m(self, label):
        """Basis morphism by label (``a0``, ``a0*ga2``) or unit ``1:X``."""
        if label.startswith("1:"):
            return self.cat.units[label[2:]]
        return self.mor_of[self.surface.mseg_by_label(label)]

    def label(self, mor):
        if self.cat.is_unit(mor):
            return f"1:{mor.src}"
        return self.surface.label(self.mseg_of[mor])

    def mu(self, *labels):
        out = self.cat.mu([self.m(x) if isinstance(x, str) else x for x in labels])
        return {self.label(k): v for k, v in out.items()}


def build_category(s, glue=True, max_corners=None):
    rep = validate_fullness(s)
    if not rep.ok:
        raise FullnessError("; ".join(rep.problems))
    return FukayaCategory(s, glue=glue, max_corners=max_corners)


def induced_involution(fc):
    s = fc.surface
    inv = s.involution
    if inv is None:
        raise InvolutionError("surface has no involution")
    obj_map = {a: inv.arc(a) for a in s.arcs}
    mor_map = {}
    for m, mor in fc.mor_of.items():
        gm = MSeg(inv.seg_map[m.seg], m.lo, m.hi)
        if gm not in fc.mor_of:
            raise InvolutionError(f"no image for {s.label(m)}")
        mor_map[mor] = {fc.mor_of[gm]: Fraction(1)}
    return GroupAction(StrictFunctor(fc.cat, fc.cat, obj_map, mor_map))


def subsystem_functor(small, big):
    """Inclusion A_small -> A_big for an arc subsystem: an M-segment goes to
    the M-segment of the big system with the same endpoints."""
    s, b = small.surface, big.surface
    mor_map = {}
    for m, mor in small.mor_of.items():
        (sid, p), (sid2, q) = b.end_pos[s.source(m)], b.end_pos[s.target(m)]
        if sid != sid2 or q >= p:
            raise ValueError(f"{s.label(m)} has no counterpart")
        bm = MSeg(sid, q, p)
        if b.degree(bm) != s.degree(m):
            raise ValueError(f"degree of {s.label(m)} differs in the big system")
        mor_map[mor] = {big.mor_of[bm]: Fraction(1)}
    return StrictFunctor(small.cat, big.cat, {a: a for a in s.arcs}, mor_map)


__all__ = ["FukayaCategory", "build_category", "induced_involution", "polygons",
           "FullnessError", "Gap", "describe_face", "other"]
