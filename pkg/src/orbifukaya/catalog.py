"""Tagged dissections of the disc with one orbifold point and their
algebras: enumeration, classification up to isomorphism, Coxeter checks."""
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .orbifold import (Cover, TaggedDissection, _pairwise_problems, chord, endo_algebra,
                       is_skew_gentle, is_tilting, lift_dissection, orbifold_arc,
                       validate_dissection)
from .quiver import (coxeter_polynomial, dynkin_edges, invariants, isomorphic,
                     path_algebra_cartan)


def candidate_arcs(m):
    """Every chord class and every tagged orbifold arc of the disc with m
    marked segments."""
    out = []
    for a in range(m):
        for b in range(a + 1, m):
            out.append(chord(f"c{a}-{b}", a, b, lift=(a, b)))
            out.append(chord(f"c{a}-{b + m}", a, b, lift=(a, b + m)))
    for s in range(m):
        for sign in (1, -1):
            out.append(orbifold_arc(f"o{s}{'+' if sign > 0 else '-'}", s, sign))
    return out


def enumerate_dissections(n):
    """All tagged dissections of the disc with n - 1 marked segments and one
    orbifold point (ungraded; isotopic copies carry shift 0)."""
    if n < 3:
        raise ValueError("rank must be at least 3")
    m = n - 1
    cover = Cover(m)
    cands = candidate_arcs(m)
    k = len(cands)
    ok = [[not _pairwise_problems(cover, [cands[i], cands[j]]) if i != j else False
           for j in range(k)] for i in range(k)]
    found = []

    def grow(chosen, start):
        if len(chosen) == n:
            arcs = [cands[i] for i in chosen]
            d = TaggedDissection(m, arcs)
            rep = validate_dissection(d)
            if rep.ok:
                found.append(_renumber(d))
            return
        for i in range(start, k):
            if all(ok[i][j] for j in chosen):
                grow(chosen + [i], i + 1)
    grow([], 0)
    return found


def _renumber(d):
    arcs = []
    for k, a in enumerate(d.arcs, 1):
        arcs.append(type(a)(str(k), a.ends, a.tags, a.shift, a.lift))
    name = " ".join(a.id for a in d.arcs)
    out = TaggedDissection(d.marked, arcs, d.points, {}, name)
    rep = validate_dissection(out)
    if rep.triangle:
        out.pieces = {0: rep.triangle}
    return out


def family(d):
    """Families of non-skew-gentle dissections: by the number k of orbifold
    arcs, and for k = 2 also by the angle of the orbifold triangle (in the
    cover, the number of marked points it spans)."""
    if is_skew_gentle(d):
        return "skew-gentle"
    k = sum(1 for a in d.arcs if a.kind == "orbifold")
    if k != 2:
        return f"{k} orbifold arcs"
    rep = validate_dissection(d)
    tri = next(f for f in rep.pieces if f.kind == "orbifold")
    span = (tri.centre[0] - tri.centre[1]) % (2 * d.marked)
    return f"2 orbifold arcs, triangle span {span}"


@dataclass
class CatalogEntry:
    dissection: TaggedDissection
    algebra: object
    skew_gentle: bool
    family: str
    tilting: object = None
    iso_class: int = None


@dataclass
class Catalog:
    rank: int
    entries: list
    classes: list = field(default_factory=list)     # representatives (entry index)

    def non_skew_gentle_classes(self):
        return [c for c in self.classes if not self.entries[c].skew_gentle]

    def family_counts(self):
        """Number of iso classes per family (non-skew-gentle entries)."""
        out = {}
        for c in self.non_skew_gentle_classes():
            fam = self.entries[c].family
            out[fam] = out.get(fam, 0) + 1
        return dict(sorted(out.items()))


def build_entry(d, max_len=4, check_tilting=True):
    lift = lift_dissection(d)
    verdict = is_tilting(lift) if check_tilting else None
    alg = endo_algebra(lift, max_len)
    return CatalogEntry(d, alg, is_skew_gentle(d), family(d), verdict)


def _entry_job(args):
    d, max_len, check = args
    return build_entry(d, max_len, check)


def build_entries(dissections, max_len=4, jobs=1, check_tilting=True):
    work = [(d, max_len, check_tilting) for d in dissections]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_entry_job, work))
    return [_entry_job(w) for w in work]


def classify(entries, rank=None):
    """Assign iso classes: entries are compared with earlier class
    representatives sharing the same cheap invariants."""
    cat = Catalog(rank or (len(entries[0].dissection.arcs) if entries else 0), list(entries))
    buckets = {}
    for i, e in enumerate(cat.entries):
        key = (e.skew_gentle, invariants(e.algebra))
        reps = buckets.setdefault(key, [])
        for c in reps:
            if isomorphic(cat.entries[c].algebra, e.algebra):
                e.iso_class = cat.entries[c].iso_class
                break
        else:
            e.iso_class = len(cat.classes)
            cat.classes.append(i)
            reps.append(i)
    return cat


def dynkin_coxeter(kind, n):
    return coxeter_polynomial(path_algebra_cartan(n, dynkin_edges(kind, n)))


def coxeter_check(entry, kind="D"):
    alg = entry.algebra if hasattr(entry, "algebra") else entry
    n = len(alg.vertices)
    return alg.coxeter == dynkin_coxeter(kind, n)


def write_catalog(cat, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    width = len(str(len(cat.entries)))
    for i, e in enumerate(cat.entries):
        stem = f"entry{i:0{width}d}"
        with open(os.path.join(out_dir, stem + ".dis"), "w") as fh:
            fh.write(e.dissection.to_text())
        with open(os.path.join(out_dir, stem + ".quiver"), "w") as fh:
            fh.write(f"# iso class {e.iso_class}\n# family {e.family}\n")
            fh.write(e.algebra.to_text())
    with open(os.path.join(out_dir, "summary.txt"), "w") as fh:
        fh.write(summary_text(cat))


def summary_text(cat):
    ns = cat.non_skew_gentle_classes()
    sg = [c for c in cat.classes if cat.entries[c].skew_gentle]
    lines = [
        f"rank: {cat.rank}",
        f"dissections: {len(cat.entries)}",
        f"skew-gentle dissections: {sum(e.skew_gentle for e in cat.entries)}",
        f"iso classes: {len(cat.classes)}",
        f"skew-gentle iso classes: {len(sg)}",
        f"non-skew-gentle iso classes: {len(ns)}",
    ]
    for fam, k in cat.family_counts().items():
        lines.append(f"family {fam}: {k}")
    bad = [i for i, e in enumerate(cat.entries) if not coxeter_check(e)]
    lines.append(f"coxeter polynomial of type D{cat.rank}: {len(cat.entries) - len(bad)}/{len(cat.entries)}")
    til = [e.tilting for e in cat.entries if e.tilting is not None]
    if til:
        lines.append(f"tilting: {sum(v.tilting for v in til)}/{len(til)}")
    for c in cat.classes:
        e = cat.entries[c]
        members = [i for i, x in enumerate(cat.entries) if x.iso_class == e.iso_class]
        tag = "skew-gentle" if e.skew_gentle else e.family
        lines.append(f"class {e.iso_class}: {len(members)} dissections; {tag}")
    return "\n".join(lines) + "\n"
