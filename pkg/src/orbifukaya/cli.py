"""orbifukaya command line.

Exit codes: 0 success, 1 validation or computation failure, 2 usage error.
"""
import argparse
import hashlib
import json
import os
import sys

from . import __version__
from .ainfty import check_stasheff
from .catalog import build_entries, classify, enumerate_dissections, summary_text, write_catalog
from .fukaya import build_category, induced_involution
from .objects import Context, ObjectSyntaxError, parse_object, parse_object_list
from .orbifold import (DissectionError, UnsolvableGrading, algebra_presentation,
                       check_rigidity_combinatorial, endo_algebra, is_tilting, lift_dissection,
                       parse_dissection, solve_grading, validate_dissection)
from .quiver import NotBasicReducible
from .skew import SkewCategory, corner_hom
from .surface import ParseError, ValidationError, describe_face, parse_surface, validate_fullness


class Failure(Exception):
    """A computation or validation failure with a report to print."""

    def __init__(self, lines, data=None):
        super().__init__("\n".join(lines))
        self.lines, self.data = lines, data or {}


def _hash(data):
    return hashlib.sha256(data).hexdigest()[:16]


def _read(path):
    with open(path, "rb") as fh:
        raw = fh.read()
    return raw.decode("utf-8"), _hash(raw)


def _is_dissection(text):
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            return line.startswith("orbifold")
    return False


def _load_surface(text):
    try:
        return parse_surface(text)
    except (ParseError, ValidationError) as e:
        raise Failure([f"invalid surface: {e}"], {"error": str(e)})


def _category(s, max_corners=None):
    rep = validate_fullness(s)
    if not rep.ok:
        raise Failure(["arc system is not full:"] + [f"  {p}" for p in rep.problems],
                      {"error": "not full", "problems": rep.problems})
    fc = build_category(s, max_corners=max_corners)
    sk = SkewCategory(fc.cat, induced_involution(fc)) if s.involution is not None else None
    return fc, sk


def _load_dissection(text):
    try:
        d = parse_dissection(text)
    except DissectionError as e:
        raise Failure([f"invalid dissection: {e}"], {"error": str(e)})
    return d


def _degrees(text):
    lo, sep, hi = text.partition("..")
    try:
        return (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError:
        raise argparse.ArgumentTypeError("degrees must read LO..HI")


def _fmt_comps(fc, comps):
    terms = []
    for key, c in sorted(comps.items(), key=lambda kv: str(kv[0])):
        *idx, mor = key
        terms.append(f"{c}*{fc.label(mor) if hasattr(fc, 'label') else mor}[{','.join(map(str, idx))}]")
    return " + ".join(terms) if terms else "0"


# -- subcommands -------------------------------------------------------------------

def cmd_validate(args, text):
    lines, data = [], {}
    if _is_dissection(text):
        d = _load_dissection(text)
        rep = validate_dissection(d)
        data = {"kind": "dissection", "ok": rep.ok, "problems": rep.problems,
                "arcs": len(d.arcs), "expected": d.expected_count()}
        lines.append(f"dissection: {len(d.arcs)} arcs, expected {d.expected_count()}")
        for p in rep.problems:
            lines.append(f"problem: {p}")
        if not rep.ok:
            raise Failure(lines + ["verdict: invalid"], data)
        if rep.triangle:
            lines.append(f"orbifold triangle: {','.join(rep.triangle)}")
        try:
            t = solve_grading(d)
        except UnsolvableGrading as e:
            raise Failure(lines + [f"grading: {e}", "verdict: invalid"], data)
        lines.append("grading: " + " ".join(f"{k}={t[k] + d.arc(k).shift}" for k in sorted(t)))
        data["grading"] = {k: t[k] + d.arc(k).shift for k in sorted(t)}
        lines.append("verdict: valid")
        return lines, data
    s = _load_surface(text)
    faces = s.faces()
    lines.append(f"surface {s.name}: genus {s.genus}, {s.nbound} boundary components, "
                 f"{len(s.arcs)} arcs")
    for f in faces:
        extra = ""
        if f.kind == "FullyMarkedDisc":
            extra = f", corner degree sum {s.corner_degree_sum(f)}"
        lines.append(f"face {f.index}: {f.kind}, {f.n_sides()} sides{extra}: {describe_face(s, f)}")
    rep = validate_fullness(s)
    data = {"kind": "surface", "arcs": len(s.arcs), "faces": len(faces), "full": rep.ok,
            "problems": rep.problems, "involution": s.involution is not None}
    lines.append(f"full: {'yes' if rep.ok else 'no'}")
    for p in rep.problems:
        lines.append(f"problem: {p}")
    if s.involution is not None:
        lines.append("involution: valid")
    if not rep.ok:
        raise Failure(lines + ["verdict: invalid"], data)
    lines.append("verdict: valid")
    return lines, data


def cmd_stasheff(args, text):
    s = _load_surface(text)
    fc, _ = _category(s, args.max_corners)
    mode = "sampled" if args.sample else "exhaustive"
    rep = check_stasheff(fc.cat, max_n=args.max_n, mode=mode, seed=args.seed,
                         trials=args.sample or 0)
    lines = [f"surface {s.name}: {len(fc.mor_of)} M-segments, "
             f"{len(fc.polygons)} polygons"] + rep.lines()
    data = {"mode": mode, "checked": rep.checked, "violations": len(rep.violations),
            "max_n": args.max_n}
    if not rep.ok:
        raise Failure(lines, data)
    return lines, data


def _objects_ctx(text, max_corners=None):
    s = _load_surface(text)
    fc, sk = _category(s, max_corners)
    return fc, Context(fc, sk)


def cmd_hom(args, text):
    fc, ctx = _objects_ctx(text, args.max_corners)
    try:
        A = parse_object(getattr(args, "from"), ctx)
        B = parse_object(args.to, ctx)
    except (ObjectSyntaxError, ValueError) as e:
        raise Failure([f"object error: {e}"], {"error": str(e)})
    lo, hi = args.degrees
    lines = [f"Hom({getattr(args, 'from')}, {args.to})", "degree dim"]
    data = {"degrees": {}}
    for ell in range(lo, hi + 1):
        dim, reps = corner_hom(A, B, ell)
        lines.append(f"{ell} {dim}")
        data["degrees"][str(ell)] = dim
        for r in reps:
            lines.append(f"  witness: {_fmt_comps(fc, r)}")
    return lines, data


def cmd_endo(args, text):
    if _is_dissection(text):
        d = _load_dissection(text)
        rep = validate_dissection(d)
        if not rep.ok:
            raise Failure([f"problem: {p}" for p in rep.problems] + ["verdict: invalid"])
        lift = lift_dissection(d)
        if args.objects:
            keep = set(args.objects.replace(";", ",").split(","))
            objs = [o for a in d.arcs if a.id in keep for o in lift.assignment[a.id]]
            names = [o.name.strip("{}").replace("^", "") for o in objs]
            P = algebra_presentation(objs, names, args.max_rel_len)
        else:
            P = endo_algebra(lift, args.max_rel_len)
    else:
        if not args.objects:
            raise Failure(["endo on a surface needs --objects"])
        fc, ctx = _objects_ctx(text, args.max_corners)
        try:
            objs = parse_object_list(args.objects, ctx)
        except (ObjectSyntaxError, ValueError) as e:
            raise Failure([f"object error: {e}"], {"error": str(e)})
        P = algebra_presentation(objs, None, args.max_rel_len)
    body = P.to_text().rstrip("\n").split("\n")
    data = {"vertices": P.vertices, "arrows": [list(a) for a in P.arrows],
            "relations": [[[str(c), list(p)] for c, p in r] for r in P.relations],
            "cartan": P.cartan, "coxeter": P.coxeter, "complete": P.complete}
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(P.to_text())
    return body, data


def cmd_tilt(args, text):
    d = _load_dissection(text)
    rep = validate_dissection(d, complete=False)
    if not rep.ok:
        raise Failure([f"problem: {p}" for p in rep.problems])
    lift = lift_dissection(d, solve=not args.no_solve)
    v = is_tilting(lift)
    comb = check_rigidity_combinatorial(d.arcs, d.marked, lift.grading.t)
    lines = [f"arcs: {v.count}, expected {v.expected}"]
    for (a, b), dims in sorted(v.table.items()):
        if dims:
            lines.append(f"Hom({a}, {b}): " + " ".join(f"{k}:{n}" for k, n in sorted(dims.items())))
    lines.append(f"rigid (homological): {'yes' if v.rigid else 'no'}")
    lines.append(f"rigid (local conditions): {'yes' if comb.rigid else 'no'}")
    for x in comb.violations:
        lines.append(f"  violation: {x}")
    lines.append(f"count: {'ok' if v.count_ok else 'fails'}")
    lines.append(f"tilting: {'yes' if v.tilting else 'no'}")
    data = {"rigid": v.rigid, "rigid_combinatorial": comb.rigid, "count_ok": v.count_ok,
            "tilting": v.tilting, "violations": comb.violations,
            "table": {f"{a} -> {b}": {str(k): n for k, n in sorted(dims.items())}
                      for (a, b), dims in sorted(v.table.items())}}
    if not v.tilting:
        raise Failure(lines, data)
    return lines, data


def cmd_dn(args, text):
    ds = enumerate_dissections(args.rank)
    entries = build_entries(ds, args.max_rel_len, args.jobs)
    cat = classify(entries, args.rank)
    write_catalog(cat, args.out)
    lines = summary_text(cat).rstrip("\n").split("\n")
    data = {"rank": args.rank, "dissections": len(cat.entries), "iso_classes": len(cat.classes),
            "non_skew_gentle_iso_classes": len(cat.non_skew_gentle_classes()),
            "families": cat.family_counts()}
    return lines, data


# -- driver --------------------------------------------------------------------------

def make_parser():
    p = argparse.ArgumentParser(prog="orbifukaya", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=f"orbifukaya {__version__}")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(q, has_input=True):
        if has_input:
            q.add_argument("input", help="surface or dissection file")
        q.add_argument("--emit-data", nargs="?", const=True, default=None, metavar="PATH",
                       help="also write a JSON twin of the report")
        q.add_argument("--max-corners", type=int, default=None,
                       help="largest glued polygon used for the higher products")

    q = sub.add_parser("validate", help="check a surface or dissection file")
    common(q)
    q = sub.add_parser("stasheff", help="check the A-infinity relations")
    common(q)
    q.add_argument("--max-n", type=int, default=8)
    q.add_argument("--sample", type=int, default=0, metavar="T", help="random tuples instead of all")
    q.add_argument("--seed", type=int, default=0)
    q = sub.add_parser("hom", help="Hom table between two objects")
    common(q)
    q.add_argument("--from", required=True, metavar="OBJ")
    q.add_argument("--to", required=True, metavar="OBJ")
    q.add_argument("--degrees", type=_degrees, default=(0, 0), metavar="LO..HI")
    q = sub.add_parser("endo", help="quiver with relations of an endomorphism algebra")
    common(q)
    q.add_argument("--objects", default=None, help="objects separated by ';' (arc ids for dissections)")
    q.add_argument("--max-rel-len", type=int, default=4)
    q.add_argument("--out", default=None)
    q = sub.add_parser("tilt", help="tilting check for a dissection")
    common(q)
    q.add_argument("--no-solve", action="store_true", help="use the shifts in the file as gradings")
    q = sub.add_parser("dn", help="catalog of dissections of the disc with one orbifold point")
    common(q, has_input=False)
    q.add_argument("--rank", type=int, required=True)
    q.add_argument("--out", required=True)
    q.add_argument("--jobs", type=int, default=1)
    q.add_argument("--max-rel-len", type=int, default=4)
    return p


COMMANDS = {"validate": cmd_validate, "stasheff": cmd_stasheff, "hom": cmd_hom,
            "endo": cmd_endo, "tilt": cmd_tilt, "dn": cmd_dn}


def run(argv=None, out=None):
    out = out or sys.stdout
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.cmd == "dn":
        if args.rank < 3:
            print("orbifukaya dn: --rank must be at least 3", file=sys.stderr)
            return 2
        text, digest = "", _hash(f"dn rank={args.rank} max-rel-len={args.max_rel_len}".encode())
    else:
        try:
            text, digest = _read(args.input)
        except OSError as e:
            print(f"orbifukaya: cannot read {args.input}: {e.strerror}", file=sys.stderr)
            return 2
    header = [f"# orbifukaya {__version__} {args.cmd}", f"# input sha256 {digest}"]
    code = 0
    try:
        lines, data = COMMANDS[args.cmd](args, text)
    except Failure as f:
        lines, data, code = f.lines, f.data, 1
    except (DissectionError, UnsolvableGrading, NotBasicReducible, ValueError) as e:
        lines, data, code = [f"error: {type(e).__name__}: {e}"], {"error": str(e)}, 1
    report = "\n".join(header + lines) + "\n"
    out.write(report)
    if args.cmd == "dn":
        with open(os.path.join(args.out, "summary.txt"), "w") as fh:
            fh.write(report)
    if args.emit_data:
        path = args.emit_data if isinstance(args.emit_data, str) else (
            (getattr(args, "out", None) or args.cmd) + ".json")
        if args.cmd == "dn" and not isinstance(args.emit_data, str):
            path = os.path.join(args.out, "summary.json")
        payload = {"version": __version__, "command": args.cmd, "input_sha256": digest,
                   "exit": code, "data": data}
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=1, sort_keys=True, default=str)
            fh.write("\n")
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
