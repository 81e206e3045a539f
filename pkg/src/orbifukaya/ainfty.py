"""Finite strictly unital A-infinity categories given by relation tables.

Throughout, tuples of morphisms are written in the usual order
``(a_n, ..., a_1)``: the last entry is applied first.  Linear combinations are
dicts ``{Mor: Fraction}``.
"""
import random
from collections import defaultdict, namedtuple
from fractions import Fraction


class NotComposable(ValueError):
    pass


class Mor(namedtuple("Mor", "key src tgt deg")):
    """Basis morphism ``key`` in Hom^deg(src, tgt)."""
    __slots__ = ()

    @property
    def rdeg(self):
        return self.deg - 1


def sgn(e):
    """(-1)^e for any integer e."""
    return -1 if e % 2 else 1


def add_into(acc, combo, scale=1):
    for m, c in combo.items():
        v = acc.get(m, 0) + scale * c
        if v:
            acc[m] = v
        else:
            acc.pop(m, None)
    return acc


def scaled(combo, c):
    if not c:
        return {}
    return {m: c * v for m, v in combo.items()}


class AInftyCategory:
    """Objects, labelled bases, strict units and a sparse table of mu.

    ``table`` maps a tuple ``(a_n, ..., a_1)`` of non-unit basis morphisms to
    a linear combination.  Unit laws are applied by :meth:`mu` and never
    stored.
    """

    def __init__(self, objects, basis, table, name="A"):
        self.name = name
        self.objects = list(objects)
        self.units = {X: Mor(("1", X), X, X, 0) for X in self.objects}
        self._basis = defaultdict(list)
        for m in basis:
            self._basis[(m.src, m.tgt)].append(m)
        for X, u in self.units.items():
            self._basis[(X, X)].insert(0, u)
        self.table = {}
        for key, val in table.items():
            val = {m: Fraction(c) for m, c in val.items() if c}
            if val:
                self.table[tuple(key)] = val
        self._by_len = defaultdict(int)
        for key in self.table:
            self._by_len[len(key)] += 1

    def is_unit(self, m):
        return m.key[0] == "1" and self.units.get(m.src) == m

    def basis(self, X, Y):
        return list(self._basis.get((X, Y), ()))

    def all_basis(self):
        out = []
        for X in self.objects:
            for Y in self.objects:
                out.extend(self._basis.get((X, Y), ()))
        return out

    def max_arity(self):
        return max(self._by_len, default=2)

    def mu(self, args):
        args = tuple(args)
        n = len(args)
        for i in range(n - 1):
            if args[i].src != args[i + 1].tgt:
                raise NotComposable(f"{args[i + 1]} then {args[i]}")
        if n == 2:
            b, a = args
            if self.is_unit(a):
                return {b: Fraction(1)}
            if self.is_unit(b):
                return {a: Fraction(sgn(a.deg))}
        elif n >= 3 and any(self.is_unit(m) for m in args):
            return {}
        return dict(self.table.get(args, {}))

    def mu_linear(self, combos):
        """mu on linear combinations (each a dict), multilinearly."""
        out = {}
        self._mu_lin(list(combos), [], Fraction(1), out)
        return out

    def _mu_lin(self, combos, chosen, coeff, out):
        if not combos:
            add_into(out, self.mu(chosen), coeff)
            return
        for m, c in combos[0].items():
            if chosen and m.tgt != chosen[-1].src:
                continue
            self._mu_lin(combos[1:], chosen + [m], coeff * c, out)

    def full_table(self):
        """Table including the (finitely many) unit entries of mu^2."""
        t = dict(self.table)
        for m in self.all_basis():
            u_src, u_tgt = self.units[m.src], self.units[m.tgt]
            t[(m, u_src)] = {m: Fraction(1)}
            if not self.is_unit(m):
                t[(u_tgt, m)] = {m: Fraction(sgn(m.deg))}
        return t


def check_degrees(cat):
    bad = []
    for key, val in cat.table.items():
        want = sum(m.deg for m in key) + 2 - len(key)
        for m in val:
            if m.deg != want or m.src != key[-1].src or m.tgt != key[0].tgt:
                bad.append((key, m))
    return bad


# -- Stasheff ----------------------------------------------------------------

def stasheff_residue(cat, args):
    """Direct evaluation of the Stasheff double sum on one tuple."""
    args = tuple(args)
    n = len(args)
    out = {}
    # args is (a_n, ..., a_1); a_i = args[n - i]
    for k in range(n):
        sign_exp = sum(args[n - i].rdeg for i in range(1, k + 1))
        for j in range(1, n - k + 1):
            lo, hi = n - (k + j), n - k      # slice holding a_{k+j} .. a_{k+1}
            inner = cat.mu(args[lo:hi])
            if not inner:
                continue
            for y, c in inner.items():
                outer = cat.mu(args[:lo] + (y,) + args[hi:])
                add_into(out, outer, sgn(sign_exp) * c)
    return out


class StasheffReport:
    def __init__(self, checked, violations, mode):
        self.checked = checked
        self.violations = violations
        self.mode = mode

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok

    def lines(self):
        out = [f"mode: {self.mode}", f"tuples with nonzero terms checked: {self.checked}",
               f"violations: {len(self.violations)}"]
        for tup, res in self.violations[:20]:
            out.append("  " + ", ".join(str(m.key) for m in tup) + " -> " +
                       " + ".join(f"{c}*{m.key}" for m, c in res.items()))
        return out


def check_stasheff(cat, max_n=8, mode="exhaustive", seed=0, trials=1000):
    if mode == "exhaustive":
        return _stasheff_tables(cat, max_n)
    if mode == "sampled":
        return _stasheff_sampled(cat, max_n, seed, trials)
    if mode == "direct":
        return _stasheff_direct(cat, max_n)
    raise ValueError(f"unknown mode {mode}")


def _stasheff_tables(cat, max_n):
    """Every nonzero term of a Stasheff sum pairs a nonzero inner entry with
    a nonzero outer entry, so summing over table pairs is exhaustive."""
    full = cat.full_table()
    producers = defaultdict(list)
    for key, val in full.items():
        for y, c in val.items():
            producers[y].append((key, c))
    residues = defaultdict(dict)
    for okey, oval in full.items():
        m = len(okey)
        for p, y in enumerate(okey):
            right = okey[p + 1:]
            sign_exp = sum(a.rdeg for a in right)
            for ikey, c in producers.get(y, ()):
                if m - 1 + len(ikey) > max_n:
                    continue
                tup = okey[:p] + ikey + right
                add_into(residues[tup], oval, sgn(sign_exp) * c)
    # mu^1 terms: zero mu^1 contributes nothing; tables with mu^1 would need it
    if any(len(k) == 1 for k in full):
        raise NotImplementedError("table-driven check assumes mu^1 = 0")
    viol = [(t, r) for t, r in sorted(residues.items(), key=lambda kv: _tkey(kv[0])) if r]
    return StasheffReport(len(residues), viol, "exhaustive")


def _tkey(tup):
    return tuple(repr(m.key) for m in tup)


def composable_tuples(cat, n, include_units=True):
    basis = [m for m in cat.all_basis() if include_units or not cat.is_unit(m)]
    by_src = defaultdict(list)
    for m in basis:
        by_src[m.src].append(m)

    def extend(prefix):
        # prefix holds (a_1, ..., a_k)
        if len(prefix) == n:
            yield tuple(reversed(prefix))
            return
        for m in by_src[prefix[-1].tgt]:
            yield from extend(prefix + [m])

    for m in basis:
        yield from extend([m])


def _stasheff_direct(cat, max_n):
    viol, checked = [], 0
    for n in range(1, max_n + 1):
        for tup in composable_tuples(cat, n):
            checked += 1
            r = stasheff_residue(cat, tup)
            if r:
                viol.append((tup, r))
    return StasheffReport(checked, viol, "direct")


def _stasheff_sampled(cat, max_n, seed, trials):
    rng = random.Random(seed)
    basis = cat.all_basis()
    by_src = defaultdict(list)
    for m in basis:
        by_src[m.src].append(m)
    # bias samples toward table tuples so that trials hit nonzero terms
    keys = sorted(cat.full_table(), key=_tkey)
    viol, checked = [], 0
    for _ in range(trials):
        if keys and rng.random() < 0.5:
            tup = list(rng.choice(keys))
            while len(tup) < max_n and rng.random() < 0.5:
                if rng.random() < 0.5:
                    cands = [m for m in basis if m.src == tup[0].tgt]
                    if cands:
                        tup.insert(0, rng.choice(cands))
                else:
                    cands = [m for m in basis if m.tgt == tup[-1].src]
                    if cands:
                        tup.append(rng.choice(cands))
        else:
            n = rng.randint(1, max_n)
            tup = [rng.choice(basis)]
            while len(tup) < n:
                cands = by_src[tup[-1].tgt]
                if not cands:
                    break
                tup.append(rng.choice(cands))
            tup = tup[::-1]
        checked += 1
        r = stasheff_residue(cat, tup)
        if r:
            viol.append((tuple(tup), r))
    return StasheffReport(checked, viol, f"sampled(seed={seed}, trials={trials})")


# -- shifted morphisms (add Z) -------------------------------------------------

class ShiftedMorphism(namedtuple("ShiftedMorphism", "base coeff src_shift tgt_shift")):
    """coeff * s^(tgt_shift - src_shift) (x) base, from X[src_shift] to Y[tgt_shift]."""
    __slots__ = ()

    @property
    def s_power(self):
        return self.tgt_shift - self.src_shift

    @property
    def phi_deg(self):
        return -self.s_power

    @property
    def degree(self):
        return self.base.deg + self.phi_deg


def addz_sign(phi_degs, base_rdegs):
    """(-1)^{sum_{i<j} |phi_i| ||a_j||} with both lists in order a_1..a_n."""
    e, acc = 0, 0
    for pd, rd in zip(phi_degs, base_rdegs):
        e += acc * rd
        acc += pd
    return -1 if e % 2 else 1


def mu_addz(cat, morphisms):
    """mu^n on shifted morphisms given as (a_n, ..., a_1)."""
    ms = list(morphisms)
    for i in range(len(ms) - 1):
        if ms[i].src_shift != ms[i + 1].tgt_shift or ms[i].base.src != ms[i + 1].base.tgt:
            raise NotComposable("shift or object chain broken")
    first = list(reversed(ms))
    sign = addz_sign([m.phi_deg for m in first], [m.base.rdeg for m in first])
    coeff = sign
    for m in ms:
        coeff *= m.coeff
    out = cat.mu([m.base for m in ms])
    return [ShiftedMorphism(b, coeff * c, ms[-1].src_shift, ms[0].tgt_shift)
            for b, c in out.items()]


# -- functors and group actions ----------------------------------------------

class StrictFunctor:
    def __init__(self, source, target, obj_map, mor_map):
        self.source = source
        self.target = target
        self.obj_map = dict(obj_map)
        self.mor_map = dict(mor_map)     # Mor -> {Mor: coeff}

    def obj(self, X):
        return self.obj_map[X]

    def mor(self, m):
        if self.source.is_unit(m):
            return {self.target.units[self.obj_map[m.src]]: Fraction(1)}
        return dict(self.mor_map[m])

    def combo(self, c):
        out = {}
        for m, v in c.items():
            add_into(out, self.mor(m), v)
        return out

    def check(self, max_n=None):
        """Functor equation on every table entry and every pair; returns violations."""
        bad = []
        for X in self.source.objects:
            u = self.mor(self.source.units[X])
            if u != {self.target.units[self.obj(X)]: 1}:
                bad.append(("unit", X))
        keys = list(self.source.table)
        for key in keys:
            if max_n and len(key) > max_n:
                continue
            lhs = self.target.mu_linear([self.mor(m) for m in key])
            rhs = self.combo(self.source.mu(key))
            if lhs != rhs:
                bad.append((key, lhs, rhs))
        # also tuples that the source kills but whose images might not vanish
        img_keys = set()
        inv = {}
        for m, c in self.mor_map.items():
            if len(c) == 1:
                inv[next(iter(c))] = m
        for key in self.target.table:
            if all(k in inv for k in key):
                pre = tuple(inv[k] for k in key)
                if pre not in self.source.table:
                    img_keys.add(pre)
        for pre in img_keys:
            lhs = self.target.mu_linear([self.mor(m) for m in pre])
            if lhs:
                bad.append((pre, lhs, {}))
        return bad


class GroupAction:
    """A strict action of Z/2: a functor g with g(g(x)) = x."""

    def __init__(self, functor):
        self.g = functor

    def obj(self, X):
        return self.g.obj(X)

    def mor(self, m):
        return self.g.mor(m)

    def combo(self, c):
        return self.g.combo(c)

    def check(self):
        bad = self.g.check()
        for m in self.g.source.all_basis():
            if self.g.combo(self.g.mor(m)) != {m: 1}:
                bad.append(("order", m))
        return bad


def apply_involution(action, x):
    if isinstance(x, Mor):
        return action.mor(x)
    if isinstance(x, dict):
        return action.combo(x)
    return action.obj(x)
