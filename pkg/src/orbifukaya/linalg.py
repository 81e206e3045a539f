"""Exact linear algebra over the rationals.

Matrices are stored sparsely as ``{(row, col): Fraction}``; vectors are plain
lists of Fractions.  Nothing here ever touches floating point.
"""
from fractions import Fraction
from math import lcm


class NotAComplex(ValueError):
    pass


class Matrix:
    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries=None):
        self.rows = rows
        self.cols = cols
        self.entries = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i},{j}) outside {rows}x{cols}")
            v = Fraction(v)
            if v:
                self.entries[(i, j)] = v

    @classmethod
    def from_rows(cls, rows):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        ent = {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r) if v}
        return cls(len(rows), ncols, ent)

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zero(cls, rows, cols):
        return cls(rows, cols)

    def dense(self):
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def row_dicts(self):
        out = [dict() for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def __getitem__(self, ij):
        return self.entries.get(ij, Fraction(0))

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            right = other.row_dicts()
            acc = {}
            for (i, k), v in self.entries.items():
                for j, w in right[k].items():
                    acc[(i, j)] = acc.get((i, j), 0) + v * w
            return Matrix(self.rows, other.cols, acc)
        vec = list(other)
        if len(vec) != self.cols:
            raise ValueError("shape mismatch")
        out = [Fraction(0)] * self.rows
        for (i, j), v in self.entries.items():
            out[i] += v * vec[j]
        return out

    def is_zero(self):
        return not self.entries

    def transpose(self):
        return Matrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


def _as_matrix(m):
    return m if isinstance(m, Matrix) else Matrix.from_rows(m)


def rank(m):
    """Rank by fraction-free (Bareiss) elimination."""
    m = _as_matrix(m)
    if not m.entries:
        return 0
    # clear denominators row by row so Bareiss runs over the integers
    rows = []
    for r in m.row_dicts():
        if not r:
            continue
        d = lcm(*(v.denominator for v in r.values()))
        row = [0] * m.cols
        for j, v in r.items():
            row[j] = int(v * d)
        rows.append(row)
    nr, nc = len(rows), m.cols
    prev = 1
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        for i in range(r + 1, nr):
            a = rows[i][c]
            ri = rows[i]
            rr = rows[r]
            for j in range(c, nc):
                ri[j] = (p * ri[j] - a * rr[j]) // prev
        prev = p
        r += 1
        if r == nr:
            break
    return r


class Echelon:
    """Reduced row echelon form of a set of sparse rows, built incrementally.

    ``pivots`` maps pivot column -> normalized row (dict).  Rows added later
    are reduced against the existing pivots; this is what the cohomology and
    affine-solve code uses.
    """

    def __init__(self):
        self.pivots = {}

    def reduce(self, row):
        row = {j: Fraction(v) for j, v in row.items() if v}
        # eliminate pivots present in the row; new entries only appear in
        # non-pivot columns because stored rows are fully reduced
        for j in [j for j in row if j in self.pivots]:
            c = row.get(j)
            if not c:
                continue
            for k, w in self.pivots[j].items():
                nv = row.get(k, 0) - c * w
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        return row

    def add(self, row):
        row = self.reduce(row)
        if not row:
            return False
        j = min(row)
        c = row[j]
        row = {k: v / c for k, v in row.items()}
        for pj, prow in self.pivots.items():
            a = prow.get(j)
            if a:
                for k, w in row.items():
                    nv = prow.get(k, 0) - a * w
                    if nv:
                        prow[k] = nv
                    else:
                        prow.pop(k, None)
        self.pivots[j] = row
        return True

    def __len__(self):
        return len(self.pivots)


def rref(m):
    m = _as_matrix(m)
    e = Echelon()
    for r in m.row_dicts():
        e.add(r)
    return e


def kernel_basis(m):
    m = _as_matrix(m)
    e = rref(m)
    free = [j for j in range(m.cols) if j not in e.pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for pj, prow in e.pivots.items():
            v[pj] = -prow.get(f, Fraction(0))
        basis.append(v)
    return basis


def solve_affine(m, b):
    """Some x with m x = b, or None when the system is inconsistent."""
    m = _as_matrix(m)
    b = [Fraction(v) for v in b]
    if len(b) != m.rows:
        raise ValueError("shape mismatch")
    # augmented column m.cols carries the right hand side
    e = Echelon()
    rows = m.row_dicts()
    for i, r in enumerate(rows):
        r = dict(r)
        if b[i]:
            r[m.cols] = b[i]
        e.add(r)
    if m.cols in e.pivots:
        return None
    x = [Fraction(0)] * m.cols
    for pj, prow in e.pivots.items():
        x[pj] = prow.get(m.cols, Fraction(0))
    return x


class GradedComplex:
    """Finite cochain complex: ``spaces[k]`` is a list of basis labels and
    ``differential[k]`` a Matrix from degree k to degree k+1 (rows index the
    target basis, columns the source basis)."""

    def __init__(self, spaces, differential, check=True):
        self.spaces = {k: list(v) for k, v in spaces.items()}
        self.differential = dict(differential)
        for k, d in self.differential.items():
            if d.cols != len(self.spaces.get(k, ())) or d.rows != len(self.spaces.get(k + 1, ())):
                raise ValueError(f"differential in degree {k} has wrong shape")
        if check:
            for k, d in self.differential.items():
                nxt = self.differential.get(k + 1)
                if nxt is not None and not (nxt @ d).is_zero():
                    raise NotAComplex(f"d^{k + 1} d^{k} != 0")

    def dim(self, k):
        return len(self.spaces.get(k, ()))

    def d(self, k):
        d = self.differential.get(k)
        if d is None:
            d = Matrix(self.dim(k + 1), self.dim(k))
        return d

    def degrees(self):
        return sorted(k for k, v in self.spaces.items() if v)


def cohomology(c, k):
    """(dim H^k, representative cocycles as coefficient vectors)."""
    n = c.dim(k)
    if n == 0:
        return 0, []
    dk = c.d(k)
    dprev = c.d(k - 1)
    if c.dim(k + 1) and c.dim(k - 1):
        if not (dk @ dprev).is_zero():
            raise NotAComplex(f"d^{k} d^{k - 1} != 0")
    cocycles = kernel_basis(dk) if dk.rows else [
        [Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    bounds = Echelon()
    for col in dprev.transpose().row_dicts():
        bounds.add(col)
    reps = []
    for z in cocycles:
        if bounds.add({i: v for i, v in enumerate(z) if v}):
            reps.append(z)
    return len(reps), reps
