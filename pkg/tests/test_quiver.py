import os
from dataclasses import replace
from fractions import Fraction as Fr

import pytest
from hypothesis import given, strategies as st

from orbifukaya.orbifold import endo_algebra, lift_dissection, load_dissection
from orbifukaya.quiver import (FDAlgebra, NotBasicReducible, charpoly, coxeter_polynomial,
                               dynkin_edges, invariants, is_iso, isomorphic, path_algebra_cartan,
                               presentation)

from conftest import DATA


def monomial_algebra(n, arrows, zero):
    """Path algebra of a quiver without oriented cycles modulo zero paths.
    Paths are tuples of arrow indices in travel order."""
    paths = {(u, u): [()] for u in range(n)}
    frontier = [((), u, u) for u in range(n)]
    while frontier:
        nxt = []
        for p, s, t in frontier:
            for k, (a, b) in enumerate(arrows):
                if a == t:
                    q = p + (k,)
                    if any(q[i:i + len(z)] == z for z in zero for i in range(len(q) - len(z) + 1)):
                        continue
                    paths.setdefault((s, b), []).append(q)
                    nxt.append((q, s, b))
        frontier = nxt
    dims = {k: len(v) for k, v in paths.items()}
    idx = {(k, p): i for k, v in paths.items() for i, p in enumerate(v)}

    def mul_fn(u, v, w):
        out = {}
        for i, b in enumerate(paths.get((v, w), [])):
            for j, a in enumerate(paths.get((u, v), [])):
                c = idx.get(((u, w), a + b))
                out[(i, j)] = {c: Fr(1)} if c is not None else {}
        return out
    unit = {u: {0: Fr(1)} for u in range(n)}
    return FDAlgebra(range(n), dims, {}, unit, mul_fn)


def test_charpoly():
    assert charpoly([[2, 0], [0, 3]]) == [1, -5, 6]
    assert charpoly([[0, 1], [-1, 0]]) == [1, 0, 1]


@pytest.mark.parametrize("n", [2, 3, 5, 7])
def test_coxeter_dynkin(n):
    a = coxeter_polynomial(path_algebra_cartan(n, dynkin_edges("A", n)))
    assert a == [1] * (n + 1)
    if n >= 4:
        d = coxeter_polynomial(path_algebra_cartan(n, dynkin_edges("D", n)))
        # (x^(n-1) + 1)(x + 1)
        assert d == [1, 1] + [0] * (n - 3) + [1, 1]


def test_coxeter_independent_of_orientation():
    one = path_algebra_cartan(4, [(0, 1), (1, 2), (2, 3)])
    two = path_algebra_cartan(4, [(1, 0), (1, 2), (3, 2)])
    assert coxeter_polynomial(one) == coxeter_polynomial(two)


def test_presentation_of_zero_relation():
    alg = monomial_algebra(3, [(0, 1), (1, 2)], [(0, 1)])
    P = presentation(alg, {0: "u", 1: "v", 2: "w"})
    assert len(P.arrows) == 2
    assert len(P.relations) == 1 and len(P.relations[0]) == 1
    (c, path), = P.relations[0]
    assert len(path) == 2
    assert P.cartan == [[1, 1, 0], [0, 1, 1], [0, 0, 1]]


def test_presentation_of_hereditary():
    alg = monomial_algebra(4, [(0, 2), (1, 2), (2, 3)], [])
    P = presentation(alg, {k: str(k) for k in range(4)})
    assert not P.relations and len(P.arrows) == 3
    assert P.coxeter == coxeter_polynomial(path_algebra_cartan(4, [(0, 2), (1, 2), (2, 3)]))


def test_isomorphism_detects_relabelling():
    a = presentation(monomial_algebra(3, [(0, 1), (1, 2)], [(0, 1)]), {0: "a", 1: "b", 2: "c"})
    b = presentation(monomial_algebra(3, [(2, 0), (0, 1)], [(0, 1)]), {0: "x", 1: "y", 2: "z"})
    c = presentation(monomial_algebra(3, [(0, 1), (1, 2)], []), {0: "a", 1: "b", 2: "c"})
    assert isomorphic(a, b)
    assert not isomorphic(a, c)


def test_torus_rescaling():
    P = endo_algebra(lift_dissection(load_dissection(os.path.join(DATA, "example2.dis"))))
    flipped = [{p: (-c if len(p) == 2 else c) for p, c in r.items()} for r in P.ideal]
    Q = replace(P, ideal=flipped)
    assert invariants(P) == invariants(Q)
    assert isomorphic(P, Q)


def test_non_local_endomorphisms_rejected():
    # a vertex whose endomorphism ring is K x K
    dims = {(0, 0): 2}
    mul = {(0, 0, 0): {(0, 0): {0: Fr(1)}, (1, 1): {1: Fr(1)}, (0, 1): {}, (1, 0): {}}}
    alg = FDAlgebra([0], dims, mul, {0: {0: Fr(1), 1: Fr(1)}})
    with pytest.raises(NotBasicReducible):
        alg.radical_of_end(0)


def test_is_iso_on_split_idempotents():
    alg = monomial_algebra(2, [(0, 1)], [])
    assert not is_iso(alg, 0, 1)
    assert is_iso(alg, 0, 0)


@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), max_size=6))
def test_cartan_unitriangular(edges):
    edges = [(a, b) for a, b in edges if a < b]
    c = path_algebra_cartan(5, edges)
    assert all(c[i][i] == 1 for i in range(5))
    cox = coxeter_polynomial(c)
    # Coxeter polynomials of hereditary algebras are palindromic
    assert cox == cox[::-1]
