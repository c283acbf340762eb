import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from substfactor import intlinalg as la


def rand_matrix(rng, m, n, lo=-6, hi=6):
    return [[rng.randint(lo, hi) for _ in range(n)] for _ in range(m)]


def is_unimodular(u):
    n = len(u)
    # determinant via fraction-free expansion on small sizes
    from fractions import Fraction
    a = [[Fraction(x) for x in row] for row in u]
    det = Fraction(1)
    for c in range(n):
        piv = None
        for r in range(c, n):
            if a[r][c] != 0:
                piv = r
                break
        if piv is None:
            return False
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        inv = 1 / a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] * inv
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return abs(det) == 1


def test_smith_form_small_known():
    sf = la.SmithForm([[2, 4, 4], [-6, 6, 12], [10, 4, 16]])
    assert sf.diagonal == [2, 2, 156]
    assert la.mat_mul(la.mat_mul(sf.u, [[2, 4, 4], [-6, 6, 12], [10, 4, 16]]), sf.v) == sf.s


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 10 ** 6))
def test_smith_form_random(m, n, seed):
    rng = random.Random(seed)
    a = rand_matrix(rng, m, n)
    sf = la.SmithForm(a)
    assert la.mat_mul(la.mat_mul(sf.u, a), sf.v) == sf.s
    assert la.mat_mul(sf.u, sf.uinv) == la.identity(m)
    assert is_unimodular(sf.u)
    assert is_unimodular(sf.v)
    d = sf.diagonal
    for i in range(len(d) - 1):
        if d[i] and d[i + 1]:
            assert d[i + 1] % d[i] == 0
        if d[i] == 0:
            assert d[i + 1] == 0
    for i in range(sf.rows):
        for j in range(sf.cols):
            if i != j:
                assert sf.s[i][j] == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 10 ** 6))
def test_kernel_and_solve(m, n, seed):
    rng = random.Random(seed)
    a = rand_matrix(rng, m, n)
    k = la.kernel_basis(a)
    if k and k[0]:
        prod = la.mat_mul(a, k)
        assert all(x == 0 for row in prod for x in row)
    solver = la.IntSolver(a)
    x = [rng.randint(-4, 4) for _ in range(n)]
    b = la.mat_vec(a, x)
    got = solver.solve(b)
    assert got is not None
    assert la.mat_vec(a, got) == b


def test_solve_no_solution():
    solver = la.IntSolver([[2, 0], [0, 2]])
    assert solver.solve([1, 0]) is None
    assert solver.solve([2, -4]) == [1, -2]


def test_charpoly_known():
    assert la.charpoly([[2, 1], [1, 2]]) == [3, -4, 1]  # (x-1)(x-3)
    assert la.charpoly([[0, 1], [1, 0]]) == [-1, 0, 1]
    assert la.charpoly([[5]]) == [-5, 1]
    assert la.charpoly([]) == [1]


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 10 ** 6))
def test_charpoly_matches_direct_determinant(n, seed):
    rng = random.Random(seed)
    a = rand_matrix(rng, n, n, -5, 5)
    p = la.charpoly(a)
    # evaluate det(xI - A) at a few integer points by fraction-free expansion
    from fractions import Fraction
    for x0 in (-2, -1, 0, 1, 2, 3):
        m = [[Fraction((x0 if i == j else 0) - a[i][j]) for j in range(n)] for i in range(n)]
        det = Fraction(1)
        sign = 1
        for c in range(n):
            piv = None
            for r in range(c, n):
                if m[r][c] != 0:
                    piv = r
                    break
            if piv is None:
                det = Fraction(0)
                break
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                sign = -sign
            det *= m[c][c]
            inv = 1 / m[c][c]
            for r in range(c + 1, n):
                f = m[r][c] * inv
                if f:
                    m[r] = [u - f * v for u, v in zip(m[r], m[c])]
        val = sum(p[i] * x0 ** i for i in range(len(p)))
        assert Fraction(val) == sign * det


def test_integer_roots():
    # (x-3)^2 (x+1) = x^3 - 5x^2 + 3x + 9
    roots, residual = la.integer_roots([9, 3, -5, 1])
    assert roots == {3: 2, -1: 1}
    assert residual == [1]
    roots, residual = la.integer_roots([2, 0, 1])  # x^2 + 2, no integer roots
    assert roots == {}
    assert residual == [2, 0, 1]
    roots, residual = la.integer_roots([0, 0, 1])  # x^2
    assert roots == {0: 2}
