"""Exact linear algebra over the integers.

Everything here works with plain Python integers (arbitrary precision) so
results are exact.  The workhorses are the Smith normal form with
transformation matrices, integer kernels and linear solving built on it, and
characteristic polynomials computed modulo primes with a rigorous CRT bound.

Matrices are lists of rows of ints.  A matrix acts on column vectors, so the
image of ``A`` is spanned by its columns.
"""

from __future__ import annotations

from math import comb, gcd, isqrt

Matrix = list[list[int]]


def zeros(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if not a or not b:
        return [[] for _ in a]
    n, k, m = len(a), len(b), len(b[0])
    out = zeros(n, m)
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            x = ai[t]
            if x:
                bt = b[t]
                for j in range(m):
                    oi[j] += x * bt[j]
    return out


def mat_vec(a: Matrix, v: list[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def transpose(a: Matrix) -> Matrix:
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def mat_eq(a: Matrix, b: Matrix) -> bool:
    return a == b


def scalar_minus(c: int, a: Matrix) -> Matrix:
    """c*I - A for a square A."""
    n = len(a)
    return [[(c if i == j else 0) - a[i][j] for j in range(n)] for i in range(n)]


class SmithForm:
    """U * A * V == S with U, V unimodular and S in Smith normal form.

    ``uinv`` is the inverse of ``U``; it is maintained during the reduction so
    callers can pull generators back to the original coordinates.
    """

    def __init__(self, a: Matrix):
        m = len(a)
        n = len(a[0]) if a else 0
        self.rows = m
        self.cols = n
        s = [row[:] for row in a]
        u = identity(m)
        uinv = identity(m)
        v = identity(n)
        self._reduce(s, u, uinv, v)
        self.s = s
        self.u = u
        self.uinv = uinv
        self.v = v
        self.diagonal = [s[i][i] for i in range(min(m, n))]
        self.rank = sum(1 for d in self.diagonal if d != 0)

    # -- elementary operations, keeping U, Uinv, V in sync ---------------

    @staticmethod
    def _swap_rows(s, u, uinv, i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]
        for row in uinv:
            row[i], row[j] = row[j], row[i]

    @staticmethod
    def _swap_cols(s, v, i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    @staticmethod
    def _add_row(s, u, uinv, i, j, c):
        """row_i += c * row_j"""
        si, sj = s[i], s[j]
        for t in range(len(si)):
            si[t] += c * sj[t]
        ui, uj = u[i], u[j]
        for t in range(len(ui)):
            ui[t] += c * uj[t]
        for row in uinv:
            row[j] -= c * row[i]

    @staticmethod
    def _add_col(s, v, i, j, c):
        """col_i += c * col_j"""
        for row in s:
            row[i] += c * row[j]
        for row in v:
            row[i] += c * row[j]

    @staticmethod
    def _negate_row(s, u, uinv, i):
        s[i] = [-x for x in s[i]]
        u[i] = [-x for x in u[i]]
        for row in uinv:
            row[i] = -row[i]

    def _reduce(self, s, u, uinv, v):
        m = len(s)
        n = len(s[0]) if s else 0
        for t in range(min(m, n)):
            while True:
                pivot = None
                best = None
                for i in range(t, m):
                    si = s[i]
                    for j in range(t, n):
                        x = si[j]
                        if x and (best is None or abs(x) < best):
                            best = abs(x)
                            pivot = (i, j)
                            if best == 1:
                                break
                    if best == 1:
                        break
                if pivot is None:
                    return
                i, j = pivot
                if i != t:
                    self._swap_rows(s, u, uinv, t, i)
                if j != t:
                    self._swap_cols(s, v, t, j)
                d = s[t][t]
                clean = True
                for i in range(t + 1, m):
                    q = s[i][t] // d
                    if q:
                        self._add_row(s, u, uinv, i, t, -q)
                    if s[i][t]:
                        clean = False
                for j in range(t + 1, n):
                    q = s[t][j] // d
                    if q:
                        self._add_col(s, v, j, t, -q)
                    if s[t][j]:
                        clean = False
                if not clean:
                    continue
                if s[t][t] < 0:
                    self._negate_row(s, u, uinv, t)
                d = s[t][t]
                bad = None
                for i in range(t + 1, m):
                    si = s[i]
                    for j in range(t + 1, n):
                        if si[j] % d:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                self._add_row(s, u, uinv, t, bad, 1)


def kernel_basis(a: Matrix) -> Matrix:
    """Columns spanning {x : A x = 0}; the lattice is saturated in Z^n."""
    if not a or not a[0]:
        n = len(a[0]) if a else 0
        return identity(n)
    sf = SmithForm(a)
    cols = []
    for j in range(sf.cols):
        if j >= len(sf.diagonal) or sf.diagonal[j] == 0:
            cols.append([sf.v[i][j] for i in range(sf.cols)])
    return transpose(cols) if cols else [[] for _ in range(sf.cols)]


class IntSolver:
    """Solve A x = b over the integers for many right-hand sides."""

    def __init__(self, a: Matrix):
        self.sf = SmithForm(a)

    def solve(self, b: list[int]) -> list[int] | None:
        sf = self.sf
        ub = mat_vec(sf.u, b)
        y = [0] * sf.cols
        for i in range(sf.rows):
            d = sf.diagonal[i] if i < len(sf.diagonal) else 0
            if d:
                if ub[i] % d:
                    return None
                if i < sf.cols:
                    y[i] = ub[i] // d
            elif ub[i]:
                return None
        return mat_vec(sf.v, y)


def solve_columns(a: Matrix, b: Matrix) -> Matrix | None:
    """X with A X = B, or None if some column has no integer solution."""
    solver = IntSolver(a)
    cols = []
    bt = transpose(b)
    for col in bt:
        x = solver.solve(col)
        if x is None:
            return None
        cols.append(x)
    if not cols:
        return [[] for _ in range(len(a[0]) if a else 0)]
    return transpose(cols)


# -- characteristic polynomials --------------------------------------------


def _charpoly_mod(a: Matrix, p: int) -> list[int]:
    """char poly of A mod p (ascending coefficients), via Hessenberg form."""
    n = len(a)
    h = [[x % p for x in row] for row in a]
    for j in range(n - 2):
        pivot = None
        for i in range(j + 1, n):
            if h[i][j] % p:
                pivot = i
                break
        if pivot is None:
            continue
        if pivot != j + 1:
            h[pivot], h[j + 1] = h[j + 1], h[pivot]
            for row in h:
                row[pivot], row[j + 1] = row[j + 1], row[pivot]
        inv = pow(h[j + 1][j], -1, p)
        for i in range(j + 2, n):
            f = (h[i][j] * inv) % p
            if f:
                hi, hj = h[i], h[j + 1]
                for t in range(n):
                    hi[t] = (hi[t] - f * hj[t]) % p
                for row in h:
                    row[j + 1] = (row[j + 1] + f * row[i]) % p
    # p_k(x) for the leading k x k Hessenberg block
    polys = [[1]]
    for k in range(1, n + 1):
        prev = polys[k - 1]
        term = [0] + prev
        d = h[k - 1][k - 1] % p
        cur = [(term[i] - d * (prev[i] if i < len(prev) else 0)) % p for i in range(len(term))]
        prod = 1
        for i in range(k - 2, -1, -1):
            prod = (prod * h[i + 1][i]) % p
            c = (h[i][k - 1] * prod) % p
            if c:
                pi = polys[i]
                for t in range(len(pi)):
                    cur[t] = (cur[t] - c * pi[t]) % p
        polys.append(cur)
    return polys[n]


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for base in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(base, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _primes_from(start: int, count: int) -> list[int]:
    out = []
    n = start | 1
    while len(out) < count:
        if _is_probable_prime(n):
            out.append(n)
        n += 2
    return out


def charpoly(a: Matrix) -> list[int]:
    """Coefficients of det(x I - A), ascending, exact over Z.

    Computed modulo enough primes and CRT-combined; the prime budget comes
    from the Hadamard-style bound |c_{n-k}| <= C(n,k) (sqrt(k) amax)^k.
    """
    n = len(a)
    if n == 0:
        return [1]
    amax = max((abs(x) for row in a for x in row), default=0)
    if amax == 0:
        return [0] * n + [1]
    bound = 1
    for k in range(1, n + 1):
        b = comb(n, k) * ((isqrt(k) + 1) * amax) ** k
        if b > bound:
            bound = b
    primes = []
    prod = 1
    start = 1 << 62
    while prod <= 2 * bound + 1:
        primes.extend(_primes_from(start, 1))
        start = primes[-1] + 2
        prod *= primes[-1]
    residues = [_charpoly_mod(a, p) for p in primes]
    coeffs = []
    for i in range(n + 1):
        x = 0
        m = 1
        for res, p in zip(residues, primes):
            # incremental CRT
            t = ((res[i] - x) * pow(m, -1, p)) % p
            x += m * t
            m *= p
        if x > m // 2:
            x -= m
        coeffs.append(x)
    return coeffs


def det_one_minus_z(a: Matrix) -> list[int]:
    """Coefficients of det(I - z A), ascending in z."""
    c = charpoly(a)
    return c[::-1]


def _deflate(p: list[int], r: int) -> list[int] | None:
    """q with p(x) = (x - r) q(x), or None if r is not a root."""
    n = len(p) - 1
    q = [0] * n
    acc = p[n]
    for k in range(n - 1, -1, -1):
        q[k] = acc
        acc = p[k] + r * acc
    return q if acc == 0 else None


def integer_roots(poly: list[int]) -> tuple[dict[int, int], list[int]]:
    """Split off integer roots of an integer polynomial (ascending coeffs).

    Returns ({root: multiplicity}, residual coefficients).  Zero roots are
    extracted too; the residual has no integer roots.
    """
    p = list(poly)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    roots: dict[int, int] = {}
    while len(p) > 1 and p[0] == 0:
        roots[0] = roots.get(0, 0) + 1
        p = p[1:]
    changed = True
    while changed and len(p) > 1:
        changed = False
        c0 = abs(p[0])
        cands = set()
        d = 1
        while d * d <= c0:
            if c0 % d == 0:
                cands.update((d, -d, c0 // d, -(c0 // d)))
            d += 1
        for r in sorted(cands, key=lambda t: (abs(t), -t)):
            q = _deflate(p, r)
            if q is not None:
                p = q
                roots[r] = roots.get(r, 0) + 1
                changed = True
                break
    return roots, p
