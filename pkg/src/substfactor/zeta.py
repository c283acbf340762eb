"""Dynamical zeta functions with exact integer/rational arithmetic.

A zeta function is stored as a quotient of integer polynomials in z.  The
module converts between the three equivalent encodings of periodic-point
data: the rational function itself, the fixed-point counts a_m (zeta is
exp of their generating series divided by m), and the cycle counts c_m of
the Euler product prod (1 - z^m)^(-c_m).

The `zeta_ap` entry point assembles a zeta function from the matrices of a
substitution acting on the cochain groups of an approximant complex, as an
alternating product of det(1 - z A^(k)) factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from . import intlinalg


def _trim(coeffs) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients ascending; () is the zero polynomial."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @staticmethod
    def of(*coeffs: int) -> "IntPolynomial":
        return IntPolynomial(tuple(coeffs))

    @staticmethod
    def one() -> "IntPolynomial":
        return IntPolynomial((1,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else -1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return IntPolynomial(tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)))

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPolynomial(())
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return IntPolynomial(tuple(out))

    def __pow__(self, n: int) -> "IntPolynomial":
        r = IntPolynomial.one()
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def primitive(self) -> "IntPolynomial":
        g = self.content()
        if g in (0, 1):
            return self
        return IntPolynomial(tuple(c // g for c in self.coeffs))

    def eval_fraction(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def shift_mul_z(self) -> "IntPolynomial":
        return IntPolynomial((0,) + self.coeffs)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                z = "z" if i == 1 else f"z^{i}"
                if c == 1:
                    terms.append(z)
                elif c == -1:
                    terms.append(f"-{z}")
                else:
                    terms.append(f"{c}{z}" if c > 0 else f"-{abs(c)}{z}")
        s = terms[0]
        for t in terms[1:]:
            s += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return s


def _poly_gcd_q(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """gcd over Q[z], returned as a primitive integer polynomial."""
    fa = [Fraction(c) for c in a.coeffs]
    fb = [Fraction(c) for c in b.coeffs]

    def trimf(p):
        while p and p[-1] == 0:
            p.pop()
        return p

    fa, fb = trimf(fa), trimf(fb)
    while fb:
        # remainder of fa mod fb
        r = fa[:]
        while len(r) >= len(fb) and trimf(r):
            if not r or len(r) < len(fb):
                break
            q = r[-1] / fb[-1]
            off = len(r) - len(fb)
            for i, c in enumerate(fb):
                r[off + i] -= q * c
            r = trimf(r)
        fa, fb = fb, r
    if not fa:
        return IntPolynomial(())
    den = 1
    for c in fa:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in fa]
    return IntPolynomial(tuple(ints)).primitive()


@dataclass(frozen=True)
class RationalFunction:
    """num/den with integer polynomials, gcd-free over Q, canonical signs.

    The denominator is primitive with positive constant term (positive
    leading coefficient when the constant term vanishes); the contents of
    numerator and denominator are coprime.
    """

    num: IntPolynomial
    den: IntPolynomial

    def __post_init__(self):
        num, den = self.num, self.den
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            object.__setattr__(self, "num", IntPolynomial(()))
            object.__setattr__(self, "den", IntPolynomial.one())
            return
        g = _poly_gcd_q(num, den)
        if g.degree > 0:
            num = _poly_exact_div(num, g)
            den = _poly_exact_div(den, g)
        cn, cd = num.content(), den.content()
        cg = gcd(cn, cd)
        if cg > 1:
            num = IntPolynomial(tuple(c // cg for c in num.coeffs))
            den = IntPolynomial(tuple(c // cg for c in den.coeffs))
        lead = den.coeffs[0] if den.coeffs[0] != 0 else den.coeffs[-1]
        if lead < 0:
            num = -num
            den = -den
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @staticmethod
    def one() -> "RationalFunction":
        return RationalFunction(IntPolynomial.one(), IntPolynomial.one())

    @staticmethod
    def from_factors(num_factors, den_factors) -> "RationalFunction":
        """Factors are (c, k, e) triples meaning (1 - c z^k)^e."""
        num = IntPolynomial.one()
        for c, k, e in num_factors:
            num = num * (IntPolynomial(tuple([1] + [0] * (k - 1) + [-c])) ** e)
        den = IntPolynomial.one()
        for c, k, e in den_factors:
            den = den * (IntPolynomial(tuple([1] + [0] * (k - 1) + [-c])) ** e)
        return RationalFunction(num, den)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        if other.num.is_zero():
            raise ZeroDivisionError
        return RationalFunction(self.num * other.den, self.den * other.num)

    def is_one(self) -> bool:
        return self.num == self.den

    def series(self, order: int) -> list[Fraction]:
        """Taylor coefficients 0..order (den(0) must be nonzero)."""
        d0 = self.den.coeffs[0]
        if d0 == 0:
            raise ZeroDivisionError("pole at the origin")
        num, den = self.num.coeffs, self.den.coeffs
        out: list[Fraction] = []
        for m in range(order + 1):
            acc = Fraction(num[m] if m < len(num) else 0)
            for j in range(1, min(m, len(den) - 1) + 1):
                acc -= den[j] * out[m - j]
            out.append(acc / d0)
        return out

    def factored_str(self) -> str:
        if self.den.degree <= 0 and self.den.coeffs == (1,):
            return _factored_poly_str(self.num)
        return f"{_factored_poly_str(self.num)}/({_factored_poly_str(self.den)})"

    def __str__(self) -> str:
        return self.factored_str()


def _poly_exact_div(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """a/b when b divides a over Q; result scaled back to integers."""
    fa = [Fraction(c) for c in a.coeffs]
    fb = [Fraction(c) for c in b.coeffs]
    out = [Fraction(0)] * (len(fa) - len(fb) + 1)
    r = fa[:]
    for k in range(len(out) - 1, -1, -1):
        q = r[k + len(fb) - 1] / fb[-1]
        out[k] = q
        for i, c in enumerate(fb):
            r[k + i] -= q * c
    if any(c != 0 for c in r):
        raise ArithmeticError("inexact polynomial division")
    den = 1
    for c in out:
        den = den * c.denominator // gcd(den, c.denominator)
    if den != 1:
        raise ArithmeticError("non-integer quotient")
    return IntPolynomial(tuple(int(c) for c in out))


def _factor_cz_k(p: IntPolynomial):
    """Factor p into (1 - c z^k) pieces when possible.

    Returns (constant, [(c, k, multiplicity), ...], residual) with residual
    None when the factorization is complete.
    """
    if p.is_zero():
        return 0, [], None
    coeffs = list(p.coeffs)
    const = coeffs[0]
    factors: dict[tuple[int, int], int] = {}
    cur = IntPolynomial(tuple(coeffs))
    progress = True
    while cur.degree > 0 and progress:
        progress = False
        lead = abs(cur.coeffs[-1])
        cands = set()
        d = 1
        while d * d <= lead:
            if lead % d == 0:
                cands.update((d, -d, lead // d, -(lead // d)))
            d += 1
        for k in range(1, cur.degree + 1):
            for c in sorted(cands, key=lambda t: (-abs(t), -t)):
                trial = IntPolynomial(tuple([1] + [0] * (k - 1) + [-c]))
                try:
                    q = _poly_exact_div(cur, trial)
                except ArithmeticError:
                    continue
                factors[(c, k)] = factors.get((c, k), 0) + 1
                cur = q
                progress = True
                break
            if progress:
                break
    residual = None if cur.degree <= 0 else cur
    constant = cur.coeffs[0] if cur.degree <= 0 and cur.coeffs else (1 if cur.degree > 0 else 0)
    ordered = sorted(((c, k, e) for (c, k), e in _canonical_factors(factors).items()),
                     key=lambda t: (t[1], -t[0]))
    return constant, ordered, residual


def _canonical_factors(factors: dict[tuple[int, int], int]) -> dict[tuple[int, int], int]:
    """Fully split square factors, then merge (1-cz^k)(1+cz^k) pairs."""
    split: dict[tuple[int, int], int] = {}
    stack = list(factors.items())
    while stack:
        (c, k), e = stack.pop()
        s = isqrt(c) if c > 0 else 0
        if k % 2 == 0 and c > 0 and s * s == c:
            stack.append(((s, k // 2), e))
            stack.append(((-s, k // 2), e))
        else:
            split[(c, k)] = split.get((c, k), 0) + e
    merged = dict(split)
    changed = True
    while changed:
        changed = False
        for (c, k) in sorted(merged):
            if c <= 0:
                continue
            neg = merged.get((-c, k), 0)
            pos = merged.get((c, k), 0)
            m = min(pos, neg)
            if m > 0:
                merged[(c, k)] = pos - m
                merged[(-c, k)] = neg - m
                merged[(c * c, 2 * k)] = merged.get((c * c, 2 * k), 0) + m
                changed = True
        merged = {key: e for key, e in merged.items() if e > 0}
    return merged


def _factored_poly_str(p: IntPolynomial) -> str:
    constant, factors, residual = _factor_cz_k(p)
    parts = []
    for c, k, e in factors:
        z = "z" if k == 1 else f"z^{k}"
        sign = "-" if c > 0 else "+"
        mag = "" if abs(c) == 1 else str(abs(c))
        base = f"(1{sign}{mag}{z})"
        parts.append(base if e == 1 else f"{base}^{e}")
    if residual is not None:
        parts.append(f"({residual})")
    body = "".join(parts)
    if not body:
        return str(constant)
    return body if constant == 1 else f"{constant}{body}"


# -- counts, cycles, Euler products -----------------------------------------


def mobius(n: int) -> int:
    if n == 1:
        return 1
    out = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            out = -out
        d += 1
    if n > 1:
        out = -out
    return out


@dataclass(frozen=True)
class CountSequence:
    """Fixed-point counts a_1..a_M with the derived cycle counts c_1..c_M.

    Genuine dynamical data has integral, nonnegative cycle counts; the
    `integral` flag records whether the Moebius inversion came out integral.
    """

    a: tuple[int, ...]
    c: tuple[Fraction, ...]
    integral: bool

    @staticmethod
    def from_counts(a) -> "CountSequence":
        a = tuple(int(x) for x in a)
        c = []
        for m in range(1, len(a) + 1):
            acc = Fraction(0)
            for d in range(1, m + 1):
                if m % d == 0:
                    acc += mobius(m // d) * a[d - 1]
            c.append(acc / m)
        integral = all(x.denominator == 1 for x in c)
        return CountSequence(a, tuple(c), integral)

    def cycle_integers(self) -> list[int]:
        if not self.integral:
            raise ValueError("cycle counts are not integral")
        return [int(x) for x in self.c]

    def recover_counts(self) -> list[int]:
        """a_m = sum_{d | m} d * c_d (sanity inverse of the inversion)."""
        out = []
        for m in range(1, len(self.a) + 1):
            acc = Fraction(0)
            for d in range(1, m + 1):
                if m % d == 0:
                    acc += d * self.c[d - 1]
            out.append(int(acc))
        return out


def counts_from_zeta(zf: RationalFunction, order: int) -> CountSequence:
    """a_m for m = 1..order from z zeta'/zeta; requires zeta(0) = 1."""
    n0 = zf.num.coeffs[0] if zf.num.coeffs else 0
    d0 = zf.den.coeffs[0]
    if n0 != d0:
        raise ValueError("zeta(0) must be 1")
    num, den = zf.num, zf.den
    p = (num.derivative() * den - num * den.derivative()).shift_mul_z()
    q = num * den
    series = RationalFunction(p, q).series(order) if not p.is_zero() else [Fraction(0)] * (order + 1)
    a = []
    for m in range(1, order + 1):
        v = series[m]
        if v.denominator != 1:
            raise ArithmeticError("non-integer fixed point count")
        a.append(int(v))
    return CountSequence.from_counts(a)


def _exp_series(xs: list[Fraction], order: int) -> list[Fraction]:
    """exp of a series with zero constant term, to the given order."""
    out = [Fraction(1)] + [Fraction(0)] * order
    # out' = xs' * out
    for m in range(1, order + 1):
        acc = Fraction(0)
        for j in range(1, m + 1):
            acc += j * xs[j] * out[m - j]
        out[m] = acc / m
    return out


def zeta_series(a, order: int) -> list[Fraction]:
    """Truncated exp(sum a_m z^m / m)."""
    xs = [Fraction(0)] * (order + 1)
    for m in range(1, min(len(a), order) + 1):
        xs[m] = Fraction(a[m - 1], m)
    return _exp_series(xs, order)


def zeta_from_counts(a, order: int | None = None):
    """(series, rational) for exp(sum a_m z^m/m).

    The rational reconstruction is Pade-style with both degrees at most
    order//2; when no exact match exists within that budget the second
    component is None and only the series stands.
    """
    if order is None:
        order = len(a)
    s = zeta_series(a, order)
    half = order // 2
    for dd in range(0, half + 1):
        sol = _pade_denominator(s, dd, order)
        if sol is None:
            continue
        den = sol
        numf = _series_mul_poly(s, den, order)
        if all(numf[m] == 0 for m in range(half + 1, order + 1)):
            num = _trim(numf[: half + 1])
            if all(x.denominator == 1 for x in num) and all(x.denominator == 1 for x in den):
                rf = RationalFunction(IntPolynomial(tuple(int(x) for x in num)),
                                      IntPolynomial(tuple(int(x) for x in den)))
                back = counts_from_zeta(rf, len(a))
                if list(back.a) == [int(x) for x in a]:
                    return s, rf
    return s, None


def _series_mul_poly(series: list[Fraction], poly: list[Fraction], order: int) -> list[Fraction]:
    out = [Fraction(0)] * (order + 1)
    for m in range(order + 1):
        acc = Fraction(0)
        for j in range(min(m, len(poly) - 1) + 1):
            acc += poly[j] * series[m - j]
        out[m] = acc
    return out


def _pade_denominator(series: list[Fraction], dd: int, order: int) -> list[Fraction] | None:
    """den with den(0)=1, deg<=dd, and (series*den) vanishing above order//2."""
    half = order // 2
    rows = []
    rhs = []
    for m in range(half + 1, order + 1):
        rows.append([series[m - j] if m - j >= 0 else Fraction(0) for j in range(1, dd + 1)])
        rhs.append(-series[m])
    # least-degree exact solve by Gaussian elimination over Q
    ncols = dd
    aug = [row[:] + [rhs[i]] for i, row in enumerate(rows)]
    piv_cols = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(aug)):
            if aug[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, len(aug)):
        if aug[i][ncols] != 0:
            return None
    sol = [Fraction(0)] * ncols
    for i, c in enumerate(piv_cols):
        sol[c] = aug[i][ncols]
    return [Fraction(1)] + sol


def cycle_counts(a) -> CountSequence:
    return CountSequence.from_counts(a)


def euler_product_check(counts: CountSequence, order: int | None = None) -> bool:
    """prod (1-z^m)^(-c_m) == exp(sum a_m z^m / m) up to the given order."""
    if order is None:
        order = len(counts.a)
    lhs = [Fraction(1)] + [Fraction(0)] * order
    for m in range(1, order + 1):
        c = counts.c[m - 1]
        # multiply by (1 - z^m)^(-c) = exp(-c log(1 - z^m))
        logterm = [Fraction(0)] * (order + 1)
        j = m
        k = 1
        while j <= order:
            logterm[j] = c * Fraction(1, k)
            j += m
            k += 1
        factor = _exp_series(logterm, order)
        lhs = [sum((lhs[i] * factor[t - i] for i in range(t + 1)), Fraction(0))
               for t in range(order + 1)]
    rhs = zeta_series(counts.a, order)
    return lhs == rhs


# -- assembled zeta functions -----------------------------------------------


def zeta_ap(cochain_matrices: list[intlinalg.Matrix]) -> RationalFunction:
    """Alternating product over cochain degrees of det(1 - z A^(k)).

    With matrices indexed 0..d, degree-(d-k) factors go to the numerator for
    odd k and to the denominator for even k; the quotient is reduced.
    """
    d = len(cochain_matrices) - 1
    num = IntPolynomial.one()
    den = IntPolynomial.one()
    for k in range(d + 1):
        mat = cochain_matrices[d - k]
        poly = IntPolynomial(tuple(intlinalg.det_one_minus_z(mat)))
        if k % 2 == 1:
            num = num * poly
        else:
            den = den * poly
    return RationalFunction(num, den)


def solenoid_zeta(dim: int, q: int) -> RationalFunction:
    """Zeta of the q-solenoid: counts q^m - 1 in dim 1, (q^m - 1)^2 in dim 2."""
    if q < 2:
        raise ValueError("expansion factor must be at least 2")
    if dim == 1:
        return RationalFunction.from_factors([(1, 1, 1)], [(q, 1, 1)])
    if dim == 2:
        return RationalFunction.from_factors([(q, 1, 2)], [(q * q, 1, 1), (1, 1, 1)])
    raise ValueError("dim must be 1 or 2")


def product_decomposition_check(target: RationalFunction, factors) -> tuple[bool, RationalFunction]:
    """Exact identity test target == prod(factors); returns (ok, residual)."""
    prod = RationalFunction.one()
    for f in factors:
        prod = prod * f
    residual = target / prod
    return residual.is_one(), residual


# -- closed forms printed for the catalog spaces ----------------------------


def closed_form(name: str, q: int | None = None, dim: int | None = None) -> RationalFunction:
    """Known zeta functions: squiral, fmax, table, and solenoids."""
    if name == "squiral":
        return RationalFunction.from_factors([], [(1, 1, 1), (9, 1, 1), (1, 2, 3)])
    if name == "fmax":
        return RationalFunction.from_factors([], [(1, 1, 3), (9, 1, 1)])
    if name == "table":
        return RationalFunction.from_factors(
            [(2, 1, 2)], [(4, 1, 1), (4, 2, 2), (1, 1, 2), (1, 2, 1)])
    if name == "solenoid":
        return solenoid_zeta(dim or 2, q or 2)
    raise KeyError(f"no closed-form zeta for {name!r}")


def closed_form_counts(name: str, order: int) -> list[int]:
    """Printed fixed-point count formulas for the same spaces."""
    ms = range(1, order + 1)
    if name == "squiral":
        return [9 ** m + 4 + 3 * (-1) ** m for m in ms]
    if name == "fmax":
        return [9 ** m + 3 for m in ms]
    if name == "table":
        return [4 ** m + 3 + (-1) ** m * (1 + 2 ** (m + 1)) for m in ms]
    raise KeyError(f"no count formula for {name!r}")
