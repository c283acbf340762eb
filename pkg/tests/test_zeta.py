from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from substfactor.zeta import (
    CountSequence,
    IntPolynomial,
    RationalFunction,
    closed_form,
    closed_form_counts,
    counts_from_zeta,
    cycle_counts,
    euler_product_check,
    mobius,
    product_decomposition_check,
    solenoid_zeta,
    zeta_ap,
    zeta_from_counts,
)


def rf(num_factors, den_factors):
    return RationalFunction.from_factors(num_factors, den_factors)


def test_polynomial_basics():
    p = IntPolynomial.of(1, -2)
    q = IntPolynomial.of(1, 2)
    assert (p * q).coeffs == (1, 0, -4)
    assert (p + q).coeffs == (2,)
    assert (p ** 3).coeffs == (1, -6, 12, -8)
    assert str(IntPolynomial.of(1, 0, -9)) == "1 - 9z^2"


def test_rational_function_reduction():
    # (1-z)(1-3z) / (1-z) reduces
    f = RationalFunction(IntPolynomial.of(1, -4, 3), IntPolynomial.of(1, -1))
    assert f.num.coeffs == (1, -3)
    assert f.den.coeffs == (1,)
    g = rf([(3, 1, 1)], [(9, 1, 1), (1, 1, 1)]) * rf([(1, 1, 1)], [(3, 1, 1)])
    assert g.num.coeffs == (1,)
    assert g.den.coeffs == (1, -9)


def test_series():
    geo = rf([], [(3, 1, 1)])  # 1/(1-3z)
    assert geo.series(4) == [Fraction(3 ** k) for k in range(5)]


# -- counts from printed zeta functions -------------------------------------


def test_counts_squiral():
    z = closed_form("squiral")
    counts = counts_from_zeta(z, 6)
    assert list(counts.a) == [9 ** m + 4 + 3 * (-1) ** m for m in range(1, 7)]
    assert list(counts.a[:4]) == [10, 88, 730, 6568]


def test_counts_fmax():
    z = closed_form("fmax")
    counts = counts_from_zeta(z, 6)
    assert list(counts.a) == [9 ** m + 3 for m in range(1, 7)]
    assert list(counts.a[:3]) == [12, 84, 732]


def test_counts_single_fixed_point():
    z = rf([], [(1, 1, 1)])  # 1/(1-z)
    counts = counts_from_zeta(z, 8)
    assert list(counts.a) == [1] * 8


def test_counts_table():
    z = closed_form("table")
    counts = counts_from_zeta(z, 12)
    assert counts.a[0] == 2
    assert counts.a[1] == 28
    assert list(counts.a) == closed_form_counts("table", 12)


def test_zeta_from_counts_s22():
    a = [(2 ** m - 1) ** 2 for m in range(1, 11)]
    series, rec = zeta_from_counts(a, 10)
    assert rec is not None
    assert rec == solenoid_zeta(2, 2)
    assert rec.num.coeffs == (1, -4, 4)  # (1-2z)^2
    assert rec.den.coeffs == (1, -5, 4)  # (1-4z)(1-z)


def test_zeta_from_counts_s13():
    a = [3 ** m - 1 for m in range(1, 11)]
    _, rec = zeta_from_counts(a, 10)
    assert rec == solenoid_zeta(1, 3)


def test_zeta_from_counts_zero():
    series, rec = zeta_from_counts([0] * 8, 8)
    assert rec == RationalFunction.one()
    assert series[0] == 1 and all(x == 0 for x in series[1:])


def test_zeta_from_counts_series_only_when_degree_too_large():
    # table zeta needs denominator degree 9; at order 12 only a series comes back
    a = closed_form_counts("table", 12)
    _, rec = zeta_from_counts(a, 12)
    assert rec is None
    _, rec = zeta_from_counts(closed_form_counts("table", 22), 22)
    assert rec == closed_form("table")


def test_mobius():
    assert [mobius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


def test_cycle_counts_squiral():
    counts = counts_from_zeta(closed_form("squiral"), 6)
    c = counts.cycle_integers()
    assert c[0] == 10
    assert c[1] == (88 - 10) // 2 == 39


def test_cycle_counts_trivial():
    counts = cycle_counts([1] * 6)
    assert counts.cycle_integers() == [1, 0, 0, 0, 0, 0]


def test_cycle_counts_necklaces():
    counts = cycle_counts([3 ** m - 1 for m in range(1, 9)])
    c = counts.cycle_integers()
    assert all(x >= 0 for x in c)
    assert euler_product_check(counts)
    assert counts.recover_counts() == list(counts.a)


def test_non_integral_cycle_counts_flagged():
    counts = cycle_counts([2, 1, 1, 1])
    assert not counts.integral
    with pytest.raises(ValueError):
        counts.cycle_integers()


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(0, 12), min_size=1, max_size=6))
def test_euler_product_identity_random(cs):
    # build a_m from genuine cycle data, then validate the round trip
    M = len(cs)
    a = []
    for m in range(1, M + 1):
        a.append(sum(d * cs[d - 1] for d in range(1, m + 1) if m % d == 0))
    counts = cycle_counts(a)
    assert counts.integral
    assert counts.cycle_integers() == cs
    assert euler_product_check(counts)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=1, max_size=4))
def test_roundtrip_zeta_counts_zeta(cs):
    # random small rational function with zeta(0)=1
    num = IntPolynomial.one()
    den = IntPolynomial.one()
    for k, c in enumerate(cs, start=1):
        if c > 0:
            den = den * IntPolynomial(tuple([1] + [0] * (k - 1) + [-c]))
        elif c < 0:
            num = num * IntPolynomial(tuple([1] + [0] * (k - 1) + [c]))
    z = RationalFunction(num, den)
    order = 2 * (num.degree + den.degree) + 2
    counts = counts_from_zeta(z, order)
    _, rec = zeta_from_counts(list(counts.a), order)
    assert rec == z


def test_zeta_ap_solenoid_matrices():
    # 1-vertex torus complex with multiplication by q per axis
    q = 3
    mats = [[[1]], [[q, 0], [0, q]], [[q * q]]]
    z = zeta_ap(mats)
    assert z == solenoid_zeta(2, q)


def test_zeta_ap_trivial():
    assert zeta_ap([[[0]], [[0, 0], [0, 0]], [[0]]]) == RationalFunction.one()


def test_solenoid_zeta_printed_forms():
    s22 = solenoid_zeta(2, 2)
    assert s22.num.coeffs == (1, -4, 4)
    assert s22.den.coeffs == (1, -5, 4)
    s13 = solenoid_zeta(1, 3)
    assert s13.num.coeffs == (1, -1)
    assert s13.den.coeffs == (1, -3)
    s23 = solenoid_zeta(2, 3)
    assert counts_from_zeta(s23, 5).a == tuple((3 ** m - 1) ** 2 for m in range(1, 6))


def test_product_decomposition_fmax():
    target = closed_form("fmax")
    extra = rf([], [(1, 1, 4)])  # four extra fixed points
    ok, residual = product_decomposition_check(
        target, [solenoid_zeta(2, 3), solenoid_zeta(1, 3), solenoid_zeta(1, 3), extra])
    assert ok
    assert residual.is_one()


def test_product_decomposition_squiral_fails():
    target = closed_form("squiral")
    extra = rf([], [(1, 1, 4)])
    ok, residual = product_decomposition_check(
        target, [solenoid_zeta(2, 3), solenoid_zeta(1, 3), solenoid_zeta(1, 3), extra])
    assert not ok
    assert not residual.is_one()


def test_product_decomposition_self():
    z = closed_form("table")
    ok, residual = product_decomposition_check(z, [z])
    assert ok


def test_multiplicativity_disjoint_union():
    # solenoid plus finitely many fixed points: counts add, zetas multiply
    k = 4
    sol = solenoid_zeta(2, 3)
    fixed = rf([], [(1, 1, k)])
    combined_counts = [(3 ** m - 1) ** 2 + k for m in range(1, 9)]
    prod = sol * fixed
    assert list(counts_from_zeta(prod, 8).a) == combined_counts


def test_factored_str():
    # canonical order: ascending power of z, then descending coefficient
    assert closed_form("squiral").factored_str() == "1/((1-9z)(1-z)(1-z^2)^3)"
    assert closed_form("fmax").factored_str() == "1/((1-9z)(1-z)^3)"
    assert solenoid_zeta(2, 2).factored_str() == "(1-2z)^2/((1-4z)(1-z))"
    # the printed table form (1-2z)^2/((1-4z)(1-4z^2)^2(1-z)^2(1-z^2)) is not
    # in lowest terms; (1-2z)^2 cancels into the (1-4z^2)^2 factor
    assert closed_form("table").factored_str() == "1/((1-4z)(1-z)^2(1+2z)^2(1-z^2))"
