from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import partitions_count, series
from qrr.powerseries import (
    InsufficientPrecision, NonUnit, add, equal_up_to, from_coefficients, invert_unit,
    monomial, mul, neg, one, substitute_q_power, zero,
)
from qrr.qobjects import Monomial, poch_finite, poch_inf

F = Fraction


def test_monomial_one():
    f = monomial(1, 0, 10)
    assert f.scale == 1 and f.precision == 10
    assert [f.coeff(e) for e in range(10)] == [1] + [0] * 9


def test_monomial_half_exponent():
    f = monomial(-1, F(1, 2), 5)
    assert f.scale == 2
    assert list(f.terms()) == [(F(1, 2), -1)]
    assert f.precision == 5


def test_monomial_zero():
    f = monomial(0, 0, 8)
    assert f.is_zero() and f.precision == 8


def test_monomial_beyond_precision_is_zero():
    assert monomial(3, 12, 10).is_zero()


def test_telescoping():
    geo = from_coefficients([1] * 6)
    assert mul(from_coefficients([1, -1], 6), geo) == one(6)


def test_scale_merge():
    f = add(monomial(1, F(1, 2), 3), monomial(1, 1, 3))
    assert f.scale == 2
    assert list(f.terms()) == [(F(1, 2), 1), (F(1), 1)]


def test_finite_poch_times_inverse():
    p = poch_finite(Monomial(1, 1), 1, 3, 20)
    assert mul(p, invert_unit(p)) == one(20)


def test_invert_geometric():
    g = invert_unit(from_coefficients([1, -1], 9))
    assert [g.coeff(e) for e in range(9)] == [1] * 9


def test_invert_euler_gives_partitions():
    g = invert_unit(poch_inf(Monomial(1, 1), 1, 6))
    assert [g.coeff(e) for e in range(6)] == [1, 1, 2, 3, 5, 7]
    assert [g.coeff(e) for e in range(6)] == [partitions_count(n, lambda k: True) for n in range(6)]


def test_invert_scalar():
    g = invert_unit(from_coefficients([2, -2], 5))
    assert [g.coeff(e) for e in range(5)] == [F(1, 2)] * 5


@pytest.mark.parametrize("f", [from_coefficients([0, 1], 4), monomial(1, 1, 6), zero(5)])
def test_invert_non_unit(f):
    with pytest.raises(NonUnit):
        invert_unit(f)


def test_substitute_square():
    assert substitute_q_power(from_coefficients([1, 1], 5), 2) == from_coefficients([1, 0, 1], 10)


def test_substitute_half():
    g = substitute_q_power(from_coefficients([1, 1], 5), F(1, 2))
    assert g.scale == 2
    assert list(g.terms()) == [(0, 1), (F(1, 2), 1)]
    assert g.precision == F(5, 2)


def test_substitute_euler_cube():
    f = poch_inf(Monomial(1, 1), 1, 40)
    assert substitute_q_power(f, 3) == poch_inf(Monomial(1, 3), 3, 120)


def test_substitute_rejects_nonpositive():
    with pytest.raises(ValueError):
        substitute_q_power(one(4), 0)


def test_equal_up_to_examples():
    f = from_coefficients([1, -1], 60)
    g = f + monomial(1, 50, 60)
    assert equal_up_to(f, g, 50) == (True, None)
    assert equal_up_to(f, g, 51) == (False, (50, 0, 1))


def test_equal_up_to_insufficient():
    with pytest.raises(InsufficientPrecision):
        equal_up_to(one(5), one(10), 6)


def test_reading_beyond_precision_raises():
    with pytest.raises(InsufficientPrecision):
        one(4).coeff(4)


def test_mul_precision_rule():
    f = from_coefficients([1, 2], 5, 1, 2)   # q^2 + 2q^3, known below q^5
    g = from_coefficients([1], 9, 1, 1)      # q, known below q^9
    h = mul(f, g)
    assert h.precision == min(5 + 1, 9 + 2)


def test_mul_mixed_scale_precision():
    f = from_coefficients([1], 3, 2, 1)      # q^(1/2), known below q^(3/2)
    g = from_coefficients([1, 1], 4)         # 1 + q, known below q^4
    assert mul(f, g).precision == min(F(3, 2) + 0, 4 + F(1, 2))


@given(series(), series())
def test_add_commutative(f, g):
    assert add(f, g) == add(g, f)


@given(series(), series())
def test_mul_commutative(f, g):
    assert mul(f, g) == mul(g, f)


@given(series(), series(), series())
def test_add_associative(f, g, h):
    assert add(add(f, g), h) == add(f, add(g, h))


@given(series(), series(), series())
def test_mul_associative(f, g, h):
    a, b = mul(mul(f, g), h), mul(f, mul(g, h))
    order = min(a.precision, b.precision)
    assert equal_up_to(a, b, order)[0]


@given(series(), series(), series())
def test_distributive(f, g, h):
    a, b = mul(f, add(g, h)), add(mul(f, g), mul(f, h))
    order = min(a.precision, b.precision)
    assert equal_up_to(a, b, order)[0]


@given(series())
def test_neutral_elements(f):
    assert add(f, zero(f.precision)) == f
    assert mul(f, one(f.precision - f.valuation if not f.is_zero() else f.precision)) == f
    assert add(f, neg(f)).is_zero()


@given(series(unit=True))
def test_invert_round_trip(f):
    assert mul(f, invert_unit(f)) == one(f.precision)


@given(series(), st.sampled_from([2, 3, F(1, 2)]))
def test_substitute_round_trip(f, r):
    assert substitute_q_power(substitute_q_power(f, r), F(1) / r) == f


@settings(max_examples=60)
@given(st.lists(st.tuples(st.sampled_from(["add", "mul", "neg", "sub"]), series()), min_size=1, max_size=5),
       series())
def test_precision_soundness(ops, f):
    for op, g in ops:
        if op == "add":
            f = f + g
        elif op == "mul":
            f = f * g
        elif op == "sub":
            f = f - g
        else:
            f = -f
        for e, _ in f.terms():
            assert e < f.precision
        with pytest.raises(InsufficientPrecision):
            f.coeff(f.precision)
