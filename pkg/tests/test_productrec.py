import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import partitions_count, seed_for
from qrr.powerseries import InsufficientPrecision, equal_up_to, from_coefficients, monomial
from qrr.productrec import (
    ExponentProfile, NoPeriodicity, NotAUnit, ProductPresentation, Theta, detect_modulus,
    factor_exponents, format_presentation, recognize, reconstruct, split_two_term,
)
from qrr.qobjects import Monomial, poch_inf, poch_inf_inverse
from qrr.registry import eval_product_side, eval_sum_side, find, load_catalog

F = Fraction
q = Monomial.q


@pytest.fixture(scope="module")
def catalog():
    return load_catalog()


def profile(d, kmax):
    return ExponentProfile(tuple(F(d.get(k, 0)) for k in range(1, kmax + 1)), kmax)


def test_rogers_ramanujan_profile():
    f = poch_inf_inverse(q(1), 5, 80) * poch_inf_inverse(q(4), 5, 80)
    prof = factor_exponents(f, 60)
    assert [prof[k] for k in range(1, 11)] == [1, 0, 0, 1, 0, 1, 0, 0, 1, 0]
    p = detect_modulus(prof, 20)
    assert p == ProductPresentation(5, ((1, 1), (4, 1)))
    assert format_presentation(p) == "1 / (q,q^4;q^5)_oo"


def test_constant_profile():
    prof = factor_exponents(monomial(1, 0, 40), 30)
    assert all(x == 0 for x in prof.a)
    p = detect_modulus(prof, 10)
    assert p.modulus == 1 and p.entries == ()
    assert reconstruct(p, 20) == monomial(1, 0, 20)


def test_euler_profile():
    prof = factor_exponents(poch_inf(q(1), 1, 50), 40)
    assert all(x == -1 for x in prof.a)


def test_odd_parts():
    f = reconstruct(ProductPresentation(2, ((1, 1),)), 12)
    want = [partitions_count(n, lambda k: k % 2) for n in range(12)]
    assert want[:6] == [1, 1, 1, 2, 2, 3]
    assert [f.coeff(e) for e in range(12)] == want


def test_non_unit_rejected():
    with pytest.raises(NotAUnit):
        factor_exponents(from_coefficients([2, 1], 20), 10)
    with pytest.raises(InsufficientPrecision):
        factor_exponents(monomial(1, 0, 10), 10)


def test_detect_needs_three_periods():
    with pytest.raises(ValueError):
        detect_modulus(profile({}, 20), 8)


def test_non_integral_flag():
    f = reconstruct(profile({1: F(1, 2)}, 30), 31)
    prof = factor_exponents(f, 30)
    assert prof[1] == F(1, 2) and prof.non_integral() == [1]
    assert not prof.integral


def test_round_trip_random_profiles():
    rng = random.Random(seed_for("profiles"))
    for _ in range(20):
        d = {k: rng.randint(-3, 3) for k in rng.sample(range(1, 31), rng.randint(1, 12))}
        prof = profile(d, 120)
        f = reconstruct(prof, 121)
        assert factor_exponents(f, 120) == prof


@settings(max_examples=25, deadline=None)
@given(st.dictionaries(st.integers(1, 30), st.integers(-3, 3), max_size=8))
def test_round_trip_property(d):
    prof = profile(d, 60)
    assert factor_exponents(reconstruct(prof, 61), 60) == prof


@settings(max_examples=15, deadline=None)
@given(st.dictionaries(st.integers(1, 20), st.integers(-2, 2), max_size=6))
def test_profile_stable_in_precision(d):
    f = reconstruct(profile(d, 90), 91)
    assert factor_exponents(f.truncate(41), 40) == factor_exponents(f, 40)


def test_s18_recognized(catalog):
    e = find(catalog, "S.18")
    res = recognize(eval_sum_side(e, 61), 60, 20)
    assert isinstance(res, ProductPresentation)
    assert res.modulus == 5 and res.entries == ((1, 1), (4, 1))
    prod = eval_product_side(e, 61)
    assert res == detect_modulus(factor_exponents(prod, 60), 20)
    assert equal_up_to(reconstruct(res, 61), prod, 61)[0]


@pytest.mark.parametrize("label", ["S.13", "new.1"])
def test_two_theta_sums_have_no_single_product(catalog, label):
    res = recognize(eval_sum_side(find(catalog, label), 121), 120, 40)
    assert isinstance(res, NoPeriodicity)
    assert "profile" in str(res)


@pytest.mark.xfail(strict=True, reason="the S.94 sum is itself a single product of modulus 20")
def test_s94_has_no_single_product(catalog):
    res = recognize(eval_sum_side(find(catalog, "S.94"), 121), 120, 40)
    assert isinstance(res, NoPeriodicity)


def test_s94_single_product(catalog):
    e = find(catalog, "S.94")
    res = recognize(eval_sum_side(e, 241), 240, 40)
    assert res.modulus == 20
    assert sorted(r for r, x in res.entries if x == 1) == [1, 2, 5, 6, 8, 9, 11, 12, 14, 15, 18, 19]
    assert all(x in (0, 1) for _, x in res.entries)
    assert equal_up_to(reconstruct(res, 241), eval_product_side(e, 241), 241)[0]


def test_single_product_sides_recognized(catalog):
    for e in catalog:
        if len(e.product.terms) != 1:
            continue
        f = eval_product_side(e, 151)
        res = recognize(f, 150, 50)
        assert isinstance(res, ProductPresentation), e.label
        assert equal_up_to(reconstruct(res, 151), f, 151)[0], e.label


def test_two_term_split_s13(catalog):
    f = eval_sum_side(find(catalog, "S.13"), 81)
    tt = split_two_term(f, 80, 8)
    assert tt is not None
    assert equal_up_to(tt.series(81), f, 81)[0]


def test_two_term_split_none_for_random_profile():
    f = reconstruct(profile({1: 1, 2: -2, 7: 3}, 60), 61) + monomial(1, 3, 61)
    assert split_two_term(f, 60, 6) is None


def test_theta_series():
    assert equal_up_to(Theta(5, 2, 1).series(60),
                       poch_inf(q(2), 5, 60) * poch_inf(q(3), 5, 60) * poch_inf(q(5), 5, 60), 60)[0]


def test_leading_monomial_peeled():
    f = reconstruct(ProductPresentation(5, ((1, 1), (4, 1))), 80).shift(-3, 2)
    res = recognize(f, 60, 20)
    assert res.lead == Monomial(-3, 2) and res.modulus == 5
