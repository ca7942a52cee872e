import random
from fractions import Fraction

import pytest

from conftest import seed_for
from qrr.powerseries import InsufficientPrecision, equal_up_to, monomial, substitute_q_power
from qrr.qobjects import (
    DivergentProduct, Monomial, NonTerminating, PoleInLowerParameter, ZERO, poch_inf, poch_inf_inverse,
)
from qrr.registry import eval_product_side, eval_sum_side, find, link_parts, load_catalog
from qrr.transforms import (
    REQUIRED, MissingParameter, ParamAssignment, TheoremId, _five_phi_four_sequence, liu_general,
    theorem_parts, theorem_sides,
)

F = Fraction
q = Monomial.q
EXPS = [F(1, 2), F(1), F(3, 2), F(2), F(3)]
REJECT = (DivergentProduct, PoleInLowerParameter, ValueError, ZeroDivisionError, InsufficientPrecision)


def same(f, g, order):
    ok, mm = equal_up_to(f, g, order)
    assert ok, mm


def random_monomial(rng):
    return Monomial(rng.choice([1, -1]), rng.choice(EXPS))


def admissible_cases(tid, count, order=60, tries=400):
    """Random (params, sequence, lhs, rhs) with every parameter +-q^e."""
    rng = random.Random(seed_for("assign", tid.value))
    out = []
    for _ in range(tries):
        p = ParamAssignment({k: random_monomial(rng) for k in REQUIRED[tid]})
        seq = None
        if tid is TheoremId.LIU_MASTER:
            seq = [random_monomial(rng) for _ in range(rng.randint(1, 5))] + [ZERO] * 400
        try:
            lhs, rhs = theorem_sides(tid, p, order, seq)
        except NonTerminating:
            raise
        except REJECT:
            continue
        out.append((p, seq, lhs, rhs))
        if len(out) == count:
            return out
    raise AssertionError(f"{tid.name}: only {len(out)} admissible assignments found")


@pytest.mark.parametrize("tid", list(TheoremId), ids=lambda t: t.name)
def test_random_assignments(tid):
    for p, _, lhs, rhs in admissible_cases(tid, 5):
        ok, mm = equal_up_to(lhs, rhs, 60)
        assert ok, (str(p), mm)


def test_chu_reduced_s3():
    p = ParamAssignment.parse("alpha=-1 c=-q^2 a=0 b=0")
    lhs, rhs = theorem_sides(TheoremId.CHU_REDUCED, p, 100)
    same(lhs, rhs, 100)
    e = find(load_catalog(), "S.3")
    _, tsum, _ = theorem_parts(TheoremId.CHU_REDUCED, p, 40)
    # sum (-1)^n q^(2n^2) / (q^4;q^4)_n against 1/(-q^2;q^2)_oo
    same(tsum, substitute_q_power(eval_sum_side(e, 20), 2), 40)
    same(substitute_q_power(eval_product_side(e, 20), 2), poch_inf(q(2), 4, 40), 40)
    same(poch_inf(q(2), 4, 40), poch_inf_inverse(q(2, -1), 2, 40), 40)


def test_pfaff_degenerate_a_equals_q():
    p = ParamAssignment.parse("alpha=q^2 c=q^1/2 d=-q^3/2 a=q b=-q")
    pref, s, rhs = theorem_parts(TheoremId.PFAFF_REDUCED, p, 40)
    same(s, monomial(1, 0, 40), 40)
    lhs, rhs = theorem_sides(TheoremId.PFAFF_REDUCED, p, 40)
    same(lhs, rhs, 40)


def test_andrews_wc_s35():
    e = find(load_catalog(), "S.35")
    assert e.source_theorem is TheoremId.ANDREWS_WC
    assert e.preset == ParamAssignment.parse("alpha=q^2 beta2=-q a=0 b=-1")
    tsum, want_sum, rhs, want_rhs = link_parts(e, 60)
    same(tsum, want_sum, 60)
    same(rhs, want_rhs, 60)


def test_missing_parameter():
    with pytest.raises(MissingParameter):
        theorem_sides(TheoremId.WHIPPLE_B, ParamAssignment.parse("a=0"), 20)
    with pytest.raises(MissingParameter):
        theorem_sides(TheoremId.LIU_MASTER, ParamAssignment.parse("alpha=q a=q b=q"), 20)


def test_param_assignment_round_trip():
    p = ParamAssignment.parse("alpha=-1 c=-q^2 a=0 b=q^1/2")
    assert ParamAssignment.parse(str(p)) == p
    assert p["b"] == Monomial(1, F(1, 2))
    with pytest.raises(ValueError):
        ParamAssignment.parse("zeta=q")
    with pytest.raises(ValueError):
        ParamAssignment.parse("alpha")


def test_theorem_id_parse():
    assert TheoremId.parse("chu_reduced") is TheoremId.CHU_REDUCED
    with pytest.raises(ValueError):
        TheoremId.parse("THM_9")
    assert len(TheoremId) == 18
    assert set(REQUIRED) == set(TheoremId)


def test_square_root_enters_only_as_a_pair():
    # (sqrt(alpha q), -sqrt(alpha q); q)_n is (alpha q; q^2)_n, so alpha need not be a square
    lhs, rhs = theorem_sides(TheoremId.ANDREWS_WC, ParamAssignment.parse("alpha=2q^3 beta2=-q a=0 b=-1"), 40)
    same(lhs, rhs, 40)


def test_cube_root_must_be_monomial():
    with pytest.raises(ValueError):
        theorem_sides(TheoremId.ANDREWS_STRANGE, ParamAssignment.parse("alpha=2q^3 a=0 b=0"), 30)


def test_liu_general_indicator_sequence():
    A = [Monomial(1)] + [ZERO] * 200
    lhs, rhs = liu_general(A, q(1), q(2), q(3), 40)
    same(lhs, rhs, 40)


def test_liu_general_constant_sequence():
    lhs, rhs = liu_general(lambda k: Monomial(1), q(1), q(1), q(1), 30)
    same(lhs, rhs, 30)


@pytest.mark.parametrize("seed", range(3))
def test_liu_general_matches_five_phi_four(seed):
    rng = random.Random(seed_for("dual", seed))
    for _ in range(200):
        p = ParamAssignment({k: random_monomial(rng) for k in REQUIRED[TheoremId.LIU_5PHI4]})
        try:
            lhs, rhs = theorem_sides(TheoremId.LIU_5PHI4, p, 40)
        except NonTerminating:
            raise
        except REJECT:
            continue
        break
    else:
        pytest.fail("no admissible assignment")
    glhs, grhs = liu_general(_five_phi_four_sequence(p), p["alpha"], p["a"], p["b"], 40)
    same(glhs, lhs, 40)
    same(grhs, rhs, 40)


@pytest.mark.parametrize("seed", range(3))
def test_five_phi_four_collapses_to_three_phi_two(seed):
    rng = random.Random(seed_for("collapse", seed))
    for _ in range(200):
        vals = {k: random_monomial(rng) for k in REQUIRED[TheoremId.LIU_3PHI2]}
        x, y = random_monomial(rng), random_monomial(rng)
        small = ParamAssignment(vals)
        big = ParamAssignment(dict(vals, gamma=x, e=x, lam=y, h=y))
        try:
            a = theorem_sides(TheoremId.LIU_3PHI2, small, 40)
            b = theorem_sides(TheoremId.LIU_5PHI4, big, 40)
        except NonTerminating:
            raise
        except REJECT:
            continue
        break
    else:
        pytest.fail("no admissible assignment")
    same(a[0], b[0], 40)
    same(a[1], b[1], 40)


def test_sides_differ_across_presets():
    # one preset's sum under another preset's prefactor must fail
    p1 = ParamAssignment.parse("alpha=-1 c=-q^2 a=0 b=0")
    p2 = ParamAssignment.parse("alpha=-1 c=-q^2 a=0 b=-q")
    _, s1, _ = theorem_parts(TheoremId.CHU_REDUCED, p1, 30)
    pref2, s2, r2 = theorem_parts(TheoremId.CHU_REDUCED, p2, 30)
    same((pref2 * s2).truncate(30), r2, 30)
    assert not equal_up_to((pref2 * s1).truncate(30), r2, 30)[0]
