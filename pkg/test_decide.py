#!/usr/bin/env python3
"""
测试不动点判定：条件 (3)、推论规则、指标判别与交叉校验
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fixedpoint.decide import (
    IndexStatus,
    Method,
    Verdict,
    decide_fixed_point,
    index_test,
    lambda_dimension_threshold,
    lambda_rule,
    lorentz_rule,
    minimal_dimension,
    phi_growth_witness,
    proposition_family,
)
from fixedpoint.errors import DimensionError, DomainError
from fixedpoint.funcalg import PiecewisePowerLog
from fixedpoint.spaces import (
    Intersection,
    Lorentz,
    lambda_two_power,
    lebesgue,
    log_marcinkiewicz,
    minimal_space,
    proposition_space,
)


def test_lorentz_above_critical_exponent():
    decision = decide_fixed_point(3, Lorentz(10, 10))
    assert decision.verdict is Verdict.FIXED_POINT_EXISTS
    assert decision.method is Method.CONDITION3_EXACT
    assert decision.witnesses["LorentzRule"] is True
    assert decision.to_dict()["verdict"] == "FixedPointExists"


def test_low_dimensions_never_have_fixed_points():
    for n in (1, 2):
        decision = decide_fixed_point(n, Lorentz(10, 10))
        assert decision.verdict is Verdict.NO_FIXED_POINT
        assert decision.method is Method.DIMENSION_RULE


def test_critical_lorentz_exponent():
    assert decide_fixed_point(3, Lorentz(3, "inf")).exists
    assert not decide_fixed_point(3, Lorentz(3, 3)).exists
    assert not decide_fixed_point(3, Lorentz(3, 1)).exists
    assert decide_fixed_point(4, Lorentz("inf", "inf")).exists
    assert lorentz_rule(5, Fraction(5, 3), "inf")
    assert not lorentz_rule(5, Fraction(5, 3), 100)


def test_l1_has_no_fixed_points():
    for n in range(3, 9):
        assert not decide_fixed_point(n, lebesgue(1)).exists
        assert not decide_fixed_point(n, lambda_two_power(1, 0, 0)).exists
    assert minimal_dimension(1, PiecewisePowerLog.constant(1.0)) is None


def test_minimal_space_has_fixed_points():
    for n in (3, 4, 6):
        decision = decide_fixed_point(n, minimal_space(n))
        assert decision.exists
        assert decision.witnesses["norm_h"] == pytest.approx(1.0)
        assert decision.witnesses["phi_growth"]["finite"] is True


def test_proposition_family_threshold_is_exact():
    assert proposition_family(3, 0.2, Fraction(1, 3)).exists
    assert proposition_family(3, 0.2, 1 / 3).exists
    assert not proposition_family(3, 0.2, 0.5).exists
    assert proposition_family(4, 0.9, 0.5).exists
    with pytest.raises(DimensionError):
        proposition_family(2, 0.2, 0.2)


def test_log_spaces_at_critical_index():
    assert decide_fixed_point(3, log_marcinkiewicz(3, -1)).exists
    assert not decide_fixed_point(3, log_marcinkiewicz(3, 1)).exists
    verdict = index_test(3, log_marcinkiewicz(3, -1))
    assert verdict.status is IndexStatus.INDETERMINATE


def test_fast_strategy_uses_index_test():
    decision = decide_fixed_point(3, proposition_space(0.2, 0.2), strategy="fast")
    assert decision.exists and decision.method is Method.INDEX_SUFFICIENT
    decision = decide_fixed_point(3, proposition_space(0.6, 0.6), strategy="fast")
    assert not decision.exists and decision.method is Method.INDEX_NECESSARY
    decision = decide_fixed_point(3, log_marcinkiewicz(3, -1), strategy="fast")
    assert decision.method is Method.CONDITION3_EXACT


def test_fast_strategy_uses_corollary_rules():
    decision = decide_fixed_point(3, Lorentz(3, "inf"), strategy="fast")
    assert decision.method is Method.LORENTZ_RULE and decision.exists
    decision = decide_fixed_point(3, lambda_two_power(4, 0, 0), strategy="fast")
    assert decision.method is Method.LAMBDA_RULE and decision.exists
    with pytest.raises(DomainError):
        decide_fixed_point(3, Lorentz(3, "inf"), strategy="slow")


def test_lambda_witnesses():
    decision = decide_fixed_point(3, lambda_two_power(4, 0, 0), eps=0.5)
    assert decision.exists
    assert decision.witnesses["minimal_dimension"] == 3
    assert decision.witnesses["dimension_threshold"] == pytest.approx(4.0)
    assert any("n > 4" in note for note in decision.notes)
    decision = decide_fixed_point(3, lambda_two_power(2, 0, 0, assume_banach=False))
    assert not decision.exists
    assert any("Banach" in note for note in decision.notes)


def test_minimal_dimension_boundary():
    assert minimal_dimension(4, PiecewisePowerLog.constant(1.0)) == 3
    assert minimal_dimension(2, PiecewisePowerLog.constant(1.0)) == 5
    assert not lambda_rule(4, 2, PiecewisePowerLog.constant(1.0))
    assert lambda_rule(5, 2, PiecewisePowerLog.constant(1.0))
    log_weight = PiecewisePowerLog.power(0, 1.0, -2)
    assert minimal_dimension(2, log_weight) == 4
    assert lambda_rule(4, 2, log_weight)
    with pytest.raises(DomainError):
        lambda_dimension_threshold(0.0)


def test_phi_growth_witness():
    growth = phi_growth_witness(3, minimal_space(3))
    assert growth.finite
    assert growth.grid_sup == pytest.approx(1.0)
    assert not phi_growth_witness(3, lebesgue(2)).finite


def test_intersection_decision():
    space = Intersection((Lorentz(4, 4), Lorentz("inf", "inf")))
    assert decide_fixed_point(3, space).exists
    assert not decide_fixed_point(3, Intersection((Lorentz(4, 4), lebesgue(2)))).exists


lorentz_exponents = st.one_of(
    st.fractions(min_value=1, max_value=12, max_denominator=6),
    st.just("inf"),
)


@given(n=st.integers(min_value=3, max_value=8), p=lorentz_exponents, q=lorentz_exponents)
@settings(max_examples=200, deadline=None)
def test_lorentz_descriptors_agree_with_rule(n, p, q):
    if p == "inf":
        q = "inf"
    elif p == 1:
        q = 1
    elif q != "inf" and q < 1:
        q = 1
    decision = decide_fixed_point(n, Lorentz(p, q))
    assert decision.exists == lorentz_rule(n, p, q)


@given(
    n=st.integers(min_value=3, max_value=8),
    p=st.fractions(min_value=1, max_value=6, max_denominator=4),
    a=st.fractions(min_value=Fraction(-9, 10), max_value=1, max_denominator=10),
    b=st.fractions(min_value=-1, max_value=3, max_denominator=10),
)
@settings(max_examples=100, deadline=None)
def test_lambda_descriptors_agree_with_rule(n, p, a, b):
    space = lambda_two_power(p, a, b)
    decision = decide_fixed_point(n, space)
    assert decision.exists == lambda_rule(n, p, space.w)
    dimension = decision.witnesses["minimal_dimension"]
    assert decision.exists == (dimension is not None and n >= dimension)


@given(
    n=st.integers(min_value=3, max_value=8),
    a=st.fractions(min_value=0, max_value=1, max_denominator=12),
    b=st.fractions(min_value=0, max_value=1, max_denominator=12),
)
@settings(max_examples=60, deadline=None)
def test_two_power_family_threshold(n, a, b):
    assert proposition_family(n, a, b).exists == (b <= 1 - Fraction(2, n))


def test_lambda_example_with_slow_tail_has_no_fixed_point():
    # ∫_1^∞ t^{-p(1-2/n)} t^b dt，p(1-2/n) = 2/3，0.1 - 2/3 > -1
    decision = decide_fixed_point(3, lambda_two_power(2, 0.2, 0.1))
    assert decision.verdict is Verdict.NO_FIXED_POINT
    assert decision.witnesses["LambdaRule"] is False
    assert decision.witnesses["norm_h"] == float("inf")
    assert decision.witnesses["minimal_dimension"] == 5
    assert decide_fixed_point(5, lambda_two_power(2, 0.2, 0.1)).exists


_exponents = st.fractions(min_value=0, max_value=1, max_denominator=12)

index_test_spaces = st.one_of(
    st.builds(proposition_space, _exponents, _exponents),
    st.builds(
        lambda_two_power,
        st.fractions(min_value=1, max_value=6, max_denominator=4),
        st.fractions(min_value=Fraction(-9, 10), max_value=1, max_denominator=10),
        st.fractions(min_value=-1, max_value=3, max_denominator=10),
    ),
    st.builds(log_marcinkiewicz, st.integers(min_value=3, max_value=8), st.just(1)),
    st.builds(log_marcinkiewicz, st.integers(min_value=3, max_value=8), st.just(-1)),
)


@given(n=st.integers(min_value=3, max_value=8), space=index_test_spaces)
@settings(max_examples=200, deadline=None)
def test_index_test_never_contradicts_exact_decision(n, space):
    verdict = index_test(n, space)
    decision = decide_fixed_point(n, space)
    if verdict.status is IndexStatus.GUARANTEED_NONTRIVIAL:
        assert decision.exists
    elif verdict.status is IndexStatus.GUARANTEED_TRIVIAL:
        assert not decision.exists
