#!/usr/bin/env python3
"""
测试分段幂-对数函数代数
"""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fixedpoint.errors import DomainError, FunctionAlgebraError, IntegrabilityError
from fixedpoint.funcalg import (
    INF,
    PiecewisePowerLog,
    PowerLogPiece,
    QuadratureConfig,
    compose_power,
    evaluate,
    evaluate_left,
    exact,
    integrate,
    is_head_integrable,
    is_tail_integrable,
    log_grid,
    multiply,
    power_of,
    running_integral_asymptotes,
    supremum,
    tail_integral_asymptote,
)


def test_exact_rationalises_exponents():
    assert exact(0.2) == Fraction(1, 5)
    assert exact("1/3") == Fraction(1, 3)
    assert exact(3) == Fraction(3)
    assert exact(1 - 2 / 3) == Fraction(1, 3)
    with pytest.raises(DomainError):
        exact(True)
    with pytest.raises(DomainError):
        exact(float("inf"))


def test_quadrature_config_validation():
    with pytest.raises(DomainError):
        QuadratureConfig(rel_tol=0)
    with pytest.raises(DomainError):
        QuadratureConfig(t_max=1.0)


def test_breakpoints_validation():
    with pytest.raises(DomainError):
        PiecewisePowerLog((1.0, INF), (PowerLogPiece(1.0),))
    with pytest.raises(DomainError):
        PiecewisePowerLog((0.0, 2.0, 1.0, INF), (PowerLogPiece(1.0),) * 3)
    with pytest.raises(DomainError):
        PiecewisePowerLog((0.0, 1.0, INF), (PowerLogPiece(1.0),))


def test_right_continuous_evaluation():
    f = PiecewisePowerLog.indicator(1.0)
    assert evaluate(f, 1.0) == 0.0
    assert evaluate_left(f, 1.0) == 1.0
    assert evaluate(f, 0.5) == 1.0
    with pytest.raises(DomainError):
        evaluate(f, 0.0)


def test_vectorised_call_matches_scalar():
    f = PiecewisePowerLog.two_power(0, Fraction(-1, 3))
    ts = np.array([0.25, 1.0, 8.0, 27.0])
    np.testing.assert_allclose(f(ts), [1.0, 1.0, 0.5, 1.0 / 3.0])
    assert f(8.0) == pytest.approx(0.5)


def test_integrability_tests_are_symbolic():
    assert is_tail_integrable(PowerLogPiece(1.0, -2))
    assert not is_tail_integrable(PowerLogPiece(1.0, -1))
    assert is_tail_integrable(PowerLogPiece(1.0, -1, Fraction(-3, 2)))
    assert not is_tail_integrable(PowerLogPiece(1.0, -1, -1))
    assert is_head_integrable(PowerLogPiece(1.0, Fraction(-1, 2)))
    assert not is_head_integrable(PowerLogPiece(1.0, -1))
    assert is_head_integrable(PowerLogPiece(0.0, -5))


def test_closed_form_integrals():
    assert integrate(PiecewisePowerLog.power(Fraction(-1, 2)), 0.0, 1.0) == pytest.approx(2.0)
    assert integrate(PiecewisePowerLog.power(-2), 1.0, INF) == pytest.approx(1.0)
    assert integrate(PiecewisePowerLog.power(-1, beta=-2), 1.0, INF) == pytest.approx(1.0)
    assert integrate(PiecewisePowerLog.indicator(3.0), 0.0, INF) == pytest.approx(3.0)


def test_divergent_integrals_are_infinite():
    assert integrate(PiecewisePowerLog.power(-1), 1.0, INF) == INF
    assert integrate(PiecewisePowerLog.power(-1), 0.0, 1.0) == INF
    assert integrate(PiecewisePowerLog.power(-1, beta=-1), 1.0, INF) == INF


def test_log_pieces_use_quadrature():
    f = PiecewisePowerLog.power(0, beta=1)
    assert integrate(f, 1.0, math.e) == pytest.approx(math.e, rel=1e-8)
    g = PiecewisePowerLog.power(-2)
    assert integrate(g, 1.0, INF, force_quadrature=True) == pytest.approx(1.0, rel=1e-8)


def test_supremum_includes_interior_maximum():
    f = PiecewisePowerLog.power(-1, beta=2)
    assert supremum(f, 1.0, INF) == pytest.approx(4.0 / math.e)
    assert supremum(PiecewisePowerLog.power(Fraction(-1, 3))) == INF
    assert supremum(PiecewisePowerLog.two_power(0, -1)) == pytest.approx(1.0)


def test_multiply_pieces():
    f = multiply(PiecewisePowerLog.two_power(0, -1), PiecewisePowerLog.two_power(1, 0))
    assert f.breakpoints == (0.0, 1.0, INF)
    assert f.pieces[0] == PowerLogPiece(1.0, 1)
    assert f.pieces[1] == PowerLogPiece(1.0, -1)
    r = multiply(PiecewisePowerLog.power(-1), PiecewisePowerLog.indicator(2.0))
    assert r.tail.is_zero
    assert evaluate(r, 1.5) == pytest.approx(1.0 / 1.5)


def test_power_of_and_simplification():
    f = power_of(PiecewisePowerLog.two_power(Fraction(1, 2), Fraction(1, 2)), 2)
    assert f.breakpoints == (0.0, INF)
    assert f.head == PowerLogPiece(1.0, 1)
    with pytest.raises(DomainError):
        power_of(f, -1)


def test_compose_power_moves_breakpoints():
    f = compose_power(PiecewisePowerLog.indicator(8.0), 2.0, Fraction(1, 3))
    assert f.breakpoints[1] == pytest.approx(64.0)
    g = compose_power(PiecewisePowerLog.power(-1), 4.0, 2)
    assert g.head == PowerLogPiece(0.25, -2)
    with pytest.raises(FunctionAlgebraError):
        compose_power(PiecewisePowerLog.power(0, beta=1), 1.0, 1)


def test_records_preserve_pieces():
    f = PiecewisePowerLog.from_records([
        {"t_lo": 0, "t_hi": 1, "c": 1, "alpha": 0, "beta": 0},
        {"t_lo": 1, "t_hi": "inf", "c": 2, "alpha": "-1/3", "beta": 1},
    ])
    assert f.tail == PowerLogPiece(2.0, Fraction(-1, 3), 1)
    assert f.to_records()[1]["t_hi"] == "inf"
    with pytest.raises(DomainError):
        PiecewisePowerLog.from_records([{"t_lo": 0, "t_hi": 1}, {"t_lo": 2, "t_hi": "inf"}])


def test_running_integral_asymptotes():
    head, tail = running_integral_asymptotes(PiecewisePowerLog.power(Fraction(-1, 3)))
    for term in (head, tail):
        assert term.power == Fraction(2, 3)
        assert term.coefficient == pytest.approx(1.5)
    head, tail = running_integral_asymptotes(PiecewisePowerLog.indicator(2.0))
    assert tail == PowerLogPiece(2.0)
    with pytest.raises(IntegrabilityError):
        running_integral_asymptotes(PiecewisePowerLog.power(-1))


def test_tail_integral_asymptote():
    assert tail_integral_asymptote(PowerLogPiece(1.0, -2)) == PowerLogPiece(1.0, -1)
    assert tail_integral_asymptote(PowerLogPiece(1.0, -1, -2)) == PowerLogPiece(1.0, 0, -1)
    with pytest.raises(IntegrabilityError):
        tail_integral_asymptote(PowerLogPiece(1.0, -1))


def test_log_grid_endpoints():
    grid = log_grid(1e-2, 1e4, 16)
    assert len(grid) == 97
    assert grid[0] == pytest.approx(1e-2)
    assert grid[-1] == pytest.approx(1e4)
    with pytest.raises(DomainError):
        log_grid(1.0, 0.5, 4)


@given(
    alpha=st.fractions(min_value=Fraction(-19, 10), max_value=Fraction(2), max_denominator=12),
    upper=st.floats(min_value=1.5, max_value=1e3),
)
@settings(max_examples=60, deadline=None)
def test_closed_form_agrees_with_quadrature(alpha, upper):
    f = PiecewisePowerLog.power(alpha)
    closed = integrate(f, 1.0, upper)
    numeric = integrate(f, 1.0, upper, force_quadrature=True)
    assert numeric == pytest.approx(closed, rel=1e-7)


@given(
    a=st.fractions(min_value=Fraction(-9, 10), max_value=Fraction(1), max_denominator=10),
    b=st.fractions(min_value=Fraction(-3), max_value=Fraction(-11, 10), max_denominator=10),
    split=st.floats(min_value=0.05, max_value=50.0),
)
@settings(max_examples=60, deadline=None)
def test_integral_is_additive(a, b, split):
    f = PiecewisePowerLog.two_power(a, b)
    whole = integrate(f, 0.0, INF)
    assert whole < INF
    assert integrate(f, 0.0, split) + integrate(f, split, INF) == pytest.approx(whole, rel=1e-10)
