#!/usr/bin/env python3
"""
测试数值校验与校验管理器
"""

import pytest

from fixedpoint.errors import DimensionError, DomainError
from fixedpoint.funcalg import DEFAULT_QUADRATURE, PiecewisePowerLog
from fixedpoint.operators import RieszProfile, riesz_profile
from fixedpoint.rearrange import (
    DecreasingProfile,
    F_profile,
    RadialProfile,
    ball_indicator,
    ball_volume,
    fixed_point_profile,
    indicator_profile,
    two_step_profile,
)
from fixedpoint.spaces import Lorentz, lebesgue, minimal_space
from fixedpoint.verify import (
    CheckManager,
    LemmaCheck,
    SuperharmonicCheck,
    VerificationReport,
    check_decay,
    check_embedding,
    check_lemma_phi,
    check_newton,
    check_oneil,
    check_rearrangement,
    check_superharmonic,
    create_check_manager,
    run_checks,
    superharmonic_candidates,
)


def test_report_serialisation():
    report = VerificationReport(name="demo", grid={"t_points": 1}, worst=0.5, tolerance=1.0, passed=True,
                                columns=["t", "value"], rows=[[1.0, 0.5]])
    data = report.to_dict()
    assert data["check"] == "demo" and "rows" not in data
    assert report.to_dict(include_rows=True)["rows"] == [[1.0, 0.5]]
    assert report.table() == [["t", "value"], [1.0, 0.5]]


def test_fixed_point_profile_is_superharmonic_on_grid():
    report = check_superharmonic(F_profile(3), rho_grid=[0.5, 2.0, 4.0], r_grid=[0.1, 1.0, 3.0])
    assert report.passed
    assert report.worst <= 1.0 + 1e-6
    assert report.details["small_radius_deviation"] <= 1e-4
    assert len(report.rows) == 9


def test_increasing_profile_fails_superharmonic_check():
    report = check_superharmonic(RadialProfile(3, PiecewisePowerLog.power(1)), rho_grid=[1.0], r_grid=[5.0])
    assert not report.passed
    assert report.worst > 1.0


def test_oneil_bounds_on_indicator():
    report = check_oneil(indicator_profile(1.0), 3, t_grid=[0.1, 1.0, 10.0])
    assert report.passed
    assert report.details["constant_tail"] < 10.0
    assert check_oneil(two_step_profile(), 3, t_grid=[0.5, 2.0, 8.0]).passed
    zero = check_oneil(DecreasingProfile(PiecewisePowerLog.constant(0.0)), 3, t_grid=[1.0])
    assert zero.passed and zero.details["vacuous"] is True
    with pytest.raises(DimensionError):
        check_oneil(indicator_profile(1.0), 2)


def test_lemma_phi_on_minimal_space():
    report = check_lemma_phi(minimal_space(3), 3, s_grid=[0.25, 1.0, 4.0])
    assert report.passed
    assert report.details["literal_scaling_drift"] > 1.0
    assert check_lemma_phi(lebesgue(4), 3, s_grid=[0.25, 4.0]).passed
    assert check_lemma_phi(minimal_space(3), 3, s_grid=[1.0]).passed
    with pytest.raises(DimensionError):
        check_lemma_phi(minimal_space(3), 2)


def test_literal_scaling_drifts():
    report = check_lemma_phi(minimal_space(3), 3, s_grid=[2.0 ** -6, 2.0 ** 6])
    assert report.passed
    assert report.details["literal_scaling_drift"] > 100.0


def test_embedding_constant():
    report = check_embedding(3, minimal_space(3))
    assert report.passed
    assert report.details["constant"] == pytest.approx(1.0)
    report = check_embedding(3, lebesgue(4), corpus=[indicator_profile(1.0)])
    assert report.passed
    assert report.details["constant"] == pytest.approx(2.0 ** 0.5)
    with pytest.raises(DomainError):
        check_embedding(3, lebesgue(2))


def test_auxiliary_checks():
    c3 = ball_volume(3)
    assert check_rearrangement(3, t_grid=[0.5, 8.0 * c3, 100.0]).passed
    assert check_newton(dimensions=(3,), pairs=3).passed
    decay = check_decay(3, rho_grid=[1.0, 10.0, 100.0])
    assert decay.passed
    assert decay.details["constants"]["F"] == pytest.approx(1.0)


def test_check_manager_registry():
    manager = create_check_manager()
    assert manager.list_checks() == [
        "superharmonic", "oneil", "lemma-phi", "embedding", "rearrangement", "newton", "decay",
    ]
    with pytest.raises(DomainError):
        manager.get_check("bogus")


@pytest.mark.asyncio
async def test_execute_all_keeps_order():
    manager = CheckManager()
    reports = await manager.execute_all(["rearrangement", "decay"], 3)
    assert [report.name for report in reports] == ["rearrangement", "decay"]
    assert all(report.passed for report in reports)


def test_run_checks_validates_names_first():
    reports = run_checks(["newton"], 3)
    assert len(reports) == 1 and reports[0].name == "newton"
    with pytest.raises(DomainError):
        run_checks(["newton", "bogus"], 3)


def test_riesz_lift_of_unit_ball_is_superharmonic():
    f = riesz_profile(ball_indicator(1.0, 3))
    report = check_superharmonic(f, rho_grid=[0.3, 0.9, 2.0], r_grid=[0.05, 0.5, 2.0, 8.0])
    assert report.passed
    assert report.details["small_radius_deviation"] <= 1e-4


def test_superharmonic_check_covers_default_grid():
    reports = SuperharmonicCheck().run(3, DEFAULT_QUADRATURE)
    assert [report.name for report in reports] == ["superharmonic[F]", "superharmonic[riesz_ball]"]
    for report in reports:
        assert report.passed
        assert len(report.rows) >= 400
        assert report.worst <= 1.0 + 1e-6


def test_superharmonic_candidates_use_explicit_fixed_point():
    candidates = superharmonic_candidates(4)
    assert candidates["F"] == fixed_point_profile(4)
    assert candidates["F"] == F_profile(4)
    assert isinstance(candidates["riesz_ball"], RieszProfile)


def test_lemma_phi_on_critical_weak_lorentz_space():
    report = check_lemma_phi(Lorentz(3, "inf"), 3)
    assert report.passed
    assert report.details["constant"] == pytest.approx(1.0, rel=1e-6)
    assert report.name == "lemma_phi[L^(3,inf)]"


def test_lemma_check_includes_weak_lorentz_space():
    reports = LemmaCheck().run(3, DEFAULT_QUADRATURE)
    names = [report.name for report in reports]
    assert names == ["lemma_phi[marcinkiewicz_weak]", "lemma_phi[L^(4,4)]", "lemma_phi[L^(3,inf)]"]
    assert all(report.passed for report in reports)


def test_report_names_carry_labels():
    assert check_oneil(two_step_profile(), 3, t_grid=[1.0]).name == "oneil[two_step]"
    assert check_oneil(indicator_profile(1.0), 3, t_grid=[1.0]).name == "oneil[indicator(s=1)]"
    report = check_embedding(3, lebesgue(4), corpus=[indicator_profile(1.0)])
    assert report.name == "embedding[L^(4,4)]"
