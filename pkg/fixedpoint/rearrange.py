"""
重排模块

包含：
- 径向剖面 RadialProfile 与非增剖面 DecreasingProfile
- 分布函数、递减重排 f*、极大重排 f**
- f⁰ 提升、伸缩、层饼（layer-cake）数值校验
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy import optimize
from scipy.special import gamma as gamma_fn

from .errors import DimensionError, DomainError, IntegrabilityError, RearrangementError
from .funcalg import (
    DEFAULT_QUADRATURE,
    INF,
    PiecewisePowerLog,
    PowerLogPiece,
    QuadratureConfig,
    compose_power,
    evaluate,
    evaluate_left,
    integrate,
    is_head_integrable,
    running_integral_asymptotes,
    supremum,
)

logger = logging.getLogger(__name__)


def ball_volume(n: int) -> float:
    """c_n：ℝⁿ 中单位球体积 π^{n/2} / Γ(n/2 + 1)"""
    return math.pi ** (n / 2) / float(gamma_fn(n / 2 + 1))


def sphere_area(n: int) -> float:
    """σ_{n-1}：ℝⁿ 中单位球面面积"""
    return n * ball_volume(n)


def _check_dimension(n: int, minimum: int = 1) -> int:
    if isinstance(n, bool) or int(n) != n or n < minimum:
        raise DimensionError(f"dimension must be an integer >= {minimum}, got {n}")
    return int(n)


# ---------- 单调性 ----------

def _piece_is_non_increasing(piece: PowerLogPiece, lo: float, hi: float) -> bool:
    if piece.is_zero:
        return True
    if lo < 1.0 and piece.power > 0:
        return False
    if hi <= 1.0:
        return True
    # t > 1 时在 u = log t 上导数符号为 α(1+u) + β，关于 u 线性
    alpha, beta = float(piece.power), float(piece.logpower)
    u_lo = math.log(max(lo, 1.0))
    if alpha * (1.0 + u_lo) + beta > 1e-12:
        return False
    if hi == INF:
        return piece.power < 0 or (piece.power == 0 and piece.logpower <= 0)
    return alpha * (1.0 + math.log(hi)) + beta <= 1e-12


def non_increasing_violation(f: PiecewisePowerLog) -> Optional[str]:
    """返回违反非增性的位置描述；非增时返回 None"""
    for lo, hi, piece in f.intervals():
        if piece.coefficient < 0:
            return f"negative coefficient on ({lo}, {hi})"
        if not _piece_is_non_increasing(piece, lo, hi):
            return f"piece increases on ({lo}, {hi})"
    for t in f.interior_breakpoints:
        left, right = evaluate_left(f, t), evaluate(f, t)
        if right > left * (1.0 + 1e-12) + 1e-300:
            return f"upward jump at t={t}"
    return None


@dataclass(frozen=True)
class DecreasingProfile:
    """(0, ∞) 上非增、右连续的函数"""

    body: PiecewisePowerLog
    label: str = field(default="", compare=False)

    def __post_init__(self):
        problem = non_increasing_violation(self.body)
        if problem:
            raise DomainError(f"not a decreasing profile: {problem}")

    def value(self, t: float) -> float:
        return evaluate(self.body, t)

    def __call__(self, t):
        return self.body(t)

    @property
    def kinks(self) -> Tuple[float, ...]:
        return self.body.interior_breakpoints

    @property
    def is_zero(self) -> bool:
        return self.body.is_zero


@dataclass(frozen=True)
class AsymptoticProfile:
    """
    数值给出的非增函数

    value 任意可调用；head / tail 为 t → 0 与 t → ∞ 时的精确主项，
    供范数计算在 [1/T_max, T_max] 之外闭合积分与上确界。
    """

    func: Callable[[float], float]
    head: PowerLogPiece
    tail: PowerLogPiece
    kinks: Tuple[float, ...] = ()
    label: str = ""

    def value(self, t: float) -> float:
        if not t > 0:
            raise DomainError(f"evaluation requires t > 0, got {t}")
        return float(self.func(t))

    def __call__(self, t):
        if np.ndim(t) == 0:
            return self.value(float(t))
        return np.array([self.value(float(x)) for x in np.asarray(t, dtype=float)])


@dataclass(frozen=True)
class RadialProfile:
    """ℝⁿ 上只依赖 ρ = |x| 的函数 f(x) = g₀(|x|)"""

    dimension: int
    profile: PiecewisePowerLog
    label: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "dimension", _check_dimension(self.dimension))
        if any(piece.coefficient < 0 for piece in self.profile.pieces):
            raise DomainError("radial profiles must be non-negative")

    def value(self, rho: float) -> float:
        if rho == 0:
            return self.profile.head.limit_at_zero()
        return evaluate(self.profile, rho)

    def value_left(self, rho: float) -> float:
        if rho == 0:
            return self.value(0.0)
        return evaluate_left(self.profile, rho)

    def __call__(self, rho):
        return self.profile(rho)

    @property
    def kinks(self) -> Tuple[float, ...]:
        return self.profile.interior_breakpoints


# ---------- 上水平集 ----------

def _solve_level(piece: PowerLogPiece, level: float, a: float, b: float) -> float:
    """在单调区间 (a, b) 内解 piece(ρ) = level"""
    if piece.logpower == 0 or b <= 1.0:
        return (level / piece.coefficient) ** (1.0 / float(piece.power))

    def gap(u: float) -> float:
        return float(piece.value(math.exp(u))) - level

    u_a = math.log(a) if a > 0 else -50.0
    u_b = math.log(b) if b < INF else u_a + 1.0
    while b == INF and gap(u_a) * gap(u_b) > 0 and u_b < 700:
        u_b = u_a + 2.0 * (u_b - u_a)
    return math.exp(optimize.brentq(gap, u_a, u_b, xtol=1e-14, rtol=1e-14))


def _monotone_parts(piece: PowerLogPiece, lo: float, hi: float) -> List[Tuple[float, float]]:
    cuts = [lo, hi]
    if lo < 1.0 < hi:
        cuts.append(1.0)
    if piece.power != 0 and piece.logpower != 0:
        u_star = float(-piece.logpower / piece.power) - 1.0
        if 0 < u_star < 700 and lo < math.exp(u_star) < hi:
            cuts.append(math.exp(u_star))
    cuts = sorted(set(cuts))
    return list(zip(cuts[:-1], cuts[1:]))


def superlevel_intervals(f: PiecewisePowerLog, level: float) -> List[Tuple[float, float]]:
    """{t : f(t) > level} 写成不交区间的并"""
    if not level > 0:
        raise DomainError(f"level must be > 0, got {level}")
    result: List[Tuple[float, float]] = []
    for lo, hi, piece in f.intervals():
        if piece.is_zero:
            continue
        for a, b in _monotone_parts(piece, lo, hi):
            va = piece.limit_at_zero() if a == 0 else float(piece.value(a))
            vb = piece.limit_at_infinity() if b == INF else float(piece.value(b))
            if level < min(va, vb):
                result.append((a, b))
            elif level >= max(va, vb):
                continue
            elif va > vb:
                result.append((a, _solve_level(piece, level, a, b)))
            else:
                result.append((_solve_level(piece, level, a, b), b))
    return result


def level_set_measure(f: PiecewisePowerLog, level: float) -> float:
    """一维 Lebesgue 测度 |{t : f(t) > level}|"""
    return sum(b - a for a, b in superlevel_intervals(f, level))


def distribution(f: RadialProfile, level: float) -> float:
    """|{x ∈ ℝⁿ : f(x) > λ}|，上水平集为若干球壳，体积闭式相加"""
    n = f.dimension
    volume = 0.0
    for a, b in superlevel_intervals(f.profile, level):
        if b == INF:
            return INF
        volume += ball_volume(n) * (b ** n - a ** n)
    return volume


# ---------- 重排 ----------

def _step_rearrangement(f: RadialProfile) -> PiecewisePowerLog:
    n = f.dimension
    shells = {}
    for lo, hi, piece in f.profile.intervals():
        if piece.is_zero:
            continue
        volume = INF if hi == INF else ball_volume(n) * (hi ** n - lo ** n)
        shells[piece.coefficient] = shells.get(piece.coefficient, 0.0) + volume
    intervals = []
    start = 0.0
    for height in sorted(shells, reverse=True):
        end = start + shells[height]
        intervals.append((start, end, PowerLogPiece(height)))
        if end == INF:
            break
        start = end
    if not intervals or intervals[-1][1] != INF:
        intervals.append((start, INF, PowerLogPiece(0.0)))
    return PiecewisePowerLog.from_pieces(intervals).simplified()


def rearrangement(f: RadialProfile) -> DecreasingProfile:
    """
    精确的递减重排 f*(t) = inf{λ : μ_f(λ) ≤ t}

    - g₀ 非增且无对数因子：f*(t) = g₀((t/c_n)^{1/n})
    - g₀ 为阶梯函数：按高度降序累加球壳体积
    其余情形抛出 RearrangementError。
    """
    g0 = f.profile
    if g0.tail.limit_at_infinity() == INF:
        raise RearrangementError("distribution function is identically infinite")
    n = f.dimension
    if non_increasing_violation(g0) is None:
        if not g0.is_log_free:
            raise RearrangementError("decreasing profiles with log factors leave the power-log class")
        body = compose_power(g0, ball_volume(n) ** (-1.0 / n), Fraction(1, n))
        return DecreasingProfile(body, label=f"{f.label}*" if f.label else "")
    if all(piece.is_zero or (piece.power == 0 and piece.logpower == 0) for piece in g0.pieces):
        return DecreasingProfile(_step_rearrangement(f), label=f"{f.label}*" if f.label else "")
    raise RearrangementError("only non-increasing or piecewise-constant radial profiles are rearranged exactly")


def rearrangement_numeric(f: RadialProfile, t: float, rel_tol: float = 1e-12) -> float:
    """层饼校验：对 λ 二分求广义逆 inf{λ : μ_f(λ) ≤ t}"""
    if not t > 0:
        raise DomainError(f"t must be > 0, got {t}")
    hi = supremum(f.profile)
    if hi == INF:
        hi = 1.0
        while distribution(f, hi) > t:
            hi *= 2.0
    lo = 0.0
    for _ in range(400):
        if hi - lo <= rel_tol * hi:
            break
        mid = 0.5 * (lo + hi)
        if mid > 0 and distribution(f, mid) <= t:
            hi = mid
        else:
            lo = mid
    return hi


def doublestar(d: DecreasingProfile, t: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """f**(t) = t⁻¹ ∫_0^t f*(s) ds"""
    if not t > 0:
        raise DomainError(f"t must be > 0, got {t}")
    if not is_head_integrable(d.body.head):
        raise IntegrabilityError("f* is not integrable near 0")
    return integrate(d.body, 0.0, t, cfg) / t


def doublestar_asymptotes(d: DecreasingProfile,
                          cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> Tuple[PowerLogPiece, PowerLogPiece]:
    """f** 在 0 与 ∞ 处的主项"""
    head, tail = running_integral_asymptotes(d.body, cfg)
    shift = PowerLogPiece(1.0, -1)
    return head.times(shift), tail.times(shift)


# ---------- 构造 ----------

def lift(d: DecreasingProfile, n: int) -> RadialProfile:
    """f⁰(x) = f*(c_n |x|ⁿ)"""
    n = _check_dimension(n)
    return RadialProfile(n, compose_power(d.body, ball_volume(n), n), label=f"{d.label}0" if d.label else "")


def dilate(f: RadialProfile, a: float) -> RadialProfile:
    """f_a(x) = f(a x)"""
    return RadialProfile(f.dimension, compose_power(f.profile, a, 1))


def indicator_profile(s: float) -> DecreasingProfile:
    """χ_[0,s)"""
    return DecreasingProfile(PiecewisePowerLog.indicator(s), label=f"indicator(s={s:g})")


def h_profile(n: int) -> DecreasingProfile:
    """h_n(t) = χ_[0,1](t) + t^{2/n-1} χ_[1,∞)(t)，即 W⁻¹"""
    n = _check_dimension(n, 3)
    return DecreasingProfile(PiecewisePowerLog.two_power(0, Fraction(2, n) - 1), label=f"h{n}")


def w_weight(n: int) -> PiecewisePowerLog:
    """W(t) = max(1, t^{1-2/n})"""
    n = _check_dimension(n, 3)
    return PiecewisePowerLog.two_power(0, 1 - Fraction(2, n))


def F_profile(n: int) -> RadialProfile:
    """F(x) = χ_{|x|≤1} + |x|^{2-n} χ_{|x|>1} = min(1, |x|^{2-n})，也是不动点候选"""
    n = _check_dimension(n, 3)
    return RadialProfile(n, PiecewisePowerLog.two_power(0, 2 - n), label=f"F{n}")


def ball_indicator(volume: float, n: int) -> RadialProfile:
    """体积为 volume 的球的指示函数"""
    n = _check_dimension(n)
    radius = (volume / ball_volume(n)) ** (1.0 / n)
    return RadialProfile(n, PiecewisePowerLog.indicator(radius), label=f"ball(v={volume:g})")


def two_step_profile() -> DecreasingProfile:
    """χ_[0,1] + ½ χ_[1,4]"""
    body = PiecewisePowerLog((0.0, 1.0, 4.0, INF), (PowerLogPiece(1.0), PowerLogPiece(0.5), PowerLogPiece(0.0)))
    return DecreasingProfile(body, label="two_step")


def fixed_point_profile(n: int) -> RadialProfile:
    """显式不动点 min(1, |x|^{2-n})"""
    return F_profile(n)
