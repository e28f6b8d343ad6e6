"""
算子模块

径向 / 递减数据上的四个算子：
- 球平均与中心 Hardy-Littlewood 极大算子 M
- Riesz 位势 I₂（Newton 球壳分解）
- Hardy 型算子 P_{1-2/n}
- 尾部泛函 T(t) = ∫_t^∞ f**(s) s^{2/n-1} ds
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional, Protocol, Sequence, Tuple, Union

import numpy as np
from scipy import integrate as sp_integrate
from scipy.special import betainc

from .errors import DimensionError, DomainError, FunctionAlgebraError, IntegrabilityError
from .funcalg import (
    DEFAULT_QUADRATURE,
    INF,
    ZERO_PIECE,
    PiecewisePowerLog,
    PowerLogPiece,
    QuadratureConfig,
    integrate,
    is_tail_integrable,
    log_grid,
    multiply,
    running_integral_asymptotes,
    tail_integral_asymptote,
)
from .rearrange import (
    AsymptoticProfile,
    DecreasingProfile,
    RadialProfile,
    ball_volume,
    lift,
    sphere_area,
)

logger = logging.getLogger(__name__)


class RadialFunction(Protocol):
    """球平均所需的最小接口"""

    dimension: int

    def value(self, rho: float) -> float: ...

    def value_left(self, rho: float) -> float: ...

    @property
    def kinks(self) -> Tuple[float, ...]: ...


@dataclass(frozen=True)
class BallAverageRequest:
    """以 |x| = center 为中心、半径 radius 的球平均请求"""

    profile: RadialFunction
    center: float
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError(f"ball radius must be > 0, got {self.radius}")
        if not self.center >= 0:
            raise DomainError(f"center radius must be >= 0, got {self.center}")
        if isinstance(self.profile, RadialProfile):
            head = self.profile.profile.head
            if not head.is_zero and head.power <= -self.profile.dimension:
                raise IntegrabilityError("profile is not integrable on balls around the origin")


@dataclass
class MaximalReport:
    """网格上的极大函数下界"""

    value: float
    radius: Optional[float]
    small_radius_limit: float
    grid_max: float
    lower_bound: bool = True

    def to_dict(self) -> Dict[str, object]:
        return {
            "value": self.value,
            "maximizing_radius": self.radius,
            "small_radius_limit": self.small_radius_limit,
            "grid_max": self.grid_max,
            "lower_bound": self.lower_bound,
        }


# ---------- 球平均 ----------

def cap_fraction(n: int, u: float) -> float:
    """单位球面上 {ω : ω·e ≥ u} 所占比例"""
    if u <= -1.0:
        return 1.0
    if u > 1.0:
        return 0.0
    if n == 1:
        return 0.5
    half = 0.5 * float(betainc((n - 1) / 2.0, 0.5, max(0.0, 1.0 - u * u)))
    return half if u >= 0 else 1.0 - half


def _quad(func, a: float, b: float, cfg: QuadratureConfig, points: Sequence[float] = ()) -> float:
    cuts = sorted({a, b, *(p for p in points if a < p < b)})
    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        value, _ = sp_integrate.quad(func, lo, hi, epsabs=0.0, epsrel=cfg.rel_tol, limit=cfg.max_subdivisions)
        total += value
    return total


def _full_shell_integral(profile: RadialFunction, upper: float, cfg: QuadratureConfig) -> float:
    """∫_{|y|<upper} g(|y|) dy"""
    n = profile.dimension
    if isinstance(profile, RadialProfile):
        weighted = multiply(profile.profile, PiecewisePowerLog.power(n - 1))
        return sphere_area(n) * integrate(weighted, 0.0, upper, cfg)
    return sphere_area(n) * _quad(lambda s: profile.value(s) * s ** (n - 1), 0.0, upper, cfg, profile.kinks)


def ball_average(req: BallAverageRequest, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """
    (1/|B_r|) ∫_{B(x,r)} g₀(|y|) dy，|x| = ρ

    外层对球壳半径 s 积分；半径 s 的球面落在球内的比例由余弦定理
    s² + ρ² - 2sρu ≤ r² 给出的球冠比例闭式计算（正则化不完全 Beta 函数）。
    """
    profile, rho, r = req.profile, req.center, req.radius
    n = profile.dimension
    inside = 0.0
    if r > rho:
        inside = _full_shell_integral(profile, r - rho, cfg)
    partial = 0.0
    if rho > 0:
        area = sphere_area(n)

        def integrand(s: float) -> float:
            u = (s * s + rho * rho - r * r) / (2.0 * s * rho)
            return profile.value(s) * area * s ** (n - 1) * cap_fraction(n, u)

        partial = _quad(integrand, abs(r - rho), rho + r, cfg, profile.kinks)
    return (inside + partial) / (ball_volume(n) * r ** n)


def small_radius_limit(profile: RadialFunction, rho: float) -> float:
    """r → 0 时球平均的极限：跳跃处取两侧平均"""
    return 0.5 * (profile.value(rho) + profile.value_left(rho))


def maximal_radial(f: RadialFunction, rho: float, r_grid: Optional[Sequence[float]] = None,
                   cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> MaximalReport:
    """网格上的 Mf(ρ) 下界，附带最大化半径与 r → 0 极限"""
    radii = log_grid(1e-3, 1e3, 64) if r_grid is None else np.asarray(r_grid, dtype=float)
    if radii.size == 0:
        raise DomainError("radius grid must be non-empty")
    best, best_r = -INF, None
    for r in radii:
        avg = ball_average(BallAverageRequest(f, rho, float(r)), cfg)
        if avg > best:
            best, best_r = avg, float(r)
    limit = small_radius_limit(f, rho)
    return MaximalReport(value=max(best, limit), radius=best_r, small_radius_limit=limit, grid_max=best)


# ---------- Riesz 位势 ----------

@lru_cache(maxsize=256)
def _riesz_parts(profile: PiecewisePowerLog, n: int) -> Tuple[PiecewisePowerLog, PiecewisePowerLog]:
    return (
        multiply(profile, PiecewisePowerLog.power(n - 1)),
        multiply(profile, PiecewisePowerLog.power(1)),
    )


def riesz_radial(f: RadialProfile, rho: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """I₂f(ρ) = σ_{n-1}[ρ^{2-n} ∫_0^ρ g₀(s)s^{n-1}ds + ∫_ρ^∞ g₀(s) s ds]"""
    n = f.dimension
    if n <= 2:
        raise DimensionError(f"the Riesz potential I2 requires n >= 3, got {n}")
    if not rho > 0:
        raise DomainError(f"rho must be > 0, got {rho}")
    inner_f, outer_f = _riesz_parts(f.profile, n)
    inner = integrate(inner_f, 0.0, rho, cfg)
    outer = integrate(outer_f, rho, INF, cfg)
    if inner == INF or outer == INF:
        return INF
    return sphere_area(n) * (rho ** (2 - n) * inner + outer)


@dataclass(frozen=True)
class RieszProfile:
    """I₂f 作为径向函数，可直接交给球平均"""

    source: RadialProfile
    cfg: QuadratureConfig = DEFAULT_QUADRATURE
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if self.source.dimension <= 2:
            raise DimensionError("the Riesz potential I2 requires n >= 3")

    @property
    def dimension(self) -> int:
        return self.source.dimension

    @property
    def kinks(self) -> Tuple[float, ...]:
        return self.source.kinks

    def value(self, rho: float) -> float:
        if rho == 0:
            _, outer_f = _riesz_parts(self.source.profile, self.dimension)
            return sphere_area(self.dimension) * integrate(outer_f, 0.0, INF, self.cfg)
        return riesz_radial(self.source, rho, self.cfg)

    def value_left(self, rho: float) -> float:
        return self.value(rho)


def riesz_profile(f: RadialProfile, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> RieszProfile:
    return RieszProfile(f, cfg, label=f"I2[{f.label}]" if f.label else "I2")


def riesz_rearranged(d: DecreasingProfile, t: float, n: int,
                     cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """(I₂f⁰)*(t)：f⁰ 径向递减，重排即复合 (t/c_n)^{1/n}"""
    if not t > 0:
        raise DomainError(f"t must be > 0, got {t}")
    return riesz_radial(lift(d, n), (t / ball_volume(n)) ** (1.0 / n), cfg)


def newton_shell_average(n: int, rho: float, s: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """
    ∫_{S^{n-1}} |x - sω|^{2-n} dω 的角向求积（|x| = ρ）

    Newton 球壳定理给出 σ_{n-1} max(ρ, s)^{2-n}，此处作为独立校验。
    """
    if n < 3:
        raise DimensionError(f"the Newton kernel check requires n >= 3, got {n}")
    k = (n - 3) / 2.0

    def kernel(u: float) -> float:
        return (rho * rho + s * s - 2.0 * rho * s * u) ** ((2 - n) / 2.0)

    value, _ = sp_integrate.quad(
        kernel, -1.0, 1.0, weight="alg", wvar=(k, k),
        epsabs=0.0, epsrel=min(cfg.rel_tol, 1e-12), limit=max(cfg.max_subdivisions, 200),
    )
    return sphere_area(n - 1) * value


# ---------- Hardy 算子与尾部泛函 ----------

def _as_body(d: Union[DecreasingProfile, PiecewisePowerLog]) -> PiecewisePowerLog:
    return d.body if isinstance(d, DecreasingProfile) else d


def hardy_P(d: Union[DecreasingProfile, PiecewisePowerLog], t: float, n: int,
            cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """P_{1-2/n} f(t) = t^{2/n-1} ∫_0^t f(s) s^{-2/n} ds"""
    if n < 3:
        raise DimensionError(f"P_(1-2/n) requires n >= 3, got {n}")
    if not t > 0:
        raise DomainError(f"t must be > 0, got {t}")
    weighted = multiply(_as_body(d), PiecewisePowerLog.power(Fraction(-2, n)))
    value = integrate(weighted, 0.0, t, cfg)
    if value == INF:
        raise IntegrabilityError("f(s) s^(-2/n) is not integrable near 0")
    return t ** (2.0 / n - 1.0) * value


def hardy_indicator(s: float, n: int) -> DecreasingProfile:
    """P_{1-2/n} χ_[0,s] = n/(n-2) · min(1, (s/t)^{1-2/n})，精确表示"""
    if n < 3:
        raise DimensionError(f"P_(1-2/n) requires n >= 3, got {n}")
    scale = n / (n - 2)
    exponent = Fraction(2, n) - 1
    body = PiecewisePowerLog((0.0, s, INF), (
        PowerLogPiece(scale),
        PowerLogPiece(scale * s ** float(-exponent), exponent),
    ))
    return DecreasingProfile(body, label=f"P_chi(s={s:g})")


def oneil_bracket(d: DecreasingProfile, t: float, n: int,
                  cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """t^{2/n-1} ∫_0^t f* + ∫_t^∞ f*(s) s^{2/n-1} ds"""
    if not t > 0:
        raise DomainError(f"t must be > 0, got {t}")
    exponent = Fraction(2, n) - 1
    head = integrate(d.body, 0.0, t, cfg)
    tail = integrate(multiply(d.body, PiecewisePowerLog.power(exponent)), t, INF, cfg)
    if head == INF or tail == INF:
        return INF
    return t ** float(exponent) * head + tail


def tail_T(d: DecreasingProfile, t: float, n: int, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """
    T(t) = ∫_t^∞ f**(s) s^{2/n-1} ds

    由 Fubini 化为 n/(n-2) · [t^{2/n-1}∫_0^t f* + ∫_t^∞ f* s^{2/n-1}]，逐项精确积分。
    """
    if not t > 0:
        raise DomainError(f"t must be > 0, got {t}")
    if d.is_zero:
        return 0.0
    if n <= 2:
        return INF
    return n / (n - 2) * oneil_bracket(d, t, n, cfg)


def _dominant_at_infinity(p: PowerLogPiece, q: PowerLogPiece) -> PowerLogPiece:
    if p.is_zero:
        return q
    if q.is_zero:
        return p
    if (p.power, p.logpower) == (q.power, q.logpower):
        return PowerLogPiece(p.coefficient + q.coefficient, p.power, p.logpower)
    return p if (p.power, p.logpower) > (q.power, q.logpower) else q


def tail_profile(d: DecreasingProfile, n: int, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> AsymptoticProfile:
    """t ↦ T(t) 作为带精确渐近项的数值剖面"""
    if n < 3:
        raise DimensionError(f"the tail functional requires n >= 3, got {n}")
    scale = n / (n - 2)
    exponent = Fraction(2, n) - 1
    weighted = multiply(d.body, PiecewisePowerLog.power(exponent))
    if not d.body.tail.is_zero and not is_tail_integrable(weighted.tail):
        raise IntegrabilityError("f*(s) s^(2/n-1) is not integrable at infinity")

    head_piece = d.body.head
    if head_piece.is_zero:
        head = ZERO_PIECE
    elif head_piece.power > -Fraction(2, n):
        head = PowerLogPiece(scale * integrate(weighted, 0.0, INF, cfg))
    elif head_piece.power < -Fraction(2, n) and head_piece.power > -1:
        a = head_piece.power
        coefficient = head_piece.coefficient * (1 / float(a + 1) + 1 / float(-(a + Fraction(2, n))))
        head = PowerLogPiece(scale * coefficient, a + Fraction(2, n))
    else:
        raise FunctionAlgebraError("tail functional has a logarithmic singularity at 0")

    _, running_tail = running_integral_asymptotes(d.body, cfg)
    first = running_tail.times(PowerLogPiece(1.0, exponent))
    second = tail_integral_asymptote(weighted.tail)
    tail = _dominant_at_infinity(first, second).scaled(scale)

    return AsymptoticProfile(
        func=lambda t: tail_T(d, t, n, cfg),
        head=head,
        tail=tail,
        kinks=d.kinks,
        label=f"T[{d.label}]" if d.label else "T",
    )
