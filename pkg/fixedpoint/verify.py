"""
数值校验模块

在有限网格上做有界比值认证：
- 超调和性 / 不动点（球平均 ≤ f(ρ)，小半径极限 → f(ρ)）
- O'Neil 型夹逼
- 引理中的基本函数公式（s^{2/n} 与字面 s^{n/2} 两种缩放）
- 最小空间嵌入常数
以及重排、Newton 核与衰减下界三项辅助校验。
"""

from __future__ import annotations

import asyncio
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np

from .decide import decide_fixed_point
from .errors import DimensionError, DomainError
from .funcalg import DEFAULT_QUADRATURE, INF, QuadratureConfig, log_grid
from .operators import (
    BallAverageRequest,
    ball_average,
    hardy_indicator,
    newton_shell_average,
    oneil_bracket,
    riesz_profile,
    riesz_rearranged,
    tail_T,
    tail_profile,
)
from .rearrange import (
    DecreasingProfile,
    F_profile,
    RadialProfile,
    ball_indicator,
    ball_volume,
    fixed_point_profile,
    h_profile,
    indicator_profile,
    rearrangement,
    rearrangement_numeric,
    sphere_area,
    two_step_profile,
)
from .spaces import Lorentz, SpaceDescriptor, lebesgue, minimal_space

logger = logging.getLogger(__name__)

DEFAULT_CEILING = 10.0


@dataclass
class VerificationReport:
    """单项校验报告：通过当且仅当最坏值在容差内"""

    name: str
    grid: Dict[str, Any]
    worst: float
    tolerance: float
    passed: bool
    details: Dict[str, Any] = field(default_factory=dict)
    columns: List[str] = field(default_factory=list)
    rows: List[List[float]] = field(default_factory=list)

    def to_dict(self, include_rows: bool = False) -> Dict[str, Any]:
        data = {
            "check": self.name,
            "passed": self.passed,
            "worst": self.worst,
            "tolerance": self.tolerance,
            "grid": self.grid,
            "details": self.details,
        }
        if include_rows:
            data["columns"] = list(self.columns)
            data["rows"] = [list(row) for row in self.rows]
        return data

    def table(self) -> List[List[Any]]:
        """CSV 表：表头加每个网格点一行"""
        return [list(self.columns)] + [list(row) for row in self.rows]


def _grid_meta(name: str, values: Sequence[float]) -> Dict[str, Any]:
    values = list(values)
    return {f"{name}_min": min(values), f"{name}_max": max(values), f"{name}_points": len(values)} if values else {}


def _labelled(base: str, label: str) -> str:
    return f"{base}[{label}]" if label else base


def _equivalence_constant(ratios: Iterable[float]) -> float:
    """比值落在 [1/C, C] 内的最小 C"""
    worst = 1.0
    for ratio in ratios:
        if not ratio > 0 or ratio == INF:
            return INF
        worst = max(worst, ratio, 1.0 / ratio)
    return worst


# ---------- 主要校验 ----------

def check_superharmonic(f, rho_grid: Optional[Sequence[float]] = None,
                        r_grid: Optional[Sequence[float]] = None,
                        cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                        tol: float = 1e-6, small_radius: float = 1e-3, limit_tol: float = 1e-4,
                        name: str = "superharmonic") -> VerificationReport:
    """
    球平均 ≤ f(ρ)(1 + tol) 对所有网格点成立，且 r → 0 时平均 → f(ρ)

    f 为 RadialProfile 或 RieszProfile。
    """
    rhos = log_grid(0.1, 10.0, 8) if rho_grid is None else np.asarray(rho_grid, dtype=float)
    radii = log_grid(0.01, 20.0, 8) if r_grid is None else np.asarray(r_grid, dtype=float)
    rows: List[List[float]] = []
    worst_ratio = 0.0
    worst_limit = 0.0
    for rho in rhos:
        center = f.value(float(rho))
        for r in radii:
            avg = ball_average(BallAverageRequest(f, float(rho), float(r)), cfg)
            ratio = avg / center if center > 0 else (INF if avg > 0 else 1.0)
            worst_ratio = max(worst_ratio, ratio)
            rows.append([float(rho), float(r), avg, center, ratio])
        if any(abs(rho - k) < 10 * small_radius for k in f.kinks) or center <= 0:
            continue
        near = ball_average(BallAverageRequest(f, float(rho), small_radius), cfg)
        worst_limit = max(worst_limit, abs(near - center) / center)
    passed = worst_ratio <= 1.0 + tol and worst_limit <= limit_tol
    return VerificationReport(
        name=name,
        grid={**_grid_meta("rho", rhos), **_grid_meta("r", radii), "small_radius": small_radius},
        worst=worst_ratio,
        tolerance=tol,
        passed=passed,
        details={"max_ratio": worst_ratio, "small_radius_deviation": worst_limit, "limit_tolerance": limit_tol},
        columns=["rho", "r", "ball_average", "f_rho", "ratio"],
        rows=rows,
    )


def check_oneil(d: DecreasingProfile, n: int, t_grid: Optional[Sequence[float]] = None,
                cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                ceiling: float = DEFAULT_CEILING) -> VerificationReport:
    """(I₂f⁰)*、O'Neil 括号与尾部泛函 T 两两比值有界"""
    if n < 3:
        raise DimensionError(f"the O'Neil comparison needs n >= 3, got {n}")
    ts = log_grid(1e-2, 1e4, 8) if t_grid is None else np.asarray(t_grid, dtype=float)
    rows: List[List[float]] = []
    if d.is_zero:
        rows = [[float(t), 0.0, 0.0, 0.0, 1.0, 1.0] for t in ts]
        return VerificationReport(
            name=_labelled("oneil", d.label), grid=_grid_meta("t", ts), worst=1.0, tolerance=ceiling, passed=True,
            details={"vacuous": True, "constant_bracket": 1.0, "constant_tail": 1.0},
            columns=["t", "riesz_rearranged", "bracket", "tail_T", "ratio_bracket", "ratio_tail"], rows=rows,
        )
    bracket_ratios, tail_ratios = [], []
    for t in ts:
        potential = riesz_rearranged(d, float(t), n, cfg)
        bracket = oneil_bracket(d, float(t), n, cfg)
        tail = tail_T(d, float(t), n, cfg)
        rb, rt = potential / bracket, potential / tail
        bracket_ratios.append(rb)
        tail_ratios.append(rt)
        rows.append([float(t), potential, bracket, tail, rb, rt])
    c_bracket = _equivalence_constant(bracket_ratios)
    c_tail = _equivalence_constant(tail_ratios)
    worst = max(c_bracket, c_tail)
    return VerificationReport(
        name=_labelled("oneil", d.label),
        grid={**_grid_meta("t", ts), "n": n},
        worst=worst,
        tolerance=ceiling,
        passed=worst <= ceiling,
        details={"constant_bracket": c_bracket, "constant_tail": c_tail},
        columns=["t", "riesz_rearranged", "bracket", "tail_T", "ratio_bracket", "ratio_tail"],
        rows=rows,
    )


def check_lemma_phi(X: SpaceDescriptor, n: int, s_grid: Optional[Sequence[float]] = None,
                    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                    ceiling: float = DEFAULT_CEILING) -> VerificationReport:
    """
    φ_Y(s) = ‖T[χ_[0,s]]‖_X 与 s^{2/n}‖P_{1-2/n}χ_[0,s]‖_X 的比值有界

    同时记录字面缩放 s^{n/2} 下比值的漂移（max/min）。
    """
    if n < 3:
        raise DimensionError(f"the fundamental-function comparison needs n >= 3, got {n}")
    ss = np.exp2(np.arange(-6, 7)) if s_grid is None else np.asarray(s_grid, dtype=float)
    rows: List[List[float]] = []
    ratios, literal = [], []
    for s in ss:
        s = float(s)
        phi_y = X.norm(tail_profile(indicator_profile(s), n, cfg), cfg)
        hardy = X.norm(hardy_indicator(s, n), cfg)
        scaled = s ** (2.0 / n) * hardy
        literal_scaled = s ** (n / 2.0) * hardy
        ratio = phi_y / scaled
        ratios.append(ratio)
        literal.append(phi_y / literal_scaled)
        rows.append([s, phi_y, hardy, ratio, phi_y / literal_scaled])
    constant = _equivalence_constant(ratios)
    drift = max(literal) / min(literal) if min(literal) > 0 else INF
    return VerificationReport(
        name=_labelled("lemma_phi", X.name),
        grid={**_grid_meta("s", ss), "n": n, "space": X.name},
        worst=constant,
        tolerance=ceiling,
        passed=constant <= ceiling,
        details={"constant": constant, "literal_scaling_drift": drift},
        columns=["s", "phi_Y", "norm_P_chi", "ratio", "literal_ratio"],
        rows=rows,
    )


def default_corpus(n: int) -> List[DecreasingProfile]:
    """指示函数、两阶函数、h_n = W⁻¹ 与 F 的精确重排"""
    return [
        indicator_profile(1.0),
        indicator_profile(0.25),
        two_step_profile(),
        h_profile(n),
        rearrangement(F_profile(n)),
    ]


def check_embedding(n: int, X: SpaceDescriptor, corpus: Optional[Sequence[DecreasingProfile]] = None,
                    cfg: QuadratureConfig = DEFAULT_QUADRATURE, tol: float = 1e-9) -> VerificationReport:
    """‖d‖_X ≤ c‖d‖_{L^{n/(n-2),∞}∩L^∞}，c = ‖W⁻¹‖_X"""
    decision = decide_fixed_point(n, X, cfg)
    if not decision.exists:
        raise DomainError(f"embedding constant is infinite: {X.name} has no fixed point for n={n}")
    c = X.norm(h_profile(n), cfg)
    minimal = minimal_space(n)
    profiles = default_corpus(n) if corpus is None else list(corpus)
    rows: List[List[Any]] = []
    worst = 0.0
    for d in profiles:
        lhs = X.norm(d, cfg)
        rhs = c * minimal.norm(d, cfg)
        ratio = lhs / rhs if rhs > 0 else (INF if lhs > 0 else 0.0)
        worst = max(worst, ratio)
        rows.append([d.label, lhs, rhs, ratio])
    return VerificationReport(
        name=_labelled("embedding", X.name),
        grid={"n": n, "space": X.name, "profiles": len(profiles)},
        worst=worst,
        tolerance=1.0 + tol,
        passed=worst <= 1.0 + tol,
        details={"constant": c},
        columns=["profile", "norm_X", "bound", "ratio"],
        rows=rows,
    )


# ---------- 辅助校验 ----------

def check_rearrangement(n: int, t_grid: Optional[Sequence[float]] = None, tol: float = 1e-8) -> VerificationReport:
    """F* 与闭式 min(1, (t/c_n)^{(2-n)/n}) 以及层饼二分结果对比"""
    if n < 3:
        raise DimensionError(f"F needs n >= 3, got {n}")
    ts = log_grid(1e-2, 1e4, 8) if t_grid is None else np.asarray(t_grid, dtype=float)
    f = F_profile(n)
    exact_star = rearrangement(f)
    cn = ball_volume(n)
    rows, worst = [], 0.0
    for t in ts:
        t = float(t)
        closed = min(1.0, (t / cn) ** ((2.0 - n) / n))
        value = exact_star.value(t)
        numeric = rearrangement_numeric(f, t)
        error = max(abs(value - closed), abs(value - numeric)) / closed
        worst = max(worst, error)
        rows.append([t, value, closed, numeric, error])
    return VerificationReport(
        name="rearrangement", grid={**_grid_meta("t", ts), "n": n}, worst=worst, tolerance=tol,
        passed=worst <= tol, columns=["t", "exact", "closed_form", "layer_cake", "relative_error"], rows=rows,
    )


def check_newton(dimensions: Sequence[int] = (3, 4, 5), pairs: int = 20, seed: int = 0,
                 cfg: QuadratureConfig = DEFAULT_QUADRATURE, tol: float = 1e-8) -> VerificationReport:
    """球面上 |x - sω|^{2-n} 的角向求积等于 σ_{n-1} max(ρ, s)^{2-n}"""
    rng = np.random.default_rng(seed)
    rows, worst = [], 0.0
    for n in dimensions:
        for rho, s in 10.0 ** rng.uniform(-1.0, 1.0, size=(pairs, 2)):
            rho, s = float(rho), float(s)
            numeric = newton_shell_average(n, rho, s, cfg)
            closed = sphere_area(n) * max(rho, s) ** (2 - n)
            error = abs(numeric - closed) / closed
            worst = max(worst, error)
            rows.append([n, rho, s, numeric, closed, error])
    return VerificationReport(
        name="newton", grid={"dimensions": list(dimensions), "pairs": pairs, "seed": seed},
        worst=worst, tolerance=tol, passed=worst <= tol,
        columns=["n", "rho", "s", "quadrature", "closed_form", "relative_error"], rows=rows,
    )


def superharmonic_candidates(n: int, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> Dict[str, Any]:
    """min(1, ρ^{2-n}) 与单位体积球指示函数的 Riesz 位势"""
    return {"F": fixed_point_profile(n), "riesz_ball": riesz_profile(ball_indicator(1.0, n), cfg)}


def check_decay(n: int, rho_grid: Optional[Sequence[float]] = None,
                cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> VerificationReport:
    """inf_{ρ∈[1,100]} f(ρ) ρ^{n-2} > 0 对两个候选成立"""
    if n < 3:
        raise DimensionError(f"decay check needs n >= 3, got {n}")
    rhos = log_grid(1.0, 100.0, 16) if rho_grid is None else np.asarray(rho_grid, dtype=float)
    rows, constants = [], {}
    for label, f in superharmonic_candidates(n, cfg).items():
        values = [f.value(float(rho)) * float(rho) ** (n - 2) for rho in rhos]
        constants[label] = min(values)
        rows.extend([label, float(rho), v] for rho, v in zip(rhos, values))
    worst = min(constants.values())
    return VerificationReport(
        name="decay", grid={**_grid_meta("rho", rhos), "n": n}, worst=worst, tolerance=0.0,
        passed=worst > 0, details={"constants": constants}, columns=["candidate", "rho", "f_rho_times_rho_n_minus_2"],
        rows=rows,
    )


# ---------- 注册表 ----------

class BaseCheck(ABC):
    """校验基类"""

    description: str = ""

    @abstractmethod
    def run(self, n: int, cfg: QuadratureConfig, **kwargs) -> List[VerificationReport]:
        """执行校验"""


class SuperharmonicCheck(BaseCheck):
    description = "ball averages of the explicit super-harmonic candidates"

    def run(self, n, cfg, **kwargs):
        tol = kwargs.get("superharmonic_tol", 1e-6)
        limit_tol = kwargs.get("limit_tol", 1e-4)
        small = kwargs.get("small_radius", 1e-3)
        return [
            check_superharmonic(f, cfg=cfg, tol=tol, small_radius=small, limit_tol=limit_tol,
                                name=f"superharmonic[{label}]")
            for label, f in superharmonic_candidates(n, cfg).items()
        ]


class ONeilCheck(BaseCheck):
    description = "(I2 f0)* against the O'Neil bracket and the tail functional"

    def run(self, n, cfg, **kwargs):
        ceiling = kwargs.get("ceiling", DEFAULT_CEILING)
        return [check_oneil(d, n, cfg=cfg, ceiling=ceiling) for d in (indicator_profile(1.0), two_step_profile())]


class LemmaCheck(BaseCheck):
    description = "fundamental function of Y against s^(2/n) ||P chi||_X"

    def run(self, n, cfg, **kwargs):
        ceiling = kwargs.get("ceiling", DEFAULT_CEILING)
        spaces = (minimal_space(n), lebesgue(4), Lorentz(Fraction(n, n - 2), "inf"))
        return [check_lemma_phi(X, n, cfg=cfg, ceiling=ceiling) for X in spaces]


class EmbeddingCheck(BaseCheck):
    description = "embedding of the minimal space with constant ||W^-1||_X"

    def run(self, n, cfg, **kwargs):
        tol = kwargs.get("embedding_tol", 1e-9)
        critical = Fraction(n, n - 2)
        spaces = [minimal_space(n), lebesgue(critical + 1), Lorentz(critical, "inf")]
        return [check_embedding(n, X, cfg=cfg, tol=tol) for X in spaces]


class RearrangementCheck(BaseCheck):
    description = "exact F* against the closed form and the layer-cake oracle"

    def run(self, n, cfg, **kwargs):
        return [check_rearrangement(n)]


class NewtonCheck(BaseCheck):
    description = "angular quadrature of the Newton kernel"

    def run(self, n, cfg, **kwargs):
        return [check_newton(cfg=cfg)]


class DecayCheck(BaseCheck):
    description = "lower bound f(rho) rho^(n-2) > 0 on [1, 100]"

    def run(self, n, cfg, **kwargs):
        return [check_decay(n, cfg=cfg)]


class CheckManager:
    """校验管理器"""

    def __init__(self):
        # 校验注册表
        self._checks: Dict[str, BaseCheck] = {
            "superharmonic": SuperharmonicCheck(),
            "oneil": ONeilCheck(),
            "lemma-phi": LemmaCheck(),
            "embedding": EmbeddingCheck(),
            "rearrangement": RearrangementCheck(),
            "newton": NewtonCheck(),
            "decay": DecayCheck(),
        }

    def get_check(self, name: str) -> BaseCheck:
        """获取校验"""
        if name not in self._checks:
            raise DomainError(f"Unknown check: {name}")
        return self._checks[name]

    def add_check(self, name: str, check: BaseCheck):
        """添加自定义校验"""
        self._checks[name] = check

    def list_checks(self) -> List[str]:
        """列出所有可用校验"""
        return list(self._checks.keys())

    async def execute_check(self, name: str, n: int, cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                            **kwargs) -> List[VerificationReport]:
        """在工作线程中执行指定校验"""
        check = self.get_check(name)
        return await asyncio.to_thread(check.run, n, cfg, **kwargs)

    async def execute_all(self, names: Sequence[str], n: int, cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                          **kwargs) -> List[VerificationReport]:
        """并发执行多个校验，结果按 names 顺序排列"""
        results = await asyncio.gather(*(self.execute_check(name, n, cfg, **kwargs) for name in names))
        return [report for reports in results for report in reports]


def create_check_manager() -> CheckManager:
    """创建校验管理器"""
    return CheckManager()


def run_checks(names: Optional[Sequence[str]], n: int, cfg: QuadratureConfig = DEFAULT_QUADRATURE,
               **kwargs) -> List[VerificationReport]:
    """同步入口：names 为空时执行全部校验"""
    manager = create_check_manager()
    selected = list(names) if names else manager.list_checks()
    for name in selected:
        manager.get_check(name)
    logger.debug("running checks %s for n=%d", selected, n)
    return asyncio.run(manager.execute_all(selected, n, cfg, **kwargs))
