"""
不动点判定模块

对给定的 (n, X) 判断极大算子 M 在 X(ℝⁿ) 中是否有非常数不动点。
精确判定始终是条件 (3)：‖h_n‖_X < ∞；推论规则与指标判别作为交叉校验与快速路径。
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional

import numpy as np

from .errors import CrossCheckError, DimensionError, DomainError
from .funcalg import (
    DEFAULT_QUADRATURE,
    INF,
    PiecewisePowerLog,
    QuadratureConfig,
    exact,
    integrate,
    log_grid,
    multiply,
)
from .rearrange import h_profile
from .spaces import (
    IndexReport,
    Lambda,
    Lorentz,
    SpaceDescriptor,
    fundamental_indices,
    proposition_space,
)

logger = logging.getLogger(__name__)

DEFAULT_INDEX_TOL = 1e-2
STRATEGIES = ("exact", "fast")


class Verdict(str, Enum):
    FIXED_POINT_EXISTS = "FixedPointExists"
    NO_FIXED_POINT = "NoFixedPoint"


class Method(str, Enum):
    DIMENSION_RULE = "DimensionRule"
    CONDITION3_EXACT = "Condition3Exact"
    LORENTZ_RULE = "LorentzRule"
    LAMBDA_RULE = "LambdaRule"
    INDEX_SUFFICIENT = "IndexSufficient"
    INDEX_NECESSARY = "IndexNecessary"


class IndexStatus(str, Enum):
    GUARANTEED_NONTRIVIAL = "GuaranteedNontrivial"
    GUARANTEED_TRIVIAL = "GuaranteedTrivial"
    INDETERMINATE = "Indeterminate"


@dataclass
class Decision:
    """判定结果及其证据"""

    n: int
    verdict: Verdict
    method: Method
    space: Dict[str, Any] = field(default_factory=dict)
    witnesses: Dict[str, Any] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def exists(self) -> bool:
        return self.verdict is Verdict.FIXED_POINT_EXISTS

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "space": self.space,
            "verdict": self.verdict.value,
            "method": self.method.value,
            "witnesses": dict(self.witnesses),
            "notes": list(self.notes),
        }


@dataclass
class IndexVerdict:
    """指标判别结果"""

    status: IndexStatus
    indices: IndexReport
    threshold: float
    tolerance: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "threshold": self.threshold,
            "tolerance": self.tolerance,
            "indices": self.indices.to_dict(),
        }


@dataclass
class PhiGrowth:
    """sup_{t≥1} φ_X(t)/t^{1-2/n} 的网格值与渐近有限性"""

    grid_sup: float
    argmax: float
    finite: bool

    def to_dict(self) -> Dict[str, Any]:
        return {"grid_sup": self.grid_sup, "argmax": self.argmax, "finite": self.finite}


def _check_n(n: Any) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise DimensionError(f"dimension must be an integer >= 1, got {n!r}")
    return int(n)


def threshold(n: int) -> Fraction:
    """1 - 2/n"""
    return 1 - Fraction(2, n)


# ---------- 推论规则 ----------

def lorentz_rule(n: int, p: Any, q: Any) -> bool:
    """L^{p,q} 有不动点当且仅当 p > n/(n-2)，或 p = n/(n-2) 且 q = ∞"""
    n = _check_n(n)
    if n < 3:
        raise DimensionError("the Lorentz rule needs n >= 3")
    space = Lorentz(p, q)
    if space.p == INF:
        return True
    critical = Fraction(n, n - 2)
    return space.p > critical or (space.p == critical and space.q == INF)


def lambda_rule(n: int, p: Any, w: PiecewisePowerLog, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> bool:
    """∫_1^∞ w(t) t^{-p(1-2/n)} dt < ∞"""
    n = _check_n(n)
    if n < 3:
        raise DimensionError("the Lambda rule needs n >= 3")
    p = exact(p)
    if p < 1:
        raise DomainError("p must be >= 1")
    integrand = multiply(w, PiecewisePowerLog.power(-p * threshold(n)))
    return integrate(integrand, 1.0, INF, cfg) < INF


def minimal_dimension(p: Any, w: PiecewisePowerLog) -> Optional[int]:
    """
    Λ^p(w) 规则成立的最小 n ≥ 3；永不成立时返回 None

    w 尾段为 c t^b (1+log t)^β：需要 b - p(1-2/n) < -1，或取等且 β < -1。
    """
    p = exact(p)
    tail = w.tail
    if tail.is_zero:
        return 3
    gap = p - tail.power - 1
    if gap <= 0:
        return None
    bound = 2 * p / gap
    n = math.floor(bound) + 1
    if bound.denominator == 1 and tail.logpower < -1:
        n = int(bound)
    return max(3, n)


def lambda_dimension_threshold(eps: float) -> float:
    """w ∈ B_{p-ε} 时 n > 2/ε 足够"""
    if not eps > 0:
        raise DomainError(f"eps must be > 0, got {eps}")
    return 2.0 / eps


def corollary_rule(n: int, X: SpaceDescriptor, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> Optional[tuple]:
    """Lorentz / Lambda 的闭式规则；其它族返回 None"""
    if isinstance(X, Lorentz):
        return Method.LORENTZ_RULE, lorentz_rule(n, X.p, X.q)
    if isinstance(X, Lambda):
        return Method.LAMBDA_RULE, lambda_rule(n, X.p, X.w, cfg)
    return None


# ---------- 指标判别 ----------

def index_test(n: int, X: SpaceDescriptor, tol: float = DEFAULT_INDEX_TOL,
               cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> IndexVerdict:
    """β̄ < 1-2/n - tol 保证非平凡；β̲ > 1-2/n + tol 保证平凡"""
    n = _check_n(n)
    if n < 3:
        raise DimensionError("the index test needs n >= 3")
    indices = fundamental_indices(X, cfg)
    level = float(threshold(n))
    if indices.beta_upper < level - tol:
        status = IndexStatus.GUARANTEED_NONTRIVIAL
    elif indices.beta_lower > level + tol:
        status = IndexStatus.GUARANTEED_TRIVIAL
    else:
        status = IndexStatus.INDETERMINATE
    return IndexVerdict(status=status, indices=indices, threshold=level, tolerance=tol)


def phi_growth_witness(n: int, X: SpaceDescriptor, cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                       t_grid: Optional[np.ndarray] = None) -> PhiGrowth:
    """sup_{t≥1} φ_X(t)/t^{1-2/n}；有不动点时必有限"""
    n = _check_n(n)
    level = threshold(n)
    ts = log_grid(1.0, 1e8, 8) if t_grid is None else np.asarray(t_grid, dtype=float)
    ratios = np.array([X.fundamental_function(float(t), cfg) / float(t) ** float(level) for t in ts])
    k = int(np.argmax(ratios))
    _, tail = X.fundamental_asymptotes(cfg)
    finite = tail.power < level or (tail.power == level and tail.logpower <= 0)
    return PhiGrowth(grid_sup=float(ratios[k]), argmax=float(ts[k]), finite=finite)


# ---------- 判定 ----------

def _dimension_decision(n: int, X: SpaceDescriptor) -> Decision:
    return Decision(
        n=n,
        verdict=Verdict.NO_FIXED_POINT,
        method=Method.DIMENSION_RULE,
        space=X.to_dict(),
        notes=["positive super-harmonic functions on R^n with n <= 2 are constant"],
    )


def _condition3(n: int, X: SpaceDescriptor, cfg: QuadratureConfig) -> Decision:
    value = X.norm(h_profile(n), cfg)
    exists = value < INF
    decision = Decision(
        n=n,
        verdict=Verdict.FIXED_POINT_EXISTS if exists else Verdict.NO_FIXED_POINT,
        method=Method.CONDITION3_EXACT,
        space=X.to_dict(),
        witnesses={"norm_h": value, "threshold": float(threshold(n))},
    )
    rule = corollary_rule(n, X, cfg)
    if rule is not None:
        method, holds = rule
        decision.witnesses[method.value] = holds
        if holds != exists:
            raise CrossCheckError(
                f"{method.value} says {holds} but ||h_{n}||_X = {value} for {X.name}"
            )
    return decision


def decide_fixed_point(n: int, X: SpaceDescriptor, cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                       strategy: str = "exact", index_tol: float = DEFAULT_INDEX_TOL,
                       eps: Optional[float] = None) -> Decision:
    """
    判定 X(ℝⁿ) 是否含有 M 的非常数不动点

    n ≤ 2 时恒为否；n ≥ 3 时按条件 (3) 检验 h_n 的范数是否有限。
    strategy="fast" 先尝试推论规则与指标判别，无法判定时回到条件 (3)。
    """
    n = _check_n(n)
    if strategy not in STRATEGIES:
        raise DomainError(f"unknown strategy '{strategy}', expected one of {STRATEGIES}")
    if n <= 2:
        return _dimension_decision(n, X)

    decision: Optional[Decision] = None
    if strategy == "fast":
        rule = corollary_rule(n, X, cfg)
        if rule is not None:
            method, holds = rule
            decision = Decision(
                n=n,
                verdict=Verdict.FIXED_POINT_EXISTS if holds else Verdict.NO_FIXED_POINT,
                method=method,
                space=X.to_dict(),
                witnesses={"threshold": float(threshold(n))},
            )
        else:
            verdict = index_test(n, X, index_tol, cfg)
            if verdict.status is IndexStatus.GUARANTEED_NONTRIVIAL:
                decision = Decision(n, Verdict.FIXED_POINT_EXISTS, Method.INDEX_SUFFICIENT, X.to_dict())
            elif verdict.status is IndexStatus.GUARANTEED_TRIVIAL:
                decision = Decision(n, Verdict.NO_FIXED_POINT, Method.INDEX_NECESSARY, X.to_dict())
            if decision is not None:
                decision.witnesses.update(threshold=verdict.threshold, index_status=verdict.status.value)
    if decision is None:
        decision = _condition3(n, X, cfg)

    indices = fundamental_indices(X, cfg)
    decision.witnesses["beta_lower"] = indices.beta_lower
    decision.witnesses["beta_upper"] = indices.beta_upper
    if decision.exists:
        decision.witnesses["phi_growth"] = phi_growth_witness(n, X, cfg).to_dict()

    if isinstance(X, Lambda):
        decision.witnesses["minimal_dimension"] = minimal_dimension(X.p, X.w)
        if eps is not None:
            decision.witnesses["dimension_threshold"] = lambda_dimension_threshold(eps)
            decision.notes.append(f"for w in B_(p-eps) the rule holds once n > {2.0 / eps:g}")
        if not X.assume_banach:
            decision.notes.append("Lambda space not assumed to be Banach; the verdict concerns the integrability criterion")
    logger.debug("decision for n=%d, %s: %s via %s", n, X.name, decision.verdict.value, decision.method.value)
    return decision


def proposition_family(n: int, a: Any, b: Any, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> Decision:
    """φ = t^a χ_(0,1) + t^b χ_[1,∞)：有不动点当且仅当 b ≤ 1 - 2/n"""
    n = _check_n(n)
    if n < 3:
        raise DimensionError("the two-power family is stated for n >= 3")
    X = proposition_space(a, b)
    decision = decide_fixed_point(n, X, cfg)
    expected = exact(b) <= threshold(n)
    if decision.exists != expected:
        raise CrossCheckError(f"two-power family (a={a}, b={b}, n={n}) decided {decision.verdict.value}")
    decision.notes.append(f"b {'<=' if expected else '>'} 1-2/n")
    return decision
