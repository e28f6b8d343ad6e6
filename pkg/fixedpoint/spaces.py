"""
重排不变空间描述

支持的族：
- Lorentz L^{p,q}
- Lambda Λ^p(w)
- MarcinkiewiczStar：sup_t f**(t) φ(t)
- MarcinkiewiczWeak：sup_t f*(t) φ(t)
- Intersection：成员范数取最大

每个描述对象都是不可变的，提供范数、基本函数 φ_X 与其渐近项。
"""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Dict, Optional, Tuple, Union

import numpy as np
from scipy import integrate as sp_integrate
from scipy import optimize

from .errors import DescriptorError, DomainError
from .funcalg import (
    DEFAULT_QUADRATURE,
    INF,
    ZERO_PIECE,
    Number,
    PiecewisePowerLog,
    PowerLogPiece,
    QuadratureConfig,
    exact,
    integrate,
    is_head_integrable,
    is_tail_integrable,
    log_grid,
    multiply,
    power_of,
    running_integral_asymptotes,
    supremum,
)
from .rearrange import AsymptoticProfile, DecreasingProfile, doublestar, doublestar_asymptotes, w_weight

logger = logging.getLogger(__name__)

Profile = Union[DecreasingProfile, AsymptoticProfile]

# M_X 的 t 网格为 2^{k/4}，k ∈ [-160, 160]；指数网格 s = 2^j，j ∈ [1, 40]
DILATION_STEP = 0.25
DILATION_STEPS = 160
INDEX_OCTAVES = 40


def _encode(value: Union[Fraction, float]) -> Union[int, str]:
    if value == INF:
        return "inf"
    value = Fraction(value)
    return int(value) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def _exponent(value: Any, field_name: str, allow_inf: bool = False) -> Union[Fraction, float]:
    if isinstance(value, str) and value.strip().lower() in ("inf", "infinity", "∞"):
        if allow_inf:
            return INF
        raise DescriptorError("infinite value is not allowed", field=field_name)
    if isinstance(value, float) and math.isinf(value):
        if allow_inf and value > 0:
            return INF
        raise DescriptorError("infinite value is not allowed", field=field_name)
    try:
        return exact(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise DescriptorError(f"not a number: {value!r}", field=field_name) from exc


def _check_weight(weight: PiecewisePowerLog, field_name: str) -> None:
    if not isinstance(weight, PiecewisePowerLog):
        raise DescriptorError("weight must be a piecewise power-log function", field=field_name)
    if any(piece.coefficient < 0 for piece in weight.pieces):
        raise DescriptorError("weight must be non-negative", field=field_name)
    if weight.is_zero:
        raise DescriptorError("weight must not vanish identically", field=field_name)


def _check_quasi_concave_ends(phi: PiecewisePowerLog, field_name: str) -> None:
    for end, piece in (("head", phi.head), ("tail", phi.tail)):
        if piece.is_zero or not 0 <= piece.power <= 1:
            raise DescriptorError(f"{end} exponent of phi must lie in [0, 1]", field=field_name)


# ---------- 数值视图 ----------

@dataclass(frozen=True)
class _View:
    """(0, ∞) 上的数值函数加上两端精确主项"""

    value: Callable[[float], float]
    head: PowerLogPiece
    tail: PowerLogPiece
    kinks: Tuple[float, ...] = ()


def _profile_view(d: Profile) -> _View:
    if isinstance(d, DecreasingProfile):
        return _View(d.value, d.body.head, d.body.tail, d.kinks)
    return _View(d.value, d.head, d.tail, tuple(d.kinks))


def _sup_view(view: _View) -> float:
    """网格 + 局部细化求上确界，两端极限闭合"""
    if not view.head.bounded_at_zero() or not view.tail.bounded_at_infinity():
        return INF
    anchors = sorted({k for k in view.kinks if 0 < k < INF} | {1.0})
    grid = np.union1d(log_grid(anchors[0] * 1e-6, anchors[-1] * 1e6, 16), anchors)
    values = np.array([view.value(float(t)) for t in grid])
    i = int(np.argmax(values))
    best = float(values[i])
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    if lo < hi:
        result = optimize.minimize_scalar(
            lambda u: -view.value(math.exp(u)),
            bounds=(math.log(lo), math.log(hi)), method="bounded", options={"xatol": 1e-10},
        )
        best = max(best, -float(result.fun))
    return max(best, view.head.limit_at_zero(), view.tail.limit_at_infinity())


def _integral_view(view: _View, cfg: QuadratureConfig) -> float:
    """∫_0^∞：[1/T, T] 上在 u = log t 求积，两端用主项精确闭合"""
    if not is_head_integrable(view.head):
        return INF
    if not view.tail.is_zero and not is_tail_integrable(view.tail):
        return INF
    lo, hi = 1.0 / cfg.t_max, cfg.t_max
    closure = (
        integrate(PiecewisePowerLog.single(view.head), 0.0, lo, cfg)
        + integrate(PiecewisePowerLog.single(view.tail), hi, INF, cfg)
    )
    cuts = sorted({math.log(lo), math.log(hi), *(math.log(k) for k in view.kinks if lo < k < hi)})
    body = 0.0
    for u_lo, u_hi in zip(cuts[:-1], cuts[1:]):
        part, _ = sp_integrate.quad(
            lambda u: view.value(math.exp(u)) * math.exp(u), u_lo, u_hi,
            epsabs=0.0, epsrel=cfg.rel_tol, limit=cfg.max_subdivisions,
        )
        body += part
    return closure + body


def _power_view(view: _View, q: Number, weight: PiecewisePowerLog) -> _View:
    """t ↦ view(t)^q · weight(t)"""
    q = exact(q)
    fq = float(q)
    return _View(
        value=lambda t: view.value(t) ** fq * weight(t),
        head=view.head.raised(q).times(weight.head),
        tail=view.tail.raised(q).times(weight.tail),
        kinks=tuple(sorted(set(view.kinks) | set(weight.interior_breakpoints))),
    )


def _doublestar_view(d: Profile, cfg: QuadratureConfig) -> _View:
    if isinstance(d, DecreasingProfile):
        head, tail = doublestar_asymptotes(d, cfg)
        return _View(lambda t: doublestar(d, t, cfg), head, tail, d.kinks)

    view = _profile_view(d)
    if not is_head_integrable(view.head):
        return _View(lambda t: INF, PowerLogPiece(1.0, -1), ZERO_PIECE)

    def running(t: float) -> float:
        lo = min(t, 1.0 / cfg.t_max)
        total = integrate(PiecewisePowerLog.single(view.head), 0.0, lo, cfg)
        if t > lo:
            cuts = sorted({math.log(lo), math.log(t), *(math.log(k) for k in view.kinks if lo < k < t)})
            for u_lo, u_hi in zip(cuts[:-1], cuts[1:]):
                part, _ = sp_integrate.quad(
                    lambda u: view.value(math.exp(u)) * math.exp(u), u_lo, u_hi,
                    epsabs=0.0, epsrel=cfg.rel_tol, limit=cfg.max_subdivisions,
                )
                total += part
        return total

    shift = PowerLogPiece(1.0, -1)
    head = PowerLogPiece(view.head.coefficient / float(view.head.power + 1), view.head.power + 1)
    if view.tail.is_zero or is_tail_integrable(view.tail):
        tail = PowerLogPiece(_integral_view(view, cfg))
    else:
        _, tail = running_integral_asymptotes(PiecewisePowerLog((0.0, 1.0, INF), (ZERO_PIECE, view.tail)), cfg)
    return _View(lambda t: running(t) / t, head.times(shift), tail.times(shift), view.kinks)


def _weighted_sup(base: _View, weight: PiecewisePowerLog) -> float:
    return _sup_view(_power_view(base, 1, weight))


# ---------- 描述对象 ----------

class SpaceDescriptor(ABC):
    """重排不变空间描述的抽象基类"""

    kind: str = ""

    @abstractmethod
    def norm(self, d: Profile, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
        """‖d‖_X̄；不属于空间时返回 +∞"""

    @abstractmethod
    def fundamental_function(self, s: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
        """φ_X(s) 的闭式"""

    @abstractmethod
    def fundamental_asymptotes(self, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> Tuple[PowerLogPiece, PowerLogPiece]:
        """φ_X 在 0 与 ∞ 处的主项"""

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        ...

    @property
    def name(self) -> str:
        return self.kind


@dataclass(frozen=True)
class Lorentz(SpaceDescriptor):
    """L^{p,q}，q = ∞ 时为弱型空间"""

    p: Union[Fraction, float]
    q: Union[Fraction, float]
    kind = "lorentz"

    def __post_init__(self):
        p = _exponent(self.p, "p", allow_inf=True)
        q = _exponent(self.q, "q", allow_inf=True)
        if p < 1:
            raise DescriptorError("p must be >= 1", field="p")
        if q < 1:
            raise DescriptorError("q must be >= 1", field="q")
        if p == 1 and q != 1:
            raise DescriptorError("Lorentz spaces with p=1 require q=1", field="q")
        if p == INF and q != INF:
            raise DescriptorError("Lorentz spaces with p=inf require q=inf", field="q")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def name(self) -> str:
        return f"L^({_encode(self.p)},{_encode(self.q)})"

    def norm(self, d: Profile, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
        if self.p == INF:
            weight = PiecewisePowerLog.constant(1.0)
        else:
            weight = PiecewisePowerLog.power(1 / self.p)
        if self.q == INF:
            if isinstance(d, DecreasingProfile):
                return supremum(multiply(d.body, weight))
            return _weighted_sup(_profile_view(d), weight)
        kernel = PiecewisePowerLog.power(self.q / self.p - 1)
        if isinstance(d, DecreasingProfile):
            value = integrate(multiply(power_of(d.body, self.q), kernel), 0.0, INF, cfg)
        else:
            value = _integral_view(_power_view(_profile_view(d), self.q, kernel), cfg)
        return INF if value == INF else value ** (1.0 / float(self.q))

    def _constant(self) -> float:
        if self.p == INF or self.q == INF:
            return 1.0
        return float(self.p / self.q) ** (1.0 / float(self.q))

    def fundamental_function(self, s: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
        if not s > 0:
            raise DomainError(f"s must be > 0, got {s}")
        if self.p == INF:
            return 1.0
        return self._constant() * s ** (1.0 / float(self.p))

    def fundamental_asymptotes(self, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> Tuple[PowerLogPiece, PowerLogPiece]:
        exponent = Fraction(0) if self.p == INF else 1 / self.p
        piece = PowerLogPiece(self._constant(), exponent)
        return piece, piece

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "p": _encode(self.p), "q": _encode(self.q)}


@dataclass(frozen=True)
class Lambda(SpaceDescriptor):
    """
    Λ^p(w)：(∫ f*^p w)^{1/p}

    assume_banach 不做校验，只随描述一起传递（w ∈ B_p 由调用方保证）。
    """

    p: Fraction
    w: PiecewisePowerLog
    assume_banach: bool = True
    kind = "lambda"

    def __post_init__(self):
        p = _exponent(self.p, "p")
        if p < 1:
            raise DescriptorError("p must be >= 1", field="p")
        _check_weight(self.w, "w")
        if not is_head_integrable(self.w.head):
            raise DescriptorError("weight must be integrable near 0", field="w")
        if self.w.head.is_zero or self.w.tail.is_zero:
            raise DescriptorError("weight must be positive near 0 and near infinity", field="w")
        object.__setattr__(self, "p", p)

    @property
    def name(self) -> str:
        return f"Lambda^{_encode(self.p)}(w)"

    def norm(self, d: Profile, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
        if isinstance(d, DecreasingProfile):
            value = integrate(multiply(power_of(d.body, self.p), self.w), 0.0, INF, cfg)
        else:
            value = _integral_view(_power_view(_profile_view(d), self.p, self.w), cfg)
        return INF if value == INF else value ** (1.0 / float(self.p))

    def fundamental_function(self, s: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
        if not s > 0:
            raise DomainError(f"s must be > 0, got {s}")
        return integrate(self.w, 0.0, s, cfg) ** (1.0 / float(self.p))

    def fundamental_asymptotes(self, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> Tuple[PowerLogPiece, PowerLogPiece]:
        head, tail = running_integral_asymptotes(self.w, cfg)
        inv = 1 / self.p
        return head.raised(inv), tail.raised(inv)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "p": _encode(self.p),
            "w": self.w.to_records(),
            "assume_banach": self.assume_banach,
        }


@dataclass(frozen=True)
class MarcinkiewiczStar(SpaceDescriptor):
    """sup_t f**(t) φ(t)"""

    phi: PiecewisePowerLog
    kind = "marcinkiewicz_star"

    def __post_init__(self):
        _check_weight(self.phi, "phi")
        _check_quasi_concave_ends(self.phi, "phi")

    def norm(self, d: Profile, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
        if isinstance(d, DecreasingProfile):
            if d.is_zero:
                return 0.0
            if not is_head_integrable(d.body.head):
                return INF
        return _weighted_sup(_doublestar_view(d, cfg), self.phi)

    def fundamental_function(self, s: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
        # χ_[0,s)** = min(1, s/t)
        if not s > 0:
            raise DomainError(f"s must be > 0, got {s}")
        near = supremum(self.phi, 0.0, s)
        far = s * supremum(multiply(self.phi, PiecewisePowerLog.power(-1)), s, INF)
        return max(near, far)

    def fundamental_asymptotes(self, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> Tuple[PowerLogPiece, PowerLogPiece]:
        return self.phi.head, self.phi.tail

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "phi": self.phi.to_records()}


@dataclass(frozen=True)
class MarcinkiewiczWeak(SpaceDescriptor):
    """
    sup_t f*(t) φ(t)

    一般不满足三角不等式，只作为成员资格泛函使用。
    """

    phi: PiecewisePowerLog
    kind = "marcinkiewicz_weak"

    def __post_init__(self):
        _check_weight(self.phi, "phi")
        _check_quasi_concave_ends(self.phi, "phi")

    def norm(self, d: Profile, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
        if isinstance(d, DecreasingProfile):
            return supremum(multiply(d.body, self.phi))
        return _weighted_sup(_profile_view(d), self.phi)

    def fundamental_function(self, s: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
        if not s > 0:
            raise DomainError(f"s must be > 0, got {s}")
        return supremum(self.phi, 0.0, s)

    def fundamental_asymptotes(self, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> Tuple[PowerLogPiece, PowerLogPiece]:
        return self.phi.head, self.phi.tail

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "phi": self.phi.to_records()}


def _larger_at_zero(p: PowerLogPiece, q: PowerLogPiece) -> PowerLogPiece:
    if p.power != q.power:
        return p if p.power < q.power else q
    return p if p.coefficient >= q.coefficient else q


def _larger_at_infinity(p: PowerLogPiece, q: PowerLogPiece) -> PowerLogPiece:
    if (p.power, p.logpower) != (q.power, q.logpower):
        return p if (p.power, p.logpower) > (q.power, q.logpower) else q
    return p if p.coefficient >= q.coefficient else q


@dataclass(frozen=True)
class Intersection(SpaceDescriptor):
    """成员空间之交，范数取最大"""

    members: Tuple[SpaceDescriptor, ...]
    kind = "intersection"

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise DescriptorError("intersection needs at least one member", field="members")
        for i, member in enumerate(members):
            if not isinstance(member, SpaceDescriptor):
                raise DescriptorError("member is not a space descriptor", field=f"members.{i}")
        object.__setattr__(self, "members", members)

    @property
    def name(self) -> str:
        return " ∩ ".join(member.name for member in self.members)

    def norm(self, d: Profile, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
        return max(member.norm(d, cfg) for member in self.members)

    def fundamental_function(self, s: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
        return max(member.fundamental_function(s, cfg) for member in self.members)

    def fundamental_asymptotes(self, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> Tuple[PowerLogPiece, PowerLogPiece]:
        ends = [member.fundamental_asymptotes(cfg) for member in self.members]
        head, tail = ends[0]
        for h, t in ends[1:]:
            head, tail = _larger_at_zero(head, h), _larger_at_infinity(tail, t)
        return head, tail

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "members": [member.to_dict() for member in self.members]}


# ---------- 便捷构造 ----------

def lebesgue(p: Any) -> Lorentz:
    """L^p = L^{p,p}"""
    return Lorentz(p, p)


def minimal_space(n: int) -> MarcinkiewiczWeak:
    """L^{n/(n-2),∞} ∩ L^∞，即 sup_t f*(t) W(t) < ∞"""
    return MarcinkiewiczWeak(w_weight(n))


def proposition_space(a: Any, b: Any) -> MarcinkiewiczStar:
    """φ(t) = t^a χ_(0,1) + t^b χ_[1,∞)"""
    a, b = _exponent(a, "a"), _exponent(b, "b")
    for value, name in ((a, "a"), (b, "b")):
        if not 0 <= value <= 1:
            raise DescriptorError("exponent must lie in [0, 1]", field=name)
    return MarcinkiewiczStar(PiecewisePowerLog.two_power(a, b))


def log_marcinkiewicz(n: int, sign: int = 1) -> MarcinkiewiczStar:
    """φ(t) = t^{1-2/n}(1 + log⁺t)^{±1}"""
    if sign not in (1, -1):
        raise DescriptorError("sign must be +1 or -1", field="sign")
    if n < 3:
        raise DescriptorError("log-Marcinkiewicz spaces need n >= 3", field="n")
    return MarcinkiewiczStar(PiecewisePowerLog.power(1 - Fraction(2, n), 1.0, sign))


def lambda_two_power(p: Any, a: Any, b: Any, assume_banach: bool = True) -> Lambda:
    """Λ^p(w)，w = t^a χ_(0,1) + t^b χ_[1,∞)"""
    return Lambda(p, PiecewisePowerLog.two_power(_exponent(a, "a"), _exponent(b, "b")), assume_banach)


SPACE_BUILDERS: Dict[str, Callable[..., SpaceDescriptor]] = {
    "lorentz": lambda p, q: Lorentz(p, q),
    "lebesgue": lambda p: lebesgue(p),
    "lambda": lambda p, a=0, b=0, assume_banach=True: lambda_two_power(p, a, b, assume_banach),
    "prop": lambda a, b: proposition_space(a, b),
    "minimal": lambda n: minimal_space(int(n)),
    "marcinkiewicz_weak": lambda n: minimal_space(int(n)),
    "logstar": lambda n, sign=1: log_marcinkiewicz(int(n), int(sign)),
}


def create_space(kind: str, **kwargs: Any) -> SpaceDescriptor:
    """按名字构造描述对象"""
    builder = SPACE_BUILDERS.get(kind)
    if builder is None:
        raise DescriptorError(f"unknown space kind '{kind}'", field="kind")
    try:
        return builder(**kwargs)
    except TypeError as exc:
        raise DescriptorError(f"bad parameters for '{kind}': {exc}", field=kind) from exc


def space_from_dict(data: Dict[str, Any], path: str = "") -> SpaceDescriptor:
    """从 JSON 字典构造（字段已由 schema 校验过形状）"""
    prefix = f"{path}." if path else ""
    kind = data.get("kind")
    try:
        if kind == "lorentz":
            q = data.get("q")
            return Lorentz(data["p"], data["p"] if q is None else q)
        if kind == "lambda":
            return Lambda(data["p"], PiecewisePowerLog.from_records(data["w"]), bool(data.get("assume_banach", True)))
        if kind == "marcinkiewicz_star":
            return MarcinkiewiczStar(PiecewisePowerLog.from_records(data["phi"]))
        if kind == "marcinkiewicz_weak":
            return MarcinkiewiczWeak(PiecewisePowerLog.from_records(data["phi"]))
        if kind == "intersection":
            return Intersection(tuple(
                space_from_dict(member, f"{prefix}members.{i}") for i, member in enumerate(data["members"])
            ))
    except KeyError as exc:
        raise DescriptorError("missing field", field=f"{prefix}{exc.args[0]}") from exc
    except DescriptorError as exc:
        if exc.field and not exc.field.startswith(prefix):
            raise DescriptorError(exc.detail, field=f"{prefix}{exc.field}") from exc
        raise
    except DomainError as exc:
        raise DescriptorError(str(exc), field=f"{prefix}kind") from exc
    raise DescriptorError(f"unknown space kind '{kind}'", field=f"{prefix}kind")


# ---------- 模块级操作 ----------

def norm(X: SpaceDescriptor, d: Profile, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    return X.norm(d, cfg)


def fundamental_function(X: SpaceDescriptor, s: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    return X.fundamental_function(s, cfg)


def fundamental_asymptotes(X: SpaceDescriptor,
                           cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> Tuple[PowerLogPiece, PowerLogPiece]:
    return X.fundamental_asymptotes(cfg)


@dataclass
class DilationEstimate:
    """M_X(s) 的网格下界及其来源"""

    s: float
    value: float
    argmax_t: Optional[float]
    source: str
    grid: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {"s": self.s, "value": self.value, "argmax_t": self.argmax_t, "source": self.source, "grid": self.grid}


def _grid_points(steps: int = DILATION_STEPS, step: float = DILATION_STEP) -> np.ndarray:
    return np.exp2(np.arange(-steps, steps + 1) * step)


def dilation_estimate(X: SpaceDescriptor, s: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                      steps: int = DILATION_STEPS, step: float = DILATION_STEP) -> DilationEstimate:
    """sup_t φ_X(ts)/φ_X(t)：t ∈ 2^{k·step} 网格加上 t → 0、t → ∞ 的解析极限"""
    if not s > 0:
        raise DomainError(f"s must be > 0, got {s}")
    ts = _grid_points(steps, step)
    ratios = np.array([X.fundamental_function(float(t * s), cfg) / X.fundamental_function(float(t), cfg) for t in ts])
    k = int(np.argmax(ratios))
    value, argmax, source = float(ratios[k]), float(ts[k]), "grid"
    head, tail = X.fundamental_asymptotes(cfg)
    for limit, where in ((s ** float(head.power), "limit_t_to_0"), (s ** float(tail.power), "limit_t_to_inf")):
        if limit > value:
            value, argmax, source = limit, None, where
    return DilationEstimate(
        s=s, value=value, argmax_t=argmax, source=source,
        grid={"t_min": float(ts[0]), "t_max": float(ts[-1]), "points": float(len(ts))},
    )


def dilation_function(X: SpaceDescriptor, s: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """M_X(s) = sup_{t>0} φ_X(ts)/φ_X(t)（网格下界）"""
    return dilation_estimate(X, s, cfg).value


@dataclass
class IndexReport:
    """基本指标 β̲_X ≤ β̄_X 及网格诊断"""

    beta_lower: float
    beta_upper: float
    grid_lower: float
    grid_upper: float
    lower_extremizer: float
    upper_extremizer: float
    s_range: Tuple[float, float]
    step: float = DILATION_STEP

    def to_dict(self) -> Dict[str, Any]:
        return {
            "beta_lower": self.beta_lower,
            "beta_upper": self.beta_upper,
            "grid": {
                "beta_lower": self.grid_lower,
                "beta_upper": self.grid_upper,
                "lower_extremizer": self.lower_extremizer,
                "upper_extremizer": self.upper_extremizer,
                "s_min": self.s_range[0],
                "s_max": self.s_range[1],
                "step": self.step,
            },
        }


@lru_cache(maxsize=64)
def _log_phi_table(X: SpaceDescriptor, cfg: QuadratureConfig, span: int, step: float) -> np.ndarray:
    """log φ_X(2^{m·step})，m ∈ [-span, span]"""
    ts = _grid_points(span, step)
    return np.log([X.fundamental_function(float(t), cfg) for t in ts])


def fundamental_indices(X: SpaceDescriptor, cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                        octaves: int = INDEX_OCTAVES, steps: int = DILATION_STEPS,
                        step: float = DILATION_STEP) -> IndexReport:
    """
    β̄ = inf_{s>1} log M_X(s)/log s，β̲ = sup_{s<1} log M_X(s)/log s

    s 取 2^{±1..±octaves}；对幂-对数型 φ_X，两个指标等于 φ_X 两端指数的 max / min，
    网格值只作诊断（带对数修正时收敛很慢）。
    """
    per_octave = int(round(1 / step)) if step > 0 else 0
    if per_octave < 1 or abs(per_octave * step - 1.0) > 1e-12:
        raise DomainError(f"dilation step must be 1/k for an integer k >= 1, got {step}")
    span = steps + octaves * per_octave
    table = _log_phi_table(X, cfg, span, step)
    center = span
    base = table[center - steps: center + steps + 1]
    head, tail = X.fundamental_asymptotes(cfg)
    a0, a_inf = float(head.power), float(tail.power)

    upper_best, upper_at = INF, 1.0
    lower_best, lower_at = -INF, 1.0
    for j in range(1, octaves + 1):
        shift = j * per_octave
        log_s = j * math.log(2.0)
        up = max(float(np.max(table[center - steps + shift: center + steps + 1 + shift] - base)), max(a0, a_inf) * log_s)
        down = max(float(np.max(table[center - steps - shift: center + steps + 1 - shift] - base)), -min(a0, a_inf) * log_s)
        if up / log_s < upper_best:
            upper_best, upper_at = up / log_s, 2.0 ** j
        # log M(s)/log s 在 s < 1 时 log s = -j log 2
        if down / -log_s > lower_best:
            lower_best, lower_at = down / -log_s, 2.0 ** -j

    beta_upper = max(a0, a_inf)
    beta_lower = min(a0, a_inf)
    logger.debug("indices of %s: analytic (%g, %g), grid (%g, %g)", X.name, beta_lower, beta_upper, lower_best, upper_best)
    return IndexReport(
        beta_lower=beta_lower,
        beta_upper=beta_upper,
        grid_lower=lower_best,
        grid_upper=upper_best,
        lower_extremizer=lower_at,
        upper_extremizer=upper_at,
        s_range=(2.0 ** -octaves, 2.0 ** octaves),
        step=step,
    )
