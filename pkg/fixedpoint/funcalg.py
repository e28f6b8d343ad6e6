"""
分段幂-对数函数代数

所有模块共用的数值底座：
- PowerLogPiece: c * t^α * (1 + log⁺t)^β
- PiecewisePowerLog: (0, ∞) 上按断点分段的幂-对数函数
- 闭式积分 / 对数变量上的自适应求积
- 尾部可积性的符号判定（与截断无关）

指数统一保存为 Fraction，临界指数（例如 p = n/(n-2)）处的判定因此是精确的。
"""

from __future__ import annotations

import logging
import math
import numbers
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np
from scipy import integrate as sp_integrate

from .errors import DomainError, FunctionAlgebraError, IntegrabilityError

logger = logging.getLogger(__name__)

INF = math.inf
MAX_DENOMINATOR = 1_000_000

Number = Union[int, float, Fraction]


def exact(value: Any) -> Fraction:
    """把指数转换为有理数（浮点数按分母 ≤ 10⁶ 有理化）"""
    if isinstance(value, bool):
        raise DomainError(f"exponent must be numeric, got {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value.strip()).limit_denominator(MAX_DENOMINATOR)
    if isinstance(value, numbers.Real):
        value = float(value)
        if not math.isfinite(value):
            raise DomainError(f"exponent must be finite, got {value}")
        return Fraction(value).limit_denominator(MAX_DENOMINATOR)
    raise DomainError(f"exponent must be numeric, got {value!r}")


@dataclass(frozen=True)
class QuadratureConfig:
    """求积配置"""

    rel_tol: float = 1e-8
    max_subdivisions: int = 200
    t_max: float = 1e8

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be > 0")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")
        if not self.t_max > 1:
            raise DomainError("t_max must be > 1")


DEFAULT_QUADRATURE = QuadratureConfig()


@dataclass(frozen=True)
class PowerLogPiece:
    """单段 c * t^α * (1 + log⁺t)^β"""

    coefficient: float
    power: Fraction = Fraction(0)
    logpower: Fraction = Fraction(0)

    def __post_init__(self):
        coefficient = float(self.coefficient)
        if not math.isfinite(coefficient):
            raise DomainError(f"coefficient must be finite, got {coefficient}")
        object.__setattr__(self, "coefficient", coefficient)
        object.__setattr__(self, "power", exact(self.power))
        object.__setattr__(self, "logpower", exact(self.logpower))

    @property
    def is_zero(self) -> bool:
        return self.coefficient == 0.0

    def value(self, t):
        """在 t > 0 处取值，支持 numpy 数组"""
        if self.is_zero:
            return np.zeros_like(np.asarray(t, dtype=float)) if np.ndim(t) else 0.0
        t = np.asarray(t, dtype=float)
        result = self.coefficient * np.power(t, float(self.power))
        if self.logpower != 0:
            result = result * np.power(1.0 + np.log(np.maximum(t, 1.0)), float(self.logpower))
        return result if result.ndim else float(result)

    def times(self, other: "PowerLogPiece") -> "PowerLogPiece":
        return PowerLogPiece(
            self.coefficient * other.coefficient,
            self.power + other.power,
            self.logpower + other.logpower,
        )

    def scaled(self, factor: float) -> "PowerLogPiece":
        return PowerLogPiece(self.coefficient * factor, self.power, self.logpower)

    def raised(self, q: Number) -> "PowerLogPiece":
        q = exact(q)
        if self.is_zero:
            return PowerLogPiece(0.0)
        return PowerLogPiece(self.coefficient ** float(q), self.power * q, self.logpower * q)

    # 渐近行为：t → 0 时 log⁺t = 0，只有幂次起作用
    def limit_at_zero(self) -> float:
        if self.is_zero or self.power > 0:
            return 0.0
        if self.power == 0:
            return self.coefficient
        return INF

    def limit_at_infinity(self) -> float:
        if self.is_zero or self.power < 0 or (self.power == 0 and self.logpower < 0):
            return 0.0
        if self.power == 0 and self.logpower == 0:
            return self.coefficient
        return INF

    def bounded_at_zero(self) -> bool:
        return self.limit_at_zero() < INF

    def bounded_at_infinity(self) -> bool:
        return self.limit_at_infinity() < INF

    def to_dict(self) -> Dict[str, Any]:
        return {
            "c": self.coefficient,
            "alpha": float(self.power),
            "beta": float(self.logpower),
        }


ZERO_PIECE = PowerLogPiece(0.0)


def is_tail_integrable(piece: PowerLogPiece) -> bool:
    """末段在 (T, ∞) 上可积当且仅当 α < -1，或 α = -1 且 β < -1"""
    return piece.power < -1 or (piece.power == -1 and piece.logpower < -1)


def is_head_integrable(piece: PowerLogPiece) -> bool:
    """首段在 (0, T) 上可积（零系数总是可积）"""
    return piece.is_zero or piece.power > -1


@dataclass(frozen=True)
class PiecewisePowerLog:
    """
    分段幂-对数函数

    breakpoints 为 0 = t₀ < t₁ < … < t_m = ∞，pieces[i] 定义在 (t_i, t_{i+1}) 上；
    断点处取右侧一段的值（右连续约定）。
    """

    breakpoints: Tuple[float, ...]
    pieces: Tuple[PowerLogPiece, ...]

    def __post_init__(self):
        breakpoints = tuple(float(b) for b in self.breakpoints)
        pieces = tuple(self.pieces)
        if len(breakpoints) < 2 or breakpoints[0] != 0.0 or breakpoints[-1] != INF:
            raise DomainError("breakpoints must start at 0 and end at inf")
        if any(b1 >= b2 for b1, b2 in zip(breakpoints, breakpoints[1:])):
            raise DomainError("breakpoints must be strictly increasing")
        if len(pieces) != len(breakpoints) - 1:
            raise DomainError(
                f"expected {len(breakpoints) - 1} pieces for {len(breakpoints)} breakpoints, got {len(pieces)}"
            )
        object.__setattr__(self, "breakpoints", breakpoints)
        object.__setattr__(self, "pieces", pieces)

    # ---------- 构造 ----------

    @classmethod
    def single(cls, piece: PowerLogPiece) -> "PiecewisePowerLog":
        return cls((0.0, INF), (piece,))

    @classmethod
    def constant(cls, c: float) -> "PiecewisePowerLog":
        return cls.single(PowerLogPiece(c))

    @classmethod
    def power(cls, alpha: Number, c: float = 1.0, beta: Number = 0) -> "PiecewisePowerLog":
        return cls.single(PowerLogPiece(c, alpha, beta))

    @classmethod
    def indicator(cls, s: float, height: float = 1.0) -> "PiecewisePowerLog":
        """height * χ_[0,s)"""
        if not s > 0:
            raise DomainError(f"indicator length must be > 0, got {s}")
        if s == INF:
            return cls.constant(height)
        return cls((0.0, s, INF), (PowerLogPiece(height), ZERO_PIECE))

    @classmethod
    def two_power(cls, a: Number, b: Number, c: float = 1.0) -> "PiecewisePowerLog":
        """c * (t^a χ_(0,1) + t^b χ_[1,∞))"""
        return cls((0.0, 1.0, INF), (PowerLogPiece(c, a), PowerLogPiece(c, b))).simplified()

    @classmethod
    def from_pieces(cls, intervals: Iterable[Tuple[float, float, PowerLogPiece]]) -> "PiecewisePowerLog":
        intervals = list(intervals)
        if not intervals:
            raise DomainError("at least one piece is required")
        breakpoints = [intervals[0][0]]
        pieces = []
        for lo, hi, piece in intervals:
            if lo != breakpoints[-1]:
                raise DomainError(f"pieces must be contiguous: gap at {breakpoints[-1]} -> {lo}")
            breakpoints.append(hi)
            pieces.append(piece)
        return cls(tuple(breakpoints), tuple(pieces))

    @classmethod
    def from_records(cls, records: Sequence[Dict[str, Any]]) -> "PiecewisePowerLog":
        """从 {t_lo, t_hi, c, alpha, beta} 记录列表构造"""
        intervals = []
        for record in records:
            t_hi = record["t_hi"]
            t_hi = INF if isinstance(t_hi, str) and t_hi.lower() in ("inf", "infinity") else float(t_hi)
            intervals.append((
                float(record["t_lo"]),
                t_hi,
                PowerLogPiece(record.get("c", 1.0), record.get("alpha", 0), record.get("beta", 0)),
            ))
        return cls.from_pieces(intervals)

    def to_records(self) -> List[Dict[str, Any]]:
        records = []
        for lo, hi, piece in self.intervals():
            record = {"t_lo": lo, "t_hi": "inf" if hi == INF else hi}
            record.update(piece.to_dict())
            records.append(record)
        return records

    # ---------- 访问 ----------

    def intervals(self) -> List[Tuple[float, float, PowerLogPiece]]:
        return list(zip(self.breakpoints[:-1], self.breakpoints[1:], self.pieces))

    @property
    def head(self) -> PowerLogPiece:
        return self.pieces[0]

    @property
    def tail(self) -> PowerLogPiece:
        return self.pieces[-1]

    @property
    def interior_breakpoints(self) -> Tuple[float, ...]:
        return self.breakpoints[1:-1]

    @property
    def is_log_free(self) -> bool:
        return all(piece.is_zero or piece.logpower == 0 for piece in self.pieces)

    @property
    def is_zero(self) -> bool:
        return all(piece.is_zero for piece in self.pieces)

    def piece_at(self, t: float) -> PowerLogPiece:
        return self.pieces[bisect_right(self.breakpoints, t) - 1]

    def __call__(self, t):
        """向量化取值（右连续）"""
        scalar = np.ndim(t) == 0
        arr = np.atleast_1d(np.asarray(t, dtype=float))
        if np.any(~(arr > 0)):
            raise DomainError("evaluation requires t > 0")
        index = np.searchsorted(self.breakpoints, arr, side="right") - 1
        out = np.zeros_like(arr)
        for i, piece in enumerate(self.pieces):
            mask = index == i
            if np.any(mask) and not piece.is_zero:
                out[mask] = piece.value(arr[mask])
        return float(out[0]) if scalar else out

    def simplified(self) -> "PiecewisePowerLog":
        """合并相邻且相同的段"""
        breakpoints = [self.breakpoints[0]]
        pieces: List[PowerLogPiece] = []
        for hi, piece in zip(self.breakpoints[1:], self.pieces):
            if pieces and _same_piece(pieces[-1], piece):
                breakpoints[-1] = hi
            else:
                pieces.append(piece)
                breakpoints.append(hi)
        return PiecewisePowerLog(tuple(breakpoints), tuple(pieces))


def _same_piece(p: PowerLogPiece, q: PowerLogPiece) -> bool:
    if p.is_zero and q.is_zero:
        return True
    return p == q


# ---------- 运算 ----------

def evaluate(f: PiecewisePowerLog, t: float) -> float:
    """t 处取值，断点处取右侧段"""
    if not t > 0:
        raise DomainError(f"evaluation requires t > 0, got {t}")
    return float(f.piece_at(t).value(t))


def evaluate_left(f: PiecewisePowerLog, t: float) -> float:
    """左极限 f(t⁻)"""
    if not t > 0:
        raise DomainError(f"evaluation requires t > 0, got {t}")
    return float(f.pieces[bisect_left(f.breakpoints, t) - 1].value(t))


def _merged_breakpoints(*functions: PiecewisePowerLog) -> List[float]:
    return sorted(set().union(*(f.breakpoints for f in functions)))


def multiply(f: PiecewisePowerLog, g: PiecewisePowerLog) -> PiecewisePowerLog:
    """逐点乘积：合并断点，指数逐段相加"""
    breakpoints = _merged_breakpoints(f, g)
    pieces = [f.piece_at(lo).times(g.piece_at(lo)) for lo in breakpoints[:-1]]
    return PiecewisePowerLog(tuple(breakpoints), tuple(pieces)).simplified()


def power_of(f: PiecewisePowerLog, q: Number) -> PiecewisePowerLog:
    """逐点 q 次幂（q ≥ 0）"""
    q = exact(q)
    if q < 0:
        raise DomainError("power_of requires q >= 0")
    return PiecewisePowerLog(f.breakpoints, tuple(piece.raised(q) for piece in f.pieces)).simplified()


def scale(f: PiecewisePowerLog, factor: float) -> PiecewisePowerLog:
    return PiecewisePowerLog(f.breakpoints, tuple(piece.scaled(factor) for piece in f.pieces))


def compose_power(f: PiecewisePowerLog, k: float, gamma: Number) -> PiecewisePowerLog:
    """
    t ↦ f(k t^γ)，k > 0, γ > 0

    只对无对数因子的段精确（(1 + log⁺(k t^γ))^β 不在函数类中）。
    """
    gamma = exact(gamma)
    if not k > 0 or gamma <= 0:
        raise DomainError("compose_power requires k > 0 and gamma > 0")
    if not f.is_log_free:
        raise FunctionAlgebraError("composition with a power map is exact only for log-free pieces")
    inv = 1.0 / float(gamma)
    breakpoints = [0.0] + [(b / k) ** inv for b in f.interior_breakpoints] + [INF]
    pieces = [
        ZERO_PIECE if piece.is_zero
        else PowerLogPiece(piece.coefficient * k ** float(piece.power), piece.power * gamma)
        for piece in f.pieces
    ]
    return PiecewisePowerLog(tuple(breakpoints), tuple(pieces)).simplified()


# ---------- 上确界 ----------

def _piece_supremum(piece: PowerLogPiece, lo: float, hi: float) -> float:
    if piece.is_zero:
        return 0.0
    candidates = [
        piece.limit_at_zero() if lo == 0 else piece.value(lo),
        piece.limit_at_infinity() if hi == INF else piece.value(hi),
    ]
    if lo < 1.0 < hi:
        candidates.append(piece.value(1.0))
    if piece.power != 0 and piece.logpower != 0:
        # 在 u = log t 上求导：α(1+u) + β = 0
        u_star = float(-piece.logpower / piece.power) - 1.0
        if u_star > 0:
            t_star = math.exp(u_star) if u_star < 700 else INF
            if lo < t_star < hi:
                candidates.append(piece.value(t_star))
    return max(candidates)


def supremum(f: PiecewisePowerLog, a: float = 0.0, b: float = INF) -> float:
    """(a, b) 上的上确界，包含端点单侧极限；可能为 +∞"""
    if a < 0 or not a < b:
        raise DomainError(f"supremum requires 0 <= a < b, got ({a}, {b})")
    best = 0.0
    for lo, hi, piece in f.intervals():
        lo, hi = max(lo, a), min(hi, b)
        if lo >= hi:
            continue
        best = max(best, _piece_supremum(piece, lo, hi))
        if best == INF:
            return INF
    return best


# ---------- 积分 ----------

def _power_integral(c: float, alpha: Fraction, lo: float, hi: float) -> float:
    """∫_lo^hi c t^α dt，调用方保证收敛"""
    if alpha == -1:
        return c * (math.log(hi) - math.log(lo))
    e = float(alpha + 1)
    upper = 0.0 if hi == INF else hi ** e
    lower = 0.0 if lo == 0 else lo ** e
    return c * (upper - lower) / e


def _log_integral(piece: PowerLogPiece, lo: float, hi: float, cfg: QuadratureConfig) -> float:
    """∫_lo^hi 在 1 ≤ lo 的区间上，换元 u = log t"""
    c, alpha, beta = piece.coefficient, piece.power, piece.logpower
    u_lo = math.log(lo)
    u_hi = INF if hi == INF else math.log(hi)
    if alpha == -1:
        if beta == -1:
            upper = INF if u_hi == INF else math.log1p(u_hi)
            return c * (upper - math.log1p(u_lo))
        e = float(beta + 1)
        upper = 0.0 if u_hi == INF else (1.0 + u_hi) ** e
        return c * (upper - (1.0 + u_lo) ** e) / e
    return _log_quadrature(piece, u_lo, u_hi, cfg)


def _log_quadrature(piece: PowerLogPiece, u_lo: float, u_hi: float, cfg: QuadratureConfig) -> float:
    c, k, beta = piece.coefficient, float(piece.power + 1), float(piece.logpower)

    def integrand(u: float) -> float:
        return math.exp(k * u) * (1.0 + u) ** beta

    value, _, *info = sp_integrate.quad(
        integrand, u_lo, u_hi, epsabs=0.0, epsrel=cfg.rel_tol,
        limit=cfg.max_subdivisions, full_output=1,
    )
    if len(info) > 1 and u_hi == INF:
        # 无穷区间求积未收敛时退回到 T_max 截断
        logger.debug("quadrature on [%g, inf) did not converge (%s); truncating at T_max", u_lo, info[1])
        value, _ = sp_integrate.quad(
            integrand, u_lo, math.log(cfg.t_max), epsabs=0.0, epsrel=cfg.rel_tol,
            limit=cfg.max_subdivisions,
        )
    return c * value


def _integrate_piece(piece: PowerLogPiece, lo: float, hi: float, cfg: QuadratureConfig,
                     force_quadrature: bool = False) -> float:
    if piece.is_zero:
        return 0.0
    if hi == INF and not is_tail_integrable(piece):
        return INF
    if lo == 0 and not is_head_integrable(piece):
        return INF
    if piece.logpower == 0 and not force_quadrature:
        return _power_integral(piece.coefficient, piece.power, lo, hi)
    total = 0.0
    if lo < 1.0:
        total += _power_integral(piece.coefficient, piece.power, lo, min(hi, 1.0))
    if hi > 1.0:
        lower = max(lo, 1.0)
        if force_quadrature:
            u_hi = INF if hi == INF else math.log(hi)
            total += _log_quadrature(piece, math.log(lower), u_hi, cfg)
        else:
            total += _log_integral(piece, lower, hi, cfg)
    return total


def integrate(f: PiecewisePowerLog, a: float, b: float,
              cfg: QuadratureConfig = DEFAULT_QUADRATURE,
              force_quadrature: bool = False) -> float:
    """
    ∫_a^b f(t) dt，b 可为 ∞

    β = 0 的段用闭式；其余段在 u = log t 上做自适应求积。
    b = ∞ 时先按 is_tail_integrable 判定末段，发散直接返回 +∞。
    """
    if a < 0 or b < a:
        raise DomainError(f"integrate requires 0 <= a < b, got ({a}, {b})")
    if a == b:
        return 0.0
    total = 0.0
    for lo, hi, piece in f.intervals():
        lo, hi = max(lo, a), min(hi, b)
        if lo >= hi:
            continue
        value = _integrate_piece(piece, lo, hi, cfg, force_quadrature)
        if value == INF:
            return INF
        total += value
    return total


# ---------- 渐近项 ----------

def running_integral_asymptotes(f: PiecewisePowerLog,
                                cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> Tuple[PowerLogPiece, PowerLogPiece]:
    """F(t) = ∫_0^t f 在 t → 0 与 t → ∞ 处的主项"""
    head = f.head
    if head.is_zero:
        head_term = ZERO_PIECE
    elif not is_head_integrable(head):
        raise IntegrabilityError("running integral diverges at 0 (head exponent <= -1)")
    else:
        head_term = PowerLogPiece(head.coefficient / float(head.power + 1), head.power + 1)

    tail = f.tail
    if tail.is_zero or is_tail_integrable(tail):
        tail_term = PowerLogPiece(integrate(f, 0.0, INF, cfg))
    elif tail.power > -1:
        tail_term = PowerLogPiece(tail.coefficient / float(tail.power + 1), tail.power + 1, tail.logpower)
    elif tail.logpower > -1:
        tail_term = PowerLogPiece(tail.coefficient / float(tail.logpower + 1), 0, tail.logpower + 1)
    else:
        raise FunctionAlgebraError("running integral grows like log log t")
    return head_term, tail_term


def tail_integral_asymptote(piece: PowerLogPiece) -> PowerLogPiece:
    """∫_t^∞ piece 在 t → ∞ 处的主项"""
    if piece.is_zero:
        return ZERO_PIECE
    if not is_tail_integrable(piece):
        raise IntegrabilityError("tail integral diverges")
    if piece.power < -1:
        return PowerLogPiece(piece.coefficient / float(-(piece.power + 1)), piece.power + 1, piece.logpower)
    return PowerLogPiece(piece.coefficient / float(-(piece.logpower + 1)), 0, piece.logpower + 1)


def log_grid(lo: float, hi: float, per_decade: int) -> np.ndarray:
    """[lo, hi] 上每十倍程 per_decade 个点的几何网格"""
    if not 0 < lo < hi or per_decade < 1:
        raise DomainError(f"invalid log grid ({lo}, {hi}, {per_decade})")
    count = max(2, int(round(math.log10(hi / lo) * per_decade)) + 1)
    return np.geomspace(lo, hi, count)
