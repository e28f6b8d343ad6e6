"""
ri-fixed-point - 极大算子不动点核心模块

这个包包含：
- 分段幂-对数函数代数
- 递减重排与径向剖面
- r.i. 空间描述符、范数与基本函数指标
- 球平均、极大函数、Riesz 位势与尾算子
- 不动点判定与数值校验
"""

from .decide import Decision, Method, Verdict, decide_fixed_point, minimal_dimension
from .errors import (
    CrossCheckError,
    DescriptorError,
    DimensionError,
    DomainError,
    FixedPointError,
    IntegrabilityError,
    RearrangementError,
)
from .funcalg import PiecewisePowerLog, PowerLogPiece, QuadratureConfig
from .rearrange import DecreasingProfile, RadialProfile, doublestar, rearrangement
from .schema import parse_profile, parse_space
from .spaces import (
    Intersection,
    Lambda,
    Lorentz,
    MarcinkiewiczStar,
    MarcinkiewiczWeak,
    fundamental_indices,
    norm,
)
from .verify import VerificationReport, create_check_manager, run_checks

__all__ = [
    "PiecewisePowerLog",
    "PowerLogPiece",
    "QuadratureConfig",
    "DecreasingProfile",
    "RadialProfile",
    "rearrangement",
    "doublestar",
    "Lorentz",
    "Lambda",
    "MarcinkiewiczStar",
    "MarcinkiewiczWeak",
    "Intersection",
    "norm",
    "fundamental_indices",
    "Decision",
    "Verdict",
    "Method",
    "decide_fixed_point",
    "minimal_dimension",
    "VerificationReport",
    "create_check_manager",
    "run_checks",
    "parse_space",
    "parse_profile",
    "FixedPointError",
    "DomainError",
    "DescriptorError",
    "DimensionError",
    "IntegrabilityError",
    "RearrangementError",
    "CrossCheckError",
]

__version__ = "0.1.0"
