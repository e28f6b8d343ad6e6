"""
设置管理模块
统一管理求积、网格、校验、判定与输出的所有配置项
"""

import os
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

try:
    from dotenv import load_dotenv

    load_dotenv()
except ImportError:
    pass  # dotenv 是可选的依赖


def _env_float(name: str, default: float) -> float:
    value = os.getenv(name)
    return float(value) if value not in (None, "") else default


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    return int(value) if value not in (None, "") else default


@dataclass
class QuadratureSettings:
    """求积配置"""
    rel_tol: float = 1e-8
    max_subdivisions: int = 200
    t_max: float = 1e8

    def __post_init__(self):
        # 从环境变量覆盖
        self.rel_tol = _env_float("FIXPOINT_QUAD_RTOL", self.rel_tol)
        self.max_subdivisions = _env_int("FIXPOINT_QUAD_LIMIT", self.max_subdivisions)
        self.t_max = _env_float("FIXPOINT_T_MAX", self.t_max)


@dataclass
class GridSettings:
    """网格配置"""
    r_min: float = 1e-3
    r_max: float = 1e3
    r_per_decade: int = 64
    dilation_steps: int = 160
    dilation_step: float = 0.25
    index_octaves: int = 40
    table_grid: str = "log:1e-2:1e4:16"


@dataclass
class VerifySettings:
    """校验配置"""
    equivalence_ceiling: float = 10.0
    superharmonic_tol: float = 1e-6
    limit_tol: float = 1e-4
    small_radius: float = 1e-3
    embedding_tol: float = 1e-9

    def __post_init__(self):
        self.equivalence_ceiling = _env_float("FIXPOINT_EQUIV_C", self.equivalence_ceiling)


@dataclass
class DecisionSettings:
    """判定配置"""
    index_tol: float = 1e-2
    strategy: str = "exact"  # exact, fast

    def __post_init__(self):
        self.index_tol = _env_float("FIXPOINT_INDEX_TOL", self.index_tol)
        self.strategy = os.getenv("FIXPOINT_STRATEGY", self.strategy)


@dataclass
class OutputSettings:
    """输出配置"""
    format: str = "json"  # json, csv, text
    digits: int = 17

    def __post_init__(self):
        self.format = os.getenv("FIXPOINT_FORMAT", self.format)


@dataclass
class Settings:
    """主设置类"""
    quadrature: QuadratureSettings = field(default_factory=QuadratureSettings)
    grid: GridSettings = field(default_factory=GridSettings)
    verify: VerifySettings = field(default_factory=VerifySettings)
    decision: DecisionSettings = field(default_factory=DecisionSettings)
    output: OutputSettings = field(default_factory=OutputSettings)

    # 应用信息
    app_name: str = "ri-fixed-point"
    app_version: str = "0.1.0"
    environment: str = "production"
    log_level: str = "WARNING"

    def __post_init__(self):
        # 从环境变量覆盖
        self.environment = os.getenv("ENVIRONMENT", self.environment)
        self.log_level = os.getenv("LOG_LEVEL", self.log_level)

        # 根据环境调整配置
        if self.environment == "development":
            self.log_level = "DEBUG"

    def validate(self) -> tuple[bool, list[str]]:
        """验证配置"""
        errors = []

        if self.quadrature.rel_tol <= 0:
            errors.append("求积相对容差必须大于 0")
        if self.quadrature.max_subdivisions < 1:
            errors.append("求积子区间数必须至少为 1")
        if self.quadrature.t_max <= 1:
            errors.append("T_max 必须大于 1")

        if not 0 < self.grid.r_min < self.grid.r_max:
            errors.append("半径网格必须满足 0 < r_min < r_max")
        if self.grid.r_per_decade < 1 or self.grid.dilation_steps < 1 or self.grid.index_octaves < 1:
            errors.append("网格点数必须大于 0")
        step = self.grid.dilation_step
        if not 0 < step <= 1 or abs(round(1 / step) * step - 1.0) > 1e-12:
            errors.append("伸缩网格步长必须形如 1/k")

        if self.verify.equivalence_ceiling < 1:
            errors.append("等价常数上限必须至少为 1")
        if min(self.verify.superharmonic_tol, self.verify.limit_tol,
               self.verify.small_radius, self.verify.embedding_tol) <= 0:
            errors.append("校验容差必须大于 0")

        if self.decision.index_tol <= 0:
            errors.append("指标容差必须大于 0")
        if self.decision.strategy not in ("exact", "fast"):
            errors.append(f"未知判定策略: {self.decision.strategy}")

        if self.output.format not in ("json", "csv", "text"):
            errors.append(f"未知输出格式: {self.output.format}")
        if not 1 <= self.output.digits <= 17:
            errors.append("有效数字位数必须在 1-17 范围内")

        return len(errors) == 0, errors

    def quadrature_config(self):
        """转换为 fixedpoint 的求积配置"""
        from fixedpoint.funcalg import QuadratureConfig

        return QuadratureConfig(
            rel_tol=self.quadrature.rel_tol,
            max_subdivisions=self.quadrature.max_subdivisions,
            t_max=self.quadrature.t_max,
        )

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典"""
        return {
            "app_name": self.app_name,
            "app_version": self.app_version,
            "environment": self.environment,
            "log_level": self.log_level,
            "quadrature": {
                "rel_tol": self.quadrature.rel_tol,
                "max_subdivisions": self.quadrature.max_subdivisions,
                "t_max": self.quadrature.t_max,
            },
            "grid": {
                "r_min": self.grid.r_min,
                "r_max": self.grid.r_max,
                "r_per_decade": self.grid.r_per_decade,
                "dilation_steps": self.grid.dilation_steps,
                "dilation_step": self.grid.dilation_step,
                "index_octaves": self.grid.index_octaves,
                "table_grid": self.grid.table_grid,
            },
            "verify": {
                "equivalence_ceiling": self.verify.equivalence_ceiling,
                "superharmonic_tol": self.verify.superharmonic_tol,
                "limit_tol": self.verify.limit_tol,
                "small_radius": self.verify.small_radius,
                "embedding_tol": self.verify.embedding_tol,
            },
            "decision": {
                "index_tol": self.decision.index_tol,
                "strategy": self.decision.strategy,
            },
            "output": {
                "format": self.output.format,
                "digits": self.output.digits,
            },
        }

    @classmethod
    def from_env(cls) -> "Settings":
        """从环境变量创建设置"""
        return cls()


# 全局设置实例
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """获取全局设置实例"""
    global _settings
    if _settings is None:
        _settings = Settings.from_env()
    return _settings


def reload_settings() -> Settings:
    """重新加载设置"""
    global _settings
    _settings = Settings.from_env()
    return _settings


def update_settings(**kwargs) -> Settings:
    """更新设置"""
    settings = get_settings()

    for key, value in kwargs.items():
        if hasattr(settings, key):
            setattr(settings, key, value)
        else:
            # 尝试更新子配置
            for config_name in ["quadrature", "grid", "verify", "decision", "output"]:
                config = getattr(settings, config_name)
                if hasattr(config, key):
                    setattr(config, key, value)
                    break

    return settings


# 环境检查函数
def check_environment() -> Dict[str, Any]:
    """检查环境状态"""
    settings = get_settings()
    is_valid, errors = settings.validate()

    return {
        "valid": is_valid,
        "errors": errors,
        "settings": settings.to_dict(),
        "environment_vars": {
            name: os.getenv(name)
            for name in (
                "ENVIRONMENT",
                "LOG_LEVEL",
                "FIXPOINT_QUAD_RTOL",
                "FIXPOINT_QUAD_LIMIT",
                "FIXPOINT_T_MAX",
                "FIXPOINT_EQUIV_C",
                "FIXPOINT_INDEX_TOL",
                "FIXPOINT_STRATEGY",
                "FIXPOINT_FORMAT",
            )
        },
    }
