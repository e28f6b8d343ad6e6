"""
命令运行器
把一次命令行调用（RunConfig）分派到 fixedpoint 的各个模块，产出确定性的结果
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

from config.settings import Settings, check_environment, get_settings
from fixedpoint.decide import decide_fixed_point
from fixedpoint.errors import DimensionError, DomainError, FixedPointError
from fixedpoint.funcalg import log_grid
from fixedpoint.operators import maximal_radial, riesz_radial, tail_T
from fixedpoint.rearrange import (
    DecreasingProfile,
    RadialProfile,
    doublestar,
    lift,
    rearrangement,
    rearrangement_numeric,
)
from fixedpoint.schema import parse_profile, parse_space
from fixedpoint.spaces import dilation_estimate, fundamental_indices
from fixedpoint.utils import format_error, parse_grid, split_names
from fixedpoint.verify import create_check_manager, run_checks

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NO = 1
EXIT_ERROR = 2

COMMANDS = ("decide", "rearrange", "norm", "indices", "maximal", "riesz", "tail", "verify", "check")
FORMATS = ("json", "csv", "text")


@dataclass
class RunConfig:
    """一次命令调用的全部输入"""
    command: str
    n: Optional[int] = None
    space: Optional[str] = None
    profile: Optional[str] = None
    grid: Optional[str] = None
    tol: Optional[float] = None
    out: Optional[str] = None
    format: str = "json"
    checks: Optional[str] = None
    eps: Optional[float] = None
    strategy: Optional[str] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise DomainError(f"unknown command '{self.command}'")
        if self.format not in FORMATS:
            raise DomainError(f"unknown format '{self.format}', expected one of {FORMATS}")
        if self.n is not None and self.n < 1:
            raise DimensionError(f"--n must be >= 1, got {self.n}")
        if self.tol is not None and not self.tol > 0:
            raise DomainError("--tol must be > 0")


@dataclass
class CommandResult:
    """命令结果：退出码、JSON 载荷与可选的 CSV 表"""
    command: str
    exit_code: int
    payload: Dict[str, Any]
    columns: List[str] = field(default_factory=list)
    rows: List[List[Any]] = field(default_factory=list)

    @property
    def table(self) -> List[List[Any]]:
        return [list(self.columns)] + [list(row) for row in self.rows] if self.columns else []

    def to_dict(self) -> Dict[str, Any]:
        data = {"command": self.command, "exit_code": self.exit_code, **self.payload}
        if self.columns:
            data["columns"] = list(self.columns)
            data["rows"] = [list(row) for row in self.rows]
        return data


class CommandRunner:
    """命令运行器类"""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()
        self.cfg = self.settings.quadrature_config()
        self._commands: Dict[str, Callable[[RunConfig], CommandResult]] = {
            "decide": self.cmd_decide,
            "rearrange": self.cmd_rearrange,
            "norm": self.cmd_norm,
            "indices": self.cmd_indices,
            "maximal": self.cmd_maximal,
            "riesz": self.cmd_riesz,
            "tail": self.cmd_tail,
            "verify": self.cmd_verify,
            "check": self.cmd_check,
        }

    def run(self, rc: RunConfig) -> CommandResult:
        """执行命令；领域错误映射为退出码 2"""
        try:
            return self._commands[rc.command](rc)
        except (FixedPointError, RuntimeError) as e:
            logger.debug("command %s failed: %s", rc.command, e)
            return CommandResult(rc.command, EXIT_ERROR, {"error": format_error(e, rc.command)})

    # ---------- 输入 ----------

    @staticmethod
    def _require_n(rc: RunConfig) -> int:
        if rc.n is None:
            raise DimensionError("--n is required for this command")
        return rc.n

    @staticmethod
    def _require(value: Optional[str], flag: str) -> str:
        if not value:
            raise DomainError(f"{flag} is required for this command")
        return value

    def _decreasing(self, rc: RunConfig) -> DecreasingProfile:
        profile = parse_profile(self._require(rc.profile, "--profile"), rc.n)
        return rearrangement(profile) if isinstance(profile, RadialProfile) else profile

    def _radial(self, rc: RunConfig) -> RadialProfile:
        profile = parse_profile(self._require(rc.profile, "--profile"), rc.n)
        if isinstance(profile, RadialProfile):
            return profile
        return lift(profile, self._require_n(rc))

    def _grid(self, rc: RunConfig, default: str):
        return parse_grid(rc.grid or default)

    # ---------- 命令 ----------

    def cmd_decide(self, rc: RunConfig) -> CommandResult:
        """判定不动点：存在退出 0，不存在退出 1"""
        space = parse_space(self._require(rc.space, "--space"))
        decision = decide_fixed_point(
            self._require_n(rc),
            space,
            self.cfg,
            strategy=rc.strategy or self.settings.decision.strategy,
            index_tol=rc.tol or self.settings.decision.index_tol,
            eps=rc.eps,
        )
        return CommandResult("decide", EXIT_OK if decision.exists else EXIT_NO, {"decision": decision.to_dict()})

    def cmd_rearrange(self, rc: RunConfig) -> CommandResult:
        """(t, f*(t), f**(t)) 表；径向输入附带层饼校验列"""
        profile = parse_profile(self._require(rc.profile, "--profile"), rc.n)
        radial = isinstance(profile, RadialProfile)
        d = rearrangement(profile) if radial else profile
        columns = ["t", "f_star", "f_doublestar"] + (["layer_cake"] if radial else [])
        rows = []
        for t in self._grid(rc, self.settings.grid.table_grid):
            t = float(t)
            row = [t, d.value(t), doublestar(d, t, self.cfg)]
            if radial:
                row.append(rearrangement_numeric(profile, t))
            rows.append(row)
        return CommandResult("rearrange", EXIT_OK, {"profile": d.label or d.body.to_records()}, columns, rows)

    def cmd_norm(self, rc: RunConfig) -> CommandResult:
        space = parse_space(self._require(rc.space, "--space"))
        d = self._decreasing(rc)
        value = space.norm(d, self.cfg)
        return CommandResult("norm", EXIT_OK, {"space": space.to_dict(), "profile": d.label, "norm": value})

    def cmd_indices(self, rc: RunConfig) -> CommandResult:
        space = parse_space(self._require(rc.space, "--space"))
        grid = self.settings.grid
        report = fundamental_indices(
            space, self.cfg, octaves=grid.index_octaves, steps=grid.dilation_steps, step=grid.dilation_step
        )
        rows = []
        if rc.grid:
            for s in parse_grid(rc.grid):
                estimate = dilation_estimate(space, float(s), self.cfg, steps=grid.dilation_steps, step=grid.dilation_step)
                rows.append([estimate.s, estimate.value, estimate.source, estimate.grid["t_max"]])
        payload = {"space": space.to_dict(), **report.to_dict()}
        return CommandResult("indices", EXIT_OK, payload, ["s", "dilation", "source", "t_max"] if rows else [], rows)

    def cmd_maximal(self, rc: RunConfig) -> CommandResult:
        """(ρ, Mf 下界, f(ρ)) 表"""
        f = self._radial(rc)
        grid = self.settings.grid
        radii = log_grid(grid.r_min, grid.r_max, grid.r_per_decade)
        rows = []
        for rho in self._grid(rc, "log:0.1:10:8"):
            report = maximal_radial(f, float(rho), radii, self.cfg)
            rows.append([float(rho), report.value, f.value(float(rho)), report.radius, report.small_radius_limit])
        return CommandResult(
            "maximal", EXIT_OK, {"profile": f.label, "n": f.dimension, "lower_bound": True},
            ["rho", "maximal_lower_bound", "f_rho", "maximizing_r", "small_radius_limit"], rows,
        )

    def cmd_riesz(self, rc: RunConfig) -> CommandResult:
        f = self._radial(rc)
        rows = [[float(rho), riesz_radial(f, float(rho), self.cfg)] for rho in self._grid(rc, "log:0.1:10:8")]
        return CommandResult("riesz", EXIT_OK, {"profile": f.label, "n": f.dimension}, ["rho", "riesz"], rows)

    def cmd_tail(self, rc: RunConfig) -> CommandResult:
        n = self._require_n(rc)
        d = self._decreasing(rc)
        rows = [[float(t), tail_T(d, float(t), n, self.cfg)] for t in self._grid(rc, self.settings.grid.table_grid)]
        return CommandResult("tail", EXIT_OK, {"profile": d.label, "n": n}, ["t", "tail_T"], rows)

    def cmd_verify(self, rc: RunConfig) -> CommandResult:
        """执行校验：全部通过退出 0，否则退出 1"""
        n = self._require_n(rc)
        manager = create_check_manager()
        requested = split_names(rc.checks or "all")
        names = manager.list_checks() if "all" in requested else requested
        verify = self.settings.verify
        reports = run_checks(
            names,
            n,
            self.cfg,
            ceiling=verify.equivalence_ceiling,
            superharmonic_tol=rc.tol or verify.superharmonic_tol,
            limit_tol=verify.limit_tol,
            small_radius=verify.small_radius,
            embedding_tol=verify.embedding_tol,
        )
        passed = all(report.passed for report in reports)
        rows = [[report.name, report.passed, report.worst, report.tolerance] for report in reports]
        payload = {"n": n, "passed": passed, "reports": [report.to_dict() for report in reports]}
        return CommandResult("verify", EXIT_OK if passed else EXIT_NO, payload,
                             ["check", "passed", "worst", "tolerance"], rows)

    def cmd_check(self, rc: RunConfig) -> CommandResult:
        """环境与设置检查"""
        env_check = check_environment()
        return CommandResult("check", EXIT_OK if env_check["valid"] else EXIT_NO, {"environment": env_check})


# 创建默认运行器实例
def create_runner(settings: Optional[Settings] = None) -> CommandRunner:
    """创建命令运行器"""
    return CommandRunner(settings)
