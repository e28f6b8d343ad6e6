"""
API 层 - 把命令行调用转换为结果载荷

这个包包含：
- 命令运行器（分派到 fixedpoint 各模块）
- 结果输出（JSON / CSV / 文本报告）
"""

from .emit import ReportEmitter, emit
from .runner import CommandResult, CommandRunner, RunConfig, create_runner

__all__ = [
    "CommandResult",
    "CommandRunner",
    "RunConfig",
    "create_runner",
    "ReportEmitter",
    "emit",
]

__version__ = "0.1.0"
