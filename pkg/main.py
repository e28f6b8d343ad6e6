#!/usr/bin/env python3
"""
ri-fixed-point - 主入口文件

判定 r.i. 空间中 Hardy–Littlewood 极大算子是否存在非常数不动点，并数值校验相关估计。

子命令：
- decide     判定（退出码 0 存在 / 1 不存在 / 2 错误）
- rearrange  递减重排表
- norm       r.i. 范数
- indices    基本函数指标
- maximal    径向函数的极大函数表
- riesz      Riesz 位势表
- tail       尾算子表
- verify     数值校验
- check      环境检查
"""

import argparse
import logging
import os
import sys
from typing import List, Optional

# 添加项目根目录到 Python 路径
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from api.emit import emit
from api.runner import COMMANDS, EXIT_ERROR, FORMATS, CommandResult, RunConfig, create_runner
from config.settings import get_settings
from fixedpoint.errors import FixedPointError
from fixedpoint.utils import format_error


def build_parser() -> argparse.ArgumentParser:
    """构建命令行解析器"""
    parser = argparse.ArgumentParser(prog="ri-fixed-point", description="极大算子不动点判定与数值校验")
    parser.add_argument("command", choices=COMMANDS, help="子命令")
    parser.add_argument("checks", nargs="?", default=None,
                        help="verify 的校验名（逗号分隔，或 all）")
    parser.add_argument("--n", type=int, help="维数 n")
    parser.add_argument("--space", help="空间描述：JSON 文本、JSON 文件或简写（如 lorentz:p=3,q=inf）")
    parser.add_argument("--profile", help="剖面描述：JSON 文本、JSON 文件或简写（如 h:n=3）")
    parser.add_argument("--grid", help="网格，形如 log:1e-2:1e4:16、lin:0:1:11 或逗号列表")
    parser.add_argument("--tol", type=float, help="容差")
    parser.add_argument("--out", help="输出文件（默认标准输出）")
    parser.add_argument("--format", choices=FORMATS, help="输出格式")
    parser.add_argument("--eps", type=float, help="Λ 空间的自改进参数 ε")
    parser.add_argument("--strategy", choices=["exact", "fast"], help="判定策略")
    return parser


def configure_logging(level: str) -> None:
    """日志只写标准错误，标准输出留给结果"""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def status(message: str) -> None:
    print(message, file=sys.stderr)


def write_output(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text)
        status(f"💾 结果已写入: {out}")
    else:
        sys.stdout.write(text)


def main(argv: Optional[List[str]] = None) -> None:
    """主函数"""
    args = build_parser().parse_args(argv)
    settings = get_settings()
    configure_logging(settings.log_level)
    fmt = args.format or settings.output.format

    if args.checks is not None and args.command != "verify":
        status(f"❌ 多余的参数: {args.checks}")
        sys.exit(EXIT_ERROR)

    try:
        rc = RunConfig(
            command=args.command,
            n=args.n,
            space=args.space,
            profile=args.profile,
            grid=args.grid,
            tol=args.tol,
            out=args.out,
            format=fmt,
            checks=args.checks,
            eps=args.eps,
            strategy=args.strategy,
        )
    except FixedPointError as e:
        status(f"❌ 参数错误: {e}")
        result = CommandResult(args.command, EXIT_ERROR, {"error": format_error(e, args.command)})
        write_output(emit(result, fmt if fmt in FORMATS else "json", settings.output.digits), args.out)
        sys.exit(EXIT_ERROR)

    status(f"🚀 执行 {rc.command}")
    result = create_runner(settings).run(rc)

    if result.exit_code == EXIT_ERROR:
        status(f"❌ 失败: {result.payload['error']['error']}")
    elif rc.command == "decide":
        status(f"✅ 判定: {result.payload['decision']['verdict']}")
    elif rc.command == "verify":
        status("✅ 全部校验通过" if result.exit_code == 0 else "⚠️ 存在未通过的校验")
    else:
        status("✅ 完成")

    write_output(emit(result, rc.format, settings.output.digits), rc.out)
    sys.exit(result.exit_code)


if __name__ == "__main__":
    main()
