"""
工具函数模块
包含错误格式化、确定性数值输出、网格解析等功能
"""

import json
import math
from enum import Enum
from fractions import Fraction
from typing import Any, List, Sequence

import numpy as np

from .errors import DomainError
from .funcalg import log_grid


def format_error(error: Exception, context: str = "") -> dict:
    """格式化错误信息"""
    data = {
        "error": str(error),
        "type": type(error).__name__,
        "code": getattr(error, "code", "INTERNAL_ERROR"),
        "context": context,
    }
    if getattr(error, "field", None):
        data["field"] = error.field
    return data


def format_number(value: Any, digits: int = 17) -> str:
    """按 digits 位有效数字输出，'.' 作小数点"""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating, Fraction)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.{digits}g}"
    if value is None:
        return ""
    return str(value)


def sanitize(value: Any) -> Any:
    """转换为可确定性 JSON 序列化的结构（∞ 写为字符串）"""
    if isinstance(value, dict):
        return {str(k): sanitize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [sanitize(v) for v in value]
    if isinstance(value, np.ndarray):
        return [sanitize(v) for v in value.tolist()]
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if hasattr(value, "to_dict"):
        return sanitize(value.to_dict())
    return str(value)


def to_json(payload: Any) -> str:
    """键排序、缩进固定的 JSON；同一输入逐字节相同"""
    return json.dumps(sanitize(payload), sort_keys=True, indent=2, ensure_ascii=False)


def to_csv(rows: Sequence[Sequence[Any]], digits: int = 17) -> str:
    """首行为表头，逗号分隔"""
    lines = [",".join(format_number(cell, digits) for cell in row) for row in rows]
    return "\n".join(lines) + "\n"


def parse_grid(spec: str) -> np.ndarray:
    """
    解析网格描述

    log:lo:hi:ppd  每十倍程 ppd 个点的几何网格
    lin:lo:hi:count  等距 count 个点
    也接受逗号分隔的显式列表
    """
    text = spec.strip()
    if ":" not in text:
        try:
            values = [float(x) for x in text.split(",") if x.strip()]
        except ValueError as exc:
            raise DomainError(f"invalid grid '{spec}'") from exc
        if not values:
            raise DomainError("grid must be non-empty")
        return np.asarray(values, dtype=float)
    parts = text.split(":")
    if len(parts) != 4:
        raise DomainError(f"grid must look like scale:lo:hi:points, got '{spec}'")
    scale, lo, hi, points = parts
    try:
        lo_v, hi_v, count = float(lo), float(hi), int(points)
    except ValueError as exc:
        raise DomainError(f"invalid grid '{spec}'") from exc
    if scale == "log":
        return log_grid(lo_v, hi_v, count)
    if scale == "lin":
        if not lo_v < hi_v or count < 2:
            raise DomainError(f"invalid linear grid '{spec}'")
        return np.linspace(lo_v, hi_v, count)
    raise DomainError(f"unknown grid scale '{scale}', expected log or lin")


def split_names(text: str) -> List[str]:
    return [name.strip() for name in text.split(",") if name.strip()]
