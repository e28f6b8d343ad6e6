"""
异常定义模块
所有领域错误都继承自 ValueError，交叉校验失败继承自 RuntimeError
"""

from typing import Optional


class FixedPointError(ValueError):
    """领域错误基类"""

    code = "INVALID_INPUT"


class DomainError(FixedPointError):
    """参数超出定义域（例如 t <= 0）"""

    code = "DOMAIN_ERROR"


class FunctionAlgebraError(FixedPointError):
    """运算结果超出分段幂-对数函数类"""

    code = "ALGEBRA_UNSUPPORTED"


class IntegrabilityError(FixedPointError):
    """被积函数在原点附近或球上不可积"""

    code = "NOT_INTEGRABLE"


class RearrangementError(FixedPointError):
    """剖面无法精确重排"""

    code = "NOT_REARRANGEABLE"


class DimensionError(FixedPointError):
    """维数不满足要求"""

    code = "DIMENSION_INVALID"


class DescriptorError(FixedPointError):
    """空间描述符或剖面描述不合法，field 指明出错字段"""

    code = "DESCRIPTOR_INVALID"

    def __init__(self, message: str, field: Optional[str] = None):
        self.field = field
        self.detail = message
        if field:
            message = f"{field}: {message}"
        super().__init__(message)


class CrossCheckError(RuntimeError):
    """两条判定路径结论不一致（实现缺陷）"""

    code = "CROSS_CHECK_FAILED"
