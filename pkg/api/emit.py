"""
结果输出模块
把 CommandResult 渲染为 JSON、CSV 或文本报告（jinja2 模板）
"""

from typing import Any, List

from jinja2 import BaseLoader, Environment

from fixedpoint.utils import format_number, sanitize, to_csv, to_json

from .runner import CommandResult

DECISION_TEMPLATE = """\
n = {{ decision.n }}
space: {{ decision.space.kind }}
verdict: {{ decision.verdict }}
method: {{ decision.method }}
{% for key, value in decision.witnesses | dictsort %}  {{ key }} = {{ value | num }}
{% endfor %}{% for note in decision.notes %}note: {{ note }}
{% endfor %}"""

TABLE_TEMPLATE = """\
{{ command }}{% for key, value in header | dictsort %} {{ key }}={{ value | num }}{% endfor %}
{{ columns | join("\t") }}
{% for row in rows %}{{ row | map("num") | join("\t") }}
{% endfor %}"""

ERROR_TEMPLATE = """\
error [{{ error.code }}]: {{ error.error }}
"""

PLAIN_TEMPLATE = """\
{{ command }}
{% for key, value in payload | dictsort %}  {{ key }}: {{ value | num }}
{% endfor %}"""


class ReportEmitter:
    """报告渲染器"""

    def __init__(self, digits: int = 17):
        self.digits = digits
        self.env = Environment(loader=BaseLoader(), keep_trailing_newline=True)
        self.env.filters["num"] = self._num

    def _num(self, value: Any) -> str:
        if isinstance(value, (dict, list)):
            return to_json(value).replace("\n", " ")
        return format_number(value, self.digits)

    def render(self, result: CommandResult, fmt: str = "json") -> str:
        if fmt == "json":
            return to_json(result.to_dict()) + "\n"
        if fmt == "csv":
            return self.render_csv(result)
        if fmt == "text":
            return self.render_text(result)
        raise ValueError(f"unknown format '{fmt}'")

    def render_csv(self, result: CommandResult) -> str:
        if result.table:
            return to_csv(result.table, self.digits)
        rows: List[List[Any]] = [["key", "value"]]
        rows.extend(_flatten(sanitize(result.payload)))
        return to_csv(rows, self.digits)

    def render_text(self, result: CommandResult) -> str:
        payload = sanitize(result.payload)
        if "error" in payload:
            template, context = ERROR_TEMPLATE, {"error": payload["error"]}
        elif "decision" in payload:
            template, context = DECISION_TEMPLATE, {"decision": payload["decision"]}
        elif result.columns:
            header = {k: v for k, v in payload.items() if not isinstance(v, (dict, list))}
            template = TABLE_TEMPLATE
            context = {"command": result.command, "header": header, "columns": result.columns,
                       "rows": sanitize(result.rows)}
        else:
            template, context = PLAIN_TEMPLATE, {"command": result.command, "payload": payload}
        return self.env.from_string(template).render(**context)


def _flatten(data: Any, prefix: str = "") -> List[List[Any]]:
    """嵌套结构 → (点分键, 值) 行，键排序"""
    if isinstance(data, dict):
        rows = []
        for key in sorted(data):
            rows.extend(_flatten(data[key], f"{prefix}.{key}" if prefix else str(key)))
        return rows
    if isinstance(data, list):
        rows = []
        for i, item in enumerate(data):
            rows.extend(_flatten(item, f"{prefix}.{i}"))
        return rows
    return [[prefix, data]]


def emit(result: CommandResult, fmt: str = "json", digits: int = 17) -> str:
    """渲染结果"""
    return ReportEmitter(digits).render(result, fmt)
