"""
描述解析模块

空间描述与剖面描述的 JSON 校验（pydantic 判别联合）以及行内简写：
  lorentz:p=3,q=inf   lebesgue:p=4   lambda:p=2,a=0.2,b=0.1   prop:a=0.2,b=0.6
  minimal:n=3   marcinkiewicz_weak:W,n=3   logstar:n=3,sign=-1
  h:n=3   F:n=3   fixed:n=3   indicator:s=1   ball:s=1,n=3   two_step
"""

import json
import os
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, TypeAdapter, ValidationError, field_validator

from .errors import DescriptorError, FixedPointError
from .funcalg import PiecewisePowerLog
from .rearrange import (
    DecreasingProfile,
    F_profile,
    RadialProfile,
    ball_indicator,
    fixed_point_profile,
    h_profile,
    indicator_profile,
    two_step_profile,
)
from .spaces import SpaceDescriptor, create_space, space_from_dict

Scalar = Union[int, float, str]


class PieceModel(BaseModel):
    """单段记录 {t_lo, t_hi, c, alpha, beta}"""

    t_lo: float = Field(ge=0)
    t_hi: Union[float, str]
    c: float = 1.0
    alpha: Scalar = 0
    beta: Scalar = 0

    @field_validator("t_hi")
    @classmethod
    def _check_upper(cls, value):
        if isinstance(value, str) and value.strip().lower() not in ("inf", "infinity"):
            raise ValueError("t_hi must be a number or 'inf'")
        return value


class LorentzModel(BaseModel):
    kind: Literal["lorentz"]
    p: Scalar
    q: Optional[Scalar] = None


class LambdaModel(BaseModel):
    kind: Literal["lambda"]
    p: Scalar
    w: List[PieceModel] = Field(min_length=1)
    assume_banach: bool = True


class StarModel(BaseModel):
    kind: Literal["marcinkiewicz_star"]
    phi: List[PieceModel] = Field(min_length=1)


class WeakModel(BaseModel):
    kind: Literal["marcinkiewicz_weak"]
    phi: List[PieceModel] = Field(min_length=1)


class IntersectionModel(BaseModel):
    kind: Literal["intersection"]
    members: List["SpaceModel"] = Field(min_length=1)


SpaceModel = Annotated[
    Union[LorentzModel, LambdaModel, StarModel, WeakModel, IntersectionModel],
    Field(discriminator="kind"),
]
IntersectionModel.model_rebuild()


class RadialModel(BaseModel):
    kind: Literal["radial"]
    n: int = Field(ge=1)
    pieces: List[PieceModel] = Field(min_length=1)
    label: str = ""


class DecreasingModel(BaseModel):
    kind: Literal["decreasing"]
    pieces: List[PieceModel] = Field(min_length=1)
    label: str = ""


ProfileModel = Annotated[Union[RadialModel, DecreasingModel], Field(discriminator="kind")]

_space_adapter = TypeAdapter(SpaceModel)
_profile_adapter = TypeAdapter(ProfileModel)

_UNION_TAGS = {
    "lorentz", "lambda", "marcinkiewicz_star", "marcinkiewicz_weak", "intersection",
    "radial", "decreasing", "int", "float", "str",
}


def _location(error: ValidationError) -> str:
    first = error.errors()[0]
    # 判别联合与普通联合会把分支名插进路径，去掉以得到用户视角的字段路径
    parts = [str(p) for p in first["loc"] if p not in _UNION_TAGS]
    return ".".join(parts) or "kind"


def _load_json(text: str) -> Any:
    if not text.lstrip().startswith(("{", "[")) and os.path.isfile(text):
        with open(text, "r", encoding="utf-8") as f:
            text = f.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DescriptorError(f"invalid JSON: {exc.msg}", field="json") from exc


def _dump(model: BaseModel) -> Dict[str, Any]:
    return model.model_dump()


def _parse_shorthand(text: str) -> Tuple[str, List[str], Dict[str, str]]:
    name, _, rest = text.partition(":")
    positional, options = [], {}
    for token in filter(None, (t.strip() for t in rest.split(","))):
        if "=" in token:
            key, _, value = token.partition("=")
            options[key.strip()] = value.strip()
        else:
            positional.append(token)
    return name.strip(), positional, options


def _is_json(text: str) -> bool:
    stripped = text.lstrip()
    return stripped.startswith("{") or (stripped.endswith(".json") and os.path.isfile(stripped))


def parse_space(text: Union[str, Dict[str, Any]]) -> SpaceDescriptor:
    """JSON 文本 / 文件 / 字典 / 行内简写 → SpaceDescriptor"""
    if isinstance(text, dict) or _is_json(text):
        data = text if isinstance(text, dict) else _load_json(text)
        try:
            model = _space_adapter.validate_python(data)
        except ValidationError as exc:
            raise DescriptorError(exc.errors()[0]["msg"], field=_location(exc)) from exc
        return space_from_dict(_dump(model))

    name, positional, options = _parse_shorthand(text)
    if name == "marcinkiewicz_weak" and positional not in ([], ["W"]):
        raise DescriptorError("only the weight W is available inline", field="phi")
    if name != "marcinkiewicz_weak" and positional:
        raise DescriptorError(f"unexpected token '{positional[0]}'", field=name)
    if name == "lorentz" and "q" not in options and "p" in options:
        options["q"] = options["p"]
    if "assume_banach" in options:
        options["assume_banach"] = options["assume_banach"].lower() in ("1", "true", "yes")
    try:
        return create_space(name, **options)
    except DescriptorError:
        raise
    except (FixedPointError, ValueError) as exc:
        raise DescriptorError(str(exc), field=name) from exc


def _int_option(options: Dict[str, str], key: str, default: Optional[int]) -> int:
    value = options.get(key)
    if value is None:
        if default is None:
            raise DescriptorError("missing field", field=key)
        return default
    try:
        return int(value)
    except ValueError as exc:
        raise DescriptorError(f"not an integer: {value!r}", field=key) from exc


def _float_option(options: Dict[str, str], key: str, default: Optional[float]) -> float:
    value = options.get(key)
    if value is None:
        if default is None:
            raise DescriptorError("missing field", field=key)
        return default
    try:
        return float(value)
    except ValueError as exc:
        raise DescriptorError(f"not a number: {value!r}", field=key) from exc


def parse_profile(text: Union[str, Dict[str, Any]], n: Optional[int] = None) -> Union[RadialProfile, DecreasingProfile]:
    """JSON 文本 / 文件 / 字典 / 行内简写 → 径向或递减剖面"""
    if isinstance(text, dict) or _is_json(text):
        data = text if isinstance(text, dict) else _load_json(text)
        try:
            model = _profile_adapter.validate_python(data)
        except ValidationError as exc:
            raise DescriptorError(exc.errors()[0]["msg"], field=_location(exc)) from exc
        try:
            body = PiecewisePowerLog.from_records([_dump(piece) for piece in model.pieces])
            if isinstance(model, RadialModel):
                return RadialProfile(model.n, body, label=model.label)
            return DecreasingProfile(body, label=model.label)
        except FixedPointError as exc:
            raise DescriptorError(str(exc), field="pieces") from exc

    name, positional, options = _parse_shorthand(text)
    if positional:
        raise DescriptorError(f"unexpected token '{positional[0]}'", field=name)
    try:
        if name == "h":
            return h_profile(_int_option(options, "n", n))
        if name == "F":
            return F_profile(_int_option(options, "n", n))
        if name == "fixed":
            return fixed_point_profile(_int_option(options, "n", n))
        if name == "indicator":
            return indicator_profile(_float_option(options, "s", 1.0))
        if name == "ball":
            return ball_indicator(_float_option(options, "s", 1.0), _int_option(options, "n", n))
        if name == "two_step":
            return two_step_profile()
    except DescriptorError:
        raise
    except FixedPointError as exc:
        raise DescriptorError(str(exc), field=name) from exc
    raise DescriptorError(f"unknown profile '{name}'", field="kind")
