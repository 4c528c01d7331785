"""
JSON codecs.

Every rational is written as a "num/den" string. Dumps are deterministic:
pieces and branches are already sorted by left endpoint and keys are sorted.
"""
import json
from dataclasses import fields, is_dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict

from .errors import ParseError
from .exact import BinaryScaled, Bracket, format_rational, parse_rational
from .measure_core import Branch, Interval, IntervalSet, PiecewiseTranslation, StepFunction
from .towers import Tower


### step functions and transformations ###

def step_function_to_dict(f: StepFunction) -> Dict[str, Any]:
    return {"pieces": [
        {"lo": format_rational(interval.lo), "hi": format_rational(interval.hi),
         "value": format_rational(value)}
        for interval, value in f.pieces
    ]}


def step_function_from_dict(data) -> StepFunction:
    try:
        pieces = data["pieces"]
        return StepFunction(
            (Interval(parse_rational(p["lo"]), parse_rational(p["hi"])), parse_rational(p["value"]))
            for p in pieces
        )
    except (KeyError, TypeError) as e:
        raise ParseError(f"malformed step function: {e}")


def transformation_to_dict(T: PiecewiseTranslation) -> Dict[str, Any]:
    return {"branches": [
        {"lo": format_rational(b.source.lo), "hi": format_rational(b.source.hi),
         "offset": format_rational(b.offset)}
        for b in T.branches
    ]}


def transformation_from_dict(data) -> PiecewiseTranslation:
    try:
        return PiecewiseTranslation(
            Branch(Interval(parse_rational(b["lo"]), parse_rational(b["hi"])),
                   parse_rational(b["offset"]))
            for b in data["branches"]
        )
    except (KeyError, TypeError) as e:
        raise ParseError(f"malformed transformation: {e}")


def interval_set_to_list(region: IntervalSet):
    return [[format_rational(i.lo), format_rational(i.hi)] for i in region]


def interval_set_from_list(data) -> IntervalSet:
    try:
        return IntervalSet(Interval(parse_rational(lo), parse_rational(hi)) for lo, hi in data)
    except (TypeError, ValueError) as e:
        raise ParseError(f"malformed interval list: {e}")


### towers ###

def tower_to_dict(tower: Tower) -> Dict[str, Any]:
    return {
        "height": tower.height,
        "levels": [interval_set_to_list(level) for level in tower.levels],
        "map": transformation_to_dict(tower.map),
    }


def tower_from_dict(data) -> Tower:
    try:
        levels = [interval_set_from_list(level) for level in data["levels"]]
        if data.get("height", len(levels)) != len(levels):
            raise ParseError(f"tower height {data['height']} does not match {len(levels)} levels")
        return Tower(tuple(levels), transformation_from_dict(data["map"]))
    except KeyError as e:
        raise ParseError(f"malformed tower: missing {e}")


### reports and certificates ###

def to_jsonable(value):
    """Convert library values (dataclasses included) into plain JSON data."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, BinaryScaled):
        return str(value)
    if isinstance(value, Bracket):
        return {"lower": format_rational(value.lower), "upper": format_rational(value.upper)}
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, StepFunction):
        return step_function_to_dict(value)
    if isinstance(value, PiecewiseTranslation):
        return transformation_to_dict(value)
    if isinstance(value, IntervalSet):
        return interval_set_to_list(value)
    if isinstance(value, Tower):
        return tower_to_dict(value)
    if hasattr(value, "to_dict"):
        return value.to_dict()
    if is_dataclass(value):
        return {f.name: to_jsonable(getattr(value, f.name)) for f in fields(value)}
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(value) -> str:
    return json.dumps(to_jsonable(value), sort_keys=True, indent=2) + "\n"


def load_json(path) -> Any:
    try:
        with open(Path(path), "r", encoding="utf-8") as handle:
            return json.load(handle)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON ({e})")


def load_step_function(path) -> StepFunction:
    return step_function_from_dict(load_json(path))


def load_transformation(path) -> PiecewiseTranslation:
    return transformation_from_dict(load_json(path))
