"""
Test suite for serialization.py
"""
import json
from fractions import Fraction as F

import pytest

from src.errors import ParseError
from src.exact import BinaryScaled, Bracket
from src.measure_core import IntervalSet, PiecewiseTranslation, StepFunction
from src.serialization import (
    dumps,
    interval_set_from_list,
    load_step_function,
    load_transformation,
    step_function_from_dict,
    step_function_to_dict,
    to_jsonable,
    tower_from_dict,
    tower_to_dict,
    transformation_from_dict,
    transformation_to_dict,
)
from src.solver import verify
from src.towers import Tower


class TestCodecs:
    """Test the num/den JSON shapes"""

    def test_step_function_shape(self, halves):
        assert step_function_to_dict(halves) == {"pieces": [
            {"lo": "0/1", "hi": "1/2", "value": "1/1"},
            {"lo": "1/2", "hi": "1/1", "value": "-1/1"},
        ]}

    def test_transformation_shape(self, rotation_third):
        data = transformation_to_dict(rotation_third)
        assert data["branches"][0] == {"lo": "0/1", "hi": "2/3", "offset": "1/3"}
        assert transformation_from_dict(data) == rotation_third

    def test_step_function_from_dict(self, four_step):
        assert step_function_from_dict(step_function_to_dict(four_step)) == four_step

    def test_tower(self):
        tower = Tower.stack(IntervalSet.unit().split_equal(3))
        data = tower_to_dict(tower)
        assert data["height"] == 3
        assert tower_from_dict(data) == tower

    def test_to_jsonable_values(self):
        assert to_jsonable(F(3, 4)) == "3/4"
        assert to_jsonable(5) == 5
        assert to_jsonable(True) is True
        assert to_jsonable(Bracket(1, 2)) == {"lower": "1/1", "upper": "2/1"}
        assert to_jsonable(BinaryScaled.power_of_two(100)) == "2^(100/1)"
        assert to_jsonable(BinaryScaled.power_of_two(3)) == "8/1"
        assert to_jsonable({"a": [F(1, 2)]}) == {"a": ["1/2"]}

    def test_to_jsonable_rejects_unknown(self):
        with pytest.raises(TypeError):
            to_jsonable(object())


class TestParseErrors:
    """Test malformed input is reported as ParseError"""

    def test_missing_keys(self):
        with pytest.raises(ParseError):
            step_function_from_dict({"values": []})
        with pytest.raises(ParseError):
            transformation_from_dict({"branches": [{"lo": "0/1"}]})

    def test_float_values(self):
        with pytest.raises(ParseError):
            step_function_from_dict({"pieces": [{"lo": 0.0, "hi": "1/2", "value": "1"}]})

    def test_bad_interval(self):
        with pytest.raises(ParseError):
            interval_set_from_list([["1/2", "1/4"]])

    def test_tower_height_mismatch(self):
        data = tower_to_dict(Tower.stack(IntervalSet.unit().split_equal(2)))
        data["height"] = 3
        with pytest.raises(ParseError):
            tower_from_dict(data)

    def test_invalid_json_file(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ParseError):
            load_step_function(path)


class TestFiles:
    """Test loading from disk and deterministic dumps"""

    def test_load_files(self, tmp_path, halves, swap):
        f_path = tmp_path / "f.json"
        t_path = tmp_path / "t.json"
        f_path.write_text(dumps(halves), encoding="utf-8")
        t_path.write_text(dumps(swap), encoding="utf-8")
        assert load_step_function(f_path) == halves
        assert load_transformation(t_path) == swap

    def test_dumps_is_deterministic(self, halves, swap):
        g = StepFunction.indicator(IntervalSet.span(0, F(1, 2)))
        certificate = verify(halves, swap, g)
        first = dumps(certificate)
        assert first == dumps(verify(halves, swap, g))
        data = json.loads(first)
        assert data["status"] == "certified"
        assert list(data) == sorted(data)
        assert transformation_from_dict(data["transformation"]) == PiecewiseTranslation.swap_halves()
