import pytest
from numpy.testing import assert_allclose
from pydantic import ValidationError

from unit_field_lab.config import (
    expand_range,
    load_config_file,
    merge_overrides,
    parse_config_text,
    parse_value,
)
from unit_field_lab.errors import ConfigurationError
from unit_field_lab.models import RunConfig


class TestParseValue:
    @pytest.mark.parametrize(
        "text,expected",
        [
            ("3", 3),
            ("-2.5e-1", -0.25),
            (".5", 0.5),
            ("true", True),
            ("False", False),
            ('"lambda:2"', "lambda:2"),
            ("lambda:2", "lambda:2"),
            ("solid_torus:0.5", "solid_torus:0.5"),
            ("[64, 64, 48]", [64, 64, 48]),
            ('["a, b", c]', ["a, b", "c"]),
            ("[]", []),
        ],
    )
    def test_scalars_and_lists(self, text, expected):
        assert parse_value(text) == expected

    def test_range(self):
        assert_allclose(parse_value("0.05:0.5:0.05"), [0.05 * i for i in range(1, 11)])
        assert parse_value("1:4:1") == [1.0, 2.0, 3.0, 4.0]

    def test_range_end_within_half_a_step(self):
        assert_allclose(expand_range(1.0, 2.04, 0.5), [1.0, 1.5, 2.0])

    @pytest.mark.parametrize("args", [(0.0, 1.0, 0.0), (1.0, 0.0, 0.5), (0.0, float("inf"), 1.0)])
    def test_bad_ranges(self, args):
        with pytest.raises(ConfigurationError):
            expand_range(*args)

    @pytest.mark.parametrize("text", ["", '"open', "[1, 2", "['a, 1]"])
    def test_malformed(self, text):
        with pytest.raises(ConfigurationError):
            parse_value(text)


class TestConfigFile:
    def test_comments_and_blank_lines(self):
        values = parse_config_text('# run\nfield = "hopf"  # the flow\n\nnodes = [8, 8, 48]\nlabel = "a # b"\n')
        assert values == {"field": "hopf", "nodes": [8, 8, 48], "label": "a # b"}

    def test_duplicate_key(self):
        with pytest.raises(ConfigurationError, match="cfg:2: duplicate key 'k'"):
            parse_config_text("k = 1\nk = 2\n", source="cfg")

    def test_missing_separator(self):
        with pytest.raises(ConfigurationError, match="cfg:1: expected 'key = value'"):
            parse_config_text("field hopf\n", source="cfg")

    def test_bad_value_carries_the_line(self):
        with pytest.raises(ConfigurationError, match="cfg:3: Unterminated list"):
            parse_config_text("a = 1\n\nb = [1, 2\n", source="cfg")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError, match="Cannot read config file"):
            load_config_file(tmp_path / "absent.cfg")

    def test_merge_overrides_ignores_unset_flags(self):
        merged = merge_overrides({"field": "hopf", "k": 2}, {"field": "lambda:2", "k": None, "seed": 3})
        assert merged == {"field": "lambda:2", "k": 2, "seed": 3}


class TestRunConfig:
    def test_defaults(self):
        config = RunConfig(command="verify")
        assert config.suite == ["all"]
        assert config.t == [0.1, 0.25, 0.5]
        assert config.quadrature().nodes_per_axis == [64, 64, 48]

    def test_from_file_values(self):
        values = parse_config_text("command = verify\nsuite = 1.4\nt = 0.1\nlambda = 1:2:0.5\nnodes = [8, 8, 48]\n")
        config = RunConfig(**values)
        assert config.suite == ["1.4"]
        assert config.t == [0.1]
        assert config.lambdas == [1.0, 1.5, 2.0]
        assert config.echo()["lambda"] == [1.0, 1.5, 2.0]

    def test_unknown_key(self):
        with pytest.raises(ValidationError, match="colour"):
            RunConfig(command="volume", colour="blue")

    @pytest.mark.parametrize(
        "overrides",
        [
            {"command": "plot"},
            {"k": 0},
            {"k": 4},
            {"t": [-0.1]},
            {"lambda": [0.5]},
            {"n_jobs": 0},
            {"suite": ["2.1"]},
            {"gram": "partial"},
            {"nodes": [0, 8, 8]},
        ],
    )
    def test_invalid(self, overrides):
        with pytest.raises(ValidationError):
            RunConfig(**{"command": "verify", **overrides})

    def test_frozen(self):
        config = RunConfig(command="volume")
        with pytest.raises(ValidationError):
            config.field = "lambda:2"
