import pytest
from lv_waves.config import RunConfig, load_config_file, parse_range, parse_speeds
from lv_waves.exceptions import ConfigError
from lv_waves.serializers import MissingSerializer, registry


def test_defaults():
    cfg = RunConfig()
    assert cfg.L == 60.0 and cfg.h == 0.02
    assert cfg.tol == 0.03
    assert cfg.report_format == "json"
    assert cfg.speeds == ()


def test_parse_speeds():
    assert parse_speeds("1.5, 2,3") == (1.5, 2.0, 3.0)
    with pytest.raises(ConfigError):
        parse_speeds("1.5,fast")


def test_parse_range():
    assert parse_range("1.5:2.5:0.25") == (1.5, 1.75, 2.0, 2.25, 2.5)
    assert parse_range("1:1.9:0.5") == (1.0, 1.5)


@pytest.mark.parametrize("text", ["1:2", "1:2:0", "2:1:0.5", "a:b:c"])
def test_parse_range_rejects(text):
    with pytest.raises(ConfigError):
        parse_range(text)


def test_precedence(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("a1 = 0.5  # competition\na2 = 2\nr = 0.5\nL = 40\nh = 0.05\n")
    cfg = RunConfig.from_sources(load_config_file(path), {"L": 30.0, "h": None})
    assert cfg.L == 30.0
    assert cfg.h == 0.05
    assert cfg.params().a1 == 0.5


def test_unknown_key_in_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("a1 = 0.5\nspeed = 2\n")
    with pytest.raises(ConfigError, match="unknown config key"):
        load_config_file(path)


def test_bad_value_in_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("L = wide\n")
    with pytest.raises(ConfigError, match="bad value"):
        load_config_file(path)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config_file(tmp_path / "absent.cfg")


def test_unknown_flag():
    with pytest.raises(ConfigError):
        RunConfig.from_sources({}, {"colour": "red"})


@pytest.mark.parametrize(
    "values",
    [
        {"h": 0.0},
        {"L": -1.0},
        {"jobs": 0},
        {"level": 1.0},
        {"burn_in": 1.0},
        {"init": "gaussian"},
        {"report_format": "yaml"},
        {"a1": float("nan")},
        {"T": -1.0},
    ],
)
def test_invalid_values(values):
    with pytest.raises(ConfigError):
        RunConfig(**values)


def test_missing_parameters():
    with pytest.raises(ConfigError, match="a2, r"):
        RunConfig(a1=0.5).params()


def test_require_speed():
    with pytest.raises(ConfigError):
        RunConfig().require_speed()
    assert RunConfig(c=2.0).require_speed() == 2.0


def test_report_format_needs_its_package(mocker):
    class Missing(MissingSerializer):
        exception = ImportError("No module named 'msgpack'")

    mocker.patch.dict(registry._registry, {"msgpack": Missing})
    with pytest.raises(ConfigError, match="optional package"):
        RunConfig(report_format="msgpack")
