import json

import pytest

from herding_market.cli.config import (
    ConfigError,
    RunConfig,
    config_from_dict,
    parse_config,
    write_config,
)


def write_json(tmp_path, content, name="config.json"):
    path = tmp_path / name
    path.write_text(content if isinstance(content, str) else json.dumps(content))
    return str(path)


def test_empty_config_gives_calibrated_defaults(tmp_path):
    config = parse_config(write_json(tmp_path, {}))
    model = config.model
    assert model.h == 0.000004
    assert model.num_agents == 100000
    assert model.kappa == 0.1
    assert model.alpha == 1.0
    assert model.delta == 0.2
    assert (model.reset_lo, model.reset_hi) == (0.05, 0.25)
    assert (model.herding_lo, model.herding_hi) == (25.0, 100.0)
    assert model.steps_per_day == 10
    assert config.horizon_years == 40
    assert config.window_years == 30
    assert config.cmax_values == [0, 5, 10, 20, 40, 60, 80, 100]
    assert config.runs_per_point == 10
    assert config.sweep_initial_sigma == 0.05


def test_overrides_are_applied(tmp_path):
    config = parse_config(
        write_json(tmp_path, {"kappa": 0.2, "num_agents": 1000, "seed": 12, "cmax_values": [5, 10]})
    )
    assert config.model.kappa == 0.2
    assert config.model.num_agents == 1000
    assert config.seed == 12
    assert config.cmax_values == [5, 10]


@pytest.mark.parametrize(
    "content, key",
    [
        ({"kappa": -1}, "kappa"),
        ({"h": 0}, "h"),
        ({"num_agents": 10.5}, "num_agents"),
        ({"alpha": True}, "alpha"),
        ({"temperature": 1.0}, "temperature"),
        ({"horizon_years": 10, "window_years": 20}, "window_years"),
        ({"cmax_values": 10}, "cmax_values"),
        ({"cmax_values": [10, -1]}, "cmax_values"),
        ({"tail_fraction": 0.7}, "tail_fraction"),
        ({"acf_lags": [0, 1]}, "acf_lags"),
        ({"log_level": "LOUD"}, "log_level"),
        ({"seed": -3}, "seed"),
        ({"weight_scheme": 3}, "weight_scheme"),
    ],
)
def test_invalid_values_name_the_key(tmp_path, content, key):
    with pytest.raises(ConfigError, match=key):
        parse_config(write_json(tmp_path, content))


def test_malformed_json(tmp_path):
    with pytest.raises(ConfigError, match="Malformed JSON"):
        parse_config(write_json(tmp_path, '{"kappa": 0.1,'))


def test_top_level_must_be_an_object(tmp_path):
    with pytest.raises(ConfigError):
        parse_config(write_json(tmp_path, "[1, 2]"))


def test_echo_round_trips_exactly(tmp_path):
    config = parse_config(write_json(tmp_path, {"h": 0.000004, "delta": 0.1 + 0.2}))
    echo = str(tmp_path / "echo.json")
    write_config(config, echo)

    with open(echo) as f:
        resolved = json.load(f)
    assert resolved["h"] == 0.000004
    assert resolved["delta"] == 0.1 + 0.2
    assert parse_config(echo).to_dict() == config.to_dict()


def test_echo_holds_every_key(tmp_path):
    echo = str(tmp_path / "echo.json")
    write_config(RunConfig(), echo)
    with open(echo) as f:
        resolved = json.load(f)
    assert set(resolved) == set(RunConfig().to_dict())
    assert "num_agents" in resolved and "snapshot_times" in resolved


def test_replace_validates():
    config = config_from_dict({})
    assert config.replace(seed=5, alpha=0.0).model.alpha == 0.0
    with pytest.raises(ConfigError, match="delta"):
        config.replace(delta=-1.0)


def test_fingerprint_ignores_output_location():
    a = config_from_dict({"output_dir": "a"})
    b = config_from_dict({"output_dir": "b"})
    c = config_from_dict({"seed": 1})
    assert a.fingerprint() == b.fingerprint()
    assert a.fingerprint() != c.fingerprint()
