"""
Run configuration. A config file is a flat JSON object holding any subset of the model parameters and the
experiment fields; missing keys take their defaults, unknown keys are rejected.
"""

import json

from herding_market.core import sim_logging
from herding_market.core.message import SimConfMessage
from herding_market.core.utils import atomic_write, config_hash
from herding_market.market.params import (
    InvalidParameterError,
    ModelParams,
    check_int,
    check_real,
)

MODEL_KEYS = tuple(ModelParams().to_dict())


class ConfigError(ValueError):
    """Malformed configuration. The message names the offending key."""


class RunConfig(SimConfMessage):
    def __init__(
        self,
        model=None,
        horizon_years=40,
        window_years=30,
        days_per_year=250,
        cmax_values=(0, 5, 10, 20, 40, 60, 80, 100),
        runs_per_point=10,
        sweep_initial_sigma=0.05,
        seed=0,
        output_dir="output",
        snapshot_times=(),
        snapshot_sigma_tolerance=0.05,
        acf_lags=(1, 5, 10, 20, 50),
        acf_max_lag=50,
        tail_fraction=0.05,
        workers=1,
        log_level="INFO",
    ):
        """
        :param model: ModelParams, the calibrated defaults when None
        :param horizon_years: length of a run
        :param window_years: trailing window for max |sigma|
        :param days_per_year: trading days per year
        :param cmax_values: C_max grid of the sweep command
        :param runs_per_point: runs per C_max
        :param sweep_initial_sigma: initial sentiment of every sweep run
        :param seed: experiment seed
        :param output_dir: directory for all output files
        :param snapshot_times: times in years for threshold density snapshots
        :param snapshot_sigma_tolerance: a snapshot waits for a step with |sigma| below this
        :param acf_lags: lags of the volatility autocorrelation reported in summary.json
        :param acf_max_lag: largest lag for the mean volatility autocorrelation and its decay exponent
        :param tail_fraction: share of the largest absolute returns used by the tail exponent
        :param workers: worker processes of the sweep command
        :param log_level: name of the log level
        """
        SimConfMessage.__init__(self)
        self.model = model if model is not None else ModelParams()
        self.horizon_years = horizon_years
        self.window_years = window_years
        self.days_per_year = days_per_year
        self.cmax_values = list(cmax_values)
        self.runs_per_point = runs_per_point
        self.sweep_initial_sigma = sweep_initial_sigma
        self.seed = seed
        self.output_dir = output_dir
        self.snapshot_times = list(snapshot_times)
        self.snapshot_sigma_tolerance = snapshot_sigma_tolerance
        self.acf_lags = list(acf_lags)
        self.acf_max_lag = acf_max_lag
        self.tail_fraction = tail_fraction
        self.workers = workers
        self.log_level = log_level

    def experiment_dict(self):
        return {
            "horizon_years": self.horizon_years,
            "window_years": self.window_years,
            "days_per_year": self.days_per_year,
            "cmax_values": list(self.cmax_values),
            "runs_per_point": self.runs_per_point,
            "sweep_initial_sigma": self.sweep_initial_sigma,
            "seed": self.seed,
            "output_dir": self.output_dir,
            "snapshot_times": list(self.snapshot_times),
            "snapshot_sigma_tolerance": self.snapshot_sigma_tolerance,
            "acf_lags": list(self.acf_lags),
            "acf_max_lag": self.acf_max_lag,
            "tail_fraction": self.tail_fraction,
            "workers": self.workers,
            "log_level": self.log_level,
        }

    def to_dict(self):
        """
        The fully resolved configuration, in the flat layout of a config file.
        """
        resolved = self.model.to_dict()
        resolved.update(self.experiment_dict())
        return resolved

    def fingerprint(self):
        """Hash of the resolved configuration, leaving out the fields that cannot change any result."""
        resolved = self.to_dict()
        for key in ("output_dir", "log_level", "workers"):
            resolved.pop(key)
        return config_hash(resolved)

    def replace(self, **changes):
        """
        A copy with some fields replaced, model or experiment, validated.
        :rtype: RunConfig
        """
        resolved = self.to_dict()
        resolved.update(changes)
        return config_from_dict(resolved)

    def validate(self):
        """
        :raises ConfigError: naming the first invalid key
        """
        try:
            self.model.validate()
            check_real("horizon_years", self.horizon_years, lower=0.0, strict=True)
            check_real("window_years", self.window_years, lower=0.0, strict=True)
            if self.window_years > self.horizon_years:
                raise InvalidParameterError(
                    "window_years ({}) must not exceed horizon_years ({})".format(
                        self.window_years, self.horizon_years
                    )
                )
            check_int("days_per_year", self.days_per_year, lower=1)
            _check_list("cmax_values", self.cmax_values, check_real, lower=0.0)
            if not self.cmax_values:
                raise InvalidParameterError("cmax_values must not be empty")
            check_int("runs_per_point", self.runs_per_point, lower=1)
            check_real(
                "sweep_initial_sigma", self.sweep_initial_sigma, lower=-1.0, upper=1.0
            )
            check_int("seed", self.seed, lower=0)
            if not isinstance(self.output_dir, str) or not self.output_dir:
                raise InvalidParameterError(
                    "output_dir must be a non-empty string, got {!r}".format(
                        self.output_dir
                    )
                )
            _check_list(
                "snapshot_times",
                self.snapshot_times,
                check_real,
                lower=0.0,
                upper=self.horizon_years,
            )
            check_real(
                "snapshot_sigma_tolerance",
                self.snapshot_sigma_tolerance,
                lower=0.0,
                strict=True,
            )
            _check_list("acf_lags", self.acf_lags, check_int, lower=1)
            check_int("acf_max_lag", self.acf_max_lag, lower=1)
            check_real("tail_fraction", self.tail_fraction, lower=0.0, upper=0.5, strict=True)
            check_int("workers", self.workers, lower=1)
            if not isinstance(self.log_level, str):
                raise InvalidParameterError(
                    "log_level must be a level name, got {!r}".format(self.log_level)
                )
            try:
                sim_logging.get_level(self.log_level)
            except ValueError as e:
                raise InvalidParameterError("log_level: {}".format(e))
        except InvalidParameterError as e:
            raise ConfigError(str(e))


def _check_list(name, values, check, **bounds):
    if not isinstance(values, (list, tuple)):
        raise InvalidParameterError(
            "{} must be a list, got {!r}".format(name, values)
        )
    for value in values:
        check(name, value, **bounds)


def config_from_dict(mapping):
    """
    Build and validate a RunConfig from a flat mapping of overrides.
    :rtype: RunConfig
    """
    if not isinstance(mapping, dict):
        raise ConfigError(
            "Configuration must be a JSON object, got {}".format(type(mapping).__name__)
        )

    experiment_keys = RunConfig().experiment_dict()
    model_fields = {}
    experiment_fields = {}
    for key, value in mapping.items():
        if key in MODEL_KEYS:
            model_fields[key] = value
        elif key in experiment_keys:
            experiment_fields[key] = value
        else:
            raise ConfigError("Unknown configuration key {!r}".format(key))

    # lists must stay lists so that a scalar is reported instead of iterated
    for key in ("cmax_values", "snapshot_times", "acf_lags"):
        if key in experiment_fields and not isinstance(experiment_fields[key], list):
            raise ConfigError(
                "{} must be a list, got {!r}".format(key, experiment_fields[key])
            )
    weight_scheme = model_fields.get("weight_scheme")
    if weight_scheme is not None and not isinstance(weight_scheme, (str, list)):
        raise ConfigError(
            "weight_scheme must be a name or a list of weights, got {!r}".format(
                weight_scheme
            )
        )

    config = RunConfig(model=ModelParams(**model_fields), **experiment_fields)
    config.validate()
    return config


def parse_config(path):
    """
    Read a JSON config file. Missing keys take the calibrated defaults, so an empty object is a valid config.
    :param path: path of the JSON file
    :rtype: RunConfig
    """
    try:
        with open(path, encoding="utf-8") as f:
            mapping = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError("Malformed JSON in {}: {}".format(path, e))
    return config_from_dict(mapping)


def write_config(config, path):
    """
    Write the resolved configuration echo, readable again by parse_config.
    """
    with atomic_write(path) as f:
        json.dump(config.to_dict(), f, indent=2, sort_keys=True)
        f.write("\n")
