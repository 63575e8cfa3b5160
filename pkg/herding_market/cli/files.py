"""
Output files. Every CSV starts with a header row and writes floats with 17 significant digits, so reading a
file back gives the exact doubles that were written. All files are written atomically.

    prices.csv            step, model_log_price, baseline_log_price, sigma, switches (one row per step, from 0)
    daily_returns.csv     day, model_return_pct, baseline_return_pct (exp(r) - 1 of the daily log returns)
    threshold_density_<step>.csv
                          bin_lo, bin_hi, state0_lower, state0_upper, state1_lower, state1_upper
    sweep.csv             c_max, mean_max_abs_sigma, run_values, alpha, delta, seeds
    summary.json          statistics, resolved config, seed and config hash
"""

import json
import os

import numpy as np
import pandas as pd

from herding_market.core.utils import FLOAT_FORMAT, atomic_write, format_float

PRICE_COLUMNS = ("step", "model_log_price", "baseline_log_price", "sigma", "switches")
RETURN_COLUMNS = ("day", "model_return_pct", "baseline_return_pct")
SWEEP_COLUMNS = ("c_max", "mean_max_abs_sigma", "run_values", "alpha", "delta", "seeds")


class FormatError(ValueError):
    """A stored file does not have the documented layout. The message names the offending column."""


def _write_frame(frame, path):
    with atomic_write(path, newline="") as f:
        frame.to_csv(f, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def write_prices(output, path):
    """
    :param output: SimulationOutput
    """
    frame = pd.DataFrame(
        {
            "step": np.arange(output.num_steps + 1, dtype=np.int64),
            "model_log_price": output.model_log_prices,
            "baseline_log_price": output.baseline_log_prices,
            "sigma": output.sigma,
            "switches": output.switches,
        },
        columns=list(PRICE_COLUMNS),
    )
    _write_frame(frame, path)


def write_daily_returns(model_returns, baseline_returns, path):
    """
    :param model_returns: ReturnSeries of the model
    :param baseline_returns: ReturnSeries of the baseline
    """
    frame = pd.DataFrame(
        {
            "day": np.arange(1, len(model_returns) + 1, dtype=np.int64),
            "model_return_pct": model_returns.percentage(),
            "baseline_return_pct": baseline_returns.percentage(),
        },
        columns=list(RETURN_COLUMNS),
    )
    _write_frame(frame, path)


def write_threshold_density(density, path):
    _write_frame(density.to_frame(), path)


def write_sweep(result, path):
    """
    One row per C_max. run_values and seeds are ';'-joined lists, a seed written as seed:substream.
    :param result: SweepResult
    """
    rows = []
    for point in result.points:
        rows.append(
            {
                "c_max": format_float(point.c_max),
                "mean_max_abs_sigma": format_float(point.mean),
                "run_values": ";".join(format_float(v) for v in point.run_values),
                "alpha": format_float(result.alpha),
                "delta": format_float(result.delta),
                "seeds": ";".join("{}:{}".format(s, sub) for s, sub in point.seeds),
            }
        )
    _write_frame(pd.DataFrame(rows, columns=list(SWEEP_COLUMNS)), path)


def write_summary(summary, path):
    with atomic_write(path) as f:
        json.dump(summary, f, indent=2, sort_keys=True)
        f.write("\n")


def read_summary(path):
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def read_prices(path, num_steps=None):
    """
    Read a prices.csv back, checking the layout.
    :param num_steps: steps of the run that wrote the file, when known. Any other number of rows is
        rejected.
    :return: DataFrame with the documented columns, float columns as float64
    :raises FormatError: naming the offending column
    """
    if not os.path.isfile(path):
        raise FormatError("No prices file at {}".format(path))
    try:
        frame = pd.read_csv(path, float_precision="round_trip")
    except pd.errors.EmptyDataError:
        raise FormatError("{} is empty".format(path))
    except pd.errors.ParserError as e:
        raise FormatError("{} is not a valid prices file: {}".format(path, e))

    columns = list(frame.columns)
    for expected, actual in zip(PRICE_COLUMNS, columns):
        if expected != actual:
            raise FormatError(
                "Column {!r} found where {!r} was expected in {}".format(actual, expected, path)
            )
    if len(columns) < len(PRICE_COLUMNS):
        raise FormatError(
            "Missing column {!r} in {}".format(PRICE_COLUMNS[len(columns)], path)
        )
    if len(columns) > len(PRICE_COLUMNS):
        raise FormatError(
            "Unexpected column {!r} in {}".format(columns[len(PRICE_COLUMNS)], path)
        )

    if len(frame) == 0:
        raise FormatError("{} holds no rows".format(path))

    for column in PRICE_COLUMNS:
        values = pd.to_numeric(frame[column], errors="coerce")
        if values.isna().any():
            row = int(np.flatnonzero(values.isna().to_numpy())[0])
            raise FormatError(
                "Column {!r} has a missing or non-numeric value in row {}".format(column, row)
            )
        frame[column] = values

    if not np.array_equal(frame["step"].to_numpy(), np.arange(len(frame))):
        raise FormatError("Column 'step' must count 0, 1, 2, ... without gaps")
    if num_steps is not None and len(frame) != num_steps + 1:
        raise FormatError(
            "Column 'step' ends at {} but the run has {} steps, {} is truncated or does not belong to its config".format(
                len(frame) - 1, num_steps, path
            )
        )

    for column in ("model_log_price", "baseline_log_price", "sigma"):
        frame[column] = frame[column].astype(np.float64)
    return frame
