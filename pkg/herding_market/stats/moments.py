"""
Estimators for the stylized facts of returns: excess kurtosis (fat tails), autocorrelation of absolute returns
(volatility clustering) and its power-law decay, and the Hill tail exponent.

Conventions:
    excess_kurtosis   biased (population) estimator m4 / m2^2 - 3
    autocorrelation   sum((x_t - m)(x_{t+k} - m)) / sum((x_t - m)^2), m the full-sample mean, so lag 0 is 1 and
                      an alternating +1, -1 series of length n gives -(n - 1) / n at lag 1
    tail_exponent     Hill estimator on |x|: k = floor(n tail_fraction) largest values,
                      alpha = 1 / mean(ln(X_(i) / X_(k))), X_(k) the (k+1)-th largest value
"""

import math

import numpy as np
from scipy import stats as scipy_stats

MIN_TAIL_SAMPLES = 50


class StatisticsError(ValueError):
    """The input does not support the requested statistic (too short, zero variance, empty tail...)."""


def _as_values(values):
    values = getattr(values, "values", values)
    return np.asarray(values, dtype=np.float64)


def excess_kurtosis(values):
    x = _as_values(values)
    if len(x) < 4:
        raise StatisticsError(
            "Excess kurtosis needs at least 4 values, got {}".format(len(x))
        )
    if not np.var(x) > 0:
        raise StatisticsError("Excess kurtosis is undefined for zero variance")
    return float(scipy_stats.kurtosis(x, fisher=True, bias=True))


def autocorrelation(values, lag):
    x = _as_values(values)
    n = len(x)
    if lag < 0 or lag >= n:
        raise StatisticsError(
            "Lag must lie in [0, {}) for a series of length {}, got {}".format(n, n, lag)
        )
    d = x - x.mean()
    denominator = float(np.dot(d, d))
    if not denominator > 0:
        raise StatisticsError("Autocorrelation is undefined for zero variance")
    return float(np.dot(d[: n - lag], d[lag:])) / denominator


def volatility_acf(returns, max_lag):
    """
    Autocorrelation of |returns| at lags 1..max_lag.
    :param returns: ReturnSeries or array of returns
    :return: array of length max_lag
    """
    volatility = np.abs(_as_values(returns))
    if max_lag < 1 or max_lag >= len(volatility):
        raise StatisticsError(
            "max_lag must lie in [1, {}), got {}".format(len(volatility), max_lag)
        )
    return np.array([autocorrelation(volatility, lag) for lag in range(1, max_lag + 1)])


def volatility_decay_exponent(returns, max_lag):
    """
    Exponent beta of a power-law fit ACF(|r|)(k) ~ k^(-beta), least squares in log-log over the lags with a
    positive autocorrelation.
    """
    acf = volatility_acf(returns, max_lag)
    lags = np.arange(1, max_lag + 1)
    positive = acf > 0
    if np.count_nonzero(positive) < 2:
        raise StatisticsError(
            "Need at least 2 lags with positive volatility autocorrelation, got {}".format(
                np.count_nonzero(positive)
            )
        )
    slope = np.polyfit(np.log(lags[positive]), np.log(acf[positive]), 1)[0]
    return float(-slope)


def tail_exponent(values, tail_fraction):
    x = _as_values(values)
    if not 0 < tail_fraction <= 0.5:
        raise StatisticsError(
            "tail_fraction must lie in (0, 0.5], got {}".format(tail_fraction)
        )
    k = int(math.floor(len(x) * tail_fraction))
    if k < MIN_TAIL_SAMPLES:
        raise StatisticsError(
            "Hill estimator needs at least {} tail samples, got {}".format(
                MIN_TAIL_SAMPLES, k
            )
        )

    ordered = np.sort(np.abs(x))[::-1]
    threshold = ordered[k]
    if not threshold > 0:
        raise StatisticsError("Tail threshold is zero, too many zero values")

    mean_log_excess = float(np.mean(np.log(ordered[:k] / threshold)))
    if not mean_log_excess > 0:
        raise StatisticsError("Tail is flat, exponent undefined")
    return 1.0 / mean_log_excess
