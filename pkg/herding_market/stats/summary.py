import numpy as np

from .moments import (
    StatisticsError,
    autocorrelation,
    excess_kurtosis,
    tail_exponent,
    volatility_decay_exponent,
)
from .returns import daily_returns


def _guarded(function, *args):
    """Statistics that the series does not support are reported as None."""
    try:
        return function(*args)
    except StatisticsError:
        return None


def return_statistics(returns, acf_lags, acf_max_lag, tail_fraction):
    """
    The stylized facts of one daily return series.
    :param returns: ReturnSeries
    :rtype: dict
    """
    volatility = np.abs(returns.values)
    return {
        "num_days": len(returns),
        "daily_std": float(np.std(returns.values)) if len(returns) else None,
        "excess_kurtosis": _guarded(excess_kurtosis, returns),
        "lag1_autocorrelation": _guarded(autocorrelation, returns.values, 1),
        "volatility_acf": {
            str(lag): _guarded(autocorrelation, volatility, lag) for lag in acf_lags
        },
        "volatility_acf_mean": _guarded(_mean_volatility_acf, volatility, acf_max_lag),
        "volatility_decay_exponent": _guarded(
            volatility_decay_exponent, returns, acf_max_lag
        ),
        "tail_exponent": _guarded(tail_exponent, returns, tail_fraction),
    }


def _mean_volatility_acf(volatility, max_lag):
    if max_lag < 1 or max_lag >= len(volatility):
        raise StatisticsError(
            "max_lag must lie in [1, {}), got {}".format(len(volatility), max_lag)
        )
    return float(
        np.mean([autocorrelation(volatility, lag) for lag in range(1, max_lag + 1)])
    )


def sentiment_statistics(sigma, window_steps):
    """
    max |sigma|, mean sigma and mean |sigma| over the trailing window_steps steps.
    """
    sigma = np.asarray(sigma, dtype=np.float64)
    if window_steps < 1 or window_steps > len(sigma):
        raise StatisticsError(
            "Window of {} steps does not fit a series of {} values".format(
                window_steps, len(sigma)
            )
        )
    window = sigma[-window_steps:]
    return {
        "window_steps": int(window_steps),
        "max_abs_sigma": float(np.max(np.abs(window))),
        "mean_sigma": float(np.mean(window)),
        "mean_abs_sigma": float(np.mean(np.abs(window))),
    }


def summarize(
    model_log_prices,
    baseline_log_prices,
    sigma,
    steps_per_day,
    window_steps,
    acf_lags=(1, 5, 10, 20, 50),
    acf_max_lag=50,
    tail_fraction=0.05,
):
    """
    Statistical fields of a run, computed from the stored series alone so that a summary can be rebuilt from
    prices.csv.

    :param model_log_prices: log prices of the model from step 0
    :param baseline_log_prices: log prices of the geometric Brownian baseline from step 0
    :param sigma: sentiment from step 0
    :param window_steps: trailing window for the sentiment statistics; clamped to the series length
    :rtype: dict
    """
    model_log_prices = np.asarray(model_log_prices, dtype=np.float64)
    baseline_log_prices = np.asarray(baseline_log_prices, dtype=np.float64)
    sigma = np.asarray(sigma, dtype=np.float64)

    model_returns = daily_returns(model_log_prices, steps_per_day)
    baseline_returns = daily_returns(baseline_log_prices, steps_per_day)

    return {
        "num_steps": len(model_log_prices) - 1,
        "steps_per_day": steps_per_day,
        "series_identical": bool(np.array_equal(model_log_prices, baseline_log_prices)),
        "max_log_price_gap": float(np.max(np.abs(model_log_prices - baseline_log_prices))),
        "model": return_statistics(model_returns, acf_lags, acf_max_lag, tail_fraction),
        "baseline": return_statistics(
            baseline_returns, acf_lags, acf_max_lag, tail_fraction
        ),
        "sentiment": sentiment_statistics(sigma, min(window_steps, len(sigma))),
    }
