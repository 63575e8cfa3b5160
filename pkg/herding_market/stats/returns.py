import numpy as np

from .moments import StatisticsError


class ReturnSeries(object):
    def __init__(self, values, steps_per_day):
        """
        Daily log returns.
        :param values: array of daily log returns, each the sum of its day's per-step log-price increments
        :param steps_per_day: timesteps per day the returns were aggregated from
        """
        self.values = np.asarray(values, dtype=np.float64)
        self.steps_per_day = steps_per_day

    def __len__(self):
        return len(self.values)

    def percentage(self):
        """
        Simple returns exp(r) - 1, the form used for plotting daily price moves.
        """
        return np.expm1(self.values)


def daily_returns(log_prices, steps_per_day):
    """
    Sum consecutive blocks of steps_per_day log-price increments into daily returns. Day d is
    P(d k) - P((d - 1) k); a trailing partial day is dropped.
    :param log_prices: log prices starting at step 0
    :rtype: ReturnSeries
    """
    log_prices = np.asarray(log_prices, dtype=np.float64)
    if steps_per_day < 1:
        raise StatisticsError(
            "steps_per_day must be positive, got {}".format(steps_per_day)
        )
    if len(log_prices) < steps_per_day + 1:
        raise StatisticsError(
            "Need at least {} log prices for one day, got {}".format(
                steps_per_day + 1, len(log_prices)
            )
        )
    days = (len(log_prices) - 1) // steps_per_day
    day_marks = log_prices[: days * steps_per_day + 1 : steps_per_day]
    return ReturnSeries(np.diff(day_marks), steps_per_day)
