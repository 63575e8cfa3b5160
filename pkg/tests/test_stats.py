import numpy as np
import pytest
from scipy import stats as scipy_stats

from herding_market.market import ModelParams, init_market
from herding_market.market.state import HOLDING, NOT_HOLDING
from herding_market.stats import (
    DEFAULT_BIN_EDGES,
    ReturnSeries,
    StatisticsError,
    autocorrelation,
    daily_returns,
    excess_kurtosis,
    sentiment_statistics,
    summarize,
    tail_exponent,
    threshold_density,
    volatility_acf,
    volatility_decay_exponent,
)
from herding_market.stochastic import RandomStream


def naive_kurtosis(x):
    n = len(x)
    mean = sum(x) / n
    m2 = 0.0
    m4 = 0.0
    for value in x:
        m2 += (value - mean) ** 2
        m4 += (value - mean) ** 4
    m2 /= n
    m4 /= n
    return m4 / m2**2 - 3.0


def naive_autocorrelation(x, lag):
    n = len(x)
    mean = sum(x) / n
    numerator = 0.0
    for t in range(n - lag):
        numerator += (x[t] - mean) * (x[t + lag] - mean)
    denominator = 0.0
    for t in range(n):
        denominator += (x[t] - mean) ** 2
    return numerator / denominator


def test_daily_returns_constant_prices():
    returns = daily_returns(np.full(101, 0.3), 10)
    assert len(returns) == 10
    assert np.all(returns.values == 0.0)


def test_daily_returns_single_step_days():
    log_prices = np.array([0.0, 0.1, -0.05, 0.2])
    assert daily_returns(log_prices, 1).values == pytest.approx([0.1, -0.15, 0.25])


def test_daily_returns_sum_steps_and_drop_partial_day():
    increments = RandomStream(0).gaussians(35) * 0.01
    log_prices = np.concatenate([[0.0], np.cumsum(increments)])
    returns = daily_returns(log_prices, 10)
    assert len(returns) == 3
    for day in range(3):
        assert returns.values[day] == pytest.approx(
            increments[day * 10 : (day + 1) * 10].sum(), abs=1e-12
        )


def test_daily_returns_too_short():
    with pytest.raises(StatisticsError):
        daily_returns(np.zeros(10), 10)


def test_percentage_returns():
    returns = ReturnSeries([0.0, np.log(1.1)], 10)
    assert returns.percentage() == pytest.approx([0.0, 0.1])


def test_excess_kurtosis():
    alternating = np.array([1.0, -1.0] * 50)
    assert excess_kurtosis(alternating) == pytest.approx(-2.0)

    assert abs(excess_kurtosis(RandomStream(0).gaussians(10**6))) < 0.05

    with pytest.raises(StatisticsError):
        excess_kurtosis(np.full(10, 3.0))
    with pytest.raises(StatisticsError):
        excess_kurtosis([1.0, 2.0, 3.0])


def test_autocorrelation():
    x = RandomStream(1).gaussians(200)
    assert autocorrelation(x, 0) == pytest.approx(1.0)

    alternating = np.array([1.0, -1.0] * 50)
    n = len(alternating)
    assert autocorrelation(alternating, 1) == pytest.approx(-(n - 1) / n)

    assert abs(autocorrelation(RandomStream(2).gaussians(10**5), 1)) < 0.01

    with pytest.raises(StatisticsError):
        autocorrelation(np.ones(10), 1)
    with pytest.raises(StatisticsError):
        autocorrelation(x, 200)


def test_estimators_match_brute_force():
    x = RandomStream(3).gaussians(1000) ** 3
    assert excess_kurtosis(x) == pytest.approx(naive_kurtosis(list(x)), abs=1e-10)
    for lag in (1, 2, 7, 50):
        assert autocorrelation(x, lag) == pytest.approx(naive_autocorrelation(list(x), lag), abs=1e-10)


def test_estimators_are_pure():
    x = RandomStream(4).gaussians(500)
    before = x.copy()
    assert excess_kurtosis(x) == excess_kurtosis(x)
    assert volatility_acf(x, 5).tolist() == volatility_acf(x, 5).tolist()
    assert np.array_equal(x, before)


def test_volatility_acf_iid():
    returns = ReturnSeries(RandomStream(5).gaussians(10**5), 10)
    acf = volatility_acf(returns, 20)
    assert len(acf) == 20
    assert np.all(np.abs(acf) < 0.02)


def test_volatility_acf_regimes():
    stream = RandomStream(6)
    scale = np.repeat(np.tile([0.1, 2.0], 50), 20)
    returns = stream.gaussians(len(scale)) * scale
    acf = volatility_acf(returns, 10)
    assert acf[0] > 0.2
    assert volatility_decay_exponent(returns, 10) > 0


def test_volatility_acf_shape_and_errors():
    x = RandomStream(7).gaussians(50)
    assert len(volatility_acf(x, 1)) == 1
    with pytest.raises(StatisticsError):
        volatility_acf(x, 50)
    with pytest.raises(StatisticsError):
        volatility_acf(x, 0)


def test_tail_exponent_pareto():
    sample = RandomStream(8).paretos(3.0, 10**5)
    assert tail_exponent(sample, 0.05) == pytest.approx(3.0, abs=0.3)


def test_tail_exponent_scale_invariant():
    sample = RandomStream(9).gaussians(10**4)
    assert tail_exponent(sample * 10.0, 0.05) == pytest.approx(tail_exponent(sample, 0.05), abs=1e-12)


def test_tail_exponent_errors():
    sample = RandomStream(10).gaussians(10**4)
    with pytest.raises(StatisticsError):
        tail_exponent(sample, 0.0)
    with pytest.raises(StatisticsError):
        tail_exponent(sample[:500], 0.05)


def test_threshold_density_after_init():
    params = ModelParams(num_agents=2000)
    market = init_market(params, RandomStream(0))
    density = threshold_density(market, DEFAULT_BIN_EDGES)

    for kind in ("lower", "upper"):
        assert density.total(HOLDING, kind) == market.holding_count()
        assert density.total(NOT_HOLDING, kind) == market.num_agents - market.holding_count()

    centres = 0.5 * (density.bin_edges[:-1] + density.bin_edges[1:])
    for state in (HOLDING, NOT_HOLDING):
        assert np.all(centres[density.counts[(state, "lower")] > 0] < 0)
        assert np.all(centres[density.counts[(state, "upper")] > 0] > 0)

    frame = density.to_frame()
    assert list(frame.columns) == [
        "bin_lo",
        "bin_hi",
        "state0_lower",
        "state0_upper",
        "state1_lower",
        "state1_upper",
    ]
    assert len(frame) == len(DEFAULT_BIN_EDGES) - 1


def test_threshold_density_states_are_alike_after_init():
    edges = np.linspace(-0.5, 0.5, 21)
    p_values = []
    for seed in range(10):
        market = init_market(ModelParams(num_agents=4000), RandomStream(seed))
        density = threshold_density(market, edges)
        for kind in ("lower", "upper"):
            table = np.array(
                [density.counts[(NOT_HOLDING, kind)], density.counts[(HOLDING, kind)]]
            )
            table = table[:, table.sum(axis=0) > 0]
            p_values.append(scipy_stats.chi2_contingency(table)[1])
    assert min(p_values) > 0.01 / len(p_values)
    assert np.median(p_values) > 0.01


def test_threshold_density_clips_into_outer_bins():
    params = ModelParams(num_agents=10, reset_lo=0.9, reset_hi=0.9)
    market = init_market(params, RandomStream(0))
    density = threshold_density(market, DEFAULT_BIN_EDGES)
    assert density.counts[(HOLDING, "upper")][-1] == market.holding_count()


def test_threshold_density_bad_edges():
    market = init_market(ModelParams(num_agents=10), RandomStream(0))
    with pytest.raises(StatisticsError):
        threshold_density(market, [0.0, 0.5, 0.4])
    with pytest.raises(StatisticsError):
        threshold_density(market, np.linspace(-0.2, 0.2, 5))


def test_sentiment_statistics():
    sigma = np.zeros(100)
    assert sentiment_statistics(sigma, 50)["max_abs_sigma"] == 0.0

    sigma[80] = -0.9
    assert sentiment_statistics(sigma, 50)["max_abs_sigma"] == pytest.approx(0.9)

    sigma = np.zeros(100)
    sigma[10] = 0.8
    assert sentiment_statistics(sigma, 50)["max_abs_sigma"] == 0.0

    with pytest.raises(StatisticsError):
        sentiment_statistics(sigma, 101)


def test_summarize_reports_unsupported_statistics_as_none():
    log_prices = np.linspace(0.0, 0.1, 21)
    summary = summarize(log_prices, log_prices, np.zeros(21), 10, 10)
    assert summary["series_identical"] is True
    assert summary["model"]["excess_kurtosis"] is None
    assert summary["model"]["tail_exponent"] is None
    assert summary["sentiment"]["window_steps"] == 10
