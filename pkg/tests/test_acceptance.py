"""
Desk-scale runs (M = 1000) checking the model reproduces its qualitative claims. Run with pytest --runslow.
"""

import json
import math
import os
import time

import numpy as np
import pytest

from herding_market.cli.main import main
from herding_market.experiments import bifurcation_sweep, max_abs_sigma, run_scenario
from herding_market.market import ModelParams
from herding_market.stats import daily_returns, excess_kurtosis, volatility_acf

pytestmark = pytest.mark.slow

WORKERS = os.cpu_count() or 1
BIFURCATION_GRID = [5.0, 10.0, 20.0, 40.0, 60.0, 80.0, 100.0]


def desk_params(**changes):
    fields = dict(num_agents=1000)
    fields.update(changes)
    return ModelParams(**fields)


def sweep(**changes):
    return bifurcation_sweep(
        desk_params(**changes),
        cmax_values=BIFURCATION_GRID,
        runs_per_point=10,
        horizon_years=40,
        window_years=30,
        initial_sigma=0.05,
        workers=WORKERS,
    )


def test_reduction_to_geometric_brownian_motion():
    start = time.perf_counter()
    output = run_scenario(desk_params(kappa=0.0, alpha=0.0), 17, 40)
    elapsed = time.perf_counter() - start

    assert output.num_steps == 100000
    model = np.exp(output.model_log_prices)
    baseline = np.exp(output.baseline_log_prices)
    assert np.max(np.abs(model - baseline) / baseline) <= 1e-12
    assert elapsed < 60


def test_baseline_daily_volatility():
    output = run_scenario(desk_params(), 1, 40)
    returns = daily_returns(output.baseline_log_prices, 10)
    assert len(returns) == 10000
    assert np.std(returns.values) == pytest.approx(math.sqrt(10 * 0.000004), rel=0.05)


def test_stylized_facts():
    model_kurtosis = []
    baseline_kurtosis = []
    model_acf = []
    baseline_acf = []
    for seed in range(5):
        output = run_scenario(desk_params(), seed, 40)
        model = daily_returns(output.model_log_prices, 10)
        baseline = daily_returns(output.baseline_log_prices, 10)
        model_kurtosis.append(excess_kurtosis(model))
        baseline_kurtosis.append(excess_kurtosis(baseline))
        model_acf.append(volatility_acf(model, 50).mean())
        baseline_acf.append(volatility_acf(baseline, 50).mean())

    assert np.median(model_kurtosis) > 1
    assert all(-0.5 <= k <= 0.5 for k in baseline_kurtosis)
    assert np.mean(model_acf) > 0.03
    assert abs(np.mean(baseline_acf)) < 0.02


def test_zero_herding_keeps_the_market_balanced():
    output = run_scenario(desk_params(herding_lo=0.0, herding_hi=0.0, alpha=0.0), 4, 40)
    assert abs(np.mean(output.sigma)) < 0.05


def test_bifurcation_transition():
    means = dict(zip(BIFURCATION_GRID, sweep().means()))
    assert means[5.0] < 0.25
    assert means[100.0] > 0.7

    rising = [means[c] for c in (5.0, 10.0, 20.0, 40.0, 60.0)]
    violations = sum(1 for a, b in zip(rising, rising[1:]) if b < a)
    assert violations <= 1


def test_zero_herding_point_stays_balanced():
    result = bifurcation_sweep(
        desk_params(),
        cmax_values=[0.0],
        runs_per_point=3,
        horizon_years=40,
        window_years=30,
        initial_sigma=0.05,
        workers=WORKERS,
    )
    assert result.point(0.0).mean < 0.25

    neutral = desk_params(herding_lo=0.0, herding_hi=0.0, initial_sigma=0.05)
    for run in range(3):
        output = run_scenario(neutral, 0, 40, substream_id=run)
        assert max_abs_sigma(output, 30) == result.point(0.0).run_values[run]
        assert np.mean(np.abs(output.sigma)) < 0.1


def test_perfect_fast_agents_reach_disequilibrium():
    result = sweep(alpha=0.0)
    assert result.point(40.0).mean > 0.5


def test_threshold_volatility_barely_matters():
    low = sweep(delta=0.2).means()
    high = sweep(delta=1.0).means()
    for a, b in zip(low, high):
        assert abs(a - b) < 0.15


def test_desk_run_performance(request):
    limit = request.config.getoption("--desk-seconds")
    output = run_scenario(desk_params(), 0, 40)
    assert output.num_steps == 100000

    updates = output.num_steps * 1000 / output.elapsed_seconds
    print("desk run: {:.2f} s, {:.3g} agent-updates per second".format(output.elapsed_seconds, updates))
    assert output.elapsed_seconds < limit


@pytest.fixture(scope="module")
def desk_simulation(tmp_path_factory):
    root = tmp_path_factory.mktemp("desk")
    config = root / "desk.json"
    config.write_text(json.dumps({"num_agents": 1000}))
    out = str(root / "run")
    assert main(["simulate", "--config", str(config), "--out", out]) == 0
    return out


def read_summary(directory):
    with open(os.path.join(directory, "summary.json")) as f:
        return json.load(f)


def test_simulate_reports_fat_tails(desk_simulation):
    summary = read_summary(desk_simulation)
    assert summary["num_steps"] == 100000
    assert summary["model"]["excess_kurtosis"] > summary["baseline"]["excess_kurtosis"]


def test_analyze_finds_no_volatility_memory_in_baseline(desk_simulation, tmp_path):
    assert main(["analyze", "--input", desk_simulation, "--out", str(tmp_path)]) == 0
    summary = read_summary(str(tmp_path))
    assert abs(summary["baseline"]["volatility_acf_mean"]) < 0.02
    for value in summary["baseline"]["volatility_acf"].values():
        assert abs(value) < 0.05
