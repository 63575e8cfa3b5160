import math

import numpy as np
import pytest

from herding_market.core.component_manager import SimComponentManager
from herding_market.experiments import (
    DisequilibriumMessage,
    DisequilibriumRequest,
    RunScenarioRequest,
    ScenarioComponent,
    ScenarioError,
    SimulationOutput,
    horizon_steps,
    max_abs_sigma,
    run_scenario,
)
from herding_market.market import ModelParams

# 20 trading days per year keeps a "year" at 200 steps
DAYS = 20


def small_params(**changes):
    fields = dict(num_agents=200, h=0.0004)
    fields.update(changes)
    return ModelParams(**fields)


def test_horizon_steps():
    assert horizon_steps(40, 10) == 100000
    assert horizon_steps(0.5, 10, days_per_year=20) == 100
    with pytest.raises(ScenarioError):
        horizon_steps(0.001, 10)
    with pytest.raises(ScenarioError):
        horizon_steps(0, 10)


def test_series_lengths():
    output = run_scenario(small_params(), 1, 1, days_per_year=DAYS)
    assert output.num_steps == 200
    for series in (
        output.model_log_prices,
        output.baseline_log_prices,
        output.sigma,
        output.switches,
        output.cascade_iterations,
    ):
        assert len(series) == 201
    assert output.switches[0] == 0
    assert output.model_log_prices[0] == output.baseline_log_prices[0] == 0.0


def test_reduces_to_geometric_brownian_motion():
    output = run_scenario(small_params(kappa=0.0, alpha=0.0), 3, 2, days_per_year=DAYS)
    assert np.array_equal(output.model_log_prices, output.baseline_log_prices)
    # the slow agents still trade, they just do not move the price
    assert output.switches.sum() > 0


def test_slow_agents_move_the_price():
    output = run_scenario(small_params(kappa=0.1), 3, 2, days_per_year=DAYS)
    assert not np.array_equal(output.model_log_prices, output.baseline_log_prices)


def test_same_seed_same_output():
    first = run_scenario(small_params(), 7, 1, days_per_year=DAYS)
    second = run_scenario(small_params(), 7, 1, days_per_year=DAYS)
    for name in ("model_log_prices", "baseline_log_prices", "sigma", "switches", "cascade_iterations"):
        assert np.array_equal(getattr(first, name), getattr(second, name)), name

    other = run_scenario(small_params(), 7, 1, substream_id=1, days_per_year=DAYS)
    assert not np.array_equal(first.baseline_log_prices, other.baseline_log_prices)


def test_sigma_stays_in_range():
    output = run_scenario(small_params(herding_lo=100.0, herding_hi=400.0, initial_sigma=0.3), 2, 2, days_per_year=DAYS)
    assert np.all(np.abs(output.sigma) <= 1.0)
    assert output.sigma[0] == pytest.approx(0.3)


def test_snapshot_at_start():
    output = run_scenario(small_params(), 1, 1, snapshot_times=[0.0], days_per_year=DAYS)
    assert len(output.snapshots) == 1
    assert output.snapshots[0].step == 0
    assert output.missed_snapshots == []


def test_snapshot_waits_for_calm_market():
    params = small_params(herding_lo=0.0, herding_hi=0.0, alpha=0.0)
    # snapshots never draw, so the series matches a run without them
    sigma = run_scenario(params, 1, 1, days_per_year=DAYS).sigma
    calm = [step for step in range(100, len(sigma)) if abs(sigma[step]) < 0.1]
    assert calm

    output = run_scenario(
        params, 1, 1, snapshot_times=[0.5], days_per_year=DAYS, snapshot_sigma_tolerance=0.1
    )
    assert len(output.snapshots) == 1
    density = output.snapshots[0]
    assert density.step == calm[0]
    assert abs(density.sigma) < 0.1
    assert density.sigma == pytest.approx(output.sigma[density.step])


def test_snapshot_missed_when_never_calm():
    # a single agent always has |sigma| = 1
    output = run_scenario(small_params(num_agents=1), 1, 1, snapshot_times=[0.2], days_per_year=DAYS)
    assert output.snapshots == []
    assert output.missed_snapshots == [0.2]


def test_snapshot_outside_horizon():
    with pytest.raises(ScenarioError):
        run_scenario(small_params(), 1, 1, snapshot_times=[2.0], days_per_year=DAYS)


def synthetic_output(sigma):
    n = len(sigma)
    return SimulationOutput(
        model_log_prices=np.zeros(n),
        baseline_log_prices=np.zeros(n),
        sigma=np.asarray(sigma, dtype=float),
        switches=np.zeros(n, dtype=np.int64),
        cascade_iterations=np.zeros(n, dtype=np.int64),
        params=ModelParams(steps_per_day=1),
        seed=0,
        days_per_year=10,
    )


def test_max_abs_sigma():
    assert max_abs_sigma(synthetic_output(np.zeros(101)), 5) == 0.0

    sigma = np.zeros(101)
    sigma[90] = -0.9
    assert max_abs_sigma(synthetic_output(sigma), 5) == pytest.approx(0.9)

    sigma = np.zeros(101)
    sigma[10] = 0.95
    assert max_abs_sigma(synthetic_output(sigma), 5) == 0.0

    with pytest.raises(ScenarioError):
        max_abs_sigma(synthetic_output(np.zeros(101)), 20)


def test_component_replies():
    params = small_params()
    manager = SimComponentManager(ScenarioComponent, conf=params)
    output, disequilibrium = manager.run(
        [
            RunScenarioRequest(4, 1, days_per_year=DAYS),
            DisequilibriumRequest(4, 1, 0.5, days_per_year=DAYS),
        ]
    )

    assert isinstance(output, SimulationOutput)
    assert isinstance(disequilibrium, DisequilibriumMessage)
    assert disequilibrium.max_abs_sigma == max_abs_sigma(output, 0.5)
    assert disequilibrium.num_steps == output.num_steps


def test_request_params_override_component_params():
    manager = SimComponentManager(ScenarioComponent, conf=small_params())
    request = RunScenarioRequest(4, 1, params=small_params(num_agents=50), days_per_year=DAYS)
    output = manager.run([request])[0]
    assert output.params.num_agents == 50


def test_baseline_log_prices_follow_the_price_law():
    output = run_scenario(small_params(), 5, 1, days_per_year=DAYS)
    increments = np.diff(output.baseline_log_prices)
    h = output.params.h
    # sqrt(h) eta - h / 2 with eta standard normal
    etas = (increments + h / 2) / math.sqrt(h)
    assert abs(etas.mean()) < 0.3
    assert etas.std() == pytest.approx(1.0, abs=0.15)
