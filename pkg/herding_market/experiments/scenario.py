"""
A single simulation run: the market model and its geometric Brownian baseline, both driven by the same
information draws eta(n).
"""

import math
import time

import numpy as np

from herding_market.core.component import SimComponent
from herding_market.core.message import SimMessage, SimRequest
from herding_market.market import (
    ModelParams,
    apply_price_update,
    information_shock,
    init_market,
    resolve_timestep,
)
from herding_market.stats import DEFAULT_BIN_EDGES, threshold_density
from herding_market.stochastic import RandomStream

DAYS_PER_YEAR = 250

# a cascade moving at least this share of the population is logged
LARGE_CASCADE_FRACTION = 0.01


class ScenarioError(ValueError):
    """The requested horizon, window or snapshot time does not fit the trading calendar."""


class SimulationOutput(SimMessage):
    def __init__(
        self,
        model_log_prices,
        baseline_log_prices,
        sigma,
        switches,
        cascade_iterations,
        params,
        seed,
        substream_id=0,
        days_per_year=DAYS_PER_YEAR,
        snapshots=None,
        missed_snapshots=None,
        elapsed_seconds=0.0,
    ):
        """
        The recorded series of a run. Every series has num_steps + 1 entries, entry 0 being the initial state.

        :param model_log_prices: log price of the model per step
        :param baseline_log_prices: log price of the geometric Brownian baseline per step, same eta draws
        :param sigma: sentiment per step
        :param switches: number of agents that switched per step
        :param cascade_iterations: number of switching batches per step
        :param params: the ModelParams of the run
        :param snapshots: list of ThresholdDensity taken during the run
        :param missed_snapshots: requested snapshot times (years) for which no calm step was found
        :param elapsed_seconds: wall clock time of the run, not part of any output file
        """
        self.model_log_prices = model_log_prices
        self.baseline_log_prices = baseline_log_prices
        self.sigma = sigma
        self.switches = switches
        self.cascade_iterations = cascade_iterations
        self.params = params
        self.seed = seed
        self.substream_id = substream_id
        self.days_per_year = days_per_year
        self.snapshots = snapshots if snapshots is not None else []
        self.missed_snapshots = missed_snapshots if missed_snapshots is not None else []
        self.elapsed_seconds = elapsed_seconds

    @property
    def num_steps(self):
        return len(self.model_log_prices) - 1

    @property
    def steps_per_day(self):
        return self.params.steps_per_day


class RunScenarioRequest(SimRequest):
    def __init__(
        self,
        seed,
        horizon_years,
        substream_id=0,
        params=None,
        snapshot_times=None,
        days_per_year=DAYS_PER_YEAR,
        snapshot_sigma_tolerance=0.05,
    ):
        """
        Run one scenario and reply with its full SimulationOutput.
        :param params: ModelParams, None for the component's configuration
        """
        SimRequest.__init__(self)
        self.seed = seed
        self.horizon_years = horizon_years
        self.substream_id = substream_id
        self.params = params
        self.snapshot_times = snapshot_times
        self.days_per_year = days_per_year
        self.snapshot_sigma_tolerance = snapshot_sigma_tolerance


class DisequilibriumRequest(RunScenarioRequest):
    def __init__(
        self,
        seed,
        horizon_years,
        window_years,
        substream_id=0,
        params=None,
        days_per_year=DAYS_PER_YEAR,
    ):
        """
        Run one scenario and reply with only max |sigma| over the trailing window, which keeps the replies of a
        sweep small.
        """
        RunScenarioRequest.__init__(
            self,
            seed,
            horizon_years,
            substream_id=substream_id,
            params=params,
            days_per_year=days_per_year,
        )
        self.window_years = window_years


class DisequilibriumMessage(SimMessage):
    def __init__(self, max_abs_sigma, seed, substream_id, num_steps):
        self.max_abs_sigma = max_abs_sigma
        self.seed = seed
        self.substream_id = substream_id
        self.num_steps = num_steps


def _steps(years, steps_per_day, days_per_year, name):
    steps = years * days_per_year * steps_per_day
    rounded = int(round(steps))
    if not math.isclose(steps, rounded, rel_tol=0.0, abs_tol=1e-9):
        raise ScenarioError(
            "{} of {} years is not a whole number of steps ({} steps)".format(
                name, years, steps
            )
        )
    return rounded


def horizon_steps(horizon_years, steps_per_day, days_per_year=DAYS_PER_YEAR):
    """
    Number of timesteps in a horizon: years x trading days per year x steps per day.
    """
    if not horizon_years > 0:
        raise ScenarioError(
            "horizon_years must be positive, got {}".format(horizon_years)
        )
    return _steps(horizon_years, steps_per_day, days_per_year, "Horizon")


def run_scenario(
    params,
    seed,
    horizon_years,
    snapshot_times=None,
    substream_id=0,
    days_per_year=DAYS_PER_YEAR,
    snapshot_sigma_tolerance=0.05,
    bin_edges=DEFAULT_BIN_EDGES,
):
    """
    Simulate the market from init_market over the horizon, advancing the baseline
    p_b(n) = p_b(n-1) exp(sqrt(h) eta - h/2) with the identical eta draws.

    A snapshot requested at t years is taken at the first step at or after t where |sigma| is below
    snapshot_sigma_tolerance.

    :param params: ModelParams
    :param seed: experiment seed
    :param horizon_years: length of the run
    :param snapshot_times: times in years at which to record the threshold density
    :param substream_id: substream of the seed this run draws from
    :rtype: SimulationOutput
    """
    start = time.perf_counter()

    num_steps = horizon_steps(horizon_years, params.steps_per_day, days_per_year)

    pending = []
    for t in sorted(snapshot_times or []):
        if t < 0 or t > horizon_years:
            raise ScenarioError(
                "Snapshot time {} lies outside the horizon [0, {}]".format(
                    t, horizon_years
                )
            )
        pending.append((t, int(math.ceil(t * days_per_year * params.steps_per_day - 1e-9))))

    stream = RandomStream(seed, substream_id)
    market = init_market(params, stream)

    model_log_prices = np.empty(num_steps + 1)
    baseline_log_prices = np.empty(num_steps + 1)
    sigma = np.empty(num_steps + 1)
    switches = np.zeros(num_steps + 1, dtype=np.int64)
    cascade_iterations = np.zeros(num_steps + 1, dtype=np.int64)

    baseline_price = market.price
    model_log_prices[0] = market.log_price
    baseline_log_prices[0] = math.log(baseline_price)
    sigma[0] = market.sigma

    snapshots = []
    pending = _take_snapshots(market, pending, snapshot_sigma_tolerance, bin_edges, snapshots)

    h = params.h
    for step in range(1, num_steps + 1):
        eta = stream.gaussian()

        baseline_price = apply_price_update(
            baseline_price, information_shock(eta, h), 1.0, 0.0, 0.0
        )
        market, outcome = resolve_timestep(market, eta, params, stream, in_place=True)

        model_log_prices[step] = market.log_price
        baseline_log_prices[step] = math.log(baseline_price)
        sigma[step] = outcome.new_sigma
        switches[step] = outcome.switch_count
        cascade_iterations[step] = outcome.cascade_iterations

        if pending:
            pending = _take_snapshots(
                market, pending, snapshot_sigma_tolerance, bin_edges, snapshots
            )

    return SimulationOutput(
        model_log_prices=model_log_prices,
        baseline_log_prices=baseline_log_prices,
        sigma=sigma,
        switches=switches,
        cascade_iterations=cascade_iterations,
        params=params,
        seed=seed,
        substream_id=substream_id,
        days_per_year=days_per_year,
        snapshots=snapshots,
        missed_snapshots=[t for t, _ in pending],
        elapsed_seconds=time.perf_counter() - start,
    )


def _take_snapshots(market, pending, tolerance, bin_edges, snapshots):
    remaining = []
    for t, step in pending:
        if market.step >= step and abs(market.sigma) < tolerance:
            snapshots.append(threshold_density(market, bin_edges))
        else:
            remaining.append((t, step))
    return remaining


def max_abs_sigma(output, window_years):
    """
    Degree of disequilibrium: the largest |sigma(n)| over the trailing window_years of the run. The initial
    state counts only if the window covers the whole run.
    :param output: SimulationOutput
    :rtype: float
    """
    if not window_years > 0:
        raise ScenarioError("window_years must be positive, got {}".format(window_years))
    window = _steps(
        window_years, output.steps_per_day, output.days_per_year, "Window"
    )
    if window > output.num_steps:
        raise ScenarioError(
            "Window of {} steps is longer than the run of {} steps".format(
                window, output.num_steps
            )
        )
    return float(np.max(np.abs(output.sigma[-window:])))


class ScenarioComponent(SimComponent):
    """
    Runs scenarios. Configured with the ModelParams used when a request does not bring its own.
    """

    @staticmethod
    def get_inputs():
        return [RunScenarioRequest, DisequilibriumRequest]

    @staticmethod
    def get_output():
        return SimulationOutput

    @staticmethod
    def get_conf():
        return ModelParams()

    def on_request(self, request):
        params = request.params if request.params is not None else self.params

        self.logger.debug_framework(
            "Running seed {} substream {} for {} years with {} agents".format(
                request.seed, request.substream_id, request.horizon_years, params.num_agents
            )
        )

        output = run_scenario(
            params,
            request.seed,
            request.horizon_years,
            snapshot_times=request.snapshot_times,
            substream_id=request.substream_id,
            days_per_year=request.days_per_year,
            snapshot_sigma_tolerance=request.snapshot_sigma_tolerance,
        )
        self._report(output)

        if isinstance(request, DisequilibriumRequest):
            return DisequilibriumMessage(
                max_abs_sigma(output, request.window_years),
                output.seed,
                output.substream_id,
                output.num_steps,
            )
        return output

    def _report(self, output):
        elapsed = max(output.elapsed_seconds, 1e-9)
        self.logger.info(
            "Simulated {} steps of {} agents in {:.2f}s ({:.0f} steps/s, {:.3g} agent-updates/s)".format(
                output.num_steps,
                output.params.num_agents,
                output.elapsed_seconds,
                output.num_steps / elapsed,
                output.num_steps * output.params.num_agents / elapsed,
            )
        )

        threshold = max(1, int(LARGE_CASCADE_FRACTION * output.params.num_agents))
        large = np.flatnonzero(output.switches >= threshold)
        if large.size:
            self.logger.debug_framework(
                "{} step(s) with cascades of at least {} switches, largest {} at step {}".format(
                    large.size,
                    threshold,
                    int(output.switches.max()),
                    int(np.argmax(output.switches)),
                )
            )

        for t in output.missed_snapshots:
            self.logger.warning(
                "No step with |sigma| below tolerance at or after {} years, snapshot skipped".format(t)
            )
