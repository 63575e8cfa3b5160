"""
Bifurcation sweeps over the herding strength. For every C_max the herding coefficients are drawn from
[C_max / 4, C_max], the market starts slightly off balance and the degree of disequilibrium max |sigma| over the
trailing window is averaged over independent runs.

Run r of every C_max point draws from substream r of the experiment seed, so all points share their random
numbers and the result does not depend on how runs are distributed over workers.
"""

from herding_market.core import sim_logging
from herding_market.core.component_manager import SimComponentManager
from herding_market.core.message import SimMessage
from herding_market.market import ModelParams

from .scenario import DAYS_PER_YEAR, DisequilibriumRequest, ScenarioComponent, ScenarioError

DEFAULT_CMAX_VALUES = (0.0, 5.0, 10.0, 20.0, 40.0, 60.0, 80.0, 100.0)


class SweepPoint(object):
    def __init__(self, c_max, run_values, seeds):
        """
        :param c_max: upper bound of the herding coefficients
        :param run_values: max |sigma| of every run, in run order
        :param seeds: (seed, substream_id) of every run
        """
        self.c_max = c_max
        self.run_values = list(run_values)
        self.seeds = list(seeds)

    @property
    def runs(self):
        return len(self.run_values)

    @property
    def mean(self):
        # fixed summation order
        return sum(self.run_values) / len(self.run_values)

    def __repr__(self):
        return "SweepPoint(c_max={}, mean={}, runs={})".format(self.c_max, self.mean, self.runs)


class SweepResult(SimMessage):
    def __init__(self, points, alpha, delta, horizon_years, window_years, initial_sigma):
        """
        :param points: list of SweepPoint in the order of the C_max grid
        :param alpha: fast agent distortion of the variant
        :param delta: threshold volatility of the variant
        """
        self.points = points
        self.alpha = alpha
        self.delta = delta
        self.horizon_years = horizon_years
        self.window_years = window_years
        self.initial_sigma = initial_sigma

    def means(self):
        return [point.mean for point in self.points]

    def point(self, c_max):
        for point in self.points:
            if point.c_max == c_max:
                return point
        raise KeyError("No sweep point for C_max = {}".format(c_max))


def sweep_params(base, c_max, initial_sigma=0.05):
    """
    The parameters of one sweep point: herding range [c_max / 4, c_max] and the initial disturbance.
    :rtype: ModelParams
    """
    if c_max < 0:
        raise ScenarioError("C_max must be non-negative, got {}".format(c_max))
    return base.copy(
        herding_lo=c_max / 4.0, herding_hi=float(c_max), initial_sigma=initial_sigma
    )


def bifurcation_sweep(
    base,
    cmax_values=DEFAULT_CMAX_VALUES,
    runs_per_point=10,
    horizon_years=40,
    window_years=30,
    seed=0,
    initial_sigma=0.05,
    days_per_year=DAYS_PER_YEAR,
    workers=1,
    log_level=sim_logging.INFO,
    log_file=None,
):
    """
    Run the sweep, serially or over a pool of worker processes. The result is identical for any number of
    workers.

    :param base: ModelParams for everything but the herding range and initial sigma
    :param cmax_values: the C_max grid
    :param runs_per_point: independent runs per C_max
    :rtype: SweepResult
    """
    cmax_values = list(cmax_values)
    if not cmax_values:
        raise ScenarioError("The C_max grid is empty")
    if runs_per_point < 1:
        raise ScenarioError(
            "runs_per_point must be at least 1, got {}".format(runs_per_point)
        )
    if window_years > horizon_years:
        raise ScenarioError(
            "Window of {} years is longer than the horizon of {} years".format(
                window_years, horizon_years
            )
        )

    requests = []
    for c_max in cmax_values:
        params = sweep_params(base, c_max, initial_sigma)
        params.validate()
        for run in range(runs_per_point):
            requests.append(
                DisequilibriumRequest(
                    seed,
                    horizon_years,
                    window_years,
                    substream_id=run,
                    params=params,
                    days_per_year=days_per_year,
                )
            )

    logger = sim_logging.get_sim_logger("bifurcation_sweep", log_level, log_file=log_file)
    logger.info(
        "Sweeping {} C_max value(s) x {} run(s), alpha={}, delta={}, {} worker(s)".format(
            len(cmax_values), runs_per_point, base.alpha, base.delta, workers
        )
    )

    manager = SimComponentManager(
        ScenarioComponent, conf=base, workers=workers, log_level=log_level, log_file=log_file
    )
    replies = manager.run(requests)

    points = []
    for i, c_max in enumerate(cmax_values):
        chunk = replies[i * runs_per_point : (i + 1) * runs_per_point]
        point = SweepPoint(
            c_max,
            [reply.max_abs_sigma for reply in chunk],
            [(reply.seed, reply.substream_id) for reply in chunk],
        )
        logger.debug(
            "C_max {}: mean max|sigma| {:.4f} (min {:.4f}, max {:.4f})".format(
                c_max, point.mean, min(point.run_values), max(point.run_values)
            )
        )
        points.append(point)

    return SweepResult(
        points,
        alpha=base.alpha,
        delta=base.delta,
        horizon_years=horizon_years,
        window_years=window_years,
        initial_sigma=initial_sigma,
    )
