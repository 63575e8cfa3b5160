import numpy as np
import pandas as pd

from herding_market.market.state import HOLDING, NOT_HOLDING

from .moments import StatisticsError

DEFAULT_BIN_EDGES = np.linspace(-0.5, 0.5, 101)

COLUMNS = (
    "bin_lo",
    "bin_hi",
    "state0_lower",
    "state0_upper",
    "state1_lower",
    "state1_upper",
)


class ThresholdDensity(object):
    def __init__(self, bin_edges, counts, price, sigma, step):
        """
        Histograms of the relative threshold displacements (threshold - p) / p, one per (state, threshold kind).
        Displacements outside the edge range are counted in the outermost bins.

        :param bin_edges: strictly increasing bin edges
        :param counts: dict (state, "lower" | "upper") -> integer array of len(bin_edges) - 1
        """
        self.bin_edges = np.asarray(bin_edges, dtype=np.float64)
        self.counts = counts
        self.price = price
        self.sigma = sigma
        self.step = step

    def total(self, state, kind):
        return int(self.counts[(state, kind)].sum())

    def to_frame(self):
        return pd.DataFrame(
            {
                "bin_lo": self.bin_edges[:-1],
                "bin_hi": self.bin_edges[1:],
                "state0_lower": self.counts[(NOT_HOLDING, "lower")],
                "state0_upper": self.counts[(NOT_HOLDING, "upper")],
                "state1_lower": self.counts[(HOLDING, "lower")],
                "state1_upper": self.counts[(HOLDING, "upper")],
            },
            columns=list(COLUMNS),
        )


def threshold_density(market, bin_edges=DEFAULT_BIN_EDGES):
    """
    :param market: MarketState
    :param bin_edges: strictly increasing edges covering [-0.5, 0.5]
    :rtype: ThresholdDensity
    """
    edges = np.asarray(bin_edges, dtype=np.float64)
    if edges.ndim != 1 or len(edges) < 2 or not np.all(np.diff(edges) > 0):
        raise StatisticsError("Bin edges must be a strictly increasing sequence")
    if edges[0] > -0.5 or edges[-1] < 0.5:
        raise StatisticsError(
            "Bin edges must cover [-0.5, 0.5], got [{}, {}]".format(edges[0], edges[-1])
        )

    # clip into the edge range so every agent is counted
    inner_lo = edges[0]
    inner_hi = np.nextafter(edges[-1], edges[0])
    lower = np.clip((market.lower - market.price) / market.price, inner_lo, inner_hi)
    upper = np.clip((market.upper - market.price) / market.price, inner_lo, inner_hi)

    counts = {}
    for state in (NOT_HOLDING, HOLDING):
        in_state = market.states == state
        counts[(state, "lower")] = np.histogram(lower[in_state], bins=edges)[0]
        counts[(state, "upper")] = np.histogram(upper[in_state], bins=edges)[0]

    return ThresholdDensity(edges, counts, market.price, market.sigma, market.step)
