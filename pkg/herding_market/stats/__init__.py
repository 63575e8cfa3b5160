from .density import DEFAULT_BIN_EDGES, ThresholdDensity, threshold_density
from .moments import (
    StatisticsError,
    autocorrelation,
    excess_kurtosis,
    tail_exponent,
    volatility_acf,
    volatility_decay_exponent,
)
from .returns import ReturnSeries, daily_returns
from .summary import return_statistics, sentiment_statistics, summarize
