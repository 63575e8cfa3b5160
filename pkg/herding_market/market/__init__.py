from .dynamics import (
    MarketError,
    apply_price_update,
    compute_sigma,
    drift_thresholds,
    fast_agent_factor,
    information_shock,
    init_market,
    needs_switch,
    population_sigma,
    reset_thresholds,
    resolve_timestep,
)
from .params import InvalidParameterError, ModelParams
from .state import HOLDING, NOT_HOLDING, Agent, MarketState, StepOutcome
