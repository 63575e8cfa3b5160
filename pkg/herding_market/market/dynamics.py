"""
The market model: slow agents with moving price thresholds, herding pressure on the minority, and a price that
follows geometric Brownian motion perturbed by the slow agents' demand.

One timestep n (resolve_timestep):
    1. every agent's thresholds drift; minority agents are squeezed inwards at rate C_i h |sigma(n-1)|
    2. the candidate price moves by the information shock, scaled by f = 1 + alpha |sigma(n-1)|
    3. agents whose interval no longer contains the price switch together as one batch, the price jumps by
       kappa times the sigma change, the batch gets fresh intervals around the new price, and the check repeats
       until no further agent is tripped (each agent switches at most once per step)
    4. agents that switched earlier in the step and ended up outside their fresh interval are re-anchored
       around the final price

With kappa = 0 and alpha = 0 the price is exactly the geometric Brownian motion driven by the same eta.
"""

import math

import numpy as np

from .params import InvalidParameterError
from .state import HOLDING, MarketState, StepOutcome


class MarketError(ValueError):
    """Invalid input to one of the market dynamics operations."""


def compute_sigma(agents):
    """
    The sentiment sigma = (2/W) sum(s_i w_i) - 1 of a collection of agents: -1 when nobody holds the asset,
    +1 when everybody does.
    :param agents: iterable of Agent
    :rtype: float
    """
    agents = list(agents)
    if not agents:
        raise MarketError("Cannot compute sigma of an empty population")

    total_weight = sum(a.weight for a in agents)
    if total_weight <= 0:
        raise MarketError("Total weight must be positive, got {}".format(total_weight))

    held = sum(a.weight for a in agents if a.state == HOLDING)
    return 2.0 * held / total_weight - 1.0


def population_sigma(states, weights, total_weight):
    """compute_sigma on the column arrays of a MarketState."""
    if len(states) == 0:
        raise MarketError("Cannot compute sigma of an empty population")
    held = float(weights[states == HOLDING].sum())
    return 2.0 * held / total_weight - 1.0


def information_shock(eta, h):
    """
    The exogenous log-price increment sqrt(h) eta - h/2, before the fast agent factor is applied.
    """
    if not h > 0:
        raise MarketError("Timestep h must be positive, got {}".format(h))
    return math.sqrt(h) * eta - h / 2


def fast_agent_factor(sigma, alpha):
    """
    f = 1 + alpha |sigma|: at extreme sentiment fast agents overreact to new information. alpha = 0 means they
    translate information into price changes perfectly.
    """
    return 1.0 + alpha * abs(sigma)


def apply_price_update(prev_price, shock, f_value, kappa, delta_sigma):
    """
    p(n) = p(n-1) exp(shock f + kappa delta_sigma)
    :rtype: float
    """
    for name, value in (
        ("prev_price", prev_price),
        ("shock", shock),
        ("f_value", f_value),
        ("kappa", kappa),
        ("delta_sigma", delta_sigma),
    ):
        if not math.isfinite(value):
            raise MarketError("{} must be finite, got {}".format(name, value))
    if prev_price <= 0:
        raise MarketError("prev_price must be positive, got {}".format(prev_price))

    try:
        price = prev_price * math.exp(shock * f_value + kappa * delta_sigma)
    except OverflowError:
        raise MarketError(
            "Price overflow from {} with log increment {}".format(
                prev_price, shock * f_value + kappa * delta_sigma
            )
        )
    if not (price > 0 and math.isfinite(price)):
        raise MarketError("Price update left the positive reals: {}".format(price))
    return price


def drift_thresholds(agent, price, sigma, h, stream):
    """
    Move one agent's thresholds over one timestep. Majority agents (and everybody when sigma = 0) diffuse:
        L += p N(0, h delta), U += p N(0, h delta)
    minority agents are also squeezed inwards:
        L += p (C h |sigma| + N(0, h delta)), U -= p (C h |sigma| + N(0, h delta))
    The second argument of N is the variance. Lower and upper noise are independent draws, lower first.

    An inverted interval (lower > upper) is not corrected here, the switching rule handles it.
    :return: (lower, upper)
    """
    if not h > 0:
        raise MarketError("Timestep h must be positive, got {}".format(h))

    scale = math.sqrt(h * agent.threshold_volatility)
    noise_lower = scale * stream.gaussian()
    noise_upper = scale * stream.gaussian()

    if agent.is_minority(sigma):
        drift = agent.herding * h * abs(sigma)
        return (
            agent.lower + price * (drift + noise_lower),
            agent.upper - price * (drift + noise_upper),
        )
    return agent.lower + price * noise_lower, agent.upper + price * noise_upper


def needs_switch(agent, price):
    """
    True when the price has left the agent's comfort zone. A price exactly on a threshold does not trigger a
    switch; an inverted interval always does.
    """
    return price < agent.lower or price > agent.upper or agent.lower > agent.upper


def reset_thresholds(switch_price, reset_lo, reset_hi, stream):
    """
    Fresh comfort zone after a switch at price p*: [p*/(1 + Z_L), p*(1 + Z_U)] with Z_L, Z_U ~ U[reset_lo, reset_hi],
    Z_L drawn first.
    :return: (lower, upper)
    """
    if not switch_price > 0:
        raise MarketError("switch_price must be positive, got {}".format(switch_price))
    if reset_lo < 0:
        raise MarketError("reset_lo must be non-negative, got {}".format(reset_lo))

    z_lower = stream.uniform(reset_lo, reset_hi)
    z_upper = stream.uniform(reset_lo, reset_hi)
    return switch_price / (1.0 + z_lower), switch_price * (1.0 + z_upper)


def _drift_population(market, price, sigma, h, stream):
    """drift_thresholds for all agents at once, in place, consuming the stream in the same order."""
    n = market.num_agents
    z = stream.gaussians(2 * n).reshape(n, 2)
    scale = np.sqrt(h * market.threshold_volatility)
    noise_lower = scale * z[:, 0]
    noise_upper = scale * z[:, 1]

    if sigma > 0:
        minority = market.states != HOLDING
    elif sigma < 0:
        minority = market.states == HOLDING
    else:
        minority = None

    if minority is None or not minority.any():
        market.lower += price * noise_lower
        market.upper += price * noise_upper
        return

    drift = np.where(minority, market.herding * h * abs(sigma), 0.0)
    market.lower += price * (drift + noise_lower)
    market.upper += np.where(minority, -1.0, 1.0) * (price * (drift + noise_upper))


def _tripped(price, lower, upper):
    """needs_switch for all agents at once."""
    return (price < lower) | (price > upper) | (lower > upper)


def _reset_population(indices, price, reset_lo, reset_hi, stream, lower, upper):
    """reset_thresholds for the agents in `indices` (ascending), in place."""
    z = stream.uniforms(reset_lo, reset_hi, 2 * len(indices)).reshape(-1, 2)
    lower[indices] = price / (1.0 + z[:, 0])
    upper[indices] = price * (1.0 + z[:, 1])


def resolve_timestep(market, eta, params, stream, in_place=False):
    """
    Advance the market by one timestep, including the full switching cascade.

    The fast agent factor f is evaluated once at sigma(n-1) and held fixed through the cascade. Each agent
    switches at most once per step, so the cascade ends after at most M batches.

    :param market: MarketState at step n-1
    :param eta: the standard normal information draw of step n
    :param params: ModelParams
    :param stream: RandomStream positioned after eta
    :param in_place: update `market` itself instead of a copy
    :return: (MarketState, StepOutcome)
    """
    prev_price = market.price
    prev_sigma = market.sigma

    shock = information_shock(eta, params.h)
    f_value = fast_agent_factor(prev_sigma, params.alpha)

    out = market if in_place else market.copy()

    _drift_population(out, prev_price, prev_sigma, params.h, stream)

    price = apply_price_update(prev_price, shock, f_value, params.kappa, 0.0)
    sigma = prev_sigma

    switched = np.zeros(out.num_agents, dtype=bool)
    switch_count = 0
    cascade_iterations = 0

    while True:
        batch = np.flatnonzero(_tripped(price, out.lower, out.upper) & ~switched)
        if batch.size == 0:
            break

        cascade_iterations += 1
        switch_count += batch.size
        switched[batch] = True
        out.states[batch] = 1 - out.states[batch]

        sigma = population_sigma(out.states, out.weights, out.total_weight)
        price = apply_price_update(
            prev_price, shock, f_value, params.kappa, sigma - prev_sigma
        )
        _reset_population(
            batch, price, params.reset_lo, params.reset_hi, stream, out.lower, out.upper
        )

    if cascade_iterations > 1:
        # only a later batch can move the price away from an earlier batch's fresh intervals
        stale = np.flatnonzero(
            switched & ((price < out.lower) | (price > out.upper))
        )
        if stale.size:
            _reset_population(
                stale,
                price,
                params.reset_lo,
                params.reset_hi,
                stream,
                out.lower,
                out.upper,
            )

    out.price = price
    out.log_price = math.log(price)
    out.sigma = sigma
    out.step = market.step + 1

    return out, StepOutcome(price, sigma, switch_count, cascade_iterations)


def init_market(params, stream):
    """
    Build the market at step 0. round(M (1 + initial_sigma) / 2) agents hold the asset, the lowest indices
    first. All agents get thresholds drawn with reset_thresholds around initial_price (identical distributions
    in both states), herding coefficients C_i ~ U[herding_lo, herding_hi], and weights per weight_scheme.

    :param params: ModelParams
    :param stream: RandomStream
    :rtype: MarketState
    """
    if not -1.0 <= params.initial_sigma <= 1.0:
        raise MarketError(
            "initial_sigma must lie in [-1, 1], got {}".format(params.initial_sigma)
        )
    try:
        params.validate()
    except InvalidParameterError as e:
        raise MarketError(str(e))

    n = params.num_agents
    holding = int(math.floor(n * (1.0 + params.initial_sigma) / 2.0 + 0.5))
    states = np.zeros(n, dtype=np.int8)
    states[:holding] = HOLDING

    lower = np.empty(n)
    upper = np.empty(n)
    _reset_population(
        np.arange(n),
        params.initial_price,
        params.reset_lo,
        params.reset_hi,
        stream,
        lower,
        upper,
    )

    herding = stream.uniforms(params.herding_lo, params.herding_hi, n)

    if isinstance(params.weight_scheme, str):
        if params.weight_scheme == "pareto":
            weights = stream.paretos(params.pareto_exponent, n)
        else:
            weights = np.ones(n)
    else:
        weights = np.array(params.weight_scheme, dtype=np.float64)

    total_weight = float(weights.sum())
    return MarketState(
        price=params.initial_price,
        sigma=population_sigma(states, weights, total_weight),
        states=states,
        lower=lower,
        upper=upper,
        weights=weights,
        herding=herding,
        threshold_volatility=np.full(n, float(params.delta)),
        step=0,
    )
