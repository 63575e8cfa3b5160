import math

import numpy as np

HOLDING = 1
NOT_HOLDING = 0


class Agent(object):
    """
    One slow agent: holds either nothing (state 0) or `weight` units (state +1), and keeps its position while
    the price stays inside its comfort zone [lower, upper].
    """

    __slots__ = (
        "state",
        "lower",
        "upper",
        "weight",
        "herding",
        "threshold_volatility",
    )

    def __init__(self, state, lower, upper, weight=1.0, herding=0.0, threshold_volatility=0.0):
        """
        :param state: 0 or 1
        :param lower: lower price threshold L_i
        :param upper: upper price threshold U_i
        :param weight: w_i > 0
        :param herding: herding coefficient C_i >= 0, per unit time
        :param threshold_volatility: delta_i >= 0, per unit time
        """
        self.state = state
        self.lower = lower
        self.upper = upper
        self.weight = weight
        self.herding = herding
        self.threshold_volatility = threshold_volatility

    def is_minority(self, sigma):
        """
        True when the agent is on the smaller side of the market: holding while sigma < 0, or not holding while
        sigma > 0. Nobody is in the minority when sigma == 0.
        """
        if self.state == HOLDING:
            return sigma < 0
        return sigma > 0

    def __repr__(self):
        return "Agent(state={}, lower={}, upper={}, weight={}, herding={}, threshold_volatility={})".format(
            self.state,
            self.lower,
            self.upper,
            self.weight,
            self.herding,
            self.threshold_volatility,
        )


class MarketState(object):
    """
    The full state of the market after a resolved timestep. The agent population is stored column-wise in
    numpy arrays (one entry per agent); `agents` gives the row view as Agent objects.
    """

    def __init__(
        self,
        price,
        sigma,
        states,
        lower,
        upper,
        weights,
        herding,
        threshold_volatility,
        step=0,
        log_price=None,
    ):
        self.price = float(price)
        self.log_price = math.log(self.price) if log_price is None else float(log_price)
        self.sigma = float(sigma)
        self.step = step

        self.states = np.asarray(states, dtype=np.int8)
        self.lower = np.asarray(lower, dtype=np.float64)
        self.upper = np.asarray(upper, dtype=np.float64)
        self.weights = np.asarray(weights, dtype=np.float64)
        self.herding = np.asarray(herding, dtype=np.float64)
        self.threshold_volatility = np.asarray(threshold_volatility, dtype=np.float64)
        self.total_weight = float(self.weights.sum())

    @classmethod
    def from_agents(cls, agents, price, sigma=None, step=0):
        """
        Build a market from a list of Agent objects. sigma is computed from the agents when not given.
        """
        # local import, dynamics imports this module
        from .dynamics import compute_sigma

        if sigma is None:
            sigma = compute_sigma(agents)
        return cls(
            price=price,
            sigma=sigma,
            states=[a.state for a in agents],
            lower=[a.lower for a in agents],
            upper=[a.upper for a in agents],
            weights=[a.weight for a in agents],
            herding=[a.herding for a in agents],
            threshold_volatility=[a.threshold_volatility for a in agents],
            step=step,
        )

    @property
    def num_agents(self):
        return len(self.states)

    @property
    def agents(self):
        """
        :rtype: list[Agent]
        """
        return [self.agent(i) for i in range(self.num_agents)]

    def agent(self, index):
        return Agent(
            state=int(self.states[index]),
            lower=float(self.lower[index]),
            upper=float(self.upper[index]),
            weight=float(self.weights[index]),
            herding=float(self.herding[index]),
            threshold_volatility=float(self.threshold_volatility[index]),
        )

    def copy(self):
        return MarketState(
            price=self.price,
            log_price=self.log_price,
            sigma=self.sigma,
            states=self.states.copy(),
            lower=self.lower.copy(),
            upper=self.upper.copy(),
            weights=self.weights,
            herding=self.herding,
            threshold_volatility=self.threshold_volatility,
            step=self.step,
        )

    def holding_count(self):
        return int(np.count_nonzero(self.states))

    def __repr__(self):
        return "MarketState(step={}, price={}, sigma={}, num_agents={})".format(
            self.step, self.price, self.sigma, self.num_agents
        )


class StepOutcome(object):
    def __init__(self, new_price, new_sigma, switch_count, cascade_iterations):
        """
        Telemetry of one resolved timestep.
        :param new_price: price at the end of the step
        :param new_sigma: sentiment at the end of the step
        :param switch_count: number of agents that switched during the step
        :param cascade_iterations: number of switching batches the cascade needed
        """
        self.new_price = new_price
        self.new_sigma = new_sigma
        self.switch_count = switch_count
        self.cascade_iterations = cascade_iterations

    def __repr__(self):
        return "StepOutcome(new_price={}, new_sigma={}, switch_count={}, cascade_iterations={})".format(
            self.new_price, self.new_sigma, self.switch_count, self.cascade_iterations
        )
