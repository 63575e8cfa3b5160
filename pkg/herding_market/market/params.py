import math
import numbers

from herding_market.core.message import SimConfMessage

WEIGHT_SCHEMES = ("unit", "pareto")


class InvalidParameterError(ValueError):
    """A model parameter is out of its valid range. The message names the parameter."""


class ModelParams(SimConfMessage):
    def __init__(
        self,
        h=0.000004,
        kappa=0.1,
        alpha=1.0,
        num_agents=100000,
        steps_per_day=10,
        reset_lo=0.05,
        reset_hi=0.25,
        herding_lo=25.0,
        herding_hi=100.0,
        delta=0.2,
        initial_price=1.0,
        initial_sigma=0.0,
        weight_scheme="unit",
        pareto_exponent=2.0,
    ):
        """
        Calibration of the market model. The defaults are the calibrated values: a timestep of about a tenth of
        a trading day, 100000 equally weighted slow agents, 5-25% reset intervals and herding strengths in
        [25, 100].

        :param h: timestep, in units where the information stream has unit variance at h = 1
        :param kappa: market depth of the slow agents, log-price change per unit change of sigma
        :param alpha: fast agent distortion, new information is scaled by f = 1 + alpha |sigma|
        :param num_agents: number of slow agents M
        :param steps_per_day: timesteps summed into one daily return
        :param reset_lo: lower bound of the Z_L, Z_U uniform reset distribution
        :param reset_hi: upper bound of the Z_L, Z_U uniform reset distribution
        :param herding_lo: lower bound of the herding coefficients C_i
        :param herding_hi: upper bound of the herding coefficients C_i
        :param delta: threshold volatility delta_i, the same for all agents
        :param initial_price: price at step 0
        :param initial_sigma: sentiment at step 0, realised by an integer split of the agents
        :param weight_scheme: "unit", "pareto" or an explicit list of num_agents positive weights
        :param pareto_exponent: tail exponent of the weights when weight_scheme is "pareto"
        """
        SimConfMessage.__init__(self)
        self.h = h
        self.kappa = kappa
        self.alpha = alpha
        self.num_agents = num_agents
        self.steps_per_day = steps_per_day
        self.reset_lo = reset_lo
        self.reset_hi = reset_hi
        self.herding_lo = herding_lo
        self.herding_hi = herding_hi
        self.delta = delta
        self.initial_price = initial_price
        self.initial_sigma = initial_sigma
        self.weight_scheme = weight_scheme
        self.pareto_exponent = pareto_exponent

    def copy(self, **changes):
        """
        A copy with some fields replaced, e.g. params.copy(herding_lo=10, herding_hi=40).
        :rtype: ModelParams
        """
        fields = self.to_dict()
        for key in changes:
            if key not in fields:
                raise InvalidParameterError("Unknown model parameter {}".format(key))
        fields.update(changes)
        return ModelParams(**fields)

    def to_dict(self):
        weight_scheme = self.weight_scheme
        if not isinstance(weight_scheme, str):
            weight_scheme = [float(w) for w in weight_scheme]
        return {
            "h": self.h,
            "kappa": self.kappa,
            "alpha": self.alpha,
            "num_agents": self.num_agents,
            "steps_per_day": self.steps_per_day,
            "reset_lo": self.reset_lo,
            "reset_hi": self.reset_hi,
            "herding_lo": self.herding_lo,
            "herding_hi": self.herding_hi,
            "delta": self.delta,
            "initial_price": self.initial_price,
            "initial_sigma": self.initial_sigma,
            "weight_scheme": weight_scheme,
            "pareto_exponent": self.pareto_exponent,
        }

    def validate(self):
        """
        :raises InvalidParameterError: naming the first invalid parameter
        """
        check_real("h", self.h, lower=0.0, strict=True)
        check_real("kappa", self.kappa, lower=0.0)
        check_real("alpha", self.alpha, lower=0.0)
        check_int("num_agents", self.num_agents, lower=1)
        check_int("steps_per_day", self.steps_per_day, lower=1)
        check_real("reset_lo", self.reset_lo, lower=0.0, strict=True)
        check_real("reset_hi", self.reset_hi, lower=0.0, strict=True)
        if self.reset_lo > self.reset_hi:
            raise InvalidParameterError(
                "reset_lo ({}) must not exceed reset_hi ({})".format(
                    self.reset_lo, self.reset_hi
                )
            )
        check_real("herding_lo", self.herding_lo, lower=0.0)
        check_real("herding_hi", self.herding_hi, lower=0.0)
        if self.herding_lo > self.herding_hi:
            raise InvalidParameterError(
                "herding_lo ({}) must not exceed herding_hi ({})".format(
                    self.herding_lo, self.herding_hi
                )
            )
        check_real("delta", self.delta, lower=0.0)
        check_real("initial_price", self.initial_price, lower=0.0, strict=True)
        check_real("initial_sigma", self.initial_sigma, lower=-1.0, upper=1.0)
        check_real("pareto_exponent", self.pareto_exponent, lower=0.0, strict=True)

        if isinstance(self.weight_scheme, str):
            if self.weight_scheme not in WEIGHT_SCHEMES:
                raise InvalidParameterError(
                    "weight_scheme must be one of {} or a list of weights, got {!r}".format(
                        ", ".join(WEIGHT_SCHEMES), self.weight_scheme
                    )
                )
        else:
            weights = list(self.weight_scheme)
            if len(weights) != self.num_agents:
                raise InvalidParameterError(
                    "weight_scheme lists {} weights for {} agents".format(
                        len(weights), self.num_agents
                    )
                )
            for w in weights:
                check_real("weight_scheme", w, lower=0.0, strict=True)


def is_real(value):
    return isinstance(value, numbers.Real) and not isinstance(value, bool)


def check_real(name, value, lower=None, upper=None, strict=False):
    if not is_real(value) or not math.isfinite(value):
        raise InvalidParameterError(
            "{} must be a finite number, got {!r}".format(name, value)
        )
    if lower is not None and (value <= lower if strict else value < lower):
        raise InvalidParameterError(
            "{} must be {} {}, got {}".format(name, ">" if strict else ">=", lower, value)
        )
    if upper is not None and value > upper:
        raise InvalidParameterError(
            "{} must be <= {}, got {}".format(name, upper, value)
        )


def check_int(name, value, lower):
    if not isinstance(value, numbers.Integral) or isinstance(value, bool):
        raise InvalidParameterError(
            "{} must be an integer, got {!r}".format(name, value)
        )
    if value < lower:
        raise InvalidParameterError(
            "{} must be >= {}, got {}".format(name, lower, value)
        )
