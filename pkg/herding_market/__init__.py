from .core import sim_logging, utils
from .core.component import SimComponent
from .core.component_manager import RunFailedError, SimComponentManager
from .core.message import *
from .market import InvalidParameterError, MarketError, MarketState, ModelParams
from .stochastic import InvalidRangeError, RandomStream
