from .config import ConfigError, RunConfig, config_from_dict, parse_config
from .files import FormatError
from .main import main
