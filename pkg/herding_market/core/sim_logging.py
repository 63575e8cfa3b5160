import logging

from . import utils


class SimLogFormatter(logging.Formatter):

    def formatException(self, exec_info):
        """
        Prepend every line of an exception with a | so tracebacks stand out from the run log.
        :param exec_info:
        :return:
        """
        text = super(SimLogFormatter, self).formatException(exec_info)
        text = "| " + text.replace("\n", "\n| ")
        text += "\n| NOTE: Exception occurred inside the simulator, not the calling script"
        return text


def get_sim_logger(name, log_level, log_file=None):
    """
    Set up logging to report progress of a component to the user. Always logs to the terminal, and also to
    `log_file` when one is given (the CLI points this at run.log in the output directory).

    :param name: A readable and identifiable name to indicate to the user where the log originated
    :param log_level: The logger.LOGLEVEL verbosity level
    :param log_file: Optional path of a file that receives the same records
    """
    # a fresh Logger, not logging.getLogger, so constructing a component twice never stacks handlers
    logger = logging.Logger(name)
    logger.setLevel(log_level)

    log_format = SimLogFormatter(
        "[%(name)s {host}]: %(levelname)s: %(message)s".format(
            host=utils.get_hostname()
        )
    )

    handler_terminal = logging.StreamHandler()
    handler_terminal.setFormatter(log_format)
    logger.addHandler(handler_terminal)

    if log_file is not None:
        handler_file = logging.FileHandler(log_file)
        handler_file.setFormatter(log_format)
        logger.addHandler(handler_file)

    return logger


def get_level(name):
    """
    Translate a level name from a config file ("INFO", "SIM_DEBUG_FRAMEWORK", ...) to its number.
    :param name: str or int
    :return: int
    """
    if isinstance(name, int):
        return name
    level = logging.getLevelName(str(name).upper())
    if not isinstance(level, int):
        raise ValueError("Unknown log level {}".format(name))
    return level


# Loglevel interpretation
# mostly follows python's defaults

CRITICAL = 50
ERROR = 40
WARNING = 30
INFO = 20  # run level information, throughput
DEBUG = 10  # per sweep point aggregates
SIM_DEBUG_FRAMEWORK = 6  # sparse messages, e.g. request dispatch, large cascades
SIM_DEBUG_FRAMEWORK_VERBOSE = 4  # detailed messages, e.g. every reply
NOTSET = 0


def debug_framework(self, message, *args, **kws):
    if self.isEnabledFor(SIM_DEBUG_FRAMEWORK):
        # Yes, logger takes its '*args' as 'args'.
        self._log(SIM_DEBUG_FRAMEWORK, message, args, **kws)


def debug_framework_verbose(self, message, *args, **kws):
    if self.isEnabledFor(SIM_DEBUG_FRAMEWORK_VERBOSE):
        # Yes, logger takes its '*args' as 'args'.
        self._log(SIM_DEBUG_FRAMEWORK_VERBOSE, message, args, **kws)


logging.addLevelName(SIM_DEBUG_FRAMEWORK, "SIM_DEBUG_FRAMEWORK")
logging.addLevelName(SIM_DEBUG_FRAMEWORK_VERBOSE, "SIM_DEBUG_FRAMEWORK_VERBOSE")

logging.Logger.debug_framework = debug_framework
logging.Logger.debug_framework_verbose = debug_framework_verbose
