from abc import ABCMeta, abstractmethod

from . import sim_logging
from .message import SimConfMessage, SimControlMessage, SimRequest
from .utils import is_sim_instance


class SimComponent(metaclass=ABCMeta):
    """
    Abstract class for components of the simulator: a unit of work that is configured once with a
    SimConfMessage and then answers requests, e.g. "run this scenario with this seed".
    """

    def __init__(self, log_level=sim_logging.INFO, conf=None, log_file=None):
        self.params = None

        self.logger = self._get_logger(log_level, log_file)

        # load config if set by user
        self.set_config(conf)

    def _get_logger(self, log_level, log_file):
        """
        Create a logger for the component to use to send messages to the user during its lifetime.
        :param log_level: The logging verbosity level, such as sim_logging.SIM_DEBUG_FRAMEWORK.
        :return: Logger
        """
        name = self.get_component_name()
        return sim_logging.get_sim_logger(name, log_level, log_file=log_file)

    def _handle_request(self, request):
        """
        Check the request is one this component accepts and pass it to the on_request handler. Exceptions
        raised by the handler are logged before they propagate.
        :param request:
        :return: the reply
        :rtype: SimMessage
        """

        self.logger.debug_framework_verbose(
            "Handling request {}".format(request.get_message_name())
        )

        if is_sim_instance(request, SimControlMessage):
            raise TypeError("Unknown request type {}".format(type(request)))

        if not any(is_sim_instance(request, accepted) for accepted in self.get_inputs()):
            raise TypeError(
                "{} does not accept {} (accepts: {})".format(
                    self.get_component_name(),
                    request.get_message_name(),
                    ", ".join(cls.__name__ for cls in self.get_inputs()),
                )
            )

        try:
            reply = self.on_request(request)
        except Exception as e:
            self.logger.exception(e)
            raise

        if is_sim_instance(request, SimRequest):
            reply._request_id = request._request_id

        return reply

    @classmethod
    def get_component_name(cls):
        """
        The display name of this component.
        """
        return cls.__name__

    def set_config(self, new=None):
        if new:
            conf = new
        else:
            conf = self.get_conf()

        self._parse_conf(conf)

    @abstractmethod
    def on_request(self, request):
        """
        Define the handler for requests. Must return a SimMessage as a reply to the request.
        :param request: The request for this component.
        :return: The reply
        :rtype: SimMessage
        """
        raise NotImplementedError("You need to define a request handler.")

    @staticmethod
    @abstractmethod
    def get_inputs():
        """
        Define the requests the component accepts as a list
        :return: list of Sim messages
        :rtype: List[Type[SimRequest]]
        """
        raise NotImplementedError("You need to define component input.")

    @staticmethod
    @abstractmethod
    def get_output():
        """
        Define the output of the component
        :return: Sim message
        :rtype: Type[SimMessage]
        """
        raise NotImplementedError("You need to define component output.")

    @staticmethod
    def get_conf():
        """
        Define a possible configuration using SimConfMessage
        :return: a SimConfMessage or None
        :rtype: SimConfMessage
        """
        return SimConfMessage()

    def _parse_conf(self, conf):
        """
        Helper function to parse configuration messages (SimConfMessage)
        :param conf: a SimConfMessage with the parameters as fields
        :type conf: SimConfMessage
        """
        assert is_sim_instance(conf, SimConfMessage), (
            "Configuration message should be of type SimConfMessage, "
            "is {type_conf}".format(type_conf=type(conf))
        )

        validate = getattr(conf, "validate", None)
        if validate is not None:
            validate()

        self.params = conf
