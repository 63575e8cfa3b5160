import traceback
from concurrent.futures import ProcessPoolExecutor

from . import sim_logging
from .message import SimMessage, SimNotCompletedMessage
from .utils import is_sim_instance


class RunFailedError(RuntimeError):
    """A request failed while being handled, possibly in a worker process."""


def _serve_request(component_class, conf, log_level, log_file, request):
    """
    Start a component and let it handle a single request. Module level so it can be shipped to a worker
    process. Any exception is turned into a SimNotCompletedMessage, the manager decides what to do with it.
    :return: the serialized reply
    """
    try:
        component = component_class(log_level=log_level, conf=conf, log_file=log_file)
        reply = component._handle_request(request)
    except Exception:
        reply = SimNotCompletedMessage(traceback.format_exc())
    return reply.serialize()


class SimComponentManager(object):
    def __init__(
        self,
        component_class,
        conf=None,
        workers=1,
        log_level=sim_logging.INFO,
        log_file=None,
    ):
        """
        A component manager to hand requests to components, either one after the other in this process or
        spread over a pool of worker processes. Every request gets a fresh component instance, so the order in
        which workers pick up requests cannot influence the replies.

        :param component_class: The SimComponent subclass that handles the requests
        :param conf: Optional SimConfMessage passed to every component instance
        :param workers: Number of worker processes, 1 runs everything in the calling process
        """
        if workers < 1:
            raise ValueError("workers must be at least 1, got {}".format(workers))

        self.component_class = component_class
        self.conf = conf
        self.workers = workers
        self.log_level = log_level
        self.log_file = log_file

        self.logger = self.get_manager_logger(log_level)

    def get_manager_logger(self, log_level=sim_logging.INFO):
        """
        Create a logger to inform the user about the dispatching of requests.
        :return: Logger
        """
        name = "{manager}".format(manager=self.__class__.__name__)
        return sim_logging.get_sim_logger(name, log_level, log_file=self.log_file)

    def run(self, requests):
        """
        Handle all requests and return the replies in request order.
        :param requests: list of SimRequest
        :return: list of SimMessage replies
        :raises RunFailedError: when any request failed, naming the first failed request
        """
        requests = list(requests)
        self.logger.debug_framework(
            "Dispatching {} {} request(s) to {} worker(s)".format(
                len(requests), self.component_class.get_component_name(), self.workers
            )
        )

        args = (self.component_class, self.conf, self.log_level, self.log_file)

        if self.workers == 1 or len(requests) <= 1:
            serialized = [_serve_request(*args, request) for request in requests]
        else:
            n = len(requests)
            with ProcessPoolExecutor(max_workers=min(self.workers, n)) as pool:
                # executor.map keeps the request order regardless of completion order
                serialized = list(
                    pool.map(
                        _serve_request,
                        [self.component_class] * n,
                        [self.conf] * n,
                        [self.log_level] * n,
                        [self.log_file] * n,
                        requests,
                    )
                )

        replies = [SimMessage.deserialize(reply) for reply in serialized]
        for index, reply in enumerate(replies):
            if is_sim_instance(reply, SimNotCompletedMessage):
                self.logger.error(
                    "Request {} ({}) failed".format(
                        index, requests[index].get_message_name()
                    )
                )
                raise RunFailedError(
                    "Request {} failed, remote error:\n{}".format(index, reply.message)
                )
            self.logger.debug_framework_verbose(
                "Reply {}: {}".format(index, reply.get_message_name())
            )

        return replies
