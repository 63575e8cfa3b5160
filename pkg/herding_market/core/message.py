import io
import itertools
import pickle

import numpy as np


class SimMessage(object):
    """
    The abstract message structure to pass data around the simulator: run requests, simulation outputs and
    sweep results. Supports python types, numpy arrays and nested messages. Replies cross process boundaries in
    their serialized form.
    """

    __NP_VALUES = []
    __SIM_MESSAGES = []
    # this request id must be set when the message is sent as a reply to a SimRequest
    _request_id = None

    def __eq__(self, other):
        """
        Loose check to compare if messages are the same type. type(a) == type(b) might not work because the
        messages might have been created in a different worker process.
        :param other:
        :return:
        """
        if hasattr(other, "get_message_name"):
            return self.get_message_name() == other.get_message_name()
        else:
            return False

    @classmethod
    def get_message_name(cls):
        """
        The pretty name of this message.
        :return:
        """
        return cls.__name__

    @staticmethod
    def _np2base(inp):
        """
        Convert numpy arrays to byte arrays.
        :param inp: a numpy array
        :return: the byte string
        """
        mem_stream = io.BytesIO()
        np.save(mem_stream, inp, allow_pickle=False)
        return mem_stream.getvalue()

    @staticmethod
    def _base2np(inp):
        """
        Convert back from byte arrays to numpy arrays.
        :param inp: a byte string
        :return: the numpy array
        """
        memfile = io.BytesIO()
        memfile.write(inp)
        memfile.seek(0)
        return np.load(memfile, allow_pickle=False)

    def serialize(self):
        """
        Convert object to its bytes representation, with numpy arrays stored in their lossless npy form.
        The message itself is left untouched.
        :return: bytes
        """
        clone = object.__new__(self.__class__)
        clone.__dict__.update(self.__dict__)
        clone.__NP_VALUES = []
        clone.__SIM_MESSAGES = []

        for attr in list(vars(self)):
            attr_value = getattr(self, attr)

            if isinstance(attr_value, SimMessage):
                setattr(clone, attr, attr_value.serialize())
                clone.__SIM_MESSAGES.append(attr)
            elif isinstance(attr_value, np.ndarray):
                setattr(clone, attr, self._np2base(attr_value))
                clone.__NP_VALUES.append(attr)

        return pickle.dumps(clone, protocol=pickle.HIGHEST_PROTOCOL)

    @staticmethod
    def _pickle_load(byte_string):
        try:
            return pickle.loads(byte_string)

        except pickle.UnpicklingError as e:
            raise pickle.UnpicklingError(
                "Byte string is likely not a SimMessage ({})".format(e)
            )

        except AttributeError as e:
            raise AttributeError(
                "You likely haven't imported the class of the stored message.\n--> Original error: {}".format(
                    e
                )
            )

    @classmethod
    def deserialize(cls, byte_string):
        """
        Convert object from its bytes representation.
        :return: a SimMessage subclass
        """
        obj = cls._pickle_load(byte_string)

        for field in obj.__SIM_MESSAGES:
            setattr(obj, field, SimMessage.deserialize(getattr(obj, field)))

        for field in obj.__NP_VALUES:
            setattr(obj, field, obj._base2np(getattr(obj, field)))

        obj.__SIM_MESSAGES = []
        obj.__NP_VALUES = []
        return obj

    def __repr__(self):
        max_len = 20
        out = str(self.__class__.__name__) + "\n"

        for attr in sorted(vars(self)):
            if attr.startswith("_"):
                continue

            attr_value = str(getattr(self, attr))
            out += " " + attr + ":" + attr_value[:max_len]

            if len(attr_value) > max_len:
                out += "[...]"

            out += "\n"

        return out


######################################################################################
#                             Message types                                          #
######################################################################################


class SimConfMessage(SimMessage):
    """
    A type of message that carries configuration information for components.
    """

    pass


_request_counter = itertools.count(1)


class SimRequest(SimMessage):
    """
    A type of message that must be met with a reply, a SimMessage with the same request id.
    """

    _request_id = None

    def __init__(self, request_id=None):
        if request_id:
            self._request_id = request_id
        else:
            # a counter and not a random id, request ids must not consume or depend on randomness
            self._request_id = next(_request_counter)


class SimControlMessage(SimMessage):
    """
    Superclass for all messages that are related to component control
    """


class SimNotCompletedMessage(SimControlMessage):
    def __init__(self, message):
        """
        Reply sent back instead of the normal output when handling a request raised an exception.
        :param message: the formatted error, including the remote traceback
        """
        self.message = message
