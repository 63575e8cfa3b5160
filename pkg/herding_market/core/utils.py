import contextlib
import hashlib
import json
import os
import socket
import tempfile

# Floats are written with 17 significant digits, enough for a lossless round-trip of an IEEE double.
FLOAT_FORMAT = "%.17g"


def get_hostname():
    """
    The host name shown in log lines, so logs from worker machines can be told apart.
    :return: str
    """
    try:
        return socket.gethostname()
    except OSError:
        return "localhost"


def format_float(value):
    return FLOAT_FORMAT % value


def config_hash(mapping):
    """
    A stable fingerprint of a resolved configuration: SHA-256 over the sorted-key JSON encoding.
    :param mapping: a JSON-serializable dict
    :return: hex digest
    :rtype: str
    """
    canonical = json.dumps(mapping, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@contextlib.contextmanager
def atomic_write(path, mode="w", newline=None):
    """
    Write a file so readers never see it half written. The content goes to a temporary file in the same
    directory, which replaces `path` only when the block exits without an exception.

    Example:
        with atomic_write("out/summary.json") as f:
            json.dump(summary, f)

    :param path: the final file path
    :param mode: "w" for text or "wb" for bytes
    """
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(
        dir=directory, prefix=".{}.".format(os.path.basename(path)), suffix=".tmp"
    )
    try:
        if "b" in mode:
            f = os.fdopen(fd, mode)
        else:
            f = os.fdopen(fd, mode, encoding="utf-8", newline=newline)
        with f:
            yield f
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise


def is_sim_instance(obj, cls):
    """
    Return True if the object argument is an instance of the classinfo argument, or of a (direct, indirect,
    or virtual) subclass thereof.

    isinstance does not work reliably for objects that were pickled to a worker process and back, so a looser
    class name check is performed.
    https://stackoverflow.com/questions/620844/why-do-i-get-unexpected-behavior-in-python-isinstance-after-pickling
    :param obj:
    :param cls:
    :return:
    """
    parents = obj.__class__.__mro__
    for parent in parents:
        if parent.__name__ == cls.__name__:
            return True

    return False
