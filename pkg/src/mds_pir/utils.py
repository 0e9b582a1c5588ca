import logging
import re

import numpy as np

from .app_settings import pir_settings
from .errors import ParameterError

logger = logging.getLogger(__name__)

RANGE_RE = re.compile(r'^\s*(?P<start>\d+)\s*(?:\.\.|-|:)\s*(?P<stop>\d+)\s*$')


def make_rng(seed, *stream):
    """Build a ``numpy.random.Generator`` for the stream identified by ``(seed, *stream)``.

    The bit generator class comes from the ``BIT_GENERATOR_CLASS`` setting (``PCG64`` by default). Each distinct
    ``stream`` tuple yields an independent, reproducible sequence, so work split by attempt index or parameter point
    does not depend on evaluation order.

    :param int seed: root seed
    :param int stream: stream identifiers, e.g. field order and attempt index
    :rtype: numpy.random.Generator
    """
    if seed is None or int(seed) < 0:
        raise ParameterError("seed must be a non-negative integer, not %r" % (seed,))
    bit_generator_class = pir_settings.BIT_GENERATOR_CLASS
    seed_seq = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(bit_generator_class(seed_seq))


def parse_range(text):
    """Parse an inclusive integer range written as ``a..b`` (``a-b`` and ``a:b`` are accepted too).

    An empty string or a range with ``b < a`` yields an empty list.

    :param str text: range expression
    :rtype: list[int]
    """
    if not text or not text.strip():
        return []
    match = RANGE_RE.match(text)
    if match is None:
        if text.strip().isdigit():
            return [int(text)]
        raise ParameterError("invalid range %r, expected a..b" % text)
    start, stop = int(match.group('start')), int(match.group('stop'))
    return list(range(start, stop + 1))


def filter_none(obj):
    """Remove ``None`` values from tuples, lists or dictionaries. Return other objects as-is.

    :param obj: the object
    :return: collection with ``None`` values removed
    """
    if obj is None:
        return None
    new_obj = None
    if isinstance(obj, dict):
        new_obj = type(obj)((k, v) for k, v in obj.items() if k is not None and v is not None)
    if isinstance(obj, (list, tuple)):
        new_obj = type(obj)(v for v in obj if v is not None)
    if new_obj is not None and len(new_obj) != len(obj):
        return new_obj
    return obj


def as_int_array(values):
    """View field elements (or anything array-like) as a plain integer ``numpy`` array of canonical encodings."""
    if isinstance(values, np.ndarray):
        return np.asarray(values.view(np.ndarray), dtype=np.int64)
    return np.asarray(values, dtype=np.int64)
