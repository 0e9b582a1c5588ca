"""Private retrieval protocols over joint codes: queries, answers, reconstruction and rates."""
import logging
from fractions import Fraction

import numpy as np

from .codes import (
    FAMILY_EXPANDED_2N2, FAMILY_EXPANDED_PARITY, FAMILY_JOINT_2N2, FAMILY_JOINT_PARITY, encode
)
from .errors import ParameterError, ReconstructionError, UnsupportedFamilyError
from .gf import mat_solve
from .utils import as_int_array

logger = logging.getLogger(__name__)


def _cyclic_queries(params):
    """Queries of the ``(2, N, 2)`` code and its randomized expansion: ``f`` ranges over ``0..N0-2``.

    For ``W^1`` every database reads symbol ``f``; for ``W^2`` databases ``(1, j)`` and ``(2, j)`` read ``f`` and
    database ``(n, j)`` reads ``f - (n - 2)`` modulo ``N0 - 1``.
    """
    m, shifts = params.m_factor, params.base_n - 1
    f_values = list(range(shifts))
    table = np.zeros((params.K, len(f_values), params.N), dtype=np.int64)
    for fi, f in enumerate(f_values):
        for db in range(params.N):
            n = db // m + 1
            table[0, fi, db] = f
            table[1, fi, db] = f if n <= 2 else (f - (n - 2)) % shifts
    return f_values, table


def _parity_queries(params):
    """Queries of the parity code and its Cauchy expansion: ``f`` is 1 or 2.

    The group holding the desired message reads the other row (index ``2 - f``); every other group, the coded group
    included, reads row ``f - 1``.
    """
    m = params.m_factor
    f_values = [1, 2]
    table = np.zeros((params.K, len(f_values), params.N), dtype=np.int64)
    for k in range(params.K):
        for fi, f in enumerate(f_values):
            for db in range(params.N):
                group = db // m
                table[k, fi, db] = 2 - f if group == k else f - 1
    return f_values, table


QUERY_BUILDERS = {
    FAMILY_JOINT_2N2: _cyclic_queries,
    FAMILY_EXPANDED_2N2: _cyclic_queries,
    FAMILY_JOINT_PARITY: _parity_queries,
    FAMILY_EXPANDED_PARITY: _parity_queries,
}


def build_query_table(params):
    """Randomness values and query table of a built-in family.

    :param mds_pir.codes.SystemParams params: system parameters
    :return: ``(f_values, table)`` where ``table[k - 1, f_index, n - 1]`` is the stored-symbol index database ``n``
        is asked for
    :raises UnsupportedFamilyError: for codes without a built-in scheme
    """
    try:
        builder = QUERY_BUILDERS[params.family]
    except KeyError:
        raise UnsupportedFamilyError("no built-in retrieval scheme for family %r" % (params.family,))
    return builder(params)


class Scheme(object):
    """A one-round retrieval protocol: each database returns one stored symbol chosen by the query table."""

    def __init__(self, code, f_values, query_table, answer_length=1):
        """
        :param mds_pir.codes.JointCode code: the storage code
        :param list f_values: the values of the uniform random key ``F``
        :param query_table: ``K × |F| × N`` stored-symbol indices
        :param int answer_length: symbols each database returns
        """
        self.code = code
        self.f_values = tuple(int(f) for f in f_values)
        self.query_table = np.asarray(query_table, dtype=np.int64)
        self.answer_length = answer_length
        params = code.params
        expected = (params.K, len(self.f_values), params.N)
        if self.query_table.shape != expected:
            raise ParameterError("query table has shape %s, expected %s" % (self.query_table.shape, expected))
        if self.query_table.size and (self.query_table.min() < 0 or self.query_table.max() >= params.M):
            raise ParameterError("query indices must lie in [0, %d)" % params.M)

    @property
    def f_size(self):
        return len(self.f_values)

    @property
    def params(self):
        return self.code.params

    def f_index(self, f):
        try:
            return self.f_values.index(int(f))
        except ValueError:
            raise ParameterError("f=%r is not one of %s" % (f, list(self.f_values)))

    def check_k_star(self, k_star):
        if not 1 <= int(k_star) <= self.params.K:
            raise ParameterError("k_star=%r out of range 1..%d" % (k_star, self.params.K))
        return int(k_star)

    def __repr__(self):
        return "Scheme(%r, |F|=%d)" % (self.code, self.f_size)


def make_scheme(code, query_table=None, f_values=None):
    """Attach the retrieval protocol of the code's family, or an explicit query table.

    :param mds_pir.codes.JointCode code: the storage code
    :param query_table: optional ``K × |F| × N`` table overriding the family's
    :param f_values: randomness values of an explicit table, ``0..|F|-1`` by default
    :rtype: Scheme
    """
    if query_table is None:
        f_values, query_table = build_query_table(code.params)
    elif f_values is None:
        f_values = list(range(np.shape(query_table)[1]))
    return Scheme(code, f_values, query_table)


def gen_queries(scheme, k_star, f):
    """Stored-symbol index requested from every database.

    :rtype: tuple[int]
    """
    k_star = scheme.check_k_star(k_star)
    return tuple(int(i) for i in scheme.query_table[k_star - 1, scheme.f_index(f)])


def answer(storage_n, query):
    """The stored symbol at index ``query``."""
    query = int(query)
    if not 0 <= query < len(storage_n):
        raise ParameterError("query index %d out of range 0..%d" % (query, len(storage_n) - 1))
    return storage_n[query]


def decoding_matrix(scheme, k_star, f):
    """``L × N`` matrix ``D`` with ``W^{k*} = D · answers`` for every message instance.

    Each answer is the linear form ``G_n[q_n]`` of the stacked messages; every coordinate of ``W^{k*}`` must lie in the
    row space of those forms.

    :raises ReconstructionError: if some desired coordinate is outside that row space
    """
    k_star = scheme.check_k_star(k_star)
    code = scheme.code
    params = code.params
    queries = gen_queries(scheme, k_star, f)
    forms = code.generators[np.arange(params.N), list(queries)]
    desired = np.zeros((params.symbols, params.L), dtype=np.int64)
    for i in range(params.L):
        desired[(k_star - 1) * params.L + i, i] = 1

    result = mat_solve(code.field, forms.T, desired)
    if not result.consistent:
        raise ReconstructionError("W^%d is not recoverable from the answers for f=%s" % (k_star, f),
                                  k_star=k_star, f=f)
    return result.solution.T


def reconstruct(scheme, k_star, f, answers):
    """Recover the desired message from one answer per database.

    :return: the ``L`` symbols of ``W^{k*}``
    """
    answers = scheme.code.field.matrix(answers)
    if answers.shape != (scheme.params.N,):
        raise ParameterError("expected %d answers, got shape %s" % (scheme.params.N, answers.shape))
    return decoding_matrix(scheme, k_star, f) @ answers


def closed_form_reconstruct(scheme, k_star, f, answers):
    """Explicit decoding of the ``(2, N, 2)`` code.

    For ``W^1``: ``a_f = A_1`` and ``a_{f+n-2} = alpha^-(n-2-offset)·(A_n - A_2)``.
    For ``W^2``: ``b_f = A_2`` and ``b_{f-(n-2)} = A_n - alpha^(n-2-offset)·A_1``.
    """
    code = scheme.code
    if code.family != FAMILY_JOINT_2N2:
        raise UnsupportedFamilyError("closed-form decoding only exists for the (2, N, 2) code")
    k_star = scheme.check_k_star(k_star)
    f = scheme.f_values[scheme.f_index(f)]
    field = code.field
    params = code.params
    shifts = params.L
    offset = int(code.construction.get('exponent_offset', 0))
    answers = field.matrix(answers)
    alpha = field.primitive

    result = field.zeros(shifts)
    if k_star == 1:
        result[f] = answers[0]
        for n in range(3, params.N + 1):
            result[(f + n - 2) % shifts] = alpha ** (offset + 2 - n) * (answers[n - 1] - answers[1])
    else:
        result[f] = answers[1]
        for n in range(3, params.N + 1):
            result[(f - (n - 2)) % shifts] = answers[n - 1] - alpha ** (n - 2 - offset) * answers[0]
    return result


def retrieval_rate(scheme):
    """Desired symbols per downloaded symbol, ``L / (N · answer_length)``, as an exact fraction."""
    return Fraction(scheme.params.L, scheme.params.N * scheme.answer_length)


class Transcript(object):
    """One simulated retrieval."""

    def __init__(self, k_star, f, queries, answers, reconstructed, download_count):
        self.k_star = k_star
        self.f = f
        self.queries = tuple(queries)
        self.answers = answers
        self.reconstructed = reconstructed
        self.download_count = download_count

    def __repr__(self):
        return "Transcript(k_star=%d, f=%d, queries=%s, answers=%s, reconstructed=%s)" % (
            self.k_star, self.f, self.queries, as_int_array(self.answers).tolist(),
            as_int_array(self.reconstructed).tolist()
        )


def retrieve(scheme, messages, k_star, f):
    """Run the protocol for a fixed key ``f``: encode, query, answer and reconstruct.

    :rtype: Transcript
    :raises ReconstructionError: if the result differs from ``W^{k*}``
    """
    code = scheme.code
    k_star = scheme.check_k_star(k_star)
    messages = code.field.matrix(messages)
    storage = encode(code, messages)
    queries = gen_queries(scheme, k_star, f)
    answers = code.field.matrix([answer(storage[n], q) for n, q in enumerate(queries)])
    reconstructed = reconstruct(scheme, k_star, f, answers)
    if not np.array_equal(as_int_array(reconstructed), as_int_array(messages[k_star - 1])):
        raise ReconstructionError("reconstructed W^%d differs from the stored message" % k_star, k_star=k_star, f=f)
    return Transcript(k_star, f, queries, answers, reconstructed, scheme.params.N * scheme.answer_length)


def simulate_retrieval(scheme, messages, k_star, rng):
    """Run the protocol with ``f`` drawn uniformly using ``rng``.

    :param numpy.random.Generator rng: source of the random key
    :rtype: Transcript
    """
    f = scheme.f_values[int(rng.integers(scheme.f_size))]
    logger.debug("retrieving W^%d with f=%d", k_star, f)
    return retrieve(scheme, messages, k_star, f)
