"""Exact checks of the storage and retrieval requirements, the separate-coding barrier, and brute-force oracles."""
import itertools
import logging
from collections import Counter, OrderedDict, namedtuple
from fractions import Fraction

import numpy as np

from .app_settings import pir_settings
from .codes import (
    FAMILY_EXPANDED_2N2, FAMILY_EXPANDED_PARITY, FAMILY_JOINT_2N2, FAMILY_JOINT_PARITY, build_code, encode, verify_mds
)
from .errors import ParameterError, PirError, UnsupportedFamilyError
from .schemes import answer, decoding_matrix, gen_queries, make_scheme, retrieval_rate
from .utils import as_int_array, make_rng

logger = logging.getLogger(__name__)

PrivacyReport = namedtuple('PrivacyReport', ['ok', 'per_db_distributions', 'first_violation'])
CorrectnessReport = namedtuple('CorrectnessReport', ['ok', 'structural_failures', 'value_failures', 'trials',
                                                     'checked'])
BarrierReport = namedtuple('BarrierReport', ['rate', 'c_perp', 'margin', 'broken'])


class SweepRow(object):
    """One parameter point of a barrier sweep."""

    def __init__(self, family, param, field=None, mds=None, privacy=None, correctness=None, barrier=None,
                 error=None):
        self.family = family
        self.param = param
        self.field = field
        self.mds = mds
        self.privacy = privacy
        self.correctness = correctness
        self.barrier = barrier
        self.error = error

    @property
    def failed(self):
        if self.error is not None:
            return True
        return not (self.mds and self.privacy and self.correctness and self.barrier.broken)

    def __repr__(self):
        return "SweepRow(%s %s, failed=%r)" % (self.family, self.param, self.failed)


def check_privacy(scheme):
    """Compare, per database, the distribution of requested indices over a uniform key across all desired messages.

    :rtype: PrivacyReport
    """
    params = scheme.params
    distributions = []
    first_violation = None
    for db in range(params.N):
        per_k = [Counter(int(i) for i in scheme.query_table[k, :, db]) for k in range(params.K)]
        distributions.append(per_k)
        if first_violation is None:
            for k in range(1, params.K):
                if per_k[k] != per_k[0]:
                    first_violation = (db + 1, 1, k + 1)
                    break
    return PrivacyReport(first_violation is None, distributions, first_violation)


def check_correctness(scheme, trials=None, rng=None):
    """Check that every ``(k*, f)`` pair recovers the desired message.

    The structural check certifies once per pair that ``W^{k*}`` lies in the row space of the answered forms; the value
    check then decodes ``trials`` random message instances. Failures are reported, not raised.

    :param Scheme scheme: the scheme
    :param int trials: random instances per pair, ``DEFAULT_TRIALS`` when omitted
    :param numpy.random.Generator rng: source of messages, seeded with ``DEFAULT_SEED`` when omitted
    :rtype: CorrectnessReport
    """
    if trials is None:
        trials = pir_settings.DEFAULT_TRIALS
    if trials < 1:
        raise ParameterError("trials must be at least 1, got %d" % trials)
    if rng is None:
        rng = make_rng(pir_settings.DEFAULT_SEED)

    code = scheme.code
    params = code.params
    structural_failures, value_failures = [], []
    checked = 0
    for k_star in range(1, params.K + 1):
        for f in scheme.f_values:
            checked += 1
            try:
                decoder = decoding_matrix(scheme, k_star, f)
            except PirError as exc:
                logger.debug("structural check failed for k*=%d, f=%d: %s", k_star, f, exc)
                structural_failures.append((k_star, f))
                continue
            queries = gen_queries(scheme, k_star, f)
            for trial in range(trials):
                messages = code.field.random((params.K, params.L), rng)
                storage = encode(code, messages)
                answers = code.field.matrix([answer(storage[n], q) for n, q in enumerate(queries)])
                recovered = decoder @ answers
                if not np.array_equal(as_int_array(recovered), as_int_array(messages[k_star - 1])):
                    value_failures.append((k_star, f, trial))
    ok = not structural_failures and not value_failures
    return CorrectnessReport(ok, structural_failures, value_failures, trials, checked)


def capacity_separate(K, N, T):
    """Capacity of retrieval from separately MDS-coded messages: ``(1 + T/N + ... + (T/N)^(K-1))^-1``.

    :rtype: fractions.Fraction
    """
    K, N, T = int(K), int(N), int(T)
    if K < 1 or not 1 <= T <= N:
        raise ParameterError("capacity needs K >= 1 and 1 <= T <= N, got (%d, %d, %d)" % (K, N, T))
    ratio = Fraction(T, N)
    return 1 / sum(ratio ** i for i in range(K))


def capacity_separate_closed_form(K, N, T):
    """``(1 - T/N) / (1 - (T/N)^K)``, equal to :func:`capacity_separate` whenever ``T < N``."""
    ratio = Fraction(int(T), int(N))
    if ratio == 1:
        return Fraction(1, int(K))
    return (1 - ratio) / (1 - ratio ** int(K))


def barrier_report(scheme):
    """Compare the scheme's rate with the separate-coding capacity of its own ``(K, N, T)``.

    :rtype: BarrierReport
    """
    params = scheme.params
    rate = retrieval_rate(scheme)
    c_perp = capacity_separate(params.K, params.N, params.T)
    margin = rate - c_perp
    return BarrierReport(rate, c_perp, margin, margin > 0)


def oracle_mds_injectivity(code, budget=None):
    """Brute-force MDS check: for every ``T``-subset, all ``q^(K·L)`` message tuples must give distinct storage.

    :return: the verdict, or ``None`` when the enumeration exceeds the budget
    """
    if budget is None:
        budget = pir_settings.ORACLE_BUDGET
    params = code.params
    field = code.field
    total = field.q ** params.symbols
    if total > budget:
        logger.debug("injectivity oracle skipped: %d message tuples exceed budget %d", total, budget)
        return None

    digits = np.stack(np.unravel_index(np.arange(total), (field.q,) * params.symbols), axis=1)
    words = field.matrix(digits)
    for subset in itertools.combinations(range(1, params.N + 1), params.T):
        stored = as_int_array(words @ code.stacked(subset).T)
        if len(np.unique(stored, axis=0)) != total:
            return False
    return True


def oracle_privacy_transcript(scheme, messages=None, seed=None):
    """Answer-level privacy check: generate the transcript of every ``(k*, f)`` over one fixed message instance and
    compare, per database, the multisets of (query, answer) pairs across desired messages.

    :rtype: bool
    """
    code = scheme.code
    params = code.params
    if messages is None:
        rng = make_rng(pir_settings.DEFAULT_SEED if seed is None else seed)
        messages = code.field.random((params.K, params.L), rng)
    storage = encode(code, messages)

    seen = [[Counter() for _ in range(params.K)] for _ in range(params.N)]
    for k_star in range(1, params.K + 1):
        for f in scheme.f_values:
            for n, q in enumerate(gen_queries(scheme, k_star, f)):
                seen[n][k_star - 1][(q, int(answer(storage[n], q)))] += 1
    return all(per_k[k] == per_k[0] for per_k in seen for k in range(1, params.K))


def _sweep_build(family, param, m_factor, seed):
    if family in (FAMILY_JOINT_2N2, FAMILY_EXPANDED_2N2):
        return build_code(family, n=param, m_factor=m_factor, seed=seed)
    return build_code(family, k=param, m_factor=m_factor)


def barrier_sweep(family, values, m_factor=1, trials=None, seed=None):
    """Build, verify and compare with the barrier at every parameter value.

    ``values`` are ``N`` (or ``N0``) for the ``(2, N, 2)`` families and ``K`` for the parity families. Construction
    failures are recorded in the row instead of stopping the sweep.

    :rtype: list[SweepRow]
    """
    if family not in (FAMILY_JOINT_2N2, FAMILY_JOINT_PARITY, FAMILY_EXPANDED_PARITY, FAMILY_EXPANDED_2N2):
        raise UnsupportedFamilyError("cannot sweep family %r" % (family,))
    if seed is None:
        seed = pir_settings.DEFAULT_SEED
    rows = []
    for param in values:
        row = SweepRow(family, param)
        try:
            code = _sweep_build(family, param, m_factor, seed)
            scheme = make_scheme(code)
            row.field = str(code.field)
            row.mds = verify_mds(code).ok
            row.privacy = check_privacy(scheme).ok
            row.correctness = check_correctness(scheme, trials, make_rng(seed, param)).ok
            row.barrier = barrier_report(scheme)
        except PirError as exc:
            logger.warning("sweep of %s failed at %s: %s", family, param, exc)
            row.error = str(exc)
        rows.append(row)
    return rows


def sweep_summary(rows):
    """Per-row dictionaries with exact rationals, in sweep order."""
    summary = []
    for row in rows:
        barrier = row.barrier
        summary.append(OrderedDict([
            ('param', row.param),
            ('field', row.field),
            ('rate', barrier.rate if barrier else None),
            ('c_perp', barrier.c_perp if barrier else None),
            ('margin', barrier.margin if barrier else None),
            ('broken', barrier.broken if barrier else None),
            ('mds', row.mds),
            ('privacy', row.privacy),
            ('correctness', row.correctness),
            ('error', row.error),
            ('failed', row.failed),
        ]))
    return summary
