"""Joint MDS storage codes: construction, encoding, decoding and the MDS check."""
import itertools
import logging
import string
from collections import OrderedDict, namedtuple
from math import comb

import galois
import numpy as np

from .app_settings import pir_settings
from .errors import ConstructionError, DecodeError, ParameterError, SearchFailureError, UnsupportedFamilyError
from .gf import (
    cauchy_matrix, circulant_from_row, common_root_exists, coprime_part, criterion_applies, make_field,
    make_field_of_order, mat_rank, mat_solve, poly_from_row, smallest_prime_power, x_pow_minus_one
)
from .utils import as_int_array, make_rng

logger = logging.getLogger(__name__)

FAMILY_JOINT_2N2 = 'joint-2n2'
FAMILY_JOINT_PARITY = 'joint-parity'
FAMILY_EXPANDED_PARITY = 'expanded-parity'
FAMILY_EXPANDED_2N2 = 'expanded-2n2'
FAMILY_CUSTOM = 'custom'

#: families with a built-in retrieval scheme
BUILTIN_FAMILIES = [FAMILY_JOINT_2N2, FAMILY_JOINT_PARITY, FAMILY_EXPANDED_PARITY, FAMILY_EXPANDED_2N2]
FAMILIES = BUILTIN_FAMILIES + [FAMILY_CUSTOM]

LABEL_STYLE_LETTERS = 'letters'
LABEL_STYLE_INDEXED = 'indexed'


class SystemParams(object):
    """The ``(K, N, T)`` system together with the message and storage sizes ``L`` and ``M``.

    Family invariants are checked on construction.
    """

    def __init__(self, K, N, T, L, M, family, m_factor=1):
        """
        :param int K: number of messages
        :param int N: number of databases
        :param int T: any ``T`` databases recover every message
        :param int L: symbols per message
        :param int M: symbols stored per database
        :param str family: code family, one of :data:`FAMILIES`
        :param int m_factor: expansion multiplier, 1 for base codes
        """
        self.K, self.N, self.T, self.L, self.M = int(K), int(N), int(T), int(L), int(M)
        self.family = family
        self.m_factor = int(m_factor)
        self._check()

    def _check(self):
        K, N, T, L, M, m = self.K, self.N, self.T, self.L, self.M, self.m_factor
        if self.family not in FAMILIES:
            raise ParameterError("unknown code family %r" % (self.family,))
        if min(K, N, T, L, M, m) < 1:
            raise ParameterError("all system parameters must be positive: %r" % self)
        if T >= N:
            raise ParameterError("recovery threshold T=%d must be smaller than N=%d" % (T, N))
        if L * K != M * T:
            raise ParameterError("storage must satisfy L*K = M*T, got %d*%d != %d*%d" % (L, K, M, T))

        expected = None
        if self.family == FAMILY_JOINT_2N2:
            expected = (2, N, 2, N - 1, N - 1, 1)
            ok = N >= 3
        elif self.family == FAMILY_JOINT_PARITY:
            expected = (K, K + 1, K, 2, 2, 1)
            ok = K >= 2
        elif self.family == FAMILY_EXPANDED_PARITY:
            base_k = T // m
            expected = (base_k, m * (base_k + 1), m * base_k, 2 * m, 2, m)
            ok = base_k >= 2
        elif self.family == FAMILY_EXPANDED_2N2:
            base_n = N // m
            expected = (2, m * base_n, 2 * m, m * (base_n - 1), base_n - 1, m)
            ok = base_n >= 3
        else:
            ok = True
        if not ok or (expected is not None and (K, N, T, L, M, m) != expected):
            raise ParameterError("parameters %r violate the %s family invariants" % (self, self.family))

    @property
    def base_n(self):
        """Database count of the base code an expanded family was built from."""
        return self.N // self.m_factor

    @property
    def symbols(self):
        """Length ``K·L`` of the stacked message vector."""
        return self.K * self.L

    def as_tuple(self):
        return self.K, self.N, self.T, self.L, self.M, self.family, self.m_factor

    def __eq__(self, other):
        if not isinstance(other, SystemParams):
            return NotImplemented
        return self.as_tuple() == other.as_tuple()

    def __hash__(self):
        return hash(self.as_tuple())

    def __repr__(self):
        return "SystemParams(K=%d, N=%d, T=%d, L=%d, M=%d, family=%r, m_factor=%d)" % self.as_tuple()


class CoeffSet(object):
    """Random coefficients of the ``(2, mN, 2m)`` expansion.

    ``h[n - 3, j - 1, i]`` and ``g[n - 3, j - 1, i]`` are the length-``m`` row vectors multiplying the shifted ``a``
    and the ``b`` segment vectors in symbol ``i`` of database ``(n, j)``.
    """

    def __init__(self, field, h, g, seed=None):
        self.field = field
        self.h = field.matrix(h)
        self.g = field.matrix(g)
        self.seed = seed
        if self.h.ndim != 4 or self.h.shape != self.g.shape:
            raise ParameterError("coefficient arrays must both have shape (N0-2, m, N0-1, m)")
        n_blocks, m, shifts, m2 = self.h.shape
        if m != m2:
            raise ParameterError("coefficient vectors must have length m=%d, got %d" % (m, m2))

    @property
    def m(self):
        return self.h.shape[1]

    @property
    def base_n(self):
        return self.h.shape[0] + 2

    def H(self, n, i):
        """``m × m`` matrix stacking ``h_{n,j,i}`` over ``j``."""
        return self.h[n - 3, :, i, :]

    def G(self, n, i):
        return self.g[n - 3, :, i, :]

    def singular_count(self):
        """Number of ``H_{n,i}``/``G_{n,i}`` matrices that are not full rank."""
        singular = 0
        for n in range(3, self.base_n + 1):
            for i in range(self.base_n - 1):
                for mat in (self.H(n, i), self.G(n, i)):
                    if mat_rank(self.field, mat) < self.m:
                        singular += 1
        return singular


class JointCode(object):
    """A linear joint storage code: database ``n`` stores ``G_n · w`` for the stacked message vector
    ``w = (W^1; ...; W^K)``."""

    def __init__(self, params, field, generators, labels=None, coefficients=None, construction=None,
                 provenance=None):
        """
        :param SystemParams params: system parameters
        :param mds_pir.gf.FieldSpec field: the field
        :param generators: ``N × M × K·L`` array of canonical elements
        :param list[list[str]] labels: optional human-readable expression per stored symbol
        :param CoeffSet coefficients: random coefficients, for the randomized expansion only
        :param dict construction: family-specific construction parameters, e.g. the exponent offset
        :param dict provenance: how the code was obtained (seed, attempts, fields tried)
        """
        self.params = params
        self.field = field
        self.generators = field.matrix(generators)
        expected = (params.N, params.M, params.symbols)
        if self.generators.shape != expected:
            raise ParameterError("generators have shape %s, expected %s" % (self.generators.shape, expected))
        if labels is not None:
            labels = [list(db) for db in labels]
            if len(labels) != params.N or any(len(db) != params.M for db in labels):
                raise ParameterError("labels must give one expression per stored symbol")
        self.labels = labels
        self.coefficients = coefficients
        self.construction = OrderedDict(construction or {})
        self.provenance = OrderedDict(provenance or {})

    @property
    def family(self):
        return self.params.family

    def generator(self, n):
        """``M × K·L`` generator of database ``n`` (1-based)."""
        self._check_db(n)
        return self.generators[n - 1]

    def stacked(self, subset):
        """Stack the generators of the given 1-based databases into a ``|subset|·M × K·L`` matrix."""
        for n in subset:
            self._check_db(n)
        rows = self.generators[[n - 1 for n in subset]]
        return rows.reshape(len(subset) * self.params.M, self.params.symbols)

    def _check_db(self, n):
        if not 1 <= n <= self.params.N:
            raise ParameterError("database index %d out of range 1..%d" % (n, self.params.N))

    def __repr__(self):
        return "JointCode(%r over %s)" % (self.params, self.field)


FieldBounds = namedtuple('FieldBounds', ['general_bound', 'per_prime_bounds'])
PairCheck = namedtuple('PairCheck', ['i', 'j', 'full_rank', 'criterion'])
MdsReport = namedtuple('MdsReport', ['ok', 'failing_subsets', 'checked'])


# region labels

def symbol_names(params, style=None):
    """Names of the stacked message symbols, in column order.

    The ``(2, N, 2)`` family numbers symbols from 0 (``a_0, b_0``); the parity families number them from 1, using
    letters (``a_1, b_1, c_1``) or the indexed form ``W^k_i``.
    """
    K, L = params.K, params.L
    style = style or (LABEL_STYLE_LETTERS if K <= len(string.ascii_lowercase) else LABEL_STYLE_INDEXED)
    if params.family == FAMILY_JOINT_2N2:
        return ['%s_%d' % (string.ascii_lowercase[k], i) for k in range(K) for i in range(L)]
    if style == LABEL_STYLE_LETTERS:
        if K > len(string.ascii_lowercase):
            raise ParameterError("letter labels support at most %d messages" % len(string.ascii_lowercase))
        return ['%s_%d' % (string.ascii_lowercase[k], i + 1) for k in range(K) for i in range(L)]
    return ['W^%d_%d' % (k + 1, i + 1) for k in range(K) for i in range(L)]


def describe_row(row, names):
    """Render a linear form as text, e.g. ``2a_2+b_0``. Coefficient 1 is omitted."""
    terms = []
    for coeff, name in zip(as_int_array(row).tolist(), names):
        if coeff == 1:
            terms.append(name)
        elif coeff:
            terms.append('%d%s' % (coeff, name))
    return '+'.join(terms) if terms else '0'


def label_storage(code, style=None):
    """Label every stored symbol of ``code`` with its linear expression.

    In the indexed style, a plain sum of position ``i`` over all ``K`` messages renders as ``ΣW^k_i``.
    """
    params = code.params
    names = symbol_names(params, style)
    labels = []
    for n in range(1, params.N + 1):
        db = []
        for row in as_int_array(code.generator(n)):
            if style == LABEL_STYLE_INDEXED and params.K > 1:
                support = np.flatnonzero(row)
                positions = {int(c) % params.L for c in support}
                if len(support) == params.K and len(positions) == 1 and np.all(row[support] == 1):
                    db.append('ΣW^k_%d' % (positions.pop() + 1))
                    continue
            db.append(describe_row(row, names))
        labels.append(db)
    return labels


def expanded_parity_labels(K, m):
    """Symbolic labels of the Cauchy expansion, grouped ``(k, j)`` for raw groups and ``(K+1, j)`` for the coded
    group."""
    labels = []
    for k in range(1, K + 1):
        for j in range(1, m + 1):
            labels.append(['W^%d_{%d,%d}' % (k, s, j) for s in (1, 2)])
    for j in range(1, m + 1):
        labels.append(['C(%d,:)W_%d' % (j, s) for s in (1, 2)])
    return labels


def expanded_2n2_labels(base_n, m):
    """Symbolic labels of the randomized expansion; ``a_i`` and ``b_i`` are the length-``m`` segment vectors."""
    shifts = base_n - 1
    labels = []
    for n in range(1, base_n + 1):
        for j in range(1, m + 1):
            db = []
            for i in range(shifts):
                if n == 1:
                    db.append('a_{%d,%d}' % (i, j))
                elif n == 2:
                    db.append('b_{%d,%d}' % (i, j))
                else:
                    db.append('h_{%d,%d,%d}a_%d+g_{%d,%d,%d}b_%d' % (n, j, i, (i + n - 2) % shifts, n, j, i, i))
            labels.append(db)
    return labels

# endregion


# region (2, N, 2)

def min_field_2n2(n):
    """Field-size bounds for the ``(2, N, 2)`` construction.

    ``general_bound`` is ``(N-3)(N-1)+2``; for each prime ``p`` up to it, writing ``N-1 = r·p^l`` gives the smaller
    bound ``(N-3)r+2`` for fields of characteristic ``p``.

    :rtype: FieldBounds
    """
    n = int(n)
    if n < 3:
        raise ParameterError("the (2, N, 2) code needs N >= 3, got %d" % n)
    general_bound = (n - 3) * (n - 1) + 2
    per_prime_bounds = [
        (int(p), (n - 3) * coprime_part(n - 1, int(p)) + 2) for p in galois.primes(max(general_bound, 2))
    ]
    return FieldBounds(general_bound, per_prime_bounds)


def candidate_fields_2n2(n):
    """Field orders to try for ``(2, N, 2)``, ascending: the smallest power of each ``p`` reaching its bound, then
    the smallest prime power reaching the general bound."""
    bounds = min_field_2n2(n)
    orders = set()
    for p, bound in bounds.per_prime_bounds:
        q = p
        while q < bound:
            q *= p
        orders.add(q)
    orders.add(smallest_prime_power(bounds.general_bound))
    return sorted(q for q in orders if q <= pir_settings.MAX_FIELD_ORDER)


def _power_of_alpha(field, exponent):
    alpha = field.primitive
    if exponent < 0:
        return (alpha ** -1) ** -exponent
    return alpha ** exponent


def pair_circulant(field, n, i, j, exponent_offset=0):
    """Circulant ``C_{i,j}`` with ``S_i - S_j = C_{i,j}·a`` for databases ``3 <= i < j <= N``."""
    shifts = n - 1
    row = field.zeros(shifts)
    row[0] = _power_of_alpha(field, i - 2 - exponent_offset)
    row[j - i] = -_power_of_alpha(field, j - 2 - exponent_offset)
    return row, circulant_from_row(field, row)


def validate_pairs_2n2(field, n, exponent_offset=0):
    """Check every database pair ``3 <= i < j <= N`` of the ``(2, N, 2)`` code over ``field``.

    ``full_rank`` comes from elimination; ``criterion`` is the common-root verdict (no common root with
    ``x^(N-1) - 1``) or ``None`` where that test is not exact over this field.

    :rtype: list[PairCheck]
    """
    shifts = n - 1
    exact = criterion_applies(field, shifts)
    modulus = x_pow_minus_one(field, shifts)
    checks = []
    for i, j in itertools.combinations(range(3, n + 1), 2):
        row, circulant = pair_circulant(field, n, i, j, exponent_offset)
        full_rank = mat_rank(field, circulant) == shifts
        criterion = None
        if exact:
            criterion = not common_root_exists(field, poly_from_row(field, row), modulus)
            if criterion != full_rank:
                logger.warning("common-root test and rank disagree for pair (%d, %d) over %s", i, j, field)
        checks.append(PairCheck(i, j, full_rank, criterion))
    return checks


def _joint_2n2_generators(field, n, exponent_offset):
    shifts = n - 1
    gens = field.zeros((n, shifts, 2 * shifts))
    for i in range(shifts):
        gens[0, i, i] = 1
        gens[1, i, shifts + i] = 1
        for db in range(3, n + 1):
            gens[db - 1, i, (i + db - 2) % shifts] = _power_of_alpha(field, db - 2 - exponent_offset)
            gens[db - 1, i, shifts + i] = 1
    return gens


def _try_joint_2n2(field, n, exponent_offset):
    for check in validate_pairs_2n2(field, n, exponent_offset):
        verdict = check.full_rank if check.criterion is None else check.criterion
        if not verdict:
            raise ConstructionError(
                "%s is too small for N=%d: databases %d and %d are not jointly decodable" % (
                    field, n, check.i, check.j),
                pair=(check.i, check.j)
            )

    params = SystemParams(2, n, 2, n - 1, n - 1, FAMILY_JOINT_2N2)
    code = JointCode(params, field, _joint_2n2_generators(field, n, exponent_offset),
                     construction={'exponent_offset': exponent_offset})
    report = verify_mds(code)
    if not report.ok:
        raise ConstructionError("code over %s is not MDS" % field, pair=report.failing_subsets[0])
    code.labels = label_storage(code)
    return code


def build_joint_2n2(n, field=None, exponent_offset=0):
    """Build the ``(2, N, 2)`` joint code with message size ``L = N - 1``.

    Databases 1 and 2 store ``W^1`` and ``W^2``; database ``n >= 3`` stores
    ``alpha^(n-2-offset)·W^1`` cyclically shifted by ``n - 2``, plus ``W^2``.

    :param int n: number of databases, at least 3
    :param mds_pir.gf.FieldSpec field: field to use; by default the smallest candidate passing validation
    :param int exponent_offset: shifts every exponent of ``alpha`` down by this amount
    :rtype: JointCode
    :raises ConstructionError: if ``field`` is too small; ``pair`` names the failing databases
    """
    n = int(n)
    if n < 3:
        raise ParameterError("the (2, N, 2) code needs N >= 3, got %d" % n)
    if field is not None:
        return _try_joint_2n2(field, n, exponent_offset)

    last_error = None
    for q in candidate_fields_2n2(n):
        candidate = make_field_of_order(q)
        try:
            code = _try_joint_2n2(candidate, n, exponent_offset)
        except ConstructionError as exc:
            logger.debug("rejected %s for N=%d: %s", candidate, n, exc)
            last_error = exc
            continue
        logger.info("built (2, %d, 2) joint code over %s", n, candidate)
        return code
    raise ConstructionError("no candidate field validates for N=%d" % n, pair=getattr(last_error, 'pair', None))

# endregion


# region parity families

def build_joint_parity(K):
    """Build the ``(K, K+1, K)`` binary code: database ``k`` stores ``W^k``, database ``K+1`` stores the sum.

    :param int K: number of messages, at least 2
    :rtype: JointCode
    """
    K = int(K)
    if K < 2:
        raise ParameterError("the (K, K+1, K) code needs K >= 2, got %d" % K)
    field = make_field(2)
    params = SystemParams(K, K + 1, K, 2, 2, FAMILY_JOINT_PARITY)
    gens = field.zeros((K + 1, 2, 2 * K))
    for k in range(K):
        for i in range(2):
            gens[k, i, 2 * k + i] = 1
            gens[K, i, 2 * k + i] = 1
    code = JointCode(params, field, gens)
    code.labels = label_storage(code)
    return code


def expanded_parity_min_order(K, m):
    """Fewest field elements the Cauchy expansion needs: ``(m+1)K``, and at least ``m(K+1)`` distinct Cauchy
    parameters."""
    return max((m + 1) * K, m * (K + 1))


def expanded_parity_field(K, m):
    """Smallest field with at least :func:`expanded_parity_min_order` elements."""
    return make_field_of_order(smallest_prime_power(expanded_parity_min_order(K, m)))


def build_expanded_parity(K, m, field=None):
    """Expand the ``(K, K+1, K)`` code to ``(K, m(K+1), mK)`` with an ``m × mK`` Cauchy matrix.

    Message ``W^k`` is split into two segments of ``m`` symbols. Group ``k`` of ``m`` databases stores raw segment
    symbols, database ``j`` of group ``K+1`` stores ``C(j,:)`` applied to the stacked first segments and to the
    stacked second segments.

    :param int K: number of messages, at least 2
    :param int m: expansion factor, at least 1
    :param mds_pir.gf.FieldSpec field: field with at least ``(m+1)K`` elements
    :rtype: JointCode
    """
    K, m = int(K), int(m)
    if K < 2 or m < 1:
        raise ParameterError("the expanded parity code needs K >= 2 and m >= 1, got K=%d, m=%d" % (K, m))
    if field is None:
        field = expanded_parity_field(K, m)
    elif field.q < expanded_parity_min_order(K, m):
        raise ParameterError("%s is too small for K=%d, m=%d: need q >= %d" % (
            field, K, m, expanded_parity_min_order(K, m)))

    L = 2 * m
    params = SystemParams(K, m * (K + 1), m * K, L, 2, FAMILY_EXPANDED_PARITY, m_factor=m)
    alphas = list(range(m))
    betas = list(range(m, m + m * K))
    cauchy = cauchy_matrix(field, alphas, betas)

    gens = field.zeros((params.N, 2, params.symbols))
    for k in range(K):
        for j in range(m):
            for s in range(2):
                gens[k * m + j, s, k * L + s * m + j] = 1
    for j in range(m):
        for k in range(K):
            for jj in range(m):
                for s in range(2):
                    gens[K * m + j, s, k * L + s * m + jj] = cauchy[j, k * m + jj]

    code = JointCode(params, field, gens, labels=expanded_parity_labels(K, m),
                     construction=OrderedDict([('cauchy_alphas', alphas), ('cauchy_betas', betas)]))
    logger.info("built expanded parity code K=%d, m=%d over %s", K, m, field)
    return code


def build_separate_baseline(K, N, T, field):
    """Separate coding: every message is ``(N, T)``-MDS coded on its own with an ``N × T`` Cauchy generator.

    Database ``n`` stores one symbol of each message, so the joint generator is block diagonal.

    :rtype: JointCode
    :raises ParameterError: if ``q < N + T``
    """
    K, N, T = int(K), int(N), int(T)
    if not (K >= 1 and 1 <= T < N):
        raise ParameterError("separate coding needs K >= 1 and 1 <= T < N, got (%d, %d, %d)" % (K, N, T))
    if field.q < N + T:
        raise ParameterError("%s is too small for an (%d, %d) Cauchy code: need q >= %d" % (field, N, T, N + T))
    cauchy = cauchy_matrix(field, range(N), range(N, N + T))
    params = SystemParams(K, N, T, T, K, FAMILY_CUSTOM)
    gens = field.zeros((N, K, K * T))
    for n in range(N):
        for k in range(K):
            gens[n, k, k * T:(k + 1) * T] = cauchy[n]
    code = JointCode(params, field, gens, construction={'separate': True})
    code.labels = label_storage(code, LABEL_STYLE_INDEXED)
    return code


def is_separately_encoded(code):
    """Whether every stored symbol depends on a single message (block-diagonal generator)."""
    L = code.params.L
    for row in as_int_array(code.generators).reshape(-1, code.params.symbols):
        messages = {int(c) // L for c in np.flatnonzero(row)}
        if len(messages) > 1:
            return False
    return True

# endregion


# region (2, mN, 2m)

def schwartz_zippel_bound(base_n, m):
    """Worst-case field size ``2m(N-2)(N-1) + 2m(N-1)·C(mN, 2m)`` guaranteeing a good random assignment."""
    return 2 * m * (base_n - 2) * (base_n - 1) + 2 * m * (base_n - 1) * comb(m * base_n, 2 * m)


def expanded_2n2_start_order(base_n, m):
    """First field order the coefficient search tries."""
    return smallest_prime_power(2 * m * (base_n - 2) * (base_n - 1) + 2)


def expanded_2n2_code(field, coefficients, provenance=None):
    """Assemble the ``(2, mN, 2m)`` code from a coefficient set.

    Database ``(n, j)`` has index ``(n-1)m + j`` and stores ``m`` segment symbols ``a_{i,j}``, ``b_{i,j}`` for
    ``n = 1, 2``, or ``h_{n,j,i}·a_{i+n-2} + g_{n,j,i}·b_i`` for ``n >= 3``.

    :rtype: JointCode
    """
    base_n, m = coefficients.base_n, coefficients.m
    shifts = base_n - 1
    L = m * shifts
    params = SystemParams(2, m * base_n, 2 * m, L, shifts, FAMILY_EXPANDED_2N2, m_factor=m)
    gens = field.zeros((params.N, shifts, params.symbols))
    for n in range(1, base_n + 1):
        for j in range(m):
            db = (n - 1) * m + j
            for i in range(shifts):
                if n == 1:
                    gens[db, i, i * m + j] = 1
                elif n == 2:
                    gens[db, i, L + i * m + j] = 1
                else:
                    a_col = ((i + n - 2) % shifts) * m
                    gens[db, i, a_col:a_col + m] = coefficients.h[n - 3, j, i]
                    gens[db, i, L + i * m:L + (i + 1) * m] = coefficients.g[n - 3, j, i]
    return JointCode(params, field, gens, labels=expanded_2n2_labels(base_n, m), coefficients=coefficients,
                     provenance=provenance)


def lemma_assignment(base_n, m, n, j, target, j_star):
    """Unit-vector coefficients making database ``(n, j)`` store a cyclic shift of one segment vector.

    With ``target='a'`` the database stores ``a_{i+n-2, j*}`` in symbol ``i``; with ``target='b'`` it stores
    ``b_{i, j*}``.

    :return: ``(h, g)`` integer arrays of shape ``(N0-1, m)`` for that database
    """
    if target not in ('a', 'b'):
        raise ParameterError("target must be 'a' or 'b', not %r" % (target,))
    if not (3 <= n <= base_n and 1 <= j <= m and 1 <= j_star <= m):
        raise ParameterError("database (%d, %d) or segment %d out of range" % (n, j, j_star))
    h = np.zeros((base_n - 1, m), dtype=np.int64)
    g = np.zeros((base_n - 1, m), dtype=np.int64)
    (h if target == 'a' else g)[:, j_star - 1] = 1
    return h, g


def build_expanded_2n2(base_n, m, seed=0, max_attempts=None):
    """Search for random coefficients turning the ``(2, N0, 2)`` code into a ``(2, m·N0, 2m)`` joint MDS code.

    Each sample is accepted only when every ``H_{n,i}``, ``G_{n,i}`` is full rank and every ``2m``-subset of
    databases is decodable. After ``max_attempts`` rejected samples the search moves to the smallest prime power of at
    least twice the current order, up to the ``MAX_SEARCH_FIELD_ORDER`` setting. Sample ``attempt`` over a field of
    order ``q`` draws from the random stream ``(seed, q, attempt)``.

    :param int base_n: database count ``N0`` of the base code, at least 3
    :param int m: expansion factor, at least 1
    :param int seed: root seed
    :param int max_attempts: samples per field size, ``DEFAULT_MAX_ATTEMPTS`` when omitted
    :return: the code and its coefficients
    :rtype: tuple[JointCode, CoeffSet]
    :raises SearchFailureError: when the search runs past the largest allowed field
    """
    base_n, m = int(base_n), int(m)
    if base_n < 3 or m < 1:
        raise ParameterError("the expanded (2, mN, 2m) code needs N0 >= 3 and m >= 1, got N0=%d, m=%d" % (base_n, m))
    if max_attempts is None:
        max_attempts = pir_settings.DEFAULT_MAX_ATTEMPTS
    if max_attempts < 1:
        raise ParameterError("max_attempts must be positive, got %d" % max_attempts)

    shape = (base_n - 2, m, base_n - 1, m)
    diagnostics = OrderedDict([
        ('attempts', 0),
        ('fields_tried', []),
        ('singular_rejections', 0),
        ('mds_rejections', 0),
        ('failing_subsets', 0),
        ('schwartz_zippel_bound', schwartz_zippel_bound(base_n, m)),
    ])
    q = expanded_2n2_start_order(base_n, m)
    while q <= pir_settings.MAX_SEARCH_FIELD_ORDER:
        field = make_field_of_order(q)
        diagnostics['fields_tried'].append(q)
        for attempt in range(max_attempts):
            diagnostics['attempts'] += 1
            rng = make_rng(seed, q, attempt)
            coefficients = CoeffSet(field, field.random(shape, rng), field.random(shape, rng), seed=seed)
            singular = coefficients.singular_count()
            if singular:
                logger.debug("sample %d over %s rejected: %d singular H/G matrices", attempt, field, singular)
                diagnostics['singular_rejections'] += 1
                continue
            provenance = OrderedDict([
                ('seed', seed),
                ('attempts', diagnostics['attempts']),
                ('fields_tried', list(diagnostics['fields_tried'])),
            ])
            code = expanded_2n2_code(field, coefficients, provenance)
            report = verify_mds(code)
            if not report.ok:
                logger.debug("sample %d over %s rejected: %d subsets not decodable",
                             attempt, field, len(report.failing_subsets))
                diagnostics['mds_rejections'] += 1
                diagnostics['failing_subsets'] += len(report.failing_subsets)
                continue
            logger.info("found (2, %d, %d) code over %s after %d attempt(s)",
                        code.params.N, code.params.T, field, diagnostics['attempts'])
            return code, coefficients
        q = smallest_prime_power(2 * q)

    raise SearchFailureError(
        "no (2, %d, %d) code found within %d attempts per field up to order %d" % (
            m * base_n, 2 * m, max_attempts, pir_settings.MAX_SEARCH_FIELD_ORDER),
        diagnostics=diagnostics
    )

# endregion


# region encoding and decoding

def encode(code, messages):
    """Compute the storage of every database.

    :param JointCode code: the code
    :param messages: ``K × L`` message symbols
    :return: ``N × M`` stored symbols
    """
    params = code.params
    w = code.field.matrix(messages)
    if w.shape != (params.K, params.L):
        raise ParameterError("messages have shape %s, expected (%d, %d)" % (w.shape, params.K, params.L))
    flat = code.generators.reshape(params.N * params.M, params.symbols)
    return (flat @ w.reshape(params.symbols)).reshape(params.N, params.M)


def mds_decode(code, subset, stored):
    """Recover all messages from the storage of ``T`` databases.

    :param JointCode code: the code
    :param subset: ``T`` distinct 1-based database indices
    :param stored: ``T × M`` stored symbols, in ``subset`` order
    :return: ``K × L`` message symbols
    :raises DecodeError: if the stacked generators are rank deficient or ``stored`` is not a codeword
    """
    params = code.params
    subset = tuple(int(n) for n in subset)
    if len(subset) != params.T or len(set(subset)) != params.T:
        raise ParameterError("expected %d distinct databases, got %s" % (params.T, subset))
    values = code.field.matrix(stored)
    if values.shape != (params.T, params.M):
        raise ParameterError("stored symbols have shape %s, expected (%d, %d)" % (values.shape, params.T, params.M))

    result = mat_solve(code.field, code.stacked(subset), values.reshape(params.T * params.M))
    if not result.unique:
        raise DecodeError("databases %s do not determine the messages" % (subset,), subset=subset)
    if not result.consistent:
        raise DecodeError("stored symbols of databases %s are not a codeword" % (subset,), subset=subset)
    return result.solution.reshape(params.K, params.L)


def verify_mds(code):
    """Check that every ``T``-subset of databases determines all messages.

    :rtype: MdsReport
    """
    params = code.params
    failing = []
    checked = 0
    for subset in itertools.combinations(range(1, params.N + 1), params.T):
        checked += 1
        if mat_rank(code.field, code.stacked(subset)) < params.symbols:
            failing.append(subset)
    return MdsReport(not failing, failing, checked)

# endregion


def build_code(family, n=None, k=None, m_factor=1, field=None, exponent_offset=0, seed=0, max_attempts=None):
    """Build a code of a built-in family from command-style parameters.

    ``n`` is the database count of the ``(2, N, 2)`` families (``N0`` for the expansion); ``k`` is the message count
    of the parity families.

    :rtype: JointCode
    """
    def require(value, name):
        if value is None:
            raise ParameterError("family %s needs --%s" % (family, name))
        return int(value)

    if field is not None and family in (FAMILY_JOINT_PARITY, FAMILY_EXPANDED_2N2):
        raise ParameterError("family %s chooses its own field; --field is not accepted" % family)
    if family == FAMILY_JOINT_2N2:
        return build_joint_2n2(require(n, 'n'), field=field, exponent_offset=exponent_offset)
    if family == FAMILY_JOINT_PARITY:
        return build_joint_parity(require(k, 'k'))
    if family == FAMILY_EXPANDED_PARITY:
        return build_expanded_parity(require(k, 'k'), m_factor, field=field)
    if family == FAMILY_EXPANDED_2N2:
        code, _ = build_expanded_2n2(require(n, 'n'), m_factor, seed=seed, max_attempts=max_attempts)
        return code
    raise UnsupportedFamilyError("cannot build codes of family %r" % (family,))
