"""Exact finite-field arithmetic over GF(p^m) built on :mod:`galois`.

Elements are ``galois.FieldArray`` values whose integer representation is the canonical encoding used everywhere in
this package: the base-p, little-endian digit vector of the element's polynomial coefficients.
"""
import functools
import logging
import re

import galois
import numpy as np

from .app_settings import pir_settings
from .errors import FieldCapacityError, FieldDivisionError, ParameterError
from .utils import as_int_array

logger = logging.getLogger(__name__)

OP_ADD = 'add'
OP_SUB = 'sub'
OP_MUL = 'mul'
OP_INV = 'inv'
OP_POW = 'pow'

FIELD_RE = re.compile(r'^\s*(?:GF\()?\s*(?P<p>\d+)\s*(?:\^\s*(?P<m>\d+))?\s*\)?\s*$')


class FieldSpec(object):
    """A concrete finite field GF(p^m) with a fixed modulus polynomial and primitive element.

    Instances are immutable and cached by :func:`make_field`, so equal parameters share one ``FieldArray`` class.
    """

    def __init__(self, p, m, modulus, alpha, field_class):
        """
        :param int p: prime characteristic
        :param int m: extension degree
        :param tuple[int] modulus: monic irreducible modulus as little-endian coefficient digits, length ``m + 1``
        :param int alpha: canonical encoding of the primitive element
        :param type field_class: the generated ``galois.FieldArray`` subclass
        """
        self._p = p
        self._m = m
        self._modulus = tuple(modulus)
        self._alpha = alpha
        self.GF = field_class

    p = property(lambda self: self._p)
    m = property(lambda self: self._m)
    modulus = property(lambda self: self._modulus)
    alpha = property(lambda self: self._alpha)

    @property
    def q(self):
        return self._p ** self._m

    @property
    def primitive(self):
        """The primitive element as a field scalar."""
        return self.GF(self._alpha)

    def element(self, value):
        """Convert a canonical integer (or an element) into a field scalar.

        :raises ParameterError: if the value is not in ``[0, q)``
        """
        value = int(value)
        if not 0 <= value < self.q:
            raise ParameterError("%d is not an element of GF(%d)" % (value, self.q))
        return self.GF(value)

    def matrix(self, values):
        """Convert an integer grid (or a ``FieldArray`` of this field) into a ``FieldArray``.

        :raises ParameterError: if an entry is outside ``[0, q)``
        """
        ints = as_int_array(values)
        if ints.size and (ints.min() < 0 or ints.max() >= self.q):
            raise ParameterError("matrix entries must lie in [0, %d)" % self.q)
        return self.GF(ints)

    def zeros(self, shape):
        return self.GF.Zeros(shape)

    def elements(self):
        return self.GF.elements

    def random(self, shape, rng):
        """Draw i.i.d. uniform elements with the given ``numpy.random.Generator``."""
        return self.GF.Random(shape, seed=rng)

    def check(self):
        """Re-verify the field invariants: irreducible modulus and a primitive ``alpha`` of order ``q - 1``.

        :raises ParameterError: if an invariant does not hold
        """
        if self._m > 1:
            base = galois.GF(self._p)
            modulus = galois.Poly(list(self._modulus), field=base, order='asc')
            if not modulus.is_irreducible():
                raise ParameterError("modulus %s is reducible over GF(%d)" % (modulus, self._p))
        if self.q > 2 and int(self.primitive.multiplicative_order()) != self.q - 1:
            raise ParameterError("%d is not a primitive element of GF(%d)" % (self._alpha, self.q))
        return self

    def __eq__(self, other):
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return (self.p, self.m, self.modulus, self.alpha) == (other.p, other.m, other.modulus, other.alpha)

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        return hash((self.p, self.m, self.modulus, self.alpha))

    def __repr__(self):
        if self.m == 1:
            return "GF(%d)" % self.p
        return "GF(%d^%d)" % (self.p, self.m)

    __str__ = __repr__


@functools.lru_cache(maxsize=None)
def _build_field(p, m):
    if m == 1:
        alpha = int(galois.primitive_root(p)) if p > 2 else 1
        # degree-1 moduli are x + c; the smallest in coefficient order is x itself
        field_class = galois.GF(p, primitive_element=alpha)
        return FieldSpec(p, 1, (0, 1), alpha, field_class).check()

    irreducible = galois.irreducible_poly(p, m, method='min')
    primitive = galois.primitive_element(irreducible, method='min')
    alpha = int(primitive)
    field_class = galois.GF(p ** m, irreducible_poly=irreducible, primitive_element=alpha)
    modulus = tuple(int(c) for c in irreducible.coeffs[::-1])
    logger.debug("built GF(%d^%d) with modulus %s and alpha=%d", p, m, irreducible, alpha)
    return FieldSpec(p, m, modulus, alpha, field_class).check()


def make_field(p, m=1):
    """Build GF(p^m) deterministically: smallest irreducible modulus, smallest primitive element.

    :param int p: prime characteristic
    :param int m: extension degree, at least 1
    :rtype: FieldSpec
    :raises ParameterError: if ``p`` is not prime or ``m < 1``
    :raises FieldCapacityError: if ``p^m`` exceeds the ``MAX_FIELD_ORDER`` setting
    """
    p, m = int(p), int(m)
    if not galois.is_prime(p):
        raise ParameterError("field characteristic must be prime, not %d" % p)
    if m < 1:
        raise ParameterError("extension degree must be at least 1, not %d" % m)
    if p ** m > pir_settings.MAX_FIELD_ORDER:
        raise FieldCapacityError("GF(%d^%d) exceeds the maximum field order %d" % (p, m, pir_settings.MAX_FIELD_ORDER))
    return _build_field(p, m)


def make_field_of_order(q):
    """Build the field with exactly ``q`` elements.

    :raises ParameterError: if ``q`` is not a prime power
    """
    q = int(q)
    if q < 2 or not galois.is_prime_power(q):
        raise ParameterError("%d is not a prime power" % q)
    primes, exponents = galois.factors(q)
    return make_field(int(primes[0]), int(exponents[0]))


def parse_field(text):
    """Parse a field written as ``p^m``, ``p`` or ``GF(p^m)``.

    :rtype: FieldSpec
    """
    match = FIELD_RE.match(text or '')
    if match is None:
        raise ParameterError("invalid field %r, expected p^m" % text)
    return make_field(int(match.group('p')), int(match.group('m') or 1))


def smallest_prime_power(n):
    """Smallest prime power greater than or equal to ``n`` (and at least 2)."""
    q = max(int(n), 2)
    while not galois.is_prime_power(q):
        q += 1
    return q


def _scalar(field, value):
    if isinstance(value, galois.FieldArray):
        if type(value) is not field.GF:
            raise ParameterError("operand %r belongs to another field" % (value,))
        return value
    return field.element(value)


def _inverse(field, value):
    if value == 0:
        raise FieldDivisionError("0 has no inverse in %s" % field)
    return value ** -1


def _power(field, value, exponent):
    exponent = int(exponent)
    if exponent < 0:
        return _inverse(field, value) ** -exponent
    return value ** exponent


_OPERATIONS = {
    OP_ADD: (2, lambda field, a, b: a + b),
    OP_SUB: (2, lambda field, a, b: a - b),
    OP_MUL: (2, lambda field, a, b: a * b),
    OP_INV: (1, _inverse),
}


def arith(field, op, *operands):
    """Apply one field operation to canonical elements.

    ``pow`` takes an element and an integer exponent (negative exponents invert first); the other operations take
    field elements only.

    :param FieldSpec field: the field
    :param str op: one of ``add, sub, mul, inv, pow``
    :return: the result as a field scalar
    :raises FieldDivisionError: on ``inv(0)`` or a negative power of 0
    """
    if op == OP_POW:
        if len(operands) != 2:
            raise ParameterError("pow takes an element and an exponent")
        return _power(field, _scalar(field, operands[0]), operands[1])

    try:
        arity, func = _OPERATIONS[op]
    except KeyError:
        raise ParameterError("unknown field operation %r" % (op,))
    if len(operands) != arity:
        raise ParameterError("%s takes %d operand(s), got %d" % (op, arity, len(operands)))
    return func(field, *(_scalar(field, v) for v in operands))


def mat_rank(field, matrix):
    """Rank of a matrix over the field, by Gaussian elimination."""
    mat = field.matrix(matrix)
    if mat.ndim != 2:
        raise ParameterError("expected a 2-dimensional matrix, got shape %s" % (mat.shape,))
    if mat.size == 0:
        return 0
    return int(np.linalg.matrix_rank(mat))


class SolveResult(object):
    """Outcome of :func:`mat_solve`. Inconsistency is reported here, never raised."""

    def __init__(self, consistent, solution, rank, unique):
        #: ``True`` when ``A·x = b`` has at least one solution
        self.consistent = consistent
        #: one solution (free variables set to 0), or ``None`` when inconsistent
        self.solution = solution
        self.rank = rank
        #: ``True`` when ``A`` has full column rank
        self.unique = unique

    def __bool__(self):
        return self.consistent

    def __repr__(self):
        return "SolveResult(consistent=%r, rank=%d, unique=%r)" % (self.consistent, self.rank, self.unique)


def mat_solve(field, a, b):
    """Solve ``A·x = b`` over the field.

    ``b`` may be a vector or a matrix with one column per right-hand side; the solution has the matching shape.

    :param FieldSpec field: the field
    :param a: coefficient matrix, ``rows × cols``
    :param b: right-hand side with ``rows`` entries (or rows)
    :rtype: SolveResult
    """
    a_ints = as_int_array(a)
    b_ints = as_int_array(b)
    if a_ints.ndim != 2:
        raise ParameterError("expected a 2-dimensional matrix, got shape %s" % (a_ints.shape,))
    vector = b_ints.ndim == 1
    if vector:
        b_ints = b_ints.reshape(-1, 1)
    rows, cols = a_ints.shape
    if b_ints.shape[0] != rows:
        raise ParameterError("right-hand side has %d rows, matrix has %d" % (b_ints.shape[0], rows))

    nrhs = b_ints.shape[1]
    solution = field.zeros((cols, nrhs))
    rank = 0
    consistent = True
    if rows:
        reduced = field.matrix(np.hstack((a_ints, b_ints))).row_reduce(ncols=cols)
        for row in reduced:
            pivots = np.flatnonzero(as_int_array(row[:cols]))
            if pivots.size == 0:
                if np.any(as_int_array(row[cols:])):
                    consistent = False
                continue
            # reduced row echelon form: pivot is 1 and free variables are set to 0
            solution[pivots[0]] = row[cols:]
            rank += 1

    if not consistent:
        return SolveResult(False, None, rank, rank == cols)
    if vector:
        solution = solution[:, 0]
    return SolveResult(True, solution, rank, rank == cols)


def poly_from_row(field, coeffs):
    """Polynomial ``c_0 + c_1 x + ... + c_{n-1} x^{n-1}`` of a circulant's first row."""
    return galois.Poly(field.matrix(coeffs), field=field.GF, order='asc')


def x_pow_minus_one(field, n):
    """The polynomial ``x^n - 1``."""
    coeffs = field.zeros(int(n) + 1)
    coeffs[0] = -field.GF(1)
    coeffs[-1] = 1
    return galois.Poly(coeffs, field=field.GF, order='asc')


def _as_poly(field, value):
    if isinstance(value, galois.Poly):
        return value
    return poly_from_row(field, value)


def common_root_exists(field, f, g):
    """Whether ``f`` and ``g`` share a root in the field itself (0 included).

    Computed from ``gcd(f, g)`` and the roots of the gcd that lie in the field; roots in extension fields do not
    count.

    :param FieldSpec field: the field
    :param f: a ``galois.Poly`` or little-endian coefficient sequence
    :param g: a ``galois.Poly`` or little-endian coefficient sequence
    :raises ParameterError: if both polynomials are zero
    """
    f, g = _as_poly(field, f), _as_poly(field, g)
    zero = galois.Poly.Zero(field=field.GF)
    if f == zero and g == zero:
        raise ParameterError("common roots of two zero polynomials are undefined")
    d = galois.gcd(f, g)
    if d.degree == 0:
        return False
    return len(d.roots()) > 0


def criterion_applies(field, n):
    """Whether the circulant common-root test is exact for size ``n`` over this field.

    Writing ``n = r·p^l`` with ``gcd(r, p) = 1``, all roots of ``x^n - 1`` lie in the field iff ``r`` divides
    ``q - 1``.
    """
    return (field.q - 1) % coprime_part(n, field.p) == 0


def circulant_from_row(field, row):
    """Circulant matrix whose row ``r`` is ``row`` cyclically shifted right by ``r`` positions."""
    ints = as_int_array(row)
    if ints.ndim != 1 or ints.size < 1:
        raise ParameterError("circulant needs a non-empty row vector")
    return field.matrix(np.stack([np.roll(ints, r) for r in range(ints.size)]))


def cauchy_matrix(field, alphas, betas):
    """Cauchy matrix with entries ``1 / (alpha_i - beta_j)``.

    :raises ParameterError: if the parameters repeat or clash, or do not fit the field
    """
    alphas, betas = [int(a) for a in alphas], [int(b) for b in betas]
    params = alphas + betas
    if len(set(params)) != len(params):
        raise ParameterError("Cauchy parameters must be pairwise distinct: %s / %s" % (alphas, betas))
    a = field.matrix(alphas)
    b = field.matrix(betas)
    return (a[:, np.newaxis] - b[np.newaxis, :]) ** -1


def is_full_rank(field, matrix):
    mat = field.matrix(matrix)
    return mat_rank(field, mat) == min(mat.shape)


def coprime_part(n, p):
    """``r`` such that ``n = r·p^l`` and ``gcd(r, p) = 1``."""
    r = int(n)
    while r and r % p == 0:
        r //= p
    return r
