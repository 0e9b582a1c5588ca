"""Serializable documents: code files and report files, with their JSON schemas."""
import functools
import logging
from collections import OrderedDict
from collections.abc import Iterable, Iterator, Mapping
from fractions import Fraction

import numpy as np
from inflection import camelize, underscore
from packaging.version import InvalidVersion, Version

from .codes import FAMILIES, FAMILY_EXPANDED_2N2, CoeffSet, JointCode, MdsReport, SystemParams, expanded_2n2_code
from .errors import ParameterError, SchemaValidationError
from .gf import make_field
from .schemes import Transcript
from .utils import as_int_array, filter_none
from .verification import BarrierReport, CorrectnessReport, PrivacyReport, SweepRow, sweep_summary

logger = logging.getLogger(__name__)

SCHEMA_VERSION = '1.0'  #:

KIND_MDS = 'mds'  #:
KIND_PRIVACY = 'privacy'  #:
KIND_CORRECTNESS = 'correctness'  #:
KIND_BARRIER = 'barrier'  #:
KIND_SWEEP = 'sweep'  #:
KIND_TRANSCRIPT = 'transcript'  #:

REPORT_KINDS = [KIND_MDS, KIND_PRIVACY, KIND_CORRECTNESS, KIND_BARRIER, KIND_SWEEP, KIND_TRANSCRIPT]


def make_document_key(attribute_name):
    """Convert a python attribute name into a document key: camelCase, trailing underscores stripped.

    :param str attribute_name: python attribute name
    :return: document key
    """
    return camelize(attribute_name.rstrip('_'), uppercase_first_letter=False)


class DocumentDict(OrderedDict):
    """An ``OrderedDict`` mapping attribute accesses to dict lookups through :func:`.make_document_key`. Attribute
    names starting with ``_`` are set on the object as-is and are not part of the output.

    Attributes set to ``None`` are omitted.
    """

    #: JSON schema the serialized document must satisfy
    json_schema = None

    def __init__(self, **attrs):
        super(DocumentDict, self).__init__()
        self._extras__ = attrs
        if type(self) == DocumentDict:
            self._insert_extras__()

    def __setattr__(self, key, value):
        if key.startswith('_'):
            super(DocumentDict, self).__setattr__(key, value)
            return
        if value is not None:
            self[make_document_key(key)] = value

    def __getattr__(self, item):
        if item.startswith('_'):
            raise AttributeError
        try:
            return self[make_document_key(item)]
        except KeyError:
            raise AttributeError("object of class " + type(self).__name__ + " has no attribute " + item)

    def __delattr__(self, item):
        if item.startswith('_'):
            super(DocumentDict, self).__delattr__(item)
            return
        del self[make_document_key(item)]

    def _insert_extras__(self):
        """Extra attributes go after the declared ones; subclasses call this at the end of ``__init__``."""
        for attr, val in sorted(self._extras__.items()):
            setattr(self, attr, val)

    @staticmethod
    def _as_odict(obj, memo):
        """Implementation detail of :meth:`.as_odict`"""
        if id(obj) in memo:
            return memo[id(obj)]

        if isinstance(obj, Fraction):
            return rational_document(obj)
        if isinstance(obj, np.ndarray):
            return as_int_array(obj).tolist()
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.bool_):
            return bool(obj)
        if isinstance(obj, Mapping):
            result = OrderedDict()
            memo[id(obj)] = result
            for attr, val in obj.items():
                result[attr] = DocumentDict._as_odict(val, memo)
            return result
        elif isinstance(obj, str):
            return obj
        elif isinstance(obj, Iterable) and not isinstance(obj, Iterator):
            return [DocumentDict._as_odict(elem, memo) for elem in obj]

        return obj

    def as_odict(self):
        """Convert this object into plain ``OrderedDict``, list and scalar values.

        :rtype: OrderedDict
        """
        return DocumentDict._as_odict(self, {})


class FieldInfo(DocumentDict):
    def __init__(self, p, m, q, modulus, alpha, **extra):
        """Field of a code file.

        :param int p: characteristic
        :param int m: extension degree
        :param int q: order
        :param list[int] modulus: little-endian modulus digits
        :param int alpha: primitive element encoding
        """
        super(FieldInfo, self).__init__(**extra)
        self.p = p
        self.m = m
        self.q = q
        self.modulus = list(modulus)
        self.alpha = alpha
        self._insert_extras__()


class ParamsInfo(DocumentDict):
    def __init__(self, K, N, T, L, M, family, m_factor=1, **extra):
        super(ParamsInfo, self).__init__(**extra)
        self.K = K
        self.N = N
        self.T = T
        self.L = L
        self.M = M
        self.family = family
        self.m_factor = m_factor
        self._insert_extras__()


class CoefficientsInfo(DocumentDict):
    def __init__(self, h, g, seed=None, **extra):
        """Random coefficients of the ``(2, mN, 2m)`` expansion, indexed ``[n-3][j-1][i][t]``."""
        super(CoefficientsInfo, self).__init__(**extra)
        self.h = h
        self.g = g
        self.seed = seed
        self._insert_extras__()


class Provenance(DocumentDict):
    def __init__(self, seed=None, attempts=None, fields_tried=None, tool_version=None, **extra):
        super(Provenance, self).__init__(**extra)
        self.seed = seed
        self.attempts = attempts
        self.fields_tried = fields_tried
        self.tool_version = tool_version
        self._insert_extras__()


class CodeFile(DocumentDict):
    def __init__(self, field, params, generators, labels=None, construction=None, coefficients=None,
                 provenance=None, schema_version=SCHEMA_VERSION, **extra):
        """Root object of a serialized code.

        :param FieldInfo field: the field
        :param ParamsInfo params: system parameters
        :param list generators: ``N × M × K·L`` integer grid
        :param list[list[str]] labels: expression per stored symbol
        :param dict construction: family-specific construction parameters
        :param CoefficientsInfo coefficients: random coefficients, randomized expansion only
        :param Provenance provenance: how the code was obtained
        """
        super(CodeFile, self).__init__(**extra)
        self.schema_version = schema_version
        self.field = field
        self.params = params
        self.generators = generators
        self.labels = labels
        self.construction = construction
        self.coefficients = coefficients
        self.provenance = provenance
        self._insert_extras__()


class ReportFile(DocumentDict):
    def __init__(self, kind, payload, schema_version=SCHEMA_VERSION, **extra):
        """Root object of a serialized report.

        :param str kind: one of :data:`REPORT_KINDS`
        :param dict payload: kind-specific content; rationals appear as ``{num, den}``
        """
        super(ReportFile, self).__init__(**extra)
        if kind not in REPORT_KINDS:
            raise AssertionError("unknown report kind %r" % (kind,))
        self.schema_version = schema_version
        self.kind = kind
        self.payload = payload
        self._insert_extras__()


RATIONAL_SCHEMA = {
    'type': 'object',
    'required': ['num', 'den'],
    'properties': {
        'num': {'type': 'integer'},
        'den': {'type': 'integer', 'minimum': 1},
    },
    'additionalProperties': False,
}

_NON_NEGATIVE = {'type': 'integer', 'minimum': 0}
_POSITIVE = {'type': 'integer', 'minimum': 1}
_INT_GRID_3 = {'type': 'array', 'items': {'type': 'array', 'items': {'type': 'array', 'items': _NON_NEGATIVE}}}
_INT_GRID_4 = {'type': 'array', 'items': _INT_GRID_3}

CodeFile.json_schema = {
    '$schema': 'http://json-schema.org/draft-07/schema#',
    'title': 'mds-pir code file',
    'type': 'object',
    'required': ['schemaVersion', 'field', 'params', 'generators'],
    'properties': {
        'schemaVersion': {'type': 'string', 'pattern': r'^\d+\.\d+$'},
        'field': {
            'type': 'object',
            'required': ['p', 'm', 'q', 'modulus', 'alpha'],
            'properties': {
                'p': {'type': 'integer', 'minimum': 2},
                'm': _POSITIVE,
                'q': {'type': 'integer', 'minimum': 2},
                'modulus': {'type': 'array', 'items': _NON_NEGATIVE, 'minItems': 2},
                'alpha': _NON_NEGATIVE,
            },
        },
        'params': {
            'type': 'object',
            'required': ['k', 'n', 't', 'l', 'm', 'family', 'mFactor'],
            'properties': {
                'k': _POSITIVE,
                'n': _POSITIVE,
                't': _POSITIVE,
                'l': _POSITIVE,
                'm': _POSITIVE,
                'family': {'type': 'string', 'enum': FAMILIES},
                'mFactor': _POSITIVE,
            },
        },
        'generators': _INT_GRID_3,
        'labels': {'type': 'array', 'items': {'type': 'array', 'items': {'type': 'string'}}},
        'construction': {'type': 'object'},
        'coefficients': {
            'type': 'object',
            'required': ['h', 'g'],
            'properties': {
                'h': _INT_GRID_4,
                'g': _INT_GRID_4,
                'seed': {'type': ['integer', 'null']},
            },
        },
        'provenance': {
            'type': 'object',
            'properties': {
                'seed': {'type': ['integer', 'null']},
                'attempts': _NON_NEGATIVE,
                'fieldsTried': {'type': 'array', 'items': _POSITIVE},
                'toolVersion': {'type': 'string'},
            },
        },
    },
}

ReportFile.json_schema = {
    '$schema': 'http://json-schema.org/draft-07/schema#',
    'title': 'mds-pir report file',
    'type': 'object',
    'required': ['schemaVersion', 'kind', 'payload'],
    'properties': {
        'schemaVersion': {'type': 'string', 'pattern': r'^\d+\.\d+$'},
        'kind': {'type': 'string', 'enum': REPORT_KINDS},
        'payload': {'type': 'object', 'required': ['ok']},
    },
    'definitions': {
        'rational': RATIONAL_SCHEMA,
    },
}


def rational_document(value):
    """``{num, den}`` mapping of an exact fraction."""
    value = Fraction(value)
    return OrderedDict([('num', value.numerator), ('den', value.denominator)])


def rational_from_document(data):
    return Fraction(int(data['num']), int(data['den']))


def check_schema_version(data):
    """Reject documents written with another major schema version.

    :raises SchemaValidationError: on a missing, malformed or incompatible version
    """
    raw = data.get('schemaVersion') if isinstance(data, Mapping) else None
    try:
        version = Version(str(raw))
    except InvalidVersion:
        raise SchemaValidationError("invalid schema version %r" % (raw,), document=data)
    if version.major != Version(SCHEMA_VERSION).major:
        raise SchemaValidationError("schema version %s is not compatible with %s" % (version, SCHEMA_VERSION),
                                    document=data)
    return version


def _keys_to_document(mapping):
    return OrderedDict((make_document_key(k), v) for k, v in mapping.items())


def _keys_from_document(mapping):
    return OrderedDict((underscore(k), v) for k, v in mapping.items())


def code_to_document(code):
    """Serialize a code into a :class:`CodeFile`.

    :param mds_pir.codes.JointCode code: the code
    :rtype: CodeFile
    """
    from . import __version__

    field, params = code.field, code.params
    coefficients = None
    if code.coefficients is not None:
        coefficients = CoefficientsInfo(code.coefficients.h, code.coefficients.g, code.coefficients.seed)
    provenance = Provenance(tool_version=__version__, **code.provenance)
    return CodeFile(
        field=FieldInfo(field.p, field.m, field.q, field.modulus, field.alpha),
        params=ParamsInfo(*params.as_tuple()),
        generators=code.generators,
        labels=code.labels,
        construction=_keys_to_document(code.construction) if code.construction else None,
        coefficients=coefficients,
        provenance=provenance,
    )


def code_from_document(data):
    """Rebuild a code from a decoded :class:`CodeFile` mapping.

    The field is rebuilt canonically and must match the stored modulus and primitive element.

    :param dict data: decoded code file
    :rtype: mds_pir.codes.JointCode
    :raises SchemaValidationError: if the document is inconsistent
    """
    check_schema_version(data)
    try:
        info = data['field']
        field = make_field(info['p'], info['m'])
        if list(field.modulus) != list(info['modulus']) or field.alpha != info['alpha'] or field.q != info['q']:
            raise SchemaValidationError("field %s does not match the canonical modulus and primitive element" % field,
                                        document=data)
        p = data['params']
        params = SystemParams(p['k'], p['n'], p['t'], p['l'], p['m'], p['family'], p.get('mFactor', 1))

        coefficients = None
        if data.get('coefficients') is not None:
            coeffs = data['coefficients']
            coefficients = CoeffSet(field, coeffs['h'], coeffs['g'], coeffs.get('seed'))

        provenance = data.get('provenance') or {}
        provenance = filter_none(OrderedDict(
            (underscore(k), v) for k, v in provenance.items() if k != 'toolVersion'
        ))
        code = JointCode(params, field, np.asarray(data['generators'], dtype=np.int64), labels=data.get('labels'),
                         coefficients=coefficients, construction=_keys_from_document(data.get('construction') or {}),
                         provenance=provenance)
    except (KeyError, TypeError, ParameterError) as exc:
        raise SchemaValidationError("invalid code file: %s" % exc, document=data) from exc

    if params.family == FAMILY_EXPANDED_2N2:
        _check_expanded_2n2(code, data)
    return code


def _check_expanded_2n2(code, data):
    """The stored coefficients of a randomized expansion must be non-singular and must reproduce the generators."""
    coefficients = code.coefficients
    if coefficients is None:
        raise SchemaValidationError("%s code file has no coefficients" % FAMILY_EXPANDED_2N2, document=data)
    singular = coefficients.singular_count()
    if singular:
        raise SchemaValidationError("%d of the stored H/G matrices are singular" % singular, document=data)
    try:
        expected = expanded_2n2_code(code.field, coefficients)
    except ParameterError as exc:
        raise SchemaValidationError("invalid coefficients: %s" % exc, document=data) from exc
    if expected.params != code.params:
        raise SchemaValidationError("coefficients describe %r, the file declares %r" % (expected.params, code.params),
                                    document=data)
    if not np.array_equal(as_int_array(expected.generators), as_int_array(code.generators)):
        raise SchemaValidationError("generators do not match the stored coefficients", document=data)


def make_report(kind, report, **extra):
    """Wrap a report value into a :class:`ReportFile`."""
    payload = report_payload(report)
    payload.update(extra)
    return ReportFile(kind, payload)


@functools.singledispatch
def report_payload(report):
    """Kind-specific payload of a report value."""
    raise TypeError("cannot serialize %r" % (report,))


@report_payload.register(MdsReport)
def _mds_payload(report):
    return OrderedDict([
        ('ok', bool(report.ok)),
        ('checked', report.checked),
        ('failingSubsets', [list(s) for s in report.failing_subsets]),
    ])


@report_payload.register(PrivacyReport)
def _privacy_payload(report):
    distributions = []
    for per_k in report.per_db_distributions:
        distributions.append([
            [[int(index), int(count)] for index, count in sorted(counter.items())] for counter in per_k
        ])
    return OrderedDict([
        ('ok', bool(report.ok)),
        ('firstViolation', list(report.first_violation) if report.first_violation else None),
        ('perDbDistributions', distributions),
    ])


@report_payload.register(CorrectnessReport)
def _correctness_payload(report):
    return OrderedDict([
        ('ok', bool(report.ok)),
        ('trials', report.trials),
        ('checked', report.checked),
        ('structuralFailures', [list(f) for f in report.structural_failures]),
        ('valueFailures', [list(f) for f in report.value_failures]),
    ])


@report_payload.register(BarrierReport)
def _barrier_payload(report):
    return OrderedDict([
        ('ok', bool(report.broken)),
        ('rate', rational_document(report.rate)),
        ('cPerp', rational_document(report.c_perp)),
        ('margin', rational_document(report.margin)),
        ('broken', bool(report.broken)),
    ])


@report_payload.register(Transcript)
def _transcript_payload(transcript):
    return OrderedDict([
        ('ok', True),
        ('kStar', transcript.k_star),
        ('f', transcript.f),
        ('queries', list(transcript.queries)),
        ('answers', as_int_array(transcript.answers).tolist()),
        ('reconstructed', as_int_array(transcript.reconstructed).tolist()),
        ('downloadCount', transcript.download_count),
    ])


@report_payload.register(list)
def _sweep_payload(rows):
    if not all(isinstance(row, SweepRow) for row in rows):
        raise TypeError("sweep payloads are lists of SweepRow")
    summary = []
    for row in sweep_summary(rows):
        summary.append(OrderedDict(
            (make_document_key(k), rational_document(v) if isinstance(v, Fraction) else v) for k, v in row.items()
        ))
    return OrderedDict([
        ('ok', not any(row.failed for row in rows)),
        ('family', rows[0].family if rows else None),
        ('rows', summary),
    ])
