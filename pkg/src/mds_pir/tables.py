"""Tables of stored symbols and answers, as published for the joint codes, rebuilt from the constructions."""
import logging
import os
from collections import OrderedDict

from .codes import (
    FAMILY_EXPANDED_2N2, FAMILY_EXPANDED_PARITY, LABEL_STYLE_INDEXED, LABEL_STYLE_LETTERS, SystemParams,
    build_joint_2n2, build_joint_parity, expanded_2n2_labels, expanded_parity_labels, expanded_parity_field,
    label_storage
)
from .gf import make_field
from .renderers import Table, render_text
from .schemes import build_query_table

logger = logging.getLogger(__name__)

GOLDEN_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'golden')

#: tables whose entries are fully determined and checked against the packaged golden files
GOLDEN_TABLES = [
    'table_01', 'table_02', 'table_03', 'table_04', 'table_05', 'table_06', 'table_07',
    'table_08_k3', 'table_08_k4', 'table_09_k3', 'table_09_k4',
]

#: general-K tables are instantiated at these sizes
PARITY_SIZES = (3, 4)

EXPANDED_PARITY_SIZE = (2, 2)
EXPANDED_2N2_SIZE = (4, 2)


def database_header(n):
    return ['Database-%d' % db for db in range(1, n + 1)]


def grouped_header(groups, m):
    return ['DB(%d,%d)' % (g, j) for g in range(1, groups + 1) for j in range(1, m + 1)]


def stored_table(title, labels, header, note=None):
    """One row per stored symbol index, one column per database."""
    rows = [[db[i] for db in labels] for i in range(len(labels[0]))]
    return Table(title, header, rows, note)


def answers_table(title, labels, f_values, queries, header, note=None):
    """One row per key value ``f``: the symbol each database returns.

    :param queries: ``|F| × N`` query indices for one desired message
    """
    rows = []
    for f, row in zip(f_values, queries):
        rows.append([str(f)] + [labels[n][int(q)] for n, q in enumerate(row)])
    return Table(title, ['F'] + header, rows, note)


def joint_2n2_tables():
    """(2, 4, 2) code over GF(3) with the exponents shifted by one."""
    code = build_joint_2n2(4, field=make_field(3), exponent_offset=1)
    labels = label_storage(code)
    f_values, queries = build_query_table(code.params)
    header = database_header(code.params.N)
    return OrderedDict([
        ('table_01', [stored_table('Table I: Stored Variables.', labels, header)]),
        ('table_02', [answers_table('Table II: Answers for W^1.', labels, f_values, queries[0], header)]),
        ('table_03', [answers_table('Table III: Answers for W^2.', labels, f_values, queries[1], header)]),
    ])


def joint_parity_tables():
    """(3, 4, 3) code with letter labels, then the general-K tables at each of :data:`PARITY_SIZES`."""
    code = build_joint_parity(3)
    labels = label_storage(code, LABEL_STYLE_LETTERS)
    f_values, queries = build_query_table(code.params)
    header = database_header(code.params.N)
    sections = OrderedDict()
    sections['table_04'] = [stored_table('Table IV: Stored Variables.', labels, header)]
    for k, name in enumerate(['table_05', 'table_06', 'table_07']):
        title = 'Table %s: Answers for W^%d.' % (['V', 'VI', 'VII'][k], k + 1)
        sections[name] = [answers_table(title, labels, f_values, queries[k], header)]

    for K in PARITY_SIZES:
        code = build_joint_parity(K)
        labels = label_storage(code, LABEL_STYLE_INDEXED)
        f_values, queries = build_query_table(code.params)
        header = database_header(code.params.N)
        sections['table_08_k%d' % K] = [
            stored_table('Table VIII (K=%d): Stored Variables.' % K, labels, header)
        ]
        sections['table_09_k%d' % K] = [
            answers_table('Table IX (K=%d): Answers for W^%d.' % (K, k + 1), labels, f_values, queries[k], header)
            for k in range(K)
        ]
    return sections


def expanded_parity_tables(K=None, m=None):
    """Cauchy expansion tables, with symbolic ``C(j,:)`` entries."""
    K, m = K or EXPANDED_PARITY_SIZE[0], m or EXPANDED_PARITY_SIZE[1]
    params = SystemParams(K, m * (K + 1), m * K, 2 * m, 2, FAMILY_EXPANDED_PARITY, m_factor=m)
    labels = expanded_parity_labels(K, m)
    f_values, queries = build_query_table(params)
    header = grouped_header(K + 1, m)
    note = 'C(j,:) is row j of an %d x %d Cauchy matrix over %s; W_s stacks segment s of every message.' % (
        m, m * K, expanded_parity_field(K, m))
    return OrderedDict([
        ('table_10', [stored_table('Table X (K=%d, m=%d): Stored Variables.' % (K, m), labels, header, note)]),
        ('table_11', [
            answers_table('Table XI (K=%d, m=%d): Answers for W^%d.' % (K, m, k + 1), labels, f_values, queries[k],
                          header, note)
            for k in range(K)
        ]),
    ])


def expanded_2n2_tables(base_n=None, m=None):
    """Randomized expansion tables, with symbolic ``h``/``g`` coefficient vectors."""
    base_n, m = base_n or EXPANDED_2N2_SIZE[0], m or EXPANDED_2N2_SIZE[1]
    shifts = base_n - 1
    params = SystemParams(2, m * base_n, 2 * m, m * shifts, shifts, FAMILY_EXPANDED_2N2, m_factor=m)
    labels = expanded_2n2_labels(base_n, m)
    f_values, queries = build_query_table(params)
    header = grouped_header(base_n, m)
    note = ('h_{n,j,i} and g_{n,j,i} are 1 x %d coefficient vectors chosen by the seeded search; '
            'a_i and b_i stack the %d segment symbols a_{i,j} and b_{i,j}.' % (m, m))
    return OrderedDict([
        ('table_12', [stored_table('Table XII (N=%d, m=%d): Stored Variables.' % (base_n, m), labels, header, note)]),
        ('table_13', [answers_table('Table XIII (N=%d, m=%d): Answers for W^1.' % (base_n, m), labels, f_values,
                                    queries[0], header, note)]),
        ('table_14', [answers_table('Table XIV (N=%d, m=%d): Answers for W^2.' % (base_n, m), labels, f_values,
                                    queries[1], header, note)]),
    ])


def published_tables():
    """Every table, keyed by section name, in publication order.

    :rtype: OrderedDict[str, list[Table]]
    """
    sections = OrderedDict()
    sections.update(joint_2n2_tables())
    sections.update(joint_parity_tables())
    sections.update(expanded_parity_tables())
    sections.update(expanded_2n2_tables())
    return sections


def golden_path(name):
    return os.path.join(GOLDEN_DIR, name + '.md')


def read_golden(name):
    with open(golden_path(name), 'r', encoding='utf-8') as golden:
        return golden.read()


def compare_golden(sections=None):
    """Names of the golden sections whose markdown rendering differs from the packaged file."""
    if sections is None:
        sections = published_tables()
    mismatched = []
    for name in GOLDEN_TABLES:
        rendered = render_text(sections[name], 'markdown')
        if rendered != read_golden(name):
            logger.warning("table %s does not match its golden file", name)
            mismatched.append(name)
    return mismatched
