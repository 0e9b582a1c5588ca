import os

from django.core.management.base import CommandError

from ...codecs import guess_format
from ...codes import BUILTIN_FAMILIES, FAMILY_EXPANDED_2N2, FAMILY_JOINT_2N2
from ...documents import KIND_SWEEP, make_report
from ...renderers import Table, render_text
from ...utils import parse_range
from ...verification import barrier_sweep, sweep_summary
from ._base import PirCommand

TEXT_FORMATS = ('markdown', 'csv')
DOCUMENT_FORMATS = ('json', 'yaml')


def _cell(value):
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'yes' if value else 'no'
    return str(value)


def sweep_table(family, rows):
    """Tabulate sweep rows; rationals print as ``num/den``."""
    parameter = 'N' if family in (FAMILY_JOINT_2N2, FAMILY_EXPANDED_2N2) else 'K'
    header = [parameter, 'field', 'rate', 'C_perp', 'margin', 'broken', 'mds', 'privacy', 'correctness', 'error']
    body = []
    for row in sweep_summary(rows):
        body.append([_cell(row[key]) for key in ('param', 'field', 'rate', 'c_perp', 'margin', 'broken', 'mds',
                                                 'privacy', 'correctness', 'error')])
    return Table('Barrier sweep: %s' % family, header, body)


class Command(PirCommand):
    help = 'Build and verify a family over a parameter range and compare every rate with the separate-coding barrier.'

    def add_arguments(self, parser):
        parser.add_argument(
            '--family', dest='family',
            required=True, choices=BUILTIN_FAMILIES,
            help='Code family to sweep.'
        )
        parser.add_argument(
            '--range', dest='range',
            required=True, type=str,
            help='Inclusive parameter range a..b: N (or N0) for the (2, N, 2) families, K for the parity families.'
        )
        parser.add_argument(
            '--m-factor', dest='m_factor',
            default=1, type=int,
            help='Expansion factor m of the expanded families.'
        )
        parser.add_argument(
            '--trials', dest='trials',
            default=None, type=int,
            help='Random message instances per (k*, f) pair for the correctness check.'
        )
        self.add_seed_argument(parser)
        self.add_output_arguments(parser, name='out', positional=False, formats=TEXT_FORMATS + DOCUMENT_FORMATS)

    def run(self, family, range, m_factor, trials, seed, out, overwrite, format, *args, **kwargs):
        values = parse_range(range)
        rows = barrier_sweep(family, values, m_factor=m_factor, trials=trials, seed=self.get_seed(seed))

        if not format:
            format = 'csv' if os.path.splitext(out)[1].lower() == '.csv' else guess_format(out, default='markdown')
        if format in DOCUMENT_FORMATS:
            self.write_document(make_report(KIND_SWEEP, rows), out, overwrite, format)
        else:
            self.write_output(render_text(sweep_table(family, rows), format), out, overwrite)

        failed = [row.param for row in rows if row.failed]
        self.summary("%d parameter point(s), %d failed" % (len(rows), len(failed)))
        if failed:
            raise CommandError("sweep of %s failed at %s" % (family, failed))
