from django.core.management.base import CommandError

from ...app_settings import pir_settings
from ...codes import BUILTIN_FAMILIES, build_code, verify_mds
from ...documents import code_to_document
from ...gf import parse_field
from ._base import PirCommand


class Command(PirCommand):
    help = 'Build a joint MDS storage code and write it as a JSON or YAML code file.'

    def add_arguments(self, parser):
        parser.add_argument(
            '--family', dest='family',
            required=True, choices=BUILTIN_FAMILIES,
            help='Code family to build.'
        )
        parser.add_argument(
            '--n', dest='n',
            default=None, type=int,
            help='Number of databases N of the (2, N, 2) families (N0 for the randomized expansion).'
        )
        parser.add_argument(
            '--k', dest='k',
            default=None, type=int,
            help='Number of messages K of the parity families.'
        )
        parser.add_argument(
            '--m-factor', dest='m_factor',
            default=1, type=int,
            help='Expansion factor m of the expanded families.'
        )
        parser.add_argument(
            '--field', dest='field',
            default=None, type=str,
            help='Field to build over, written as p^m (joint-2n2 and expanded-parity only). '
                 'Defaults to the smallest field that works.'
        )
        parser.add_argument(
            '--offset', dest='offset',
            default=0, type=int,
            help='Exponent offset of the (2, N, 2) code; 1 reproduces the published 4-database example.'
        )
        self.add_seed_argument(parser)
        parser.add_argument(
            '--max-attempts', dest='max_attempts',
            default=None, type=int,
            help='Coefficient samples per field size for the randomized expansion.'
        )
        self.add_output_arguments(parser)

    def run(self, family, n, k, m_factor, field, offset, seed, max_attempts, output_file, overwrite, format,
            *args, **kwargs):
        seed = self.get_seed(seed)
        if max_attempts is None:
            max_attempts = pir_settings.DEFAULT_MAX_ATTEMPTS
        field = parse_field(field) if field else None
        code = build_code(family, n=n, k=k, m_factor=m_factor, field=field, exponent_offset=offset, seed=seed,
                          max_attempts=max_attempts)

        params = code.params
        self.summary("built %s code (K=%d, N=%d, T=%d) over %s" % (family, params.K, params.N, params.T, code.field))
        if code.provenance.get('attempts'):
            self.summary("coefficient search: %d attempt(s), fields tried %s" % (
                code.provenance['attempts'], code.provenance.get('fields_tried')))
        report = verify_mds(code)
        if not report.ok:
            raise CommandError("%s code is not MDS: %d of %d %d-subsets fail, first %s" % (
                family, len(report.failing_subsets), report.checked, params.T, report.failing_subsets[0]))
        self.summary("validated: all %d %d-subsets of databases decode" % (report.checked, params.T))

        format = self.resolve_format(output_file, format)
        self.write_document(code_to_document(code), output_file, overwrite, format)
