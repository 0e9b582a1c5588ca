import os

from django.core.management.base import BaseCommand, CommandError
from django.utils.encoding import force_str

from ...app_settings import pir_settings
from ...codecs import get_codec, guess_format, load_code_file
from ...documents import code_from_document
from ...errors import PirError


class PirCommand(BaseCommand):
    """Base class of the ``pir_*`` commands: library errors become :class:`CommandError` (non-zero exit) and
    human-readable summaries go to stderr so stdout stays machine-readable."""

    def add_output_arguments(self, parser, name='output_file', formats=('json', 'yaml'), positional=True):
        if positional:
            parser.add_argument(
                name, metavar=name.replace('_', '-'),
                nargs='?',
                default='-',
                type=str,
                help='Output path, or "-" for stdout.'
            )
        else:
            parser.add_argument(
                '--out', dest=name,
                default='-',
                type=str,
                help='Output path, or "-" for stdout.'
            )
        parser.add_argument(
            '-o', '--overwrite',
            default=False, action='store_true',
            help='Overwrite the output file if it already exists. '
                 'Default behavior is to stop if the output file exists.'
        )
        parser.add_argument(
            '-f', '--format', dest='format',
            default='', choices=list(formats),
            type=str,
            help='Output format. If not given, it is guessed from the output file extension and defaults to %s.'
                 % formats[0]
        )

    def add_seed_argument(self, parser):
        parser.add_argument(
            '--seed', dest='seed',
            default=None, type=int,
            help='Random seed. Defaults to the DEFAULT_SEED setting or the MDS_PIR_SEED environment variable.'
        )

    def get_seed(self, seed):
        return pir_settings.DEFAULT_SEED if seed is None else seed

    def resolve_format(self, output_file, format, default='json'):
        return format or guess_format(output_file, default)

    def write_output(self, content, output_file, overwrite):
        content = force_str(content)
        if output_file == '-':
            self.stdout.write(content, ending='')
            return
        flags = "w" if overwrite else "x"
        try:
            with open(output_file, flags, encoding='utf-8') as stream:
                stream.write(content)
        except FileExistsError:
            raise CommandError("%s already exists; pass --overwrite to replace it" % output_file)

    def write_document(self, document, output_file, overwrite, format):
        self.write_output(get_codec(format).encode(document), output_file, overwrite)

    def load_code(self, code_file):
        if not os.path.exists(code_file):
            raise CommandError("code file %s does not exist" % code_file)
        return code_from_document(load_code_file(code_file))

    def summary(self, message):
        self.stderr.write(message)

    def handle(self, *args, **options):
        try:
            return self.run(*args, **options)
        except PirError as exc:
            raise CommandError(str(exc)) from exc

    def run(self, *args, **options):
        raise NotImplementedError("override this method")
