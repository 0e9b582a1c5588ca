from django.core.management.base import CommandError

from ...renderers import render_text
from ...tables import compare_golden, published_tables
from ._base import PirCommand


class Command(PirCommand):
    help = 'Regenerate the tables of stored symbols and answers as markdown and compare them with the golden files.'

    def add_arguments(self, parser):
        parser.add_argument(
            'output_file', metavar='output-file',
            nargs='?',
            default='-',
            type=str,
            help='Output path for the markdown document, or "-" for stdout.'
        )
        parser.add_argument(
            '-o', '--overwrite',
            default=False, action='store_true',
            help='Overwrite the output file if it already exists. '
                 'Default behavior is to stop if the output file exists.'
        )

    def run(self, output_file, overwrite, *args, **kwargs):
        sections = published_tables()
        document = '\n'.join(render_text(tables, 'markdown') for tables in sections.values())
        self.write_output(document, output_file, overwrite)

        mismatched = compare_golden(sections)
        if mismatched:
            raise CommandError("tables differ from their golden files: %s" % ', '.join(mismatched))
        self.summary("%d tables match their golden files" % len(sum((sections[name] for name in sections), [])))
