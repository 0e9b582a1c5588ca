import json

from django.core.management.base import CommandError

from ...documents import KIND_TRANSCRIPT, make_report
from ...schemes import make_scheme, simulate_retrieval
from ...utils import as_int_array, make_rng
from ._base import PirCommand


class Command(PirCommand):
    help = 'Simulate one private retrieval from the databases of a code file.'

    def add_arguments(self, parser):
        parser.add_argument(
            'code_file', metavar='code-file',
            type=str,
            help='Code file written by pir_build.'
        )
        parser.add_argument(
            '--k-star', dest='k_star',
            required=True, type=int,
            help='Index of the desired message, starting at 1.'
        )
        self.add_seed_argument(parser)
        parser.add_argument(
            '--messages', dest='messages',
            default=None, type=str,
            help='JSON file holding the K x L message symbols. Random messages are drawn from the seed otherwise.'
        )
        self.add_output_arguments(parser, name='out', positional=False)

    def load_messages(self, path):
        try:
            with open(path, 'r', encoding='utf-8') as stream:
                return json.load(stream)
        except (OSError, ValueError) as exc:
            raise CommandError("cannot read messages from %s: %s" % (path, exc))

    def run(self, code_file, k_star, seed, messages, out, overwrite, format, *args, **kwargs):
        code = self.load_code(code_file)
        scheme = make_scheme(code)
        seed = self.get_seed(seed)
        params = code.params
        if messages is not None:
            messages = code.field.matrix(self.load_messages(messages))
        else:
            messages = code.field.random((params.K, params.L), make_rng(seed, 0))

        transcript = simulate_retrieval(scheme, messages, k_star, make_rng(seed, 1))
        self.summary("f = %d" % transcript.f)
        for n, (query, value) in enumerate(zip(transcript.queries, as_int_array(transcript.answers).tolist()), 1):
            self.summary("database %d: symbol %d -> %d" % (n, query, value))
        self.summary("reconstructed W^%d = %s" % (k_star, as_int_array(transcript.reconstructed).tolist()))

        document = make_report(KIND_TRANSCRIPT, transcript, messages=as_int_array(messages).tolist())
        self.write_document(document, out, overwrite, self.resolve_format(out, format))
