import os
from collections import OrderedDict

from django.core.management.base import CommandError

from ...codes import verify_mds
from ...documents import KIND_BARRIER, KIND_CORRECTNESS, KIND_MDS, KIND_PRIVACY, make_report
from ...schemes import make_scheme
from ...utils import make_rng
from ...verification import barrier_report, check_correctness, check_privacy
from ._base import PirCommand

CHECK_ALL = 'all'
CHECKS = OrderedDict([
    (KIND_MDS, lambda code, scheme, trials, rng: verify_mds(code)),
    (KIND_PRIVACY, lambda code, scheme, trials, rng: check_privacy(scheme)),
    (KIND_CORRECTNESS, lambda code, scheme, trials, rng: check_correctness(scheme, trials, rng)),
    (KIND_BARRIER, lambda code, scheme, trials, rng: barrier_report(scheme)),
])


def check_output_file(out, name):
    """``report.json`` becomes ``report.mds.json`` for the mds check; stdout stays stdout."""
    if out == '-':
        return out
    root, ext = os.path.splitext(out)
    return '%s.%s%s' % (root, name, ext)


class Command(PirCommand):
    help = 'Verify a code file: MDS recovery, privacy, correctness and the separate-coding barrier.'

    def add_arguments(self, parser):
        parser.add_argument(
            'code_file', metavar='code-file',
            type=str,
            help='Code file written by pir_build.'
        )
        parser.add_argument(
            '--check', dest='check',
            default=CHECK_ALL, choices=list(CHECKS) + [CHECK_ALL],
            help='Check to run. With "all" every check writes its own report: to stdout one after another, '
                 'or next to --out as <name>.<check>.<ext>.'
        )
        parser.add_argument(
            '--trials', dest='trials',
            default=None, type=int,
            help='Random message instances per (k*, f) pair for the correctness check.'
        )
        self.add_seed_argument(parser)
        self.add_output_arguments(parser, name='out', positional=False)

    def run(self, code_file, check, trials, seed, out, overwrite, format, *args, **kwargs):
        code = self.load_code(code_file)
        names = list(CHECKS) if check == CHECK_ALL else [check]
        format = self.resolve_format(out, format)
        rng = make_rng(self.get_seed(seed))

        scheme = None
        failed = []
        for name in names:
            # the mds check needs no scheme, so its report is written even for codes without one
            if scheme is None and name != KIND_MDS:
                scheme = make_scheme(code)
            document = make_report(name, CHECKS[name](code, scheme, trials, rng))
            ok = document.payload['ok']
            self.summary("%s: %s" % (name, 'pass' if ok else 'FAIL'))
            target = check_output_file(out, name) if check == CHECK_ALL else out
            if target == '-' and check == CHECK_ALL and format == 'yaml':
                self.write_output('---\n', target, overwrite)
            self.write_document(document, target, overwrite, format)
            if not ok:
                failed.append(name)

        if failed:
            raise CommandError("verification failed for %s: %s" % (code_file, ', '.join(failed)))
