"""``mds-pir`` console entry point: a thin alias layer over the ``pir_*`` management commands."""
import os
import sys

#: short sub-command names accepted by the console script
COMMAND_ALIASES = {
    'build': 'pir_build',
    'verify': 'pir_verify',
    'retrieve': 'pir_retrieve',
    'tables': 'pir_tables',
    'sweep': 'pir_sweep',
}

STANDALONE_LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'pipe_separated': {
            'format': '%(asctime)s | %(levelname)s | %(name)s | %(message)s'
        }
    },
    'handlers': {
        'console_log': {
            'level': 'DEBUG',
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'pipe_separated',
        },
    },
    'loggers': {
        'mds_pir': {
            'handlers': ['console_log'],
            'level': os.getenv('MDS_PIR_LOG_LEVEL', 'WARNING'),
            'propagate': False,
        },
    },
}


def configure_standalone():
    """Configure a minimal Django environment when the tool runs outside of a project."""
    from django.conf import settings

    if os.getenv('DJANGO_SETTINGS_MODULE') or settings.configured:
        return
    settings.configure(
        INSTALLED_APPS=['mds_pir'],
        LOGGING=STANDALONE_LOGGING,
        USE_TZ=True,
    )


def main(argv=None):
    argv = list(sys.argv if argv is None else argv)
    if len(argv) > 1:
        argv[1] = COMMAND_ALIASES.get(argv[1], argv[1])

    import django
    from django.core.management import execute_from_command_line

    configure_standalone()
    django.setup()
    execute_from_command_line(argv)


if __name__ == '__main__':
    main()
