import os

from django.conf import settings
from django.core.exceptions import ImproperlyConfigured
from django.utils.module_loading import import_string

PIR_DEFAULTS = {
    'MAX_FIELD_ORDER': 2 ** 20,
    'MAX_SEARCH_FIELD_ORDER': 2 ** 10,
    'DEFAULT_MAX_ATTEMPTS': 25,
    'ORACLE_BUDGET': 2 ** 20,
    'DEFAULT_TRIALS': 50,
    'DEFAULT_SEED': 0,
    'BIT_GENERATOR_CLASS': 'numpy.random.PCG64',
    'CODEC_VALIDATORS': ['jsonschema'],
}

IMPORT_STRINGS = [
    'BIT_GENERATOR_CLASS',
]

#: settings that may be overridden from the environment when the user settings do not define them
ENV_OVERRIDES = {
    'DEFAULT_SEED': ('MDS_PIR_SEED', int),
}


class AppSettings(object):
    """
    Adapted from Django Rest Framework's settings object, without caching so tests can override values.
    Works without a configured Django project, in which case only defaults and environment overrides apply.
    """

    def __init__(self, user_settings, defaults, import_strings=None, env_overrides=None):
        self._user_settings = user_settings
        self.defaults = defaults
        self.import_strings = import_strings or []
        self.env_overrides = env_overrides or {}

    @property
    def user_settings(self):
        try:
            return getattr(settings, self._user_settings, {})
        except ImproperlyConfigured:
            # plain library use, no Django project around
            return {}

    def __getattr__(self, attr):
        if attr not in self.defaults:
            raise AttributeError("Invalid setting: '%s'" % attr)  # pragma: no cover

        try:
            # Check if present in user settings
            val = self.user_settings[attr]
        except KeyError:
            val = self._env_value(attr)

        # Coerce import strings into classes
        if attr in self.import_strings and isinstance(val, str):
            val = import_string(val)

        return val

    def _env_value(self, attr):
        env_name, cast = self.env_overrides.get(attr, (None, None))
        raw = os.environ.get(env_name) if env_name else None
        if raw is None or raw == '':
            return self.defaults[attr]

        try:
            return cast(raw)
        except ValueError:
            raise ImproperlyConfigured("environment variable %s=%r is not a valid %s" % (env_name, raw, attr))


#:
pir_settings = AppSettings(
    user_settings='MDS_PIR_SETTINGS',
    defaults=PIR_DEFAULTS,
    import_strings=IMPORT_STRINGS,
    env_overrides=ENV_OVERRIDES,
)
