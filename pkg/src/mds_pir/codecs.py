import copy
import json
import logging
import os
from collections import OrderedDict
from io import StringIO

from django.utils.encoding import force_bytes, force_str
from ruamel.yaml import YAML
from ruamel.yaml.nodes import MappingNode, ScalarNode
from ruamel.yaml.representer import SafeRepresenter

from .app_settings import pir_settings
from .documents import CodeFile, DocumentDict, ReportFile, check_schema_version
from .errors import SchemaValidationError

logger = logging.getLogger(__name__)

FORMAT_JSON = 'json'  #:
FORMAT_YAML = 'yaml'  #:


def _validate_jsonschema(data, schema):
    try:
        import jsonschema
    except ImportError:
        logger.debug("jsonschema is not installed, skipping schema validation")
        return

    try:
        jsonschema.validate(instance=data, schema=schema)
    except jsonschema.ValidationError as ex:
        path = '/'.join(str(p) for p in ex.absolute_path)
        raise SchemaValidationError("%s (at /%s)" % (ex.message, path)) from ex


#:
VALIDATORS = {
    'jsonschema': _validate_jsonschema,
}


class _DocumentCodec(object):
    media_type = None
    format = None

    def __init__(self, validators=None):
        self._validators = validators

    @property
    def validators(self):
        """List of validator names to apply"""
        if self._validators is None:
            return pir_settings.CODEC_VALIDATORS
        return self._validators

    def validate(self, data, schema):
        """Run every configured validator on ``data``.

        :raises SchemaValidationError: with the per-validator messages in ``errors``
        """
        if schema is None:
            return
        errors = {}
        for validator in self.validators:
            try:
                # validators get a copy so they cannot alter the output
                VALIDATORS[validator](copy.deepcopy(data), schema)
            except SchemaValidationError as e:
                errors[validator] = str(e)

        if errors:
            exc = SchemaValidationError("document validation failed: {}".format(errors), errors, data, self)
            logger.warning(str(exc))
            raise exc

    def encode(self, document):
        """Transform a :class:`.DocumentDict` into a sequence of bytes, validating it first.

        :param DocumentDict document: a :class:`.CodeFile` or :class:`.ReportFile`
        :return: binary encoding of ``document``
        :rtype: bytes
        """
        if not isinstance(document, DocumentDict):
            raise TypeError('Expected a `DocumentDict` instance')

        data = document.as_odict()
        self.validate(data, type(document).json_schema)
        return force_bytes(self._dump_dict(data))

    def decode(self, content, document_class):
        """Parse and validate a serialized document.

        :param content: text or bytes
        :param type document_class: :class:`.CodeFile` or :class:`.ReportFile`
        :rtype: OrderedDict
        """
        data = self._load(force_str(content))
        if not isinstance(data, dict):
            raise SchemaValidationError("expected a mapping at the top level", document=data, source_codec=self)
        check_schema_version(data)
        self.validate(data, document_class.json_schema)
        return data

    def _dump_dict(self, data):
        """Dump the given dictionary into its string representation.

        :param dict data: a python dict
        :return: string representation of ``data``
        :rtype: str or bytes
        """
        raise NotImplementedError("override this method")

    def _load(self, text):
        raise NotImplementedError("override this method")


class DocumentCodecJson(_DocumentCodec):
    media_type = 'application/json'
    format = FORMAT_JSON

    def __init__(self, validators=None, pretty=True):
        super(DocumentCodecJson, self).__init__(validators)
        self.pretty = pretty

    def _dump_dict(self, data):
        """Dump ``data`` into JSON.

        :rtype: str"""
        if self.pretty:
            out = json.dumps(data, indent=4, separators=(',', ': '))
            if out[-1] != '\n':
                out += '\n'
            return out
        else:
            return json.dumps(data)

    def _load(self, text):
        try:
            return json.loads(text, object_pairs_hook=OrderedDict)
        except ValueError as ex:
            raise SchemaValidationError("malformed JSON: %s" % ex, source_codec=self) from ex


YAML_MAP_TAG = u'tag:yaml.org,2002:map'
YAML_STR_TAG = u'tag:yaml.org,2002:str'


class SaneYamlRepresenter(SafeRepresenter):
    """Representer dumping ``OrderedDict`` and ``dict`` instances as plain mappings in insertion order."""

    def ignore_aliases(self, data):
        """Disable YAML references."""
        return True

    def represent_odict(self, mapping, flow_style=None):
        """Represent a mapping without sorting its keys."""
        value = []
        node = MappingNode(YAML_MAP_TAG, value, flow_style=flow_style)
        if self.alias_key is not None:
            self.represented_objects[self.alias_key] = node
        best_style = True
        for item_key, item_value in mapping.items():
            node_key = self.represent_data(item_key)
            node_value = self.represent_data(item_value)
            if not (isinstance(node_key, ScalarNode) and not node_key.style):
                best_style = False
            if not (isinstance(node_value, ScalarNode) and not node_value.style):
                best_style = False
            value.append((node_key, node_value))
        if flow_style is None:
            if self.default_flow_style is not None:
                node.flow_style = self.default_flow_style
            else:
                node.flow_style = best_style
        return node

    def represent_text(self, text):
        if "\n" in text:
            return self.represent_scalar(YAML_STR_TAG, text, style='|')
        return self.represent_scalar(YAML_STR_TAG, text)


SaneYamlRepresenter.add_representer(str, SaneYamlRepresenter.represent_text)
SaneYamlRepresenter.add_representer(OrderedDict, SaneYamlRepresenter.represent_odict)
SaneYamlRepresenter.add_representer(dict, SaneYamlRepresenter.represent_odict)


def _make_yaml():
    yaml = YAML(typ='safe', pure=True)
    yaml.Representer = SaneYamlRepresenter
    yaml.default_flow_style = False
    # list elements are indented into their parents
    yaml.indent(mapping=2, sequence=4, offset=2)
    return yaml


def yaml_sane_dump(data, binary):
    """Dump the given data dictionary into a sane format:

        * OrderedDicts are dumped as regular mappings in insertion order
        * multi-line mapping style instead of json-like inline style
        * list elements are indented into their parents
        * YAML references/aliases are disabled

    :param dict data: the data to be dumped
    :param bool binary: True to return a utf-8 encoded binary object, False to return a string
    :return: the serialized YAML
    :rtype: str or bytes
    """
    stream = StringIO()
    _make_yaml().dump(data, stream)
    out = stream.getvalue()
    return force_bytes(out) if binary else out


def yaml_sane_load(stream):
    """Load the given YAML stream; mappings keep the input order.

    :param stream: YAML stream (can be a string or a file-like object)
    :rtype: dict
    """
    return YAML(typ='safe', pure=True).load(stream)


class DocumentCodecYaml(_DocumentCodec):
    media_type = 'application/yaml'
    format = FORMAT_YAML

    def _dump_dict(self, data):
        """Dump ``data`` into YAML.

        :rtype: bytes"""
        return yaml_sane_dump(data, binary=True)

    def _load(self, text):
        try:
            return yaml_sane_load(text)
        except Exception as ex:
            raise SchemaValidationError("malformed YAML: %s" % ex, source_codec=self) from ex


CODECS = OrderedDict([
    (FORMAT_JSON, DocumentCodecJson),
    (FORMAT_YAML, DocumentCodecYaml),
])

EXTENSIONS = {
    '.json': FORMAT_JSON,
    '.yaml': FORMAT_YAML,
    '.yml': FORMAT_YAML,
}


def get_codec(fmt, validators=None):
    """Codec instance for ``json`` or ``yaml``."""
    try:
        return CODECS[fmt](validators)
    except KeyError:
        raise ValueError("unknown format %r, expected one of %s" % (fmt, list(CODECS)))


def guess_format(path, default=FORMAT_JSON):
    """Pick the format from a file extension; ``default`` for ``-`` and unknown extensions."""
    if not path or path == '-':
        return default
    return EXTENSIONS.get(os.path.splitext(path)[1].lower(), default)


def load_code_file(path, validators=None):
    """Read and validate a code file; JSON or YAML is picked from the extension.

    :rtype: OrderedDict
    """
    with open(path, 'rb') as stream:
        content = stream.read()
    return get_codec(guess_format(path), validators).decode(content, CodeFile)


def load_report_file(path, validators=None):
    with open(path, 'rb') as stream:
        content = stream.read()
    return get_codec(guess_format(path), validators).decode(content, ReportFile)
