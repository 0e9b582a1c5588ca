# coding=utf-8
from importlib.metadata import PackageNotFoundError, version

__author__ = """mds-pir developers"""

try:
    __version__ = version('mds-pir')
except PackageNotFoundError:  # pragma: no cover
    # package is not installed
    __version__ = '0.0.0.dev0'
