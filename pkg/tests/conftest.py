import copy
from io import StringIO

import numpy as np
import pytest
from django.core.management import call_command

from mds_pir.codes import (
    FAMILY_CUSTOM, FAMILY_EXPANDED_2N2, FAMILY_EXPANDED_PARITY, FAMILY_JOINT_2N2, FAMILY_JOINT_PARITY, JointCode,
    SystemParams, build_expanded_2n2, build_expanded_parity, build_joint_2n2, build_joint_parity
)
from mds_pir.gf import make_field
from mds_pir.schemes import make_scheme
from mds_pir.utils import make_rng

CODE_BUILDERS = {
    FAMILY_JOINT_2N2: build_joint_2n2,
    FAMILY_JOINT_PARITY: build_joint_parity,
    FAMILY_EXPANDED_PARITY: build_expanded_parity,
    FAMILY_EXPANDED_2N2: lambda base_n, m, **kwargs: build_expanded_2n2(base_n, m, **kwargs)[0],
}


@pytest.fixture(scope='session')
def field3():
    return make_field(3)


@pytest.fixture(scope='session')
def field2():
    return make_field(2)


@pytest.fixture(scope='session')
def built_code():
    """Build codes once per session; codes are treated as read-only by the tests that share them."""
    cache = {}

    def built_code(family, *args, **kwargs):
        key = (family, args, tuple(sorted((name, str(value)) for name, value in kwargs.items())))
        if key not in cache:
            cache[key] = CODE_BUILDERS[family](*args, **kwargs)
        return cache[key]

    return built_code


@pytest.fixture(scope='session')
def table_one_code(built_code, field3):
    """The (2, 4, 2) code over GF(3) with exponents shifted by one."""
    return built_code(FAMILY_JOINT_2N2, 4, field=field3, exponent_offset=1)


@pytest.fixture
def table_one_scheme(table_one_code):
    return make_scheme(table_one_code)


@pytest.fixture(scope='session')
def parity_code(built_code):
    return built_code(FAMILY_JOINT_PARITY, 3)


@pytest.fixture
def broken_code(table_one_code):
    """Table I code with database 4 storing exactly what database 3 stores."""
    generators = np.array(table_one_code.generators.view(np.ndarray), dtype=np.int64)
    generators[3] = generators[2]
    return JointCode(table_one_code.params, table_one_code.field, generators,
                     construction=copy.deepcopy(table_one_code.construction))


@pytest.fixture
def separate_example_code(field2):
    """(2, 3, 2) separate coding over GF(2): a_1, b_1 | a_2, b_2 | a_1+a_2, b_1+b_2."""
    params = SystemParams(2, 3, 2, 2, 2, FAMILY_CUSTOM)
    generators = [
        [[1, 0, 0, 0], [0, 0, 1, 0]],
        [[0, 1, 0, 0], [0, 0, 0, 1]],
        [[1, 1, 0, 0], [0, 0, 1, 1]],
    ]
    return JointCode(params, field2, generators)


@pytest.fixture
def rng():
    return make_rng(1234)


@pytest.fixture
def pir_settings_override(settings):
    """Per-test copy of ``MDS_PIR_SETTINGS`` that can be modified freely."""
    pir_settings = copy.deepcopy(getattr(settings, 'MDS_PIR_SETTINGS', {}))
    settings.MDS_PIR_SETTINGS = pir_settings
    return pir_settings


@pytest.fixture
def call_pir_command():
    def call_pir_command(name, *args, **kwargs):
        out, err = StringIO(), StringIO()
        call_command(name, *args, stdout=out, stderr=err, **kwargs)
        return out.getvalue(), err.getvalue()

    return call_pir_command


@pytest.fixture
def non_private_scheme(table_one_code):
    """Every database answers symbol 0 whenever W^2 is wanted."""
    table = np.zeros((2, 3, 4), dtype=int)
    for f in range(3):
        table[0, f, :] = f
    return make_scheme(table_one_code, query_table=table)
