import json

import pytest
from django.core.management.base import CommandError

from mds_pir.__main__ import COMMAND_ALIASES, main
from mds_pir.codecs import get_codec, load_report_file, yaml_sane_load
from mds_pir.documents import code_to_document
from mds_pir.schemes import build_query_table
from mds_pir.tables import GOLDEN_TABLES, read_golden


def write_code(path, code):
    path.write_bytes(get_codec('json').encode(code_to_document(code)))
    return str(path)


@pytest.fixture
def table_one_file(tmp_path, table_one_code):
    return write_code(tmp_path / 'table_one.json', table_one_code)


def test_build_table_one(call_pir_command, table_one_code):
    out, err = call_pir_command('pir_build', '--family', 'joint-2n2', '--n', '4', '--offset', '1')
    data = json.loads(out)
    assert data['field']['q'] == 3
    assert data['params']['n'] == 4
    assert data['labels'] == table_one_code.labels
    assert data['construction'] == {'exponentOffset': 1}
    assert 'built joint-2n2 code (K=2, N=4, T=2) over GF(3)' in err
    assert 'all 6 2-subsets' in err


def test_build_default_field(call_pir_command):
    out, _ = call_pir_command('pir_build', '--family', 'joint-2n2', '--n', '4')
    data = json.loads(out)
    assert data['field']['q'] == 3
    assert data['construction'] == {'exponentOffset': 0}


def test_build_field_too_small(call_pir_command):
    with pytest.raises(CommandError) as excinfo:
        call_pir_command('pir_build', '--family', 'joint-2n2', '--n', '4', '--field', '2^1')
    assert 'GF(2)' in str(excinfo.value)


@pytest.mark.parametrize('family,args', [
    ('joint-parity', ['--k', '3']),
    ('expanded-2n2', ['--n', '3', '--m-factor', '2']),
])
def test_build_rejects_field(call_pir_command, family, args):
    with pytest.raises(CommandError) as excinfo:
        call_pir_command('pir_build', '--family', family, '--field', '2^3', *args)
    assert '--field is not accepted' in str(excinfo.value)


def test_build_checks_mds(call_pir_command, monkeypatch, broken_code):
    monkeypatch.setattr('mds_pir.management.commands.pir_build.build_code', lambda *args, **kwargs: broken_code)
    with pytest.raises(CommandError) as excinfo:
        call_pir_command('pir_build', '--family', 'joint-2n2', '--n', '4')
    assert 'not MDS: 1 of 6 2-subsets fail, first (3, 4)' in str(excinfo.value)


def test_build_reports_checked_subsets(call_pir_command):
    _, err = call_pir_command('pir_build', '--family', 'joint-parity', '--k', '3')
    assert 'validated: all 4 3-subsets of databases decode' in err
    _, err = call_pir_command('pir_build', '--family', 'expanded-parity', '--k', '2', '--m-factor', '2')
    assert 'validated: all 15 4-subsets of databases decode' in err


def test_build_missing_parameter(call_pir_command):
    with pytest.raises(CommandError) as excinfo:
        call_pir_command('pir_build', '--family', 'joint-parity')
    assert '--k' in str(excinfo.value)


def test_build_expanded_parity_yaml(call_pir_command, tmp_path):
    path = tmp_path / 'expanded.yaml'
    call_pir_command('pir_build', '--family', 'expanded-parity', '--k', '2', '--m-factor', '2', str(path))
    data = yaml_sane_load(path.read_text())
    assert data['field']['q'] == 7
    assert data['params']['mFactor'] == 2
    assert data['params']['n'] == 6


def test_build_expanded_2n2(call_pir_command):
    out, err = call_pir_command('pir_build', '--family', 'expanded-2n2', '--n', '3', '--m-factor', '2',
                                '--seed', '5')
    data = json.loads(out)
    assert data['coefficients']['seed'] == 5
    assert data['provenance']['seed'] == 5
    assert data['provenance']['attempts'] >= 1
    assert 'coefficient search' in err


def test_overwrite(call_pir_command, tmp_path):
    path = str(tmp_path / 'code.json')
    call_pir_command('pir_build', '--family', 'joint-parity', '--k', '2', path)
    with pytest.raises(CommandError) as excinfo:
        call_pir_command('pir_build', '--family', 'joint-parity', '--k', '3', path)
    assert 'already exists' in str(excinfo.value)
    call_pir_command('pir_build', '--family', 'joint-parity', '--k', '3', '--overwrite', path)
    with open(path) as stream:
        assert json.load(stream)['params']['k'] == 3


def read_documents(text):
    """Split back-to-back JSON documents written to stdout."""
    decoder, documents, index = json.JSONDecoder(), [], 0
    while index < len(text):
        document, index = decoder.raw_decode(text, index)
        documents.append(document)
        while index < len(text) and text[index].isspace():
            index += 1
    return documents


def test_verify_all(call_pir_command, table_one_file):
    out, err = call_pir_command('pir_verify', table_one_file, '--trials', '50')
    documents = read_documents(out)
    assert [data['kind'] for data in documents] == ['mds', 'privacy', 'correctness', 'barrier']
    assert all(data['payload']['ok'] is True for data in documents)
    assert documents[2]['payload']['trials'] == 50
    assert documents[3]['payload']['margin'] == {'num': 1, 'den': 12}
    for check in ('mds', 'privacy', 'correctness', 'barrier'):
        assert '%s: pass' % check in err


def test_verify_all_to_files(call_pir_command, tmp_path, parity_code):
    code_file = write_code(tmp_path / 'parity.json', parity_code)
    call_pir_command('pir_verify', code_file, '--trials', '50', '--out', str(tmp_path / 'report.yaml'))
    for check in ('mds', 'privacy', 'correctness', 'barrier'):
        data = load_report_file(str(tmp_path / ('report.%s.yaml' % check)))
        assert data['kind'] == check
        assert data['payload']['ok'] is True
    data = load_report_file(str(tmp_path / 'report.barrier.yaml'))
    assert data['payload']['margin'] == {'num': 5, 'den': 74}


def test_verify_broken_code(call_pir_command, tmp_path, broken_code):
    code_file = write_code(tmp_path / 'broken.json', broken_code)
    report = tmp_path / 'report.yaml'
    with pytest.raises(CommandError):
        call_pir_command('pir_verify', code_file, '--check', 'mds', '--out', str(report))
    # the report is written before failing
    data = load_report_file(str(report))
    assert data['kind'] == 'mds'
    assert data['payload']['ok'] is False
    assert [3, 4] in data['payload']['failingSubsets']


def test_verify_custom_code(call_pir_command, tmp_path, separate_example_code):
    code_file = write_code(tmp_path / 'separate.json', separate_example_code)
    out, err = call_pir_command('pir_verify', code_file, '--check', 'mds')
    assert json.loads(out)['payload']['ok'] is True
    assert 'mds: pass' in err
    with pytest.raises(CommandError) as excinfo:
        call_pir_command('pir_verify', code_file, '--check', 'privacy')
    assert 'custom' in str(excinfo.value)

    # with every check the mds report is still written before the scheme is needed
    report = tmp_path / 'report.json'
    with pytest.raises(CommandError):
        call_pir_command('pir_verify', code_file, '--out', str(report))
    data = load_report_file(str(tmp_path / 'report.mds.json'))
    assert data['kind'] == 'mds'
    assert data['payload']['ok'] is True
    assert not (tmp_path / 'report.privacy.json').exists()


def test_verify_missing_file(call_pir_command, tmp_path):
    with pytest.raises(CommandError) as excinfo:
        call_pir_command('pir_verify', str(tmp_path / 'nowhere.json'))
    assert 'does not exist' in str(excinfo.value)


def test_retrieve(call_pir_command, table_one_file, table_one_code):
    out, err = call_pir_command('pir_retrieve', table_one_file, '--k-star', '2', '--seed', '11')
    payload = json.loads(out)['payload']
    f_values, queries = build_query_table(table_one_code.params)
    f = payload['f']
    assert payload['kStar'] == 2
    assert payload['queries'] == queries[1][f_values.index(f)].tolist()
    assert payload['reconstructed'] == payload['messages'][1]
    assert payload['downloadCount'] == 4
    assert 'f = %d' % f in err
    assert 'reconstructed W^2' in err


def test_retrieve_zero_messages(call_pir_command, tmp_path, table_one_file):
    messages = tmp_path / 'messages.json'
    messages.write_text(json.dumps([[0, 0, 0], [0, 0, 0]]))
    out, _ = call_pir_command('pir_retrieve', table_one_file, '--k-star', '1', '--messages', str(messages))
    payload = json.loads(out)['payload']
    assert payload['answers'] == [0, 0, 0, 0]
    assert payload['reconstructed'] == [0, 0, 0]


def test_retrieve_parity(call_pir_command, tmp_path, parity_code):
    code_file = write_code(tmp_path / 'parity.json', parity_code)
    out, _ = call_pir_command('pir_retrieve', code_file, '--k-star', '3', '--seed', '3')
    payload = json.loads(out)['payload']
    assert payload['reconstructed'] == payload['messages'][2]
    assert payload['f'] in (1, 2)


def test_retrieve_bad_k_star(call_pir_command, table_one_file):
    with pytest.raises(CommandError):
        call_pir_command('pir_retrieve', table_one_file, '--k-star', '3')


def test_published_tables(call_pir_command):
    out, err = call_pir_command('pir_tables')
    for name in GOLDEN_TABLES:
        assert read_golden(name) in out
    assert 'Table XIV' in out
    assert 'match their golden files' in err


def test_sweep_markdown(call_pir_command):
    out, err = call_pir_command('pir_sweep', '--family', 'joint-parity', '--range', '2..3', '--trials', '50')
    assert out.startswith('### Barrier sweep: joint-parity\n')
    assert '| 3 | GF(2) | 1/2 | 16/37 | 5/74 | yes | yes | yes | yes |  |' in out
    assert '2 parameter point(s), 0 failed' in err


def test_sweep_empty_range(call_pir_command):
    out, err = call_pir_command('pir_sweep', '--family', 'joint-2n2', '--range', '4..3')
    assert out.count('\n') == 4
    assert '0 parameter point(s), 0 failed' in err


def test_sweep_csv(call_pir_command, tmp_path):
    path = tmp_path / 'sweep.csv'
    call_pir_command('pir_sweep', '--family', 'joint-2n2', '--range', '3..4', '--trials', '1', '--out', str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == 'N,field,rate,C_perp,margin,broken,mds,privacy,correctness,error'
    assert lines[2].startswith('4,GF(3),3/4,2/3,1/12,yes')


def test_sweep_json(call_pir_command):
    out, _ = call_pir_command('pir_sweep', '--family', 'expanded-parity', '--range', '2..2', '--m-factor', '2',
                              '--trials', '1', '--format', 'json')
    payload = json.loads(out)['payload']
    assert payload['ok'] is True
    assert payload['rows'][0]['margin'] == {'num': 1, 'den': 15}


def test_sweep_failure(call_pir_command):
    with pytest.raises(CommandError) as excinfo:
        call_pir_command('pir_sweep', '--family', 'joint-2n2', '--range', '2..3', '--trials', '1')
    assert 'failed at [2]' in str(excinfo.value)


def test_deterministic_output(call_pir_command, table_one_file):
    build = ('pir_build', '--family', 'expanded-2n2', '--n', '3', '--m-factor', '2', '--seed', '9')
    assert call_pir_command(*build) == call_pir_command(*build)
    retrieve = ('pir_retrieve', table_one_file, '--k-star', '1', '--seed', '4')
    assert call_pir_command(*retrieve) == call_pir_command(*retrieve)


def test_console_aliases(tmp_path):
    assert set(COMMAND_ALIASES.values()) == {'pir_build', 'pir_verify', 'pir_retrieve', 'pir_tables', 'pir_sweep'}
    path = tmp_path / 'parity.json'
    main(['mds-pir', 'build', '--family', 'joint-parity', '--k', '2', str(path)])
    assert json.loads(path.read_text())['params']['family'] == 'joint-parity'
    with pytest.raises(SystemExit) as excinfo:
        main(['mds-pir', 'build', '--family', 'joint-parity', '--k', '2', str(path)])
    assert excinfo.value.code == 1
