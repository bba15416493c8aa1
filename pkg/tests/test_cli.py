# -*- coding: utf-8 -*-
import json

import jsonschema

from crosscap import operations
from crosscap.lib_cli import build_parser, main
from crosscap.lib_report import load_schema


def _json(capsys):
    data = json.loads(capsys.readouterr().out)
    jsonschema.validate(data, load_schema())
    return data


def test_theorem(capsys):
    assert main(['theorem', '2.1', '--genus', '7', '--json']) == 0
    data = _json(capsys)
    assert data['theorem'] == 'THM21' and data['passed']


def test_several_genera(capsys):
    assert main(['-q', 'theorem', '2.1', '--genus', '7', '9', '--json']) == 0
    data = _json(capsys)
    assert [d['genus'] for d in data] == [7, 9]


def test_parallel_genera(capsys):
    assert main(['-q', 'theorem', '2.1', '--genus', '7', '8', '--ncpu', '2']) == 0
    out = capsys.readouterr().out
    assert out.count('result: PASS') == 2


def test_theorem_certify_order(capsys):
    assert main(['-q', 'theorem', '2.1', '--genus', '7', '--certify-order', '--json']) == 0
    data = _json(capsys)
    assert data['order']['certificate'] == 'proved'


def test_unsupported_genus(capsys):
    assert main(['-q', 'theorem', 'A', '--genus', '18', '--json']) == 2
    data = _json(capsys)
    assert data['exit_code'] == 2 and 'g = 18' in data['error']
    assert main(['-q', 'dump-model', '--genus', '4']) == 2


def test_custom_empty(capsys):
    assert main(['-q', 'certify', '--set', 'custom', '--genus', '7', '--json']) == 1
    data = _json(capsys)
    assert data['order']['certificate'] == 'below-target'


def test_certify_words(tmp_path, capsys):
    words = tmp_path / 'words.txt'
    words.write_text('T\nA[1] A[2]^-1\nB[1] B[2]^-1\n')
    assert main(['-q', 'certify', '--set', 'custom', '--words', str(words), '--genus', '7']) == 0
    assert 'order: 1451520 (proved' in capsys.readouterr().out


def test_guard(capsys):
    assert main(['-q', 'certify', '--set', 'szep', '--genus', '28']) == 3


def test_dump_model(capsys):
    assert main(['dump-model', '--genus', '5']) == 0
    out = capsys.readouterr().out
    assert 'A_1: transvection {1,2}' in out
    assert 'T: permutation (1 2 3 4 5)' in out


def test_dump_model_flag(capsys):
    assert main(['-q', 'theorem', '2.1', '--genus', '7', '--dump-model', '--json']) == 0
    assert 'a_3 = {1,2,3,4,5,6}' in _json(capsys)['model']


def test_parser_defaults():
    opts = build_parser().parse_args(['certify', '--genus', '5'])
    assert (opts.generators, opts.mode, opts.seed, opts.ncpu) == ('thm21', 'full', 2718, 1)


def test_parset_run(parset, capsys):
    name = parset('genus = 7, 8\nmode = quotient\n\n'
                  '[replay]\noperation = THEOREM\ntheorem = 2.1\n\n'
                  '[order]\noperation = CERTIFY\ngenerators = thm21\n\n'
                  '[model]\noperation = DUMP_MODEL\n')
    assert main(['-q', 'run', name, '--json']) == 0
    data = _json(capsys)
    assert [(d['command'], d['genus']) for d in data] == [
        ('theorem', 7), ('certify', 7), ('dump-model', 7),
        ('theorem', 8), ('certify', 8), ('dump-model', 8)]
    assert all('replay' in d['timing'] or d['command'] != 'theorem' for d in data)


def test_parset_errors(parset, capsys):
    name = parset('genus = 7\n[replay]\noperation = PREDICT\n')
    assert main(['-q', 'run', name]) == 2
    name = parset('genus = 7\n[replay]\noperation = THEOREM\n')
    assert main(['-q', 'run', name]) == 2
    assert main(['-q', 'run', 'no_such.parset']) == 2


def test_operation_registry():
    assert operations.COMMANDS == {'THEOREM': 'theorem', 'CERTIFY': 'certify',
                                   'DUMP_MODEL': 'dump-model'}
    assert operations.by_name('DUMP_MODEL') is operations.dump_model
    timing = {}
    with operations.Timer(step='s', operation='THEOREM', timing=timing):
        pass
    assert set(timing) == {'s'}


def test_logfile_backup(tmp_path, capsys):
    logfile = str(tmp_path / 'crosscap.log')
    for _ in range(2):
        assert main(['--logfile', logfile, 'dump-model', '--genus', '5']) == 0
    capsys.readouterr()
    assert len(list(tmp_path.glob('crosscap.log_bkp_*'))) == 1
    with open(logfile) as f:
        assert 'DEBUG - crosscap' in f.read()
