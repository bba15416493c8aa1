# -*- coding: utf-8 -*-
import json

import jsonschema
import pytest

from crosscap.lib_bsgs import generator_set, group_order
from crosscap.lib_ledger import replay_proof
from crosscap.lib_report import (EXIT_FAIL, EXIT_GUARD, EXIT_PASS, EXIT_USAGE, Report, exit_code,
                                 load_schema, render)
from crosscap.lib_surface import GenusConfig, Surface


@pytest.fixture(scope='module')
def theorem_report():
    report = Report('theorem', 7)
    report.add_proof(replay_proof('2.1', GenusConfig(7)))
    return report


def test_theorem_report(theorem_report):
    assert theorem_report.passed
    assert theorem_report.exit_code == EXIT_PASS
    d = theorem_report.to_dict()
    assert d['theorem'] == 'THM21'
    assert d['steps'][-1]['id'] == 'targets'
    jsonschema.validate(d, load_schema())


def test_text_json_parity(theorem_report):
    text = theorem_report.to_text().splitlines()
    marks = [line for line in text if line.startswith('[PASS]') or line.startswith('[FAIL]')]
    d = json.loads(render([theorem_report], as_json=True))
    assert len(marks) == len(d['steps'])
    for line, step in zip(marks, d['steps']):
        assert line.startswith('[%s] %s (%s)' % ('PASS' if step['passed'] else 'FAIL', step['id'], step['kind']))
    assert text[-1] == 'result: PASS'


def test_order_report():
    cfg = GenusConfig(7)
    gens = generator_set('thm21', cfg)
    report = Report('certify', 7)
    report.set_order(group_order([m for _, m in gens], cfg), [w for w, _ in gens])
    d = report.to_dict()
    assert d['order']['order'] == '1451520'
    assert d['order']['certificate'] == 'proved'
    assert d['generators'][0] == 'T'
    jsonschema.validate(d, load_schema())
    assert 'order: 1451520 (proved; expected 1451520, full action on 127 points)' in report.to_text()


def test_below_target_fails():
    cfg = GenusConfig(7)
    report = Report('certify', 7)
    report.set_order(group_order([], cfg))
    assert not report.passed
    assert report.exit_code == EXIT_FAIL


def test_model_report():
    report = Report('dump-model', 5)
    report.model = Surface(5).dump_model()
    assert 'y_1: identity' in report.to_text()
    jsonschema.validate(report.to_dict(), load_schema())


def test_error_report():
    report = Report('theorem', 18)
    report.error = (EXIT_USAGE, 'THMA holds for g >= 19, not g = 18')
    assert not report.passed
    d = report.to_dict()
    assert d['exit_code'] == EXIT_USAGE
    assert d['error'].startswith('THMA')
    jsonschema.validate(d, load_schema())


def test_batch(theorem_report):
    failed = Report('certify', 7)
    failed.set_order(group_order([], GenusConfig(7)))
    guarded = Report('certify', 28)
    guarded.error = (EXIT_GUARD, 'too large')
    batch = [theorem_report, failed]
    data = json.loads(render(batch, as_json=True))
    assert isinstance(data, list) and len(data) == 2
    jsonschema.validate(data, load_schema())
    assert exit_code(batch) == EXIT_FAIL
    assert exit_code(batch + [guarded]) == EXIT_GUARD
    assert exit_code([theorem_report]) == EXIT_PASS
    assert render(batch).count('result: ') == 2
