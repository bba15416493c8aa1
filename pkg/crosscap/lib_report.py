# -*- coding: utf-8 -*-
"""
Library for run reports: what was checked at one genus, in text or JSON.
"""
import json
from importlib import resources

from . import __version__

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_GUARD = 3


class Report():
    """
    Outcome of one command at one genus.

    Parameters
    ----------
    command : str
        ``theorem``, ``certify`` or ``dump-model``.
    genus : int
    """
    def __init__(self, command, genus):
        self.command = command
        self.genus = genus
        self.theorem = None
        self.statement = ''
        self.steps = []
        self.skipped = []
        self.established = []
        self.generators = []
        self.order = None
        self.model = []
        self.timing = {}
        self.error = None

    def add_proof(self, proof):
        """Take over the verdicts of a `lib_ledger.ProofReport`."""
        self.theorem = proof.script
        self.statement = proof.statement
        self.steps += [v.to_dict() for v in proof.verdicts]
        self.skipped += proof.skipped
        self.established += [{'word': w, 'origin': o} for w, o in proof.established]

    def set_order(self, result, generators=()):
        self.order = result.to_dict()
        self.generators = list(generators)

    @property
    def passed(self):
        if self.error is not None:
            return False
        if any(not s['passed'] for s in self.steps):
            return False
        return self.order is None or self.order['certificate'] != 'below-target'

    @property
    def exit_code(self):
        if self.error is not None:
            return self.error[0]
        return EXIT_PASS if self.passed else EXIT_FAIL

    def to_dict(self):
        return {'tool': 'crosscap', 'version': __version__, 'command': self.command,
                'genus': self.genus, 'theorem': self.theorem, 'statement': self.statement,
                'passed': self.passed, 'exit_code': self.exit_code,
                'steps': self.steps, 'skipped': self.skipped, 'established': self.established,
                'generators': self.generators, 'order': self.order, 'model': self.model,
                'timing': self.timing,
                'error': None if self.error is None else self.error[1]}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self):
        head = 'crosscap %s - %s' % (__version__, self.command)
        if self.theorem:
            head += ' %s' % self.theorem
        lines = [head + ' at genus %i' % self.genus]
        if self.statement:
            lines.append(self.statement)
        lines += self.model
        for s in self.steps:
            mark = 'PASS' if s['passed'] else 'FAIL'
            line = '[%s] %s (%s)' % (mark, s['id'], s['kind'])
            if s['instances'] != 1:
                line += ' x%i' % s['instances']
            if s['anchor']:
                line += ': %s' % s['anchor']
            if s.get('note'):
                line += ' [%s]' % s['note']
            if s['detail']:
                line += ' -- %s' % s['detail']
            lines.append(line)
        if self.skipped:
            lines.append('skipped (other branch): %s' % ', '.join(self.skipped))
        if self.established:
            lines.append('established: %s' % ', '.join('%s [%s]' % (e['word'], e['origin']) for e in self.established))
        if self.generators:
            lines.append('generators: %s' % ', '.join(self.generators))
        if self.order is not None:
            o = self.order
            lines.append('order: %s (%s; expected %s, %s action on %i points)' % (
                o['order'], o['certificate'], o['expected'], o['mode'], o['degree']))
        if self.error is not None:
            lines.append('error: %s' % self.error[1])
        lines.append('result: %s' % ('PASS' if self.passed else 'FAIL'))
        return '\n'.join(lines)


def render(reports, as_json=False):
    """One report or several (one per genus) as text or JSON."""
    if as_json:
        if len(reports) == 1:
            return reports[0].to_json()
        return json.dumps([r.to_dict() for r in reports], indent=2)
    return '\n\n'.join(r.to_text() for r in reports)


def exit_code(reports):
    """Worst exit code of a batch: guard > usage > failure > pass."""
    codes = [r.exit_code for r in reports] or [EXIT_PASS]
    for code in (EXIT_GUARD, EXIT_USAGE, EXIT_FAIL):
        if code in codes:
            return code
    return EXIT_PASS


def load_schema():
    with resources.files('crosscap').joinpath('data', 'report.schema.json').open() as f:
        return json.load(f)
