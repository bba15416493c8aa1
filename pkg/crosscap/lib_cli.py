# -*- coding: utf-8 -*-
"""
Command line and parset front end.

::

    crosscap theorem {2.1,A,B-even,B-odd} --genus G [G ...] [--certify-order]
    crosscap certify --set {thm21,thmA,thmB,szep,custom} [--words FILE] --genus G [G ...]
    crosscap dump-model --genus G [G ...]
    crosscap run parset
"""
import argparse
import logging
import multiprocessing as mp
import sys

from . import __version__, operations
from .lib_bsgs import (AUTO_PROOF_DEGREE, DEFAULT_SEED, GENERATOR_SETS, MODES,
                       ResourceGuardError)
from .lib_io import Logger, ParsetError, ParsetParser, logger
from .lib_ledger import ScriptError
from .lib_report import EXIT_GUARD, EXIT_USAGE, Report, exit_code, render
from .lib_surface import ContractError, GenusError, Surface
from .lib_words import UndefinedWordError, WordSyntaxError

THEOREMS = ('2.1', 'A', 'B-even', 'B-odd')
# errors that make a usage report (exit 2) rather than a traceback
USAGE_ERRORS = (GenusError, ScriptError, ParsetError, WordSyntaxError, UndefinedWordError,
                ContractError, OSError, ValueError)


def _common(p):
    p.add_argument('--genus', '-g', type=int, nargs='+', required=True, help='Genus (several allowed).')
    p.add_argument('--json', action='store_true', help='Print the report as JSON.')
    p.add_argument('--dump-model', action='store_true', help='Add the curve table and generator images.')
    p.add_argument('--ncpu', type=int, default=1, help='Genera checked in parallel; -1 uses all cores.')
    p.add_argument('--mode', choices=MODES, default='full', help='Action used for group orders.')
    p.add_argument('--seed', type=int, default=DEFAULT_SEED, help='Seed for random group elements.')
    p.add_argument('--cache-dir', default=None, help='Directory of the BSGS cache.')
    p.add_argument('--force', action='store_true', help='Run above the resource guard.')
    p.add_argument('--verify-degree', type=int, default=AUTO_PROOF_DEGREE,
                   help='Prove the order deterministically up to this many points.')


def build_parser():
    parser = argparse.ArgumentParser(prog='crosscap',
                                     description='Mod-2 homology checks for generating sets of '
                                                 'mapping class groups of nonorientable surfaces.')
    parser.add_argument('--version', action='version', version='crosscap %s' % __version__)
    parser.add_argument('-q', dest='quiet', action='store_true', help='Only warnings and errors.')
    parser.add_argument('-v', dest='verbose', action='store_true', help='Debug output.')
    parser.add_argument('--logfile', default=None, help='Also log (down to DEBUG) to this file.')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('theorem', help='Replay a proof script.')
    p.add_argument('theorem', choices=THEOREMS)
    p.add_argument('--certify-order', action='store_true',
                   help="Also certify the order generated by the theorem's generators.")
    _common(p)

    p = sub.add_parser('certify', help='Order of the group generated by a set of words.')
    p.add_argument('--set', dest='generators', default='thm21',
                   choices=sorted({k.split('-')[0] for k in GENERATOR_SETS}))
    p.add_argument('--words', dest='words_file', default=None, help='Word file for --set custom.')
    _common(p)

    p = sub.add_parser('dump-model', help='Print the curve table and generator images.')
    _common(p)

    p = sub.add_parser('run', help='Run the steps of a parset.')
    p.add_argument('parset')
    p.add_argument('--json', action='store_true', help='Print the reports as JSON.')
    return parser


def run_command(command, g, opts):
    """
    Run one command at one genus. Errors end up in the report.

    Parameters
    ----------
    command : str
        ``theorem``, ``certify`` or ``dump-model``.
    g : int
    opts : argparse.Namespace

    Returns
    -------
    Report
    """
    report = Report(command, g)
    try:
        surface = Surface(g)
        if getattr(opts, 'dump_model', False) and command != 'dump-model':
            operations.dump_model.run(surface, report)
        if command == 'theorem':
            operations.theorem.run(surface, report, opts.theorem, opts.certify_order, opts.mode,
                                   opts.seed, opts.cache_dir, opts.force, opts.verify_degree)
        elif command == 'certify':
            operations.certify.run(surface, report, opts.generators, opts.words_file, opts.mode,
                                   opts.seed, opts.cache_dir, opts.force, opts.verify_degree)
        else:
            operations.dump_model.run(surface, report)
    except ResourceGuardError as e:
        logger.error(str(e))
        report.error = (EXIT_GUARD, str(e))
    except USAGE_ERRORS as e:
        logger.error('Genus %i: %s' % (g, e))
        report.error = (EXIT_USAGE, str(e))
    return report


def _run_command(args):
    return run_command(*args)


def run_genera(command, opts):
    """`run_command` for every requested genus, in parallel if asked."""
    ncpu = opts.ncpu if opts.ncpu > 0 else mp.cpu_count()
    jobs = [(command, g, opts) for g in opts.genus]
    if ncpu == 1 or len(jobs) == 1:
        return [run_command(*job) for job in jobs]
    with mp.Pool(processes=min(ncpu, len(jobs))) as pool:
        return pool.map(_run_command, jobs)


def run_parset(parsetFile):
    """
    Run the steps of a parset at every genus of its ``genus`` global.

    Returns
    -------
    list of Report
        One report per genus and step.
    """
    parser = ParsetParser(parsetFile)
    genera = parser.getarrayint('_global', 'genus')
    parser.checkSpelling('_global', ['genus', 'mode', 'seed', 'cacheDir'])

    reports = []
    for g in genera:
        try:
            surface = Surface(g)
        except GenusError as e:
            logger.error(str(e))
            report = Report('run', g)
            report.error = (EXIT_USAGE, str(e))
            reports.append(report)
            continue
        for step in parser.steps():
            op = parser.getstr(step, 'operation')
            if op not in operations.COMMANDS:
                parser._fail('Section: %s - unknown operation %s (expected one of %s).'
                             % (step, op, ', '.join(sorted(operations.COMMANDS))))
            report = Report(operations.COMMANDS[op], g)
            with operations.Timer(logger, step, op, report.timing):
                try:
                    operations.by_name(op)._run_parser(surface, parser, step, report)
                except ResourceGuardError as e:
                    logger.error(str(e))
                    report.error = (EXIT_GUARD, str(e))
                except USAGE_ERRORS as e:
                    logger.error('Step %s at genus %i: %s' % (step, g, e))
                    report.error = (EXIT_USAGE, str(e))
            reports.append(report)
    return reports


def main(argv=None):
    opts = build_parser().parse_args(argv)
    level = logging.DEBUG if opts.verbose else logging.WARNING if opts.quiet else logging.INFO
    Logger(opts.logfile, level)
    logger.debug('crosscap %s' % __version__)

    if opts.command == 'run':
        try:
            reports = run_parset(opts.parset)
        except (ParsetError, OSError) as e:
            logger.error(str(e))
            return EXIT_USAGE
    else:
        reports = run_genera(opts.command, opts)

    print(render(reports, opts.json))
    return exit_code(reports)


if __name__ == '__main__':
    sys.exit(main())
