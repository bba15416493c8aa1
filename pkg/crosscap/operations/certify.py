#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Certify-operation: order of the group generated by a set of words.
"""
from ..lib_bsgs import (AUTO_PROOF_DEGREE, DEFAULT_SEED, generator_set, group_order,
                        read_words_file)
from ..lib_io import logger

logger.debug('Loading CERTIFY module.')


def _run_parser(surface, parser, step, report):
    generators = parser.getstr(step, 'generators', 'thm21')
    wordsFile = parser.getstr(step, 'wordsFile', '') or None
    mode = parser.getstr(step, 'mode', parser.getstr('_global', 'mode', 'full'))
    seed = parser.getint(step, 'seed', parser.getint('_global', 'seed', DEFAULT_SEED))
    cacheDir = parser.getstr(step, 'cacheDir', parser.getstr('_global', 'cacheDir', '')) or None
    force = parser.getbool(step, 'force', False)
    verifyDegree = parser.getint(step, 'verifyDegree', AUTO_PROOF_DEGREE)
    parser.checkSpelling(step, ['generators', 'wordsFile', 'mode', 'seed', 'cacheDir',
                                'force', 'verifyDegree'])
    return run(surface, report, generators, wordsFile, mode, seed, cacheDir, force, verifyDegree)


def run(surface, report, generators='thm21', words_file=None, mode='full', seed=DEFAULT_SEED,
        cache_dir=None, force=False, verify_degree=AUTO_PROOF_DEGREE):
    """
    Compute the order of a generated group and certify it against the
    order of the isometry group.

    Parameters
    ----------
    surface : Surface
    report : Report
    generators : str, optional. default = 'thm21'
        ``thm21``, ``thmA``, ``thmB``, ``szep`` or ``custom``.
    words_file : str, optional
        Word list for ``custom``, one word per line.
    mode, seed, cache_dir, force, verify_degree
        As for the THEOREM operation.

    Returns
    -------
    int
        0 if the target order was reached, else 1.
    """
    words = read_words_file(words_file) if words_file else None
    gens = generator_set(generators, surface.cfg, words)
    logger.info('Certifying %i generators (%s) at genus %i.' % (len(gens), generators, surface.g))
    result = group_order([m for _, m in gens], surface.cfg, mode, seed, force=force,
                         verify_degree=verify_degree, cache_dir=cache_dir)
    report.set_order(result, [w for w, _ in gens])
    if result.certificate == 'below-target':
        logger.warning('Order %i is below the target %s.' % (result.order, result.expected))
    return 0 if report.passed else 1
