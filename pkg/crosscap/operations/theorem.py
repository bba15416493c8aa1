#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Theorem-operation: replay a shipped proof script at one genus.
"""
from ..lib_bsgs import AUTO_PROOF_DEGREE, DEFAULT_SEED, generator_set, group_order
from ..lib_io import logger
from ..lib_ledger import load_script, replay_proof

logger.debug('Loading THEOREM module.')

# generating set certified by --certify-order for each script
ORDER_SETS = {'THM21': 'thm21', 'THMA': 'thmA', 'THMB_EVEN': 'thmB', 'THMB_ODD': 'thmB'}


def _run_parser(surface, parser, step, report):
    theorem = parser.getstr(step, 'theorem')
    certifyOrder = parser.getbool(step, 'certifyOrder', False)
    mode = parser.getstr(step, 'mode', parser.getstr('_global', 'mode', 'full'))
    seed = parser.getint(step, 'seed', parser.getint('_global', 'seed', DEFAULT_SEED))
    cacheDir = parser.getstr(step, 'cacheDir', parser.getstr('_global', 'cacheDir', '')) or None
    force = parser.getbool(step, 'force', False)
    verifyDegree = parser.getint(step, 'verifyDegree', AUTO_PROOF_DEGREE)
    parser.checkSpelling(step, ['theorem', 'certifyOrder', 'mode', 'seed', 'cacheDir',
                                'force', 'verifyDegree'])
    return run(surface, report, theorem, certifyOrder, mode, seed, cacheDir, force, verifyDegree)


def run(surface, report, theorem='2.1', certify_order=False, mode='full', seed=DEFAULT_SEED,
        cache_dir=None, force=False, verify_degree=AUTO_PROOF_DEGREE):
    """
    Check every step of a proof at the surface genus.

    Parameters
    ----------
    surface : Surface
    report : Report
        Receives the verdicts (and the order, if requested).
    theorem : str, optional. default = '2.1'
        Script id or alias: ``2.1``, ``A``, ``B-even``, ``B-odd``.
    certify_order : bool, optional. default = False
        Also compute the order of the group generated by the theorem's
        generators and compare it with the isometry group.
    mode : str, optional. default = 'full'
        ``full`` or ``quotient`` action for the order.
    seed : int, optional
        Seed for random group elements.
    cache_dir : str, optional
        Directory of the BSGS cache.
    force : bool, optional. default = False
        Ignore the resource guard.
    verify_degree : int, optional
        Largest number of points on which the order is proved
        deterministically.

    Returns
    -------
    int
        0 if every step passed (and the order reached the target), else 1.
    """
    script = load_script(theorem)
    proof = replay_proof(script, surface.cfg)
    report.add_proof(proof)
    for v in proof.failures:
        logger.error('Step %s failed at genus %i: %s' % (v.step_id, surface.g, v.detail))

    if certify_order:
        gens = generator_set(ORDER_SETS[script.id], surface.cfg)
        result = group_order([m for _, m in gens], surface.cfg, mode, seed, force=force,
                             verify_degree=verify_degree, cache_dir=cache_dir)
        report.set_order(result, [w for w, _ in gens])

    return 0 if report.passed else 1
