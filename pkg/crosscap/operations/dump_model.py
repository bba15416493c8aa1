#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Dump_model-operation: print the curve table and generator images.
"""
from ..lib_io import logger

logger.debug('Loading DUMP_MODEL module.')


def _run_parser(surface, parser, step, report):
    parser.checkSpelling(step, [])
    return run(surface, report)


def run(surface, report):
    """
    Add the model of the surface (curve classes as crosscap sets, generator
    images as permutations or transvections) to the report.
    """
    report.model = surface.dump_model()
    return 0
