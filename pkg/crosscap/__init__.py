#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
crosscap: mod-2 homology checks of generating sets for mapping class
groups of nonorientable surfaces.
"""
try:
    from ._version import version as __version__
except ImportError:
    __version__ = 'unknown'
