# -*- coding: utf-8 -*-
#
# CrossCap documentation build configuration file

import os, sys

sys.path.insert(0, os.path.abspath('../..'))
from crosscap import __version__  # noqa: E402

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
    'numpydoc',
]
numpydoc_show_class_members = False

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = 'CrossCap'
copyright = '2024, the CrossCap developers'
release = __version__
version = '.'.join(release.split('.')[:2])

exclude_patterns = []
pygments_style = 'sphinx'

# -- Output ---------------------------------------------------------------

html_theme = 'default'
htmlhelp_basename = 'CrossCapdoc'
man_pages = [('index', 'crosscap', 'CrossCap Documentation', ['the CrossCap developers'], 1)]
