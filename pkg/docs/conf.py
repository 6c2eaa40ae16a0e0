#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# pyhugeobject documentation build configuration file.
import os
import sys

if os.environ.get('READTHEDOCS', None) == 'True':
    os.system('sphinx-apidoc -o api -T ../pyhugeobject --separate')

sys.path.insert(0, os.path.abspath(os.path.pardir))

# append the __init__ to class definitions
autoclass_content = 'both'

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.todo',
    'sphinx.ext.viewcode',
    'sphinx.ext.autosummary',
    'sphinx.ext.mathjax',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = 'pyhugeobject'
copyright = '2026, the pyhugeobject developers'
author = 'the pyhugeobject developers'

# The short X.Y version.
version = '0.1'
# The full version, including alpha/beta/rc tags.
release = '0.1.0'

language = 'en'
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
pygments_style = 'sphinx'
todo_include_todos = True


# -- Options for HTML output ----------------------------------------------

htmlhelp_basename = 'pyhugeobjectdoc'


# -- Options for LaTeX output ---------------------------------------------

latex_elements = {}

latex_documents = [
    (master_doc, 'pyhugeobject.tex', 'pyhugeobject Documentation',
     author, 'manual'),
]


# -- Options for manual page output ---------------------------------------

man_pages = [
    (master_doc, 'pyhugeobject', 'pyhugeobject Documentation',
     [author], 1)
]


# -- Options for Texinfo output -------------------------------------------

texinfo_documents = [
    (master_doc, 'pyhugeobject', 'pyhugeobject Documentation',
     author, 'pyhugeobject',
     'Property testing of distributions over huge binary vectors.',
     'Miscellaneous'),
]
