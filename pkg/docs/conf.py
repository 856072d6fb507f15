# Sphinx configuration for the fronthaullib documentation

import os
import sys

sys.path.insert(0, os.path.abspath('..'))

project = 'Fronthaullib'
copyright = '2024, fronthaullib contributors'
author = 'fronthaullib contributors'

master_doc = 'index'
version = "0.1"
release = "0.1.0"

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.napoleon",
    "sphinx.ext.mathjax",
]

autodoc_member_order = 'bysource'

templates_path = ['_templates']
exclude_patterns = ['_build']

on_rtd = os.environ.get("READTHEDOCS", None) == "True"

if on_rtd:
    html_theme = "default"
else:
    html_theme = "sphinx_rtd_theme"
