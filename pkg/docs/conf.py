#!/usr/bin/env python
# -*- coding: utf-8 -*-

# chaincert - Certified truncation error bounds for chain-mapped spin-boson simulations
#
# Copyright (C) 2024-2026
# - Helmholtz Centre Potsdam - GFZ German Research Centre for Geosciences Potsdam,
#   Germany (https://www.gfz-potsdam.de/)
#
# Licensed only under the EUPL, Version 1.2 or - as soon they will be approved
# by the European Commission - subsequent versions of the EUPL (the "Licence").
# You may not use this work except in compliance with the Licence.
#
# You may obtain a copy of the Licence at:
# https://joinup.ec.europa.eu/software/page/eupl
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""Sphinx configuration of the chaincert documentation."""

import os
import sys

sys.path.insert(0, os.path.abspath('..'))

import chaincert  # noqa: E402

extensions = [
    'numpydoc',
    'sphinx.ext.autodoc',
    'sphinx.ext.viewcode',
    'sphinxarg.ext',
]
numpydoc_show_class_members = False

source_suffix = '.rst'
master_doc = 'index'

project = 'chaincert'
copyright = "2024-2026, FernLab"
author = "FernLab"
version = chaincert.__version__
release = chaincert.__version__
language = 'en'

exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
pygments_style = 'sphinx'
autoclass_content = 'class'

html_theme = 'sphinx_rtd_theme'
htmlhelp_basename = 'chaincertdoc'
