#
# geo4 documentation build configuration file
#
import sys
import os
import time

sys.path.insert(0, os.path.abspath(os.path.join(os.pardir, 'src')))

extensions = [
    'sphinx.ext.autodoc',
]

source_suffix = '.rst'
master_doc = 'index'

project = 'geo4'
copyright = '{}, the geo4 developers'.format(time.gmtime().tm_year)

# The version is derived from the most recent Git tag by setuptools_scm
from setuptools_scm import get_version  # noqa: E402

release = get_version(root=os.pardir, fallback_version='0.1.dev0')
if os.environ.get('READTHEDOCS') == 'True':
    version = '.'.join(release.split('.')[:2])
else:
    version = release
release = version

exclude_patterns = ['_build']
pygments_style = 'sphinx'
html_theme = 'default'
html_static_path = []
htmlhelp_basename = 'geo4doc'

man_pages = [
    ('index', 'geo4', 'geo4 Documentation', ['the geo4 developers'], 1)
]
