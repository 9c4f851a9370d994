# *****************************************************************************
#
# Licensed under the Apache License, Version 2.0 (the "License"); you may not
# use this file except in compliance with the License. You may obtain a copy
# of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
# License for the specific language governing permissions and limitations
# under the License.
#
# ******************************************************************************

import os
import re

from setuptools import find_packages

AUTHOR = 'squeezeclock developers'

CLASSIFIERS = [
    "Development Status :: 3 - Alpha",
    "Environment :: Console",
    "Intended Audience :: Science/Research",
    "License :: OSI Approved :: Apache Software License",
    "Programming Language :: Python :: 3",
    "Topic :: Scientific/Engineering :: Physics",
]

DESCRIPTION_CONTENT_TYPE = "text/markdown"

LICENSE = 'Apache-2.0'

PYTHON_REQUIRES = '>=3.6'

VERSION_FILE = '__version__.py'

README_FILE = 'README.md'

REQUIREMENTS_FILE = 'requirements.txt'

""" Extra name mapped to its requirements file """
EXTRAS_FILES = {'docs': 'requirements-doc.txt'}

CONSOLE_SCRIPT = 'squeezeclock = squeezeclock.clidriver:main'

VERSION_INFO = re.compile(r'^__version_info__\s*=\s*\(([\d\s,]+)\)', re.M)

LC_ERR_NO_FILE = "No such file or directory: '{}'"
LC_ERR_NO_VERSION = "No __version_info__ tuple in '{}'"


class SetupException(Exception):
    """Class for Setup exceptions."""
    pass


class FileNotFoundException(SetupException, IOError):
    """Exception class thrown when a file couldn't be found"""
    pass


class SetupParametersDirector:
    """Construct a parameters dict using the SetupParametersBuilder
    interface.
    """

    STEPS = ('set_packages', 'set_requirements', 'set_extras',
             'set_version', 'set_long_description', 'set_entry_points')

    def __init__(self):
        self._builder = None

    def build(self, builder):
        """
        :type builder: SetupParametersBuilder
        :param builder: Parameters builder.
        """

        self._builder = builder
        for step in self.STEPS:
            getattr(builder, step)()

    @property
    def parameters(self):
        """Get parameters list as dict for setup.py

        :return: dict
        """

        return self._builder.parameters


class SetupParametersBuilder(object):
    """Parts of the ``setup()`` keyword arguments, read from the files next
    to the package.

    :type name: str
    :param name: Distribution and package name.

    :type description: str
    :param description: Short, one-sentence summary of the package.

    :type root: str
    :param root: Directory holding README, requirements and the package.
    """

    def __init__(self, name, description, root='.'):
        self._name = name
        self._root = root
        self._parameters = {
            'name': name,
            'description': description,
            'classifiers': CLASSIFIERS,
            'author': AUTHOR,
            'license': LICENSE,
            'python_requires': PYTHON_REQUIRES,
            'long_description_content_type': DESCRIPTION_CONTENT_TYPE,
            'packages': None,
            'install_requires': None,
            'version': None,
            'long_description': None,
        }

    @property
    def parameters(self):
        return self._parameters

    @property
    def version_file(self):
        return os.path.join(self._name, VERSION_FILE)

    def _read_file(self, name):
        """Content of ``name``, relative to the root.

        :raise FileNotFoundException:
        :raise SetupException: The file cannot be read.

        :rtype: str
        """

        location = os.path.join(self._root, name)
        if not os.path.isfile(location):
            raise FileNotFoundException(LC_ERR_NO_FILE.format(location))

        try:
            with open(location, "r") as fh:
                return fh.read()
        except IOError as e:
            raise SetupException("{}: '{}'".format(e.strerror, location))

    def _requirements(self, name):
        lines = (line.strip() for line in self._read_file(name).splitlines())
        return [line for line in lines if line and not line.startswith('#')]

    def set_packages(self):
        self._parameters['packages'] = find_packages(
            where=self._root, exclude=('tests', 'tests.*'))

    def set_requirements(self):
        """Runtime requirements, comments and blank lines skipped."""

        self._parameters['install_requires'] = self._requirements(
            REQUIREMENTS_FILE)

    def set_extras(self):
        """Optional requirement sets; a missing file drops its extra."""

        extras = {}
        for extra, name in EXTRAS_FILES.items():
            try:
                extras[extra] = self._requirements(name)
            except FileNotFoundException:
                continue
        self._parameters['extras_require'] = extras

    def set_version(self):
        """Version joined from ``__version_info__``, e.g. ``0.1.0``."""

        match = VERSION_INFO.search(self._read_file(self.version_file))
        if match is None:
            raise SetupException(LC_ERR_NO_VERSION.format(self.version_file))

        parts = [part.strip() for part in match.group(1).split(',')]
        self._parameters['version'] = '.'.join(part for part in parts if part)

    def set_long_description(self):
        self._parameters['long_description'] = self._read_file(README_FILE)

    def set_entry_points(self):
        self._parameters['entry_points'] = {
            'console_scripts': [CONSOLE_SCRIPT]}
