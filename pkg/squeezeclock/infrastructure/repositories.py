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

import io
import os

from configparser import ConfigParser, Error as ConfigParserError

from squeezeclock.domain.repositories import (
    BaseRepository, RepositoryException)

KEY_TEMPLATE = '{0}_{1}'

LC_ERR_INVALID_DATA_TYPE = 'Invalid context type, should be instance of {name}'
LC_ERR_NO_FILE = 'No such file or directory: "{location}".'
LC_ERR_NOT_INI_CONTENT = 'Cannot parse configuration {source}: {reason}'


class RepositoryDataTypeException(RepositoryException):
    """Raised when try to assign wrong data type.

    :type name: str
    :param name: Type name.
    """

    def __init__(self, name):
        super(RepositoryDataTypeException, self).__init__(
            LC_ERR_INVALID_DATA_TYPE.format(name=name)
        )


class RepositoryFileNotFoundException(RepositoryException):
    """Raised when try to read unavailable file.

    :type key: str
    :param key: File location
    """

    def __init__(self, key):
        super(RepositoryFileNotFoundException, self).__init__(
            LC_ERR_NO_FILE.format(location=key)
        )


class RepositoryContentException(RepositoryException):
    """Raised when configuration text cannot be parsed."""

    def __init__(self, source, reason):
        super(RepositoryContentException, self).__init__(
            LC_ERR_NOT_INI_CONTENT.format(source=source, reason=reason)
        )


def _require_type(value, *types):
    if not isinstance(value, types):
        raise RepositoryDataTypeException(
            ' or '.join(kind.__name__ for kind in types))


class DictRepository(BaseRepository):
    """``section_option`` keys mapped to raw values held in memory.

    :type data: dict
    :param data: Initial values.
    """

    def __init__(self, data=None):
        if data is not None:
            _require_type(data, dict)
        self._data = dict(data or {})

    @property
    def data(self):
        return self._data

    def find_one(self, key):
        return self.data.get(key)

    def find_all(self):
        return dict(self.data)


class OverridesRepository(DictRepository):
    """Command-line values replacing options of the configuration file."""

    def set(self, section, option, value):
        """
        :type section: str
        :param section: INI section, e.g. ``loop``.

        :type option: str
        :param option: Option of the section, e.g. ``seed``.

        :param value: Raw value; ``None`` leaves the option untouched.

        :rtype: OverridesRepository
        """

        if value is not None:
            self._data[KEY_TEMPLATE.format(section, option)] = value
        return self


class INIRepository(DictRepository):
    """INI text flattened into ``section_option`` keys.

    The text is parsed on first access, so a broken file surfaces where the
    first option is read. ``%`` carries no interpolation.

    :type text: str
    :param text: INI content.

    :type source: str
    :param source: Where the text came from, used in error messages.
    """

    def __init__(self, text, source='<text>'):
        _require_type(text, str)
        super(INIRepository, self).__init__()
        self._text = text
        self._source = source
        self._parsed = False

    @classmethod
    def from_file(cls, location):
        """
        :type location: str
        :param location: INI file path.

        :raise RepositoryDataTypeException:
        :raise RepositoryFileNotFoundException:

        :rtype: INIRepository
        """

        _require_type(location, str)
        if not os.path.isfile(location):
            raise RepositoryFileNotFoundException(location)
        with io.open(location, 'r', encoding='utf-8') as fh:
            return cls(fh.read(), location)

    @property
    def text(self):
        return self._text

    @property
    def source(self):
        return self._source

    @property
    def data(self):
        if not self._parsed:
            self._data = self._parse()
            self._parsed = True
        return self._data

    def _parse(self):
        config = ConfigParser(interpolation=None)
        try:
            config.read_string(self._text, source=self._source)
        except ConfigParserError as e:
            raise RepositoryContentException(self._source, e)

        return {KEY_TEMPLATE.format(section, option): config.get(section,
                                                                 option)
                for section in config.sections()
                for option in config.options(section)}


class ChainOfRepositories(DictRepository):
    """Repositories queried one by one till a value is found.

    :type repos: list of BaseRepository.
    :param repos: Repositories in priority order.

    :raise RepositoryDataTypeException:
    """

    def __init__(self, repos=()):
        super(ChainOfRepositories, self).__init__()
        _require_type(repos, list, tuple)

        self._repos = []
        for repo in repos:
            self.register(repo)

    def register(self, repo):
        """Register new repository in chain, after the existing ones.

        :type repo: BaseRepository
        :param repo: Repository.

        :raise RepositoryDataTypeException:
        """

        _require_type(repo, BaseRepository)
        self._repos.append(repo)

    def find_one(self, key):
        for repo in self._repos:
            value = repo.find_one(key)
            if value is not None:
                return value

        return None

    def find_all(self):
        """Values of all repositories; earlier repositories win.

        :rtype: dict
        """

        data = {}
        for repo in reversed(self._repos):
            data.update(repo.find_all())

        return data
