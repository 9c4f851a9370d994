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

import abc
import six

from squeezeclock.domain.exceptions import SqueezeClockException


class RepositoryException(SqueezeClockException):
    """Base class for Repository exceptions."""

    pass


@six.add_metaclass(abc.ABCMeta)
class BaseRepository:
    """Base class for configuration Repositories."""

    @abc.abstractmethod
    def find_one(self, key):
        """Find one value in storage.

        :type key: str
        :param key: ``section_option`` key.

        :rtype: str
        :return: Raw value or None.
        """

        raise NotImplementedError

    @abc.abstractmethod
    def find_all(self):
        """All values in the repository.

        :rtype: dict
        :return: ``section_option`` keys mapped to raw values.
        """

        raise NotImplementedError
