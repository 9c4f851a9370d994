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

CRITICAL = 50
ERROR = 40
WARNING = 30
INFO = 20
DEBUG = 10
NOTSET = 0

"""Name of the package logger; domain modules log to its children."""
ROOT_LOGGER = 'squeezeclock'


class LoggerException(SqueezeClockException):
    """Base class for Logger execution exceptions."""

    pass


@six.add_metaclass(abc.ABCMeta)
class AbstractLogger:
    """Leveled logger of the command-line driver.

    Subclasses implement :meth:`log`; the named levels delegate to it.
    """

    @abc.abstractmethod
    def log(self, level, msg, *args):
        """Log ``msg % args`` at integer ``level``.

        :type level: int
        :param level: Log level.

        :type msg: str
        :param msg: Logging message.
        """

        raise NotImplementedError

    def debug(self, msg, *args):
        return self.log(DEBUG, msg, *args)

    def info(self, msg, *args):
        return self.log(INFO, msg, *args)

    def warn(self, msg, *args):
        return self.log(WARNING, msg, *args)

    def err(self, msg, *args):
        return self.log(ERROR, msg, *args)
