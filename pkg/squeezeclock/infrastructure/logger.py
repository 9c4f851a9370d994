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
import logging
import sys

import six

from squeezeclock.domain.logger import (
    AbstractLogger, LoggerException, NOTSET, ROOT_LOGGER)

LC_ERR_UNKNOWN_LEVEL = 'Unknown log level "{}"'

"""Logger receiving numpy and scipy warnings once they are captured."""
WARNINGS_LOGGER = 'py.warnings'


class LogLevelTransformer:
    """Maps ``--log-level`` values to logging levels.

    Names are case insensitive; syslog-style levels (>= 100) are divided
    by ten.
    """

    @staticmethod
    def transform(level):
        """
        :type level: int or str
        :param level: Log level, e.g. ``20``, ``'info'`` or ``200``.

        :raise LoggerException: Unknown level name.

        :rtype: int
        """

        if isinstance(level, six.string_types):
            value = logging.getLevelName(level.strip().upper())
            if not isinstance(value, int):
                raise LoggerException(LC_ERR_UNKNOWN_LEVEL.format(level))
            return value

        level = int(level)
        return level // 10 if level >= 100 else level


class StreamLogging(object):
    """Named standard logger whose level follows its handlers.

    :type name: str
    :param name: Name of the logger
    """

    def __init__(self, name=ROOT_LOGGER):
        self._logger = logging.getLogger(name)
        self._level = NOTSET

    @property
    def name(self):
        return self._logger.name

    @property
    def level(self):
        return self._level

    @level.setter
    def level(self, level):
        self._level = level
        self._logger.setLevel(level)
        for handler in self._logger.handlers:
            handler.setLevel(level)

    @property
    def handlers(self):
        return self._logger.handlers

    def log(self, level, msg, *args, **kwargs):
        if self._logger.isEnabledFor(level):
            kwargs.setdefault('extra', {})
            self._logger.log(int(level), msg, *args, **kwargs)

    def add_handler(self, handler):
        """Attach ``handler`` unless one of the same type is attached.

        Records stop propagating to the root logger, so a repeated
        ``main()`` in one process does not print twice.

        :type handler: logging.Handler
        :param handler: Handler to be added.
        """

        if any(type(existing) is type(handler)
               for existing in self._logger.handlers):
            return

        self._logger.propagate = False
        self._logger.addHandler(handler)


@six.add_metaclass(abc.ABCMeta)
class AbstractLoggingBuilder:
    """Steps of the logging set-up, run by LoggerDirector."""

    @abc.abstractmethod
    def set_log_level(self):
        raise NotImplementedError

    @abc.abstractmethod
    def add_handlers(self):
        raise NotImplementedError

    @property
    @abc.abstractmethod
    def logging(self):
        """
        :rtype: StreamLogging
        """

        raise NotImplementedError


class LoggerAdapter(AbstractLogger):
    """AbstractLogger on top of a StreamLogging.

    :type core: StreamLogging
    :param core: Logging to be decorated.
    """

    def __init__(self, core):
        self._logging = core

    def log(self, level, msg, *args):
        return self._logging.log(level, msg, *args)


class LoggerDirector:
    """
    :type builder: AbstractLoggingBuilder
    :param builder: Logger builder.
    """

    def __init__(self, builder):
        self._builder = builder

    def build(self):
        self._builder.set_log_level()
        self._builder.add_handlers()

    @property
    def logger(self):
        """
        :rtype: AbstractLogger
        """

        return LoggerAdapter(self._builder.logging)


class SysLogFormatter(logging.Formatter):
    """Formats records as ``[LEVEL] time name - message``."""

    def __init__(self):
        log_format = '[%(levelname)s] %(asctime)s %(name)s - %(message)s'
        super(SysLogFormatter, self).__init__(fmt=log_format)


class StreamLogBuilder(AbstractLoggingBuilder):
    """Package logger writing to a stream, stderr by default.

    :type name: str
    :param name: Logger name.

    :type level: int or str
    :param level: Log level.

    :type capture_warnings: bool
    :param capture_warnings: Route :mod:`warnings` (numpy overflow, scipy
        convergence) through the same handler.
    """

    def __init__(self, name=ROOT_LOGGER, level=logging.INFO, stream=None,
                 capture_warnings=False):
        self._logging = StreamLogging(name)
        self._level = LogLevelTransformer.transform(level)
        self._stream = stream
        self._capture_warnings = capture_warnings

    def _handler(self):
        handler = logging.StreamHandler(self._stream or sys.stderr)
        handler.setLevel(self._level)
        handler.setFormatter(SysLogFormatter())
        return handler

    def set_log_level(self):
        self._logging.level = self._level

    def add_handlers(self):
        self._logging.add_handler(self._handler())
        if self._capture_warnings:
            logging.captureWarnings(True)
            StreamLogging(WARNINGS_LOGGER).add_handler(self._handler())

    @property
    def logging(self):
        return self._logging


def build_logger(level=logging.INFO, name=ROOT_LOGGER, stream=None):
    """Configure the package logger, capturing warnings, and return its
    adapter.

    :type level: int or str
    :param level: Log level.

    :rtype: AbstractLogger
    """

    director = LoggerDirector(StreamLogBuilder(name, level, stream, True))
    director.build()
    return director.logger
