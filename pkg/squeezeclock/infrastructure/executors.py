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
from concurrent.futures import ProcessPoolExecutor

import six

from squeezeclock.domain.exceptions import SqueezeClockException
from squeezeclock.domain.helper import require

LOG = logging.getLogger(__name__)

LC_ERR_WORKERS = 'workers must be an integer >= 1, got {}'


class ExecutorException(SqueezeClockException):
    pass


@six.add_metaclass(abc.ABCMeta)
class BaseExecutor(object):
    """Runs independent tasks and returns results in input order."""

    @abc.abstractmethod
    def map(self, fn, iterable):
        """Apply ``fn`` to every item.

        :type fn: callable
        :param fn: Picklable task.

        :rtype: list
        :return: Results ordered like ``iterable``.
        """

        raise NotImplementedError


class SerialExecutor(BaseExecutor):

    def map(self, fn, iterable):
        return [fn(item) for item in iterable]


class ProcessExecutor(BaseExecutor):
    """Fans tasks out to worker processes.

    :type workers: int
    :param workers: Number of processes.
    """

    def __init__(self, workers):
        require(isinstance(workers, int) and workers >= 1, ExecutorException,
                LC_ERR_WORKERS, workers)
        self._workers = workers

    @property
    def workers(self):
        return self._workers

    def map(self, fn, iterable):
        items = list(iterable)
        chunksize = max(1, len(items) // (4 * self._workers))
        LOG.info('Dispatching %d tasks to %d workers', len(items),
                 self._workers)
        with ProcessPoolExecutor(max_workers=self._workers) as pool:
            return list(pool.map(fn, items, chunksize=chunksize))


def build_executor(threads):
    """
    :type threads: int
    :param threads: Worker processes; 1 runs in-process.

    :rtype: BaseExecutor
    """

    if threads == 1:
        return SerialExecutor()
    return ProcessExecutor(threads)
