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

import signal
import sys
import traceback

from squeezeclock import cli
from squeezeclock.args_parser import ArgumentsBuilder, CLIArgsParser
from squeezeclock.domain.exceptions import (
    ConfigurationException, SqueezeClockException)
from squeezeclock.domain.logger import LoggerException, WARNING
from squeezeclock.infrastructure.logger import (
    build_logger, LogLevelTransformer)
from squeezeclock.routing import CLIRouter, RoutingException

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIGURATION = 2

LOG_ARGUMENTS = ArgumentsBuilder().add('--log-level', default='warning') \
    .build()


def main(argv=None):
    driver = create_clidriver()
    rc = driver.main(argv)
    return rc


def create_clidriver():
    """ CLIDriver Builder.

    :rtype: CLIDriver
    :return: CLIDriver instance.
    """

    return CLIDriver()


class CLIDriver(object):

    @staticmethod
    def log_level(argv):
        """``--log-level`` from the command line, warning when invalid."""

        value = CLIArgsParser(LOG_ARGUMENTS).parse_args(argv[1:])['log_level']
        try:
            return LogLevelTransformer.transform(value)
        except LoggerException:
            return WARNING

    def main(self, argv=None):
        """Manage main CLI execution flow.

        :rtype: int
        :return: 0 on success, 2 for rejected configurations, 1 for other
            failures and 130 on interrupt.
        """

        argv = list(sys.argv if argv is None else argv)
        logger = build_logger(self.log_level(argv))

        try:
            self.execute(argv)
        except KeyboardInterrupt:
            # Shell standard for signals that terminate
            # the process is to return 128 + signum, in this case
            # SIGINT=2, so we'll have an RC of 130.
            return 128 + signal.SIGINT
        except (ConfigurationException, RoutingException) as e:
            logger.err('%s', e)
            return EXIT_CONFIGURATION
        except SqueezeClockException as e:
            logger.err('%s', e)
            return EXIT_FAILURE
        except Exception as e:
            logger.err('Unexpected %s: %s', type(e).__name__, e)
            logger.debug('%s', traceback.format_exc())
            return EXIT_FAILURE

        return EXIT_OK

    @classmethod
    def execute(cls, argv):
        router = CLIRouter(cli.routes(argv[0] if argv else cli.PROG))
        return router.dispatch(argv or [cli.PROG])
