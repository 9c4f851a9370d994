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

import sys

from squeezeclock.args_parser import CLIArgsParser
from squeezeclock.domain.entities import (
    COMMAND_MOMENTS, COMMAND_PSD, COMMAND_RUN, COMMAND_SWEEP, COMMAND_THEORY)
from squeezeclock.infrastructure.controllers import (
    CLI_ARGUMENTS, SimulationCLIController)
from squeezeclock.routing import CLIRoute, RoutingException

PROG = 'squeezeclock'

HELP_WORDS = ('-h', '--help', 'help')

COMMAND_HELP = (
    (COMMAND_MOMENTS, 'spin moments of the configured states'),
    (COMMAND_THEORY, 'optimal Ramsey times, widths and predicted floors'),
    (COMMAND_RUN, 'one closed-loop configuration: Allan deviation'),
    (COMMAND_SWEEP, 'floors along T, kappa or N'),
    (COMMAND_PSD, 'free-running and locked LO spectra'),
)

LC_ERR_UNKNOWN_COMMAND = 'Unknown command "{}", expected one of {}'


def normalize_routes(func):
    """Turn the readable route dicts below into CLIRoutes.

    :param func: Decorated function.

    :return: callable
    """

    def wrapper(*args, **kwargs):

        result = func(*args, **kwargs)

        return [CLIRoute(
            route['func'],
            {k: v for k, v in enumerate(route['args']) if v is not None}
        ) for route in result]

    return wrapper


COMMAND_ROUTES = [{
    'func': SimulationCLIController.moments,
    'args': [None, COMMAND_MOMENTS]
}, {
    'func': SimulationCLIController.theory,
    'args': [None, COMMAND_THEORY]
}, {
    'func': SimulationCLIController.run,
    'args': [None, COMMAND_RUN]
}, {
    'func': SimulationCLIController.sweep,
    'args': [None, COMMAND_SWEEP]
}, {
    'func': SimulationCLIController.psd,
    'args': [None, COMMAND_PSD]
}]


def parser():
    """Option parser of the commands, also rendered by the docs.

    :rtype: argparse.ArgumentParser
    """

    return CLIArgsParser(CLI_ARGUMENTS, PROG).build_parser()


def usage():
    """
    :rtype: str
    """

    options = parser().format_help()
    commands = ''.join('  {:<9}{}\n'.format(name, text)
                       for name, text in COMMAND_HELP)
    return '{} <command> [options]\n\ncommands:\n{}\n{}'.format(
        PROG, commands, options)


def show_help(args, stream=None):
    """Print usage; an unknown command is a routing error.

    :type args: list
    :param args: Command line after the program name.

    :raise RoutingException: ``args`` names an unknown command.
    """

    unknown = bool(args) and args[0] not in HELP_WORDS
    (stream or (sys.stderr if unknown else sys.stdout)).write(usage())
    if unknown:
        raise RoutingException(LC_ERR_UNKNOWN_COMMAND.format(
            args[0], [name for name, _ in COMMAND_HELP]))


@normalize_routes
def command_routes():
    return COMMAND_ROUTES


def routes(program):
    """Command routes plus the help route bound to the program name.

    :rtype: list of CLIRoute
    """

    return [CLIRoute(show_help, {0: program})] + command_routes()
