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

import argparse


class ArgumentsBuilder(object):
    """Collects ``add_argument`` definitions shared by the parsers of the
    driver and of the commands.
    """

    def __init__(self):
        self._arguments = []

    def add(self, key, **kwargs):
        """
        :type key: str
        :param key: Option name, e.g. ``--config``.

        :param kwargs: Keyword arguments of ``ArgumentParser.add_argument``.

        :rtype: ArgumentsBuilder
        """

        self._arguments.append({'key': key, 'params': kwargs})
        return self

    def build(self):
        """
        :rtype: list of dict
        """

        return list(self._arguments)


class CLIArgsParser(object):
    """argparse front end over ArgumentsBuilder definitions.

    :type available_args: list
    :param available_args: Output of ArgumentsBuilder.build().

    :type prog: str
    :param prog: Program name shown in usage messages.
    """

    def __init__(self, available_args, prog=None):
        self.available_args = available_args
        self.prog = prog

    def build_parser(self):
        """
        :rtype: argparse.ArgumentParser
        """

        parser = argparse.ArgumentParser(prog=self.prog)
        for arg in self.get_unique_args(self.available_args):
            parser.add_argument(arg['key'], **arg['params'])
        return parser

    def parse_args(self, user_args=None):
        """Parse known options; positional words such as the command name
        are left to the router.

        :rtype: dict
        :return: Option destinations mapped to values.
        """

        return vars(self.build_parser().parse_known_args(user_args)[0])

    @staticmethod
    def get_unique_args(args):
        """First definition of every option, sorted by option name.

        :rtype: list of dict
        """

        unique = {}
        for arg in args:
            unique.setdefault(arg['key'], arg)
        return [unique[key] for key in sorted(unique)]
