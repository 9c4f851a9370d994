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
from collections import OrderedDict

import six

from squeezeclock.__version__ import __version__
from squeezeclock.args_parser import ArgumentsBuilder, CLIArgsParser
from squeezeclock.domain.config import ConfigReader
from squeezeclock.domain.entities import (
    COMMAND_MOMENTS, COMMAND_PSD, COMMAND_RUN, COMMAND_SWEEP, COMMAND_THEORY,
    EntityException, RunManifest)
from squeezeclock.domain.exceptions import ConfigurationException
from squeezeclock.domain.repositories import RepositoryException
from squeezeclock.domain.usecases import use_case_for
from squeezeclock.infrastructure.executors import build_executor
from squeezeclock.infrastructure.repositories import (
    ChainOfRepositories, INIRepository, OverridesRepository)
from squeezeclock.infrastructure.writers import CSVResultWriter


CLI_ARGUMENTS = ArgumentsBuilder() \
    .add('--config', required=True, help='INI run configuration') \
    .add('--out', required=True, help='output directory') \
    .add('--seed', type=int, default=None,
         help='master seed, replaces [loop] seed') \
    .add('--threads', type=int, default=1,
         help='worker processes; results do not depend on it') \
    .add('--log-level', default='warning',
         help='debug, info, warning or error') \
    .build()


@six.add_metaclass(abc.ABCMeta)
class BaseController:
    """Base Controller class."""

    pass


@six.add_metaclass(abc.ABCMeta)
class BaseCLIController(BaseController):
    """Base CLIController class."""

    pass


class SimulationCLIController(BaseCLIController):
    """Runs one command: configuration in, CSV files out."""

    @classmethod
    def moments(cls, args):
        return cls.execute(COMMAND_MOMENTS, args)

    @classmethod
    def theory(cls, args):
        return cls.execute(COMMAND_THEORY, args)

    @classmethod
    def run(cls, args):
        return cls.execute(COMMAND_RUN, args)

    @classmethod
    def sweep(cls, args):
        return cls.execute(COMMAND_SWEEP, args)

    @classmethod
    def psd(cls, args):
        return cls.execute(COMMAND_PSD, args)

    @staticmethod
    def manifest(command, args):
        """
        :type args: list
        :param args: Command line after the program name.

        :rtype: RunManifest
        """

        values = CLIArgsParser(CLI_ARGUMENTS).parse_args(args)
        try:
            return RunManifest(command, values['config'], values['out'],
                               values['seed'], values['threads'])
        except EntityException as e:
            raise ConfigurationException(str(e))

    @staticmethod
    def reader(manifest):
        """Configuration file behind the command-line overrides.

        :rtype: ConfigReader
        """

        overrides = OverridesRepository().set('loop', 'seed',
                                              manifest.seed_override)
        try:
            config = INIRepository.from_file(manifest.config_path)
        except RepositoryException as e:
            raise ConfigurationException(str(e))
        return ConfigReader(ChainOfRepositories([overrides, config]))

    @staticmethod
    def header(reader, manifest, table):
        """Resolved configuration, run metadata and table notes.

        The master seed is recorded even by commands that draw nothing.

        :rtype: OrderedDict
        """

        reader.seed()
        sections = reader.resolved()
        sections['run'] = OrderedDict([
            ('command', manifest.command),
            ('version', __version__),
        ])
        if table.notes:
            sections['result'] = OrderedDict(sorted(table.notes.items()))
        return sections

    @classmethod
    def execute(cls, command, args):
        """
        :rtype: list of str
        :return: Paths of the written files.
        """

        manifest = cls.manifest(command, args)
        reader = cls.reader(manifest)
        use_case = use_case_for(command)(reader,
                                         build_executor(manifest.threads))
        try:
            tables = use_case.execute()
        except RepositoryException as e:
            raise ConfigurationException(str(e))

        writer = CSVResultWriter(manifest.output_dir)
        return [writer.write(table, cls.header(reader, manifest, table))
                for table in tables]
