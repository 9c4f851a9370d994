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

"""CSV result files with the resolved configuration in a ``#`` header."""

import csv
import io
import logging
import os

import numpy as np
from configparser import ConfigParser

from squeezeclock.domain.exceptions import SqueezeClockException
from squeezeclock.infrastructure.repositories import INIRepository

LOG = logging.getLogger(__name__)

HEADER_PREFIX = '# '
COMMENT = '#'
FLOAT_FORMAT = '%.17g'

LC_ERR_WRITE = 'Cannot write "{}": {}'
LC_ERR_READ = 'Cannot read "{}": {}'


class WriterException(SqueezeClockException):
    """Raised when a result file cannot be written or read back."""

    pass


def format_value(value):
    """Text of one cell; floats keep 17 significant digits."""

    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return FLOAT_FORMAT % value
    return str(value)


def render_header(sections):
    """INI text of ``sections`` with every line prefixed by ``# ``.

    :type sections: OrderedDict
    :param sections: Section name mapped to an option/value mapping.

    :rtype: str
    """

    config = ConfigParser(interpolation=None)
    config.read_dict(
        {section: {option: format_value(value)
                   for option, value in options.items()}
         for section, options in sections.items()})
    buffer = io.StringIO()
    config.write(buffer)
    lines = buffer.getvalue().rstrip('\n').split('\n')
    return ''.join((HEADER_PREFIX + line).rstrip() + '\n' for line in lines)


class CSVResultWriter(object):
    """Writes ResultTables into one directory.

    :type output_dir: str
    :param output_dir: Created when absent.
    """

    def __init__(self, output_dir):
        self._output_dir = output_dir
        try:
            os.makedirs(output_dir, exist_ok=True)
        except OSError as e:
            raise WriterException(LC_ERR_WRITE.format(output_dir, e))

    @property
    def output_dir(self):
        return self._output_dir

    def write(self, table, sections):
        """Write ``table`` under the given header sections.

        :type table: ResultTable
        :param table: Rows to write.

        :type sections: OrderedDict
        :param sections: Resolved configuration and run metadata.

        :rtype: str
        :return: Path of the written file.
        """

        path = os.path.join(self._output_dir, table.name)
        try:
            with open(path, 'w', encoding='utf-8', newline='') as fh:
                fh.write(render_header(sections))
                writer = csv.writer(fh, lineterminator='\n')
                writer.writerow(table.columns)
                for row in table.rows:
                    writer.writerow([format_value(value) for value in row])
        except (IOError, OSError) as e:
            raise WriterException(LC_ERR_WRITE.format(path, e))

        LOG.info('Wrote %d rows to %s', len(table.rows), path)
        return path


def _split(path):
    try:
        with open(path, 'r', encoding='utf-8') as fh:
            lines = fh.read().splitlines()
    except (IOError, OSError) as e:
        raise WriterException(LC_ERR_READ.format(path, e))

    header = []
    for index, line in enumerate(lines):
        if not line.startswith(COMMENT):
            return header, lines[index:]
        header.append(line[len(HEADER_PREFIX):] if line.startswith(
            HEADER_PREFIX) else line[len(COMMENT):])
    return header, []


def read_header(path):
    """Configuration recorded in the header of a result file.

    :rtype: INIRepository
    """

    header, _ = _split(path)
    return INIRepository('\n'.join(header) + '\n', path)


def read_rows(path):
    """Data rows of a result file as dicts of strings.

    :rtype: list of dict
    """

    _, body = _split(path)
    return list(csv.DictReader(body))
