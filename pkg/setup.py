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

from setuptools import setup
from squeezeclock.setup import SetupParametersDirector, SetupParametersBuilder


def do_setup():
    description = "Closed-loop atomic clock simulator with squeezed " \
                  "atomic ensembles"

    builder = SetupParametersBuilder(
        'squeezeclock',
        description
    )

    director = SetupParametersDirector()
    director.build(builder)
    args = director.parameters

    setup(**args)


if __name__ == "__main__":
    do_setup()
