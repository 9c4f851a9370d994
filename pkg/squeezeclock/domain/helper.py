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

from squeezeclock.domain.exceptions import SqueezeClockException

LC_ERR_INVALID_PARAMETER_TYPE = (
    'Invalid parameter {} of type {}, should be {}')


def validate_property_type(exp_type):
    """Reject setter values that are not instances of ``exp_type``.

    :type exp_type: type
    :param exp_type: Expected type (or tuple of types).
    """

    def validate(fn):
        def wrapper(*args, **kwargs):
            argument = args[1]
            if not isinstance(argument, exp_type):
                name = (exp_type.__name__ if isinstance(exp_type, type)
                        else ' or '.join(t.__name__ for t in exp_type))
                raise SqueezeClockException(
                    LC_ERR_INVALID_PARAMETER_TYPE.format(
                        argument, type(argument).__name__, name))
            return fn(*args, **kwargs)

        return wrapper

    return validate


def require(condition, exception, message, *args):
    """Raise ``exception(message.format(*args))`` unless ``condition``.

    :type condition: bool
    :param condition: Checked pre-condition.

    :type exception: type
    :param exception: Exception class to raise.

    :type message: str
    :param message: Format string of the diagnostic.
    """

    if not condition:
        raise exception(message.format(*args))
