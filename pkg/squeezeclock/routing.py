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

LC_ERR_NOT_CALLABLE = 'Route target {!r} is not callable'
LC_ERR_ARGUMENTS = 'Route arguments must map argv indexes to words, got {!r}'
LC_ERR_NO_ROUTE = 'Unknown command: {}'


class RoutingException(SqueezeClockException):
    """Base class for Routing exceptions"""
    pass


class RouteDefinitionException(RoutingException):
    """Raised for a route that could never be dispatched."""
    pass


class CLIRoute(object):
    """Callable bound to fixed words of the command line.

    :type invoke: callable
    :param invoke: Called with the arguments that follow the program name.

    :type arguments: dict
    :param arguments: argv index mapped to the word expected there.

    :raise RouteDefinitionException:
    """

    def __init__(self, invoke, arguments):
        if not callable(invoke):
            raise RouteDefinitionException(LC_ERR_NOT_CALLABLE.format(invoke))
        if not isinstance(arguments, dict) or not all(
                isinstance(index, int) and not isinstance(index, bool)
                and isinstance(word, str)
                for index, word in arguments.items()):
            raise RouteDefinitionException(LC_ERR_ARGUMENTS.format(arguments))

        self.invoke = invoke
        self.arguments = dict(arguments)

    @property
    def specificity(self):
        """Bound indexes, highest first; greater lists win a dispatch.

        :rtype: list of int
        """

        return sorted(self.arguments, reverse=True)

    def matches(self, args):
        """True when every bound word sits at its index in ``args``.

        :type args: list
        :param args: Command line split into words.

        :rtype: bool
        """

        return all(index < len(args) and args[index] == word
                   for index, word in self.arguments.items())


class CLIRouter(object):
    """Dispatches a command line to the most specific matching route.

    :type routes: iterable of CLIRoute
    :param routes: Routes; other objects are ignored.
    """

    def __init__(self, routes=()):
        self._routes = []
        for route in routes:
            self.add(route)

    @property
    def routes(self):
        return list(self._routes)

    def add(self, route):
        if isinstance(route, CLIRoute):
            self._routes.append(route)

    def match(self, args):
        """Matching routes binding the highest argv positions.

        :type args: list
        :param args: Command line split into words.

        :rtype: list of CLIRoute
        """

        matched = [route for route in self._routes if route.matches(args)]
        if not matched:
            return []

        best = max(route.specificity for route in matched)
        return [route for route in matched if route.specificity == best]

    def dispatch(self, args):
        """Invoke the best route with the words after the program name.

        :raise RoutingException: No route matches.
        """

        routes = self.match(args)
        if not routes:
            raise RoutingException(LC_ERR_NO_ROUTE.format(' '.join(args[1:])))
        return routes[0].invoke(args[1:])
