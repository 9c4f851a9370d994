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

import unittest

from squeezeclock.routing import (
    CLIRoute, CLIRouter, RouteDefinitionException, RoutingException)

from mock import Mock


class TestRoute(unittest.TestCase):

    def setUp(self):
        self._mock = Mock()

    def test_arguments_validation(self):
        for i in [1, 'str', None, False, ['test'], ('test',), {'test'}]:
            with self.assertRaises(RouteDefinitionException):
                CLIRoute(self._mock.help, i)

    def test_invoke_validation(self):
        with self.assertRaises(RouteDefinitionException):
            CLIRoute(None, {0: 'test'})

    def test_arguments_key_validation(self):
        for key in [None, '0', True]:
            with self.assertRaises(RouteDefinitionException):
                CLIRoute(self._mock.help, {key: 'test'})

    def test_arguments_value_validation(self):
        with self.assertRaises(RouteDefinitionException):
            CLIRoute(self._mock.help, {0: None})

    def test_is_routing_exception(self):
        with self.assertRaises(RoutingException):
            CLIRoute(self._mock.help, {0: 1})

    def test_matches(self):
        route = CLIRoute(self._mock.help, {0: 'test', 2: 'route'})

        self.assertTrue(route.matches(['test', 'sweep', 'route', '--out']))
        self.assertFalse(route.matches(['test', 'sweep', 'other']))
        self.assertFalse(route.matches(['test']))

    def test_specificity(self):
        route = CLIRoute(self._mock.help, {0: 'test', 2: 'route'})

        self.assertEqual([2, 0], route.specificity)
        self.assertEqual([], CLIRoute(self._mock.help, {}).specificity)


class TestRouter(unittest.TestCase):

    def setUp(self):
        self._mock = Mock()
        self._router = CLIRouter()

    def test_empty_router(self):
        self.assertListEqual([], self._router.match([]))

    def test_ignores_other_objects(self):
        self._router.add('route')

        self.assertListEqual([], self._router.routes)

    def test_match(self):
        self._router.add(CLIRoute(self._mock.help, {0: 'test', 2: 'route'}))
        for route in self._router.match(['test', 'sweep', 'route']):
            route.invoke()
        self._mock.help.assert_called()

    def test_short_command_line(self):
        self._router.add(CLIRoute(self._mock.help, {0: 'test', 2: 'route'}))

        self.assertListEqual([], self._router.match(['test']))

    def test_priority_match(self):
        self._router.add(CLIRoute(self._mock.help, {0: 'test', 1: 'sweep'}))
        self._router.add(CLIRoute(self._mock.help2, {1: 'sweep', 2: 'route'}))
        self._router.add(CLIRoute(self._mock.help3, {0: 'test', 2: 'route'}))

        for route in self._router.match(['test', 'sweep', 'route']):
            route.invoke()

        self._mock.help2.assert_called()
        self._mock.help.assert_not_called()
        self._mock.help3.assert_not_called()

    def test_more_bound_words_win_on_ties(self):
        self._router.add(CLIRoute(self._mock.help, {2: 'route'}))
        self._router.add(CLIRoute(self._mock.help2, {0: 'test', 2: 'route'}))

        self.assertEqual([self._mock.help2],
                         [r.invoke for r in self._router.match(
                             ['test', 'sweep', 'route'])])

    def test_multiple_match(self):
        self._router.add(CLIRoute(self._mock.help, {0: 'test', 2: 'route'}))
        self._router.add(CLIRoute(self._mock.help2, {0: 'test', 2: 'route'}))

        for route in self._router.match(['test', 'sweep', 'route']):
            route.invoke()

        self._mock.help.assert_called()
        self._mock.help2.assert_called()

    def test_route_without_arguments(self):
        self._router.add(CLIRoute(self._mock.help, {}))

        self.assertEqual(1, len(self._router.match(['test'])))


class TestDispatch(unittest.TestCase):

    def setUp(self):
        self._mock = Mock()
        self._router = CLIRouter([
            CLIRoute(self._mock.help, {0: 'prog'}),
            CLIRoute(self._mock.run, {1: 'run'}),
        ])

    def test_specific_route_wins(self):
        self._router.dispatch(['prog', 'run', '--config', 'a.ini'])

        self._mock.run.assert_called_once_with(['run', '--config', 'a.ini'])
        self._mock.help.assert_not_called()

    def test_fallback_route(self):
        self._router.dispatch(['prog'])

        self._mock.help.assert_called_once_with([])

    def test_no_route(self):
        with self.assertRaises(RoutingException):
            self._router.dispatch(['other', 'plot'])
