#coding=utf-8
from __future__ import division, unicode_literals

import os
import unittest

from gpc import *


class ImmutableTests(unittest.TestCase):
    def testArraysAreFrozenOnAssignment(self):
        grid = TimeGrid(1.0, 4)
        try:
            grid.nodes[0] = 5.0
            assert False, "Node array of a TimeGrid should be read-only"
        except ValueError:
            pass

    def testValueTypesCannotBeModified(self):
        f = ExponentialSum.exponential(1.0, 2.0)
        try:
            f.rates = None
            assert False, "ExponentialSum should be immutable"
        except AttributeError:
            pass


class DimensionTests(unittest.TestCase):
    def testPrimesAreAccepted(self):
        for d in (2, 3, 5, 7, 97):
            assert check_dimension(d) == d, "%d should be accepted" % d

    def testCompositesAreRejected(self):
        for d in (1, 4, 6, 9, 15):
            try:
                check_dimension(d)
                assert False, "%d should be rejected" % d
            except DimensionUnsupportedError:
                pass

    def testNonIntegersAreRejected(self):
        for d in (2.5, "3", True, None):
            try:
                check_dimension(d)
                assert False, "%r should be rejected" % (d,)
            except DimensionUnsupportedError:
                pass

    def testLargePrimesAreRejected(self):
        try:
            check_dimension(101)
            assert False, "101 is above the supported limit"
        except DimensionUnsupportedError as e:
            assert "limit" in str(e)


class ThreadTests(unittest.TestCase):
    def setUp(self):
        self.saved = os.environ.get("GPC_THREADS")

    def tearDown(self):
        if self.saved is None:
            os.environ.pop("GPC_THREADS", None)
        else:
            os.environ["GPC_THREADS"] = self.saved

    def testDefaultIsOneThread(self):
        os.environ.pop("GPC_THREADS", None)
        assert thread_count() == 1

    def testThreadedMapKeepsOrder(self):
        os.environ["GPC_THREADS"] = "3"
        assert map_alpha(lambda x: x + 1, range(10)) == list(range(1, 11))

    def testBadThreadCount(self):
        for raw in ("zero", "0", "-2"):
            os.environ["GPC_THREADS"] = raw
            try:
                thread_count()
                assert False, "GPC_THREADS=%s should be rejected" % raw
            except ConfigurationError:
                pass
