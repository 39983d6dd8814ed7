# -*- coding: utf-8 -*-

# Copyright: (c) 2026, ftag contributors
# MIT License (see LICENSE)

"""Exception hierarchy shared by the ftag library and commands.

Every error carries ``rc``, the process exit code the command layer uses when
the error reaches ``fail_json``.
"""


class FtagError(Exception):
    """Base class of all ftag errors."""

    rc = 1


class ConfigError(FtagError):
    pass


# metric-core


class MetricError(FtagError):
    pass


class DisconnectedGraph(MetricError):
    pass


class NonpositiveEdgeLength(MetricError):
    pass


class UnknownVertex(MetricError):
    pass


class InvalidPoint(MetricError):
    pass


class ElapsedOutOfRange(MetricError):
    pass


# instance-model


class InvalidInstance(FtagError):
    pass


class NoActiveRobot(InvalidInstance):
    pass


class UnsortedReleases(InvalidInstance):
    pass


class InvalidHome(InvalidInstance):
    pass


class ActiveWithPositiveRelease(InvalidInstance):
    pass


class DuplicateRobotId(InvalidInstance):
    pass


class ParseError(FtagError):
    rc = 2


class SchemaError(FtagError):
    """Raised when a document parses but does not match the schema.

    :param msg: Human readable description
    :type msg: str
    :param path: Dotted location of the offending field, e.g. ``robots.0.point``
    :type path: str
    """

    rc = 2

    def __init__(self, msg, path=""):
        self.path = path
        if path:
            msg = "%s: %s" % (path, msg)
        super(SchemaError, self).__init__(msg)


# offline-solver


class TooLarge(FtagError):
    rc = 3


class InconsistentSolution(FtagError):
    pass


# sim-engine


class HorizonExceeded(FtagError):
    rc = 4


class StrategyError(FtagError):
    pass


class TimeOutOfRange(FtagError):
    pass


class NonpositiveOpt(FtagError):
    pass


# strategies


class UnknownStrategy(ConfigError):
    pass


class OptBackendFailure(FtagError):
    pass


# adversary-gen


class KTooLarge(FtagError):
    pass


class NoEmptyCopy(FtagError):
    pass


class CountMismatch(FtagError):
    def __init__(self, msg, layer):
        self.layer = layer
        super(CountMismatch, self).__init__(msg)
