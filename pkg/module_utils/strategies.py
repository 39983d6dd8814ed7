# -*- coding: utf-8 -*-

# Copyright: (c) 2026, ftag contributors
# MIT License (see LICENSE)

"""Online strategies: the patience algorithm and a greedy baseline."""

import logging
import math
from dataclasses import dataclass

from module_utils.engine import GoTo, Plan, Strategy, WaitUntil
from module_utils.errors import (
    ConfigError,
    FtagError,
    OptBackendFailure,
    UnknownStrategy,
)
from module_utils.metric import EPS, distance
from module_utils.solver import DEFAULT_SOLVER_CAP, greedy_upper_bound, opt_exact

logger = logging.getLogger(__name__)

EXACT = "exact"
GREEDY_UPPER_BOUND = "greedy-upper-bound"
OPT_BACKENDS = (EXACT, GREEDY_UPPER_BOUND)


@dataclass(frozen=True)
class PatienceConfig(object):
    wait_factor: float = math.sqrt(2)
    opt_backend: str = EXACT
    solver_cap: int = DEFAULT_SOLVER_CAP

    def __post_init__(self):
        if not self.wait_factor >= 1.0:
            raise ConfigError(
                "wait_factor must be >= 1, got %r" % (self.wait_factor,)
            )
        if self.opt_backend not in OPT_BACKENDS:
            raise ConfigError(
                "opt_backend must be one of %s, got %r"
                % (", ".join(OPT_BACKENDS), self.opt_backend)
            )

    @property
    def guaranteed(self):
        """The competitive guarantee only holds with exact OPT values."""
        return self.opt_backend == EXACT


@dataclass(frozen=True)
class ReplaySchedule(object):
    """An offline solution replayed from the homes, shifted by ``offset``."""

    solution: object
    offset: float

    def start_time(self, robot_id):
        return self.offset + self.solution.wake_time[robot_id]


@dataclass(frozen=True)
class Overrun(object):
    """A robot that could not be home by the replay offset."""

    time: float
    robot: int
    arrival: float
    offset: float


class PatienceStrategy(Strategy):
    """Return home, wait until ``wait_factor * OPT(j)``, replay an optimal
    schedule for the released robots, return home.

    Every release overwrites the schedule. A robot woken for any reason
    receives its own replay legs, which start with going home.
    """

    name = "patience"

    def __init__(self, config=None):
        self.config = config or PatienceConfig()
        self.schedule = None
        self.overruns = []
        self.replans = 0
        self._cache = {}
        if not self.config.guaranteed:
            logger.warning(
                "%s backend gives upper bounds on OPT; the competitive "
                "guarantee does not hold",
                self.config.opt_backend,
            )

    def describe(self):
        return {
            "strategy": self.name,
            "wait_factor": self.config.wait_factor,
            "opt_backend": self.config.opt_backend,
            "guaranteed": self.config.guaranteed,
        }

    def _solve(self, truncated):
        key = frozenset(r.id for r in truncated.robots)
        if key in self._cache:
            return self._cache[key]
        try:
            if self.config.opt_backend == EXACT:
                solution = opt_exact(truncated, cap=self.config.solver_cap)
            else:
                solution = greedy_upper_bound(truncated)
        except FtagError as err:
            failure = OptBackendFailure(
                "%s backend failed: %s" % (self.config.opt_backend, err)
            )
            failure.rc = err.rc
            raise failure
        self._cache[key] = solution
        return solution

    def legs(self, state, robot_id):
        """Replay legs of one robot under the current schedule."""
        solution = self.schedule.solution
        legs = [
            GoTo(state.home(robot_id)),
            WaitUntil(self.schedule.start_time(robot_id)),
        ]
        for target in solution.waker_seq.get(robot_id, ()):
            legs.append(GoTo(state.home(target)))
            legs.append(WaitUntil(self.schedule.start_time(target)))
        legs.append(GoTo(state.home(robot_id)))
        return legs

    def on_release(self, state, robot_id):
        solution = self._solve(state.released_instance())
        offset = self.config.wait_factor * solution.makespan
        self.schedule = ReplaySchedule(solution, offset)
        self.replans += 1
        logger.debug(
            "t=%.9f release of %s: OPT=%.9f, replay offset %.9f",
            state.clock,
            robot_id,
            solution.makespan,
            offset,
        )

        plan = {}
        for active in state.active_ids():
            arrival = state.clock + distance(
                state.metric, state.position(active), state.home(active)
            )
            if arrival > offset + EPS:
                logger.warning(
                    "robot %s reaches home at %.9f, after the replay offset %.9f",
                    active,
                    arrival,
                    offset,
                )
                self.overruns.append(
                    Overrun(state.clock, active, arrival, offset)
                )
            plan[active] = self.legs(state, active)
        return Plan(plan)

    def on_wake(self, state, robot_id):
        if self.schedule is None:
            return Plan({robot_id: [GoTo(state.home(robot_id))]})
        return Plan({robot_id: self.legs(state, robot_id)})


class GreedyStrategy(Strategy):
    """Every idle active robot heads straight for the nearest released frozen
    robot nobody else is heading to.

    Pairs are matched globally by (distance, frozen id, robot id); robots left
    without a target stop where they are.
    """

    name = "greedy"

    def __init__(self):
        self.assignment = {}

    def _dispatch(self, state):
        frozen = state.released_frozen_ids()
        self.assignment = {
            robot: target
            for robot, target in self.assignment.items()
            if target in frozen
        }
        taken = set(self.assignment.values())
        idle = [r for r in state.active_ids() if r not in self.assignment]
        open_targets = [f for f in frozen if f not in taken]

        pairs = sorted(
            (distance(state.metric, state.position(r), state.home(f)), f, r)
            for r in idle
            for f in open_targets
        )
        legs = {}
        for _, target, robot in pairs:
            if robot in legs or target in taken:
                continue
            self.assignment[robot] = target
            taken.add(target)
            legs[robot] = [GoTo(state.home(target))]
        for robot in idle:
            if robot not in legs and not state.is_idle(robot):
                legs[robot] = []
        return Plan(legs)

    def on_release(self, state, robot_id):
        return self._dispatch(state)

    def on_wake(self, state, robot_id):
        return self._dispatch(state)


STRATEGIES = {
    PatienceStrategy.name: PatienceStrategy,
    GreedyStrategy.name: GreedyStrategy,
}


def make_strategy(name, options=None):
    """Builds a fresh strategy instance by name.

    :param name: ``patience`` or ``greedy``
    :type name: str
    :param options: Strategy options, e.g. ``{"wait_factor": 1.5}``
    :type options: dict
    :raises UnknownStrategy: if ``name`` is not registered
    :raises ConfigError: if an option is unknown or invalid
    """
    options = dict(options or {})
    if name not in STRATEGIES:
        raise UnknownStrategy(
            "unknown strategy %r, expected one of %s"
            % (name, ", ".join(sorted(STRATEGIES)))
        )
    if name == PatienceStrategy.name:
        try:
            return PatienceStrategy(PatienceConfig(**options))
        except TypeError as err:
            raise ConfigError("invalid patience options: %s" % err)
    if options:
        raise ConfigError(
            "strategy %r takes no options, got %s" % (name, sorted(options))
        )
    return GreedyStrategy()


def strategy_factory(name, options=None):
    """Zero-argument callable producing fresh strategies, one per run."""
    make_strategy(name, options)
    return lambda: make_strategy(name, options)
