# -*- coding: utf-8 -*-

# Copyright: (c) 2026, ftag contributors
# MIT License (see LICENSE)

"""Event-driven continuous-time simulation of online freeze-tag.

Motion is piecewise linear along geodesics, so contacts are computed exactly
per leg with :func:`module_utils.metric.crossing_time` instead of stepping a
clock. Events sharing a timestamp are handled in a fixed order: releases,
then wakes, then arrivals, each by increasing robot id.
"""

import bisect
import csv
import logging
from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from module_utils.errors import (
    HorizonExceeded,
    InvalidPoint,
    NonpositiveOpt,
    StrategyError,
    TimeOutOfRange,
)
from module_utils.instance import Instance, validate
from module_utils.metric import (
    EPS,
    PathPlan,
    crossing_time,
    distance,
    position_along,
    shortest_path,
)

logger = logging.getLogger(__name__)

UNRELEASED = "frozen-unreleased"
RELEASED = "frozen-released"
ACTIVE = "active"

RELEASE = "release"
WAKE = "wake"
ARRIVAL = "arrival"
REPLAN = "replan"


@dataclass(frozen=True)
class GoTo(object):
    point: object


@dataclass(frozen=True)
class WaitUntil(object):
    time: float


@dataclass(frozen=True)
class Plan(object):
    """New leg lists keyed by robot id.

    Robots absent from ``legs`` keep whatever they were doing; an empty list
    stops a robot where it stands.
    """

    legs: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SimOptions(object):
    max_time: float = 100.0
    tol: float = EPS
    stop_at: float = None


@dataclass(frozen=True)
class TraceEvent(object):
    time: float
    kind: str
    robot: int
    point: object
    by: int = None


class Strategy(ABC):
    """Online strategy driven by engine callbacks.

    Callbacks return a :class:`Plan` or None. A plan may only mention robots
    that are active when the callback fires.
    """

    name = None

    def on_start(self, state):
        return None

    @abstractmethod
    def on_release(self, state, robot_id):
        pass

    def on_wake(self, state, robot_id):
        return None

    def describe(self):
        """Options worth echoing in command output."""
        return {"strategy": self.name}


def _still(point):
    return PathPlan((point,), (), 0.0)


class _Robot(object):
    def __init__(self, spec):
        self.spec = spec
        self.status = ACTIVE if spec.active else UNRELEASED
        self.pos = spec.home
        self.legs = deque()
        # (departure time, PathPlan) while moving
        self.motion = None
        self.wait = None
        self.starts = [0.0]
        self.plans = [_still(spec.home)]

    @property
    def idle(self):
        return self.motion is None and self.wait is None

    def record(self, time, plan):
        if self.starts[-1] == time:
            self.plans[-1] = plan
        else:
            self.starts.append(time)
            self.plans.append(plan)


class SimState(object):
    """Read-only view of a running simulation handed to strategies."""

    def __init__(self, sim):
        self._sim = sim

    @property
    def clock(self):
        return self._sim.clock

    @property
    def metric(self):
        return self._sim.inst.metric

    def home(self, robot_id):
        return self._sim.robots[robot_id].spec.home

    def status(self, robot_id):
        return self._sim.robots[robot_id].status

    def position(self, robot_id):
        return self._sim.position(self._sim.robots[robot_id])

    def is_idle(self, robot_id):
        return self._sim.robots[robot_id].idle

    def active_ids(self):
        return [r.spec.id for r in self._sim.ordered if r.status == ACTIVE]

    def released_frozen_ids(self):
        return [r.spec.id for r in self._sim.ordered if r.status == RELEASED]

    def released_instance(self):
        """The robots revealed so far, as an instance.

        Membership follows the engine's own release status, so a robot the
        engine released within EPS of its release time is included.
        """
        status = self._sim.robots
        revealed = tuple(
            r for r in self._sim.inst.robots if status[r.id].status != UNRELEASED
        )
        return Instance(self._sim.inst.metric, revealed)


@dataclass
class Trace(object):
    """Outcome of one run: events in time order, the makespan (last wake, 0
    when nothing had to be woken) and the motion history of every robot."""

    instance: object
    events: list
    makespan: float
    end_time: float
    history: dict

    @property
    def wake_times(self):
        return {e.robot: e.time for e in self.events if e.kind == WAKE}

    def events_of(self, kind):
        return [e for e in self.events if e.kind == kind]


class _Simulation(object):
    def __init__(self, inst, strategy, opts):
        self.inst = inst
        self.strategy = strategy
        self.opts = opts
        self.clock = 0.0
        self.ordered = [
            _Robot(spec) for spec in sorted(inst.robots, key=lambda r: r.id)
        ]
        self.robots = {r.spec.id: r for r in self.ordered}
        self.pending = sorted(
            (r for r in self.ordered if r.status == UNRELEASED),
            key=lambda r: (r.spec.release, r.spec.id),
        )
        self.events = []
        self.state = SimState(self)

    def position(self, robot):
        if robot.motion is None:
            return robot.pos
        depart, plan = robot.motion
        return position_along(plan, min(self.clock - depart, plan.total_length))

    def emit(self, kind, robot, point, by=None):
        event = TraceEvent(self.clock, kind, robot.spec.id, point, by)
        logger.debug(
            "t=%.9f %s robot %s at %s",
            self.clock,
            kind,
            robot.spec.id,
            point.label(),
        )
        self.events.append(event)

    # plan handling

    def check_plan(self, plan):
        if not isinstance(plan, Plan):
            raise StrategyError(
                "%s returned %r instead of a Plan" % (self.strategy.name, plan)
            )
        for robot_id, legs in plan.legs.items():
            robot = self.robots.get(robot_id)
            if robot is None or robot.status != ACTIVE:
                raise StrategyError(
                    "plan moves robot %s, which is not active" % (robot_id,)
                )
            last_wait = None
            for leg in legs:
                if isinstance(leg, GoTo):
                    try:
                        self.inst.metric.check_point(leg.point)
                    except InvalidPoint as err:
                        raise StrategyError("robot %s: %s" % (robot_id, err))
                elif isinstance(leg, WaitUntil):
                    if last_wait is not None and leg.time < last_wait - EPS:
                        raise StrategyError(
                            "robot %s: wait_until times decrease (%r after %r)"
                            % (robot_id, leg.time, last_wait)
                        )
                    last_wait = leg.time
                else:
                    raise StrategyError("robot %s: unknown leg %r" % (robot_id, leg))

    def apply(self, plan):
        if plan is None:
            return
        self.check_plan(plan)
        for robot_id in sorted(plan.legs):
            robot = self.robots[robot_id]
            if robot.motion is not None:
                robot.pos = self.position(robot)
                robot.motion = None
                robot.record(self.clock, _still(robot.pos))
            robot.wait = None
            robot.legs = deque(plan.legs[robot_id])
            self.emit(REPLAN, robot, robot.pos)
            self.advance(robot)

    def advance(self, robot):
        while robot.legs:
            leg = robot.legs[0]
            if isinstance(leg, GoTo):
                path = shortest_path(self.inst.metric, robot.pos, leg.point)
                if path.total_length <= EPS:
                    robot.legs.popleft()
                    continue
                robot.motion = (self.clock, path)
                robot.record(self.clock, path)
                return
            if leg.time <= self.clock + EPS:
                robot.legs.popleft()
                continue
            robot.wait = leg.time
            return

    # event handling

    def sweep(self):
        """Wakes every released robot an active robot is touching, repeating
        until nothing changes so co-located robots wake together."""
        metric, tol = self.inst.metric, self.opts.tol
        touching = [(r, self.position(r)) for r in self.ordered if r.status == ACTIVE]
        woken = []
        changed = True
        while changed:
            changed = False
            for frozen in self.ordered:
                if frozen.status != RELEASED:
                    continue
                for waker, where in touching:
                    if distance(metric, where, frozen.spec.home) <= tol:
                        frozen.status = ACTIVE
                        frozen.record(self.clock, _still(frozen.pos))
                        self.emit(WAKE, frozen, frozen.spec.home, waker.spec.id)
                        touching.append((frozen, frozen.pos))
                        woken.append(frozen)
                        changed = True
                        break
        return woken

    def wake_callbacks(self, woken):
        while woken:
            for robot in woken:
                self.apply(self.strategy.on_wake(self.state, robot.spec.id))
            woken = self.sweep()

    def step(self):
        released = []
        while self.pending and self.pending[0].spec.release <= self.clock + EPS:
            robot = self.pending.pop(0)
            robot.status = RELEASED
            self.emit(RELEASE, robot, robot.spec.home)
            released.append(robot)
        woken = self.sweep()
        for robot in released:
            self.apply(self.strategy.on_release(self.state, robot.spec.id))
        self.wake_callbacks(woken)
        self.wake_callbacks(self.sweep())

        for robot in self.ordered:
            if robot.motion is not None:
                depart, path = robot.motion
                if depart + path.total_length <= self.clock + EPS:
                    robot.pos = path.last
                    robot.motion = None
                    robot.record(self.clock, _still(robot.pos))
                    robot.legs.popleft()
                    self.emit(ARRIVAL, robot, robot.pos)
                    self.advance(robot)
            elif robot.wait is not None and robot.wait <= self.clock + EPS:
                robot.wait = None
                robot.legs.popleft()
                self.advance(robot)

    def next_time(self):
        candidates = []
        if self.pending:
            candidates.append(self.pending[0].spec.release)
        targets = [r.spec.home for r in self.ordered if r.status == RELEASED]
        for robot in self.ordered:
            if robot.motion is not None:
                depart, path = robot.motion
                candidates.append(depart + path.total_length)
                for home in targets:
                    hit = crossing_time(
                        path, depart, home, self.opts.tol, after=self.clock
                    )
                    if hit is not None:
                        candidates.append(hit)
            elif robot.wait is not None:
                candidates.append(robot.wait)
        later = [t for t in candidates if t > self.clock]
        return min(later) if later else None

    def pending_ids(self):
        return [r.spec.id for r in self.pending]

    def unwoken(self):
        return [r.spec.id for r in self.ordered if r.status == RELEASED]

    def finished(self):
        return (
            not self.pending
            and not self.unwoken()
            and all(r.idle for r in self.ordered)
        )

    def move_clock(self, time):
        self.clock = time

    def run(self):
        self.apply(self.strategy.on_start(self.state))
        stop_at = self.opts.stop_at
        while True:
            self.step()
            if self.finished():
                if stop_at is not None and stop_at > self.clock:
                    self.move_clock(stop_at)
                break
            upcoming = self.next_time()
            if stop_at is not None and (upcoming is None or upcoming > stop_at + EPS):
                self.freeze_motion(stop_at)
                break
            if upcoming is None:
                raise HorizonExceeded(
                    "no further events at t=%.9f but robots %s are still frozen"
                    % (self.clock, self.unwoken())
                )
            if upcoming > self.opts.max_time + EPS:
                if self.unwoken() or self.pending:
                    raise HorizonExceeded(
                        "time horizon %r reached with robots %s still frozen"
                        % (self.opts.max_time, self.unwoken() or self.pending_ids())
                    )
                break
            self.move_clock(upcoming)
        return self.trace()

    def freeze_motion(self, time):
        """Ends the run at ``time``; robots still moving keep their recorded
        paths so positions stay queryable up to the end."""
        if time > self.clock:
            self.move_clock(time)

    def trace(self):
        wakes = [e.time for e in self.events if e.kind == WAKE]
        history = {r.spec.id: (tuple(r.starts), tuple(r.plans)) for r in self.ordered}
        return Trace(
            instance=self.inst,
            events=list(self.events),
            makespan=max(wakes, default=0.0),
            end_time=self.clock,
            history=history,
        )


def simulate(inst, strategy, opts=None):
    """Runs ``strategy`` on ``inst`` until every released robot is awake and
    no robot has work left.

    :param inst: Instance to play; releases are revealed at their times
    :type inst: Instance
    :param strategy: Online strategy, used for this run only
    :type strategy: Strategy
    :param opts: Horizon, contact tolerance and optional early stop
    :type opts: SimOptions
    :return: Run trace
    :rtype: Trace
    :raises HorizonExceeded: if a released robot is never woken
    :raises StrategyError: if the strategy returns an invalid plan
    """
    opts = opts or SimOptions()
    validate(inst)
    trace = _Simulation(inst, strategy, opts).run()
    logger.debug(
        "%s: makespan %.9f, %d events", strategy.name, trace.makespan, len(trace.events)
    )
    return trace


def positions_at(trace, t):
    """Exact position of every robot at time ``t``.

    :rtype: dict
    :raises TimeOutOfRange: if ``t`` is outside ``[0, trace.end_time]``
    """
    if t < -EPS or t > trace.end_time + EPS:
        raise TimeOutOfRange("time %r outside [0, %r]" % (t, trace.end_time))
    t = min(max(t, 0.0), trace.end_time)
    positions = {}
    for robot_id, (starts, plans) in trace.history.items():
        idx = bisect.bisect_right(starts, t) - 1
        path = plans[idx]
        positions[robot_id] = position_along(
            path, min(max(t - starts[idx], 0.0), path.total_length)
        )
    return positions


def ratio(trace, opt):
    """Competitive ratio of a single run."""
    if not opt > 0:
        raise NonpositiveOpt("opt must be positive, got %r" % (opt,))
    return trace.makespan / opt


def sample_times(trace, dt):
    """Sampling grid ``0, dt, 2dt, ...`` up to the end of the run."""
    if not dt > 0:
        raise TimeOutOfRange("sampling step must be positive, got %r" % (dt,))
    return np.append(np.arange(0.0, trace.end_time, dt), trace.end_time)


def write_trace_csv(trace, stream):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["time", "event", "robot", "location"])
    for event in trace.events:
        writer.writerow(
            ["%.9f" % event.time, event.kind, event.robot, event.point.label()]
        )


def write_positions_csv(trace, stream, dt):
    """Sampled positions, one row per robot and sample time."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["time", "robot", "location"])
    for t in sample_times(trace, dt):
        for robot_id, point in sorted(positions_at(trace, float(t)).items()):
            writer.writerow(["%.9f" % t, robot_id, point.label()])
