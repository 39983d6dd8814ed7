# -*- coding: utf-8 -*-

# Copyright: (c) 2026, ftag contributors
# MIT License (see LICENSE)

"""Offline optimum OPT: minimum makespan schedules respecting release times.

Schedules use the sequence model: every awake robot visits an ordered list of
frozen robots, travelling directly between homes and waiting at a target until
it is released. A robot woken at ``w`` starts from its own home at ``w``.
"""

import heapq
import logging
from dataclasses import dataclass

from module_utils.errors import InconsistentSolution, TooLarge
from module_utils.instance import validate
from module_utils.metric import EPS, distance

logger = logging.getLogger(__name__)

DEFAULT_SOLVER_CAP = 12
BRUTEFORCE_CAP = 7


@dataclass(frozen=True)
class OfflineSolution(object):
    """Per-robot waker sequences, wake times and the resulting makespan."""

    waker_seq: dict
    wake_time: dict
    makespan: float

    def to_dict(self):
        return {
            "makespan": self.makespan,
            "wake_times": {str(k): v for k, v in sorted(self.wake_time.items())},
            "waker_seq": {
                str(k): list(v) for k, v in sorted(self.waker_seq.items())
            },
        }


class _Problem(object):
    """Index-based view of an instance with a home-to-home distance table."""

    def __init__(self, inst):
        self.robots = inst.robots
        self.ids = [r.id for r in inst.robots]
        self.release = [r.release for r in inst.robots]
        self.active = [i for i, r in enumerate(inst.robots) if r.active]
        self.frozen = [i for i, r in enumerate(inst.robots) if not r.active]
        homes = [r.home for r in inst.robots]
        n = len(homes)
        self.dist = [[0.0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                d = distance(inst.metric, homes[i], homes[j])
                self.dist[i][j] = self.dist[j][i] = d
        # robots sharing a home and a release are interchangeable targets
        self.target_class = [(homes[i], self.release[i]) for i in range(n)]

    def solution(self, events):
        """Builds a solution from chronological ``(waker, target, wake)``
        index triples."""
        waker_seq = {rid: [] for rid in self.ids}
        wake_time = {self.ids[i]: 0.0 for i in self.active}
        makespan = 0.0
        for waker, target, wake in events:
            waker_seq[self.ids[waker]].append(self.ids[target])
            wake_time[self.ids[target]] = wake
            makespan = max(makespan, wake)
        return OfflineSolution(
            {k: tuple(v) for k, v in waker_seq.items()}, wake_time, makespan
        )


def _check_cap(problem, cap):
    if len(problem.frozen) > cap:
        raise TooLarge(
            "%d frozen robots exceed the solver cap of %d"
            % (len(problem.frozen), cap)
        )


def _trivial(problem):
    return problem.solution([])


def greedy_upper_bound(inst):
    """Feasible schedule: the earliest-free awake robot repeatedly heads to
    the nearest unassigned frozen robot (ties by lower id).

    :param inst: Validated instance
    :type inst: Instance
    :return: A feasible, usually suboptimal, solution
    :rtype: OfflineSolution
    """
    problem = _Problem(inst)
    # heap of (free time, robot index, current home index)
    agents = [(0.0, i, i) for i in problem.active]
    heapq.heapify(agents)
    unassigned = list(problem.frozen)
    events = []
    while unassigned and agents:
        free, agent, here = heapq.heappop(agents)
        target = min(
            unassigned, key=lambda f: (problem.dist[here][f], problem.ids[f])
        )
        unassigned.remove(target)
        wake = max(free + problem.dist[here][target], problem.release[target])
        events.append((agent, target, wake))
        heapq.heappush(agents, (wake, agent, target))
        heapq.heappush(agents, (wake, target, target))
    events.sort(key=lambda e: e[2])
    return problem.solution(events)


class _BranchAndBound(object):
    """Depth-first branch-and-bound over chronologically ordered wake events.

    Every schedule can be listed in nondecreasing wake order, so a branch only
    appends events no earlier than the last one. Awake robots sharing a
    position and a free time, and frozen robots sharing a home and a release,
    are branched on once.
    """

    def __init__(self, problem, incumbent):
        self.p = problem
        n = len(problem.ids)
        self.pos = list(range(n))
        self.free = [0.0] * n
        self.awake = [False] * n
        for i in problem.active:
            self.awake[i] = True
        self.unwoken = list(problem.frozen)
        self.events = []
        self.best = incumbent.makespan
        self.best_events = None
        self.nodes = 0

    def bound(self, last):
        p = self.p
        agents = [a for a in range(len(self.awake)) if self.awake[a]]
        earliest = {}
        for f in self.unwoken:
            earliest[f] = min(self.free[a] + p.dist[self.pos[a]][f] for a in agents)
        lb = last
        for f in self.unwoken:
            reach = earliest[f]
            for g in self.unwoken:
                if g != f:
                    via = max(earliest[g], p.release[g]) + p.dist[g][f]
                    if via < reach:
                        reach = via
            lb = max(lb, reach, p.release[f])
        return lb

    def candidates(self, last):
        p = self.p
        found = []
        seen_agents = set()
        for a in range(len(self.awake)):
            if not self.awake[a]:
                continue
            key = (p.target_class[self.pos[a]][0], self.free[a])
            if key in seen_agents:
                continue
            seen_agents.add(key)
            seen_targets = set()
            for f in self.unwoken:
                if p.target_class[f] in seen_targets:
                    continue
                seen_targets.add(p.target_class[f])
                wake = max(self.free[a] + p.dist[self.pos[a]][f], p.release[f])
                if wake < last - EPS or wake >= self.best - EPS:
                    continue
                found.append((wake, p.ids[f], p.ids[a], a, f))
        found.sort()
        return found

    def search(self, last):
        self.nodes += 1
        if not self.unwoken:
            if last < self.best - EPS or self.best_events is None:
                self.best = last
                self.best_events = list(self.events)
                logger.debug(
                    "incumbent %.9f after %d nodes", last, self.nodes
                )
            return
        if self.bound(last) >= self.best - EPS:
            return
        for wake, _, _, a, f in self.candidates(last):
            if wake >= self.best - EPS:
                break
            saved = (self.pos[a], self.free[a])
            self.pos[a], self.free[a] = f, wake
            self.awake[f], self.free[f] = True, wake
            self.unwoken.remove(f)
            self.events.append((a, f, wake))

            self.search(wake)

            self.events.pop()
            self.unwoken.append(f)
            self.unwoken.sort()
            self.awake[f], self.free[f] = False, 0.0
            self.pos[a], self.free[a] = saved


def opt_exact(inst, cap=DEFAULT_SOLVER_CAP):
    """Minimum makespan schedule by branch-and-bound.

    :param inst: Instance to solve
    :type inst: Instance
    :param cap: Largest number of frozen robots accepted
    :type cap: int
    :return: An optimal solution
    :rtype: OfflineSolution
    :raises TooLarge: if the instance has more than ``cap`` frozen robots
    :raises InvalidInstance: if the instance fails validation
    """
    validate(inst)
    problem = _Problem(inst)
    _check_cap(problem, cap)
    if not problem.frozen:
        return _trivial(problem)

    incumbent = greedy_upper_bound(inst)
    search = _BranchAndBound(problem, incumbent)
    search.search(0.0)
    logger.debug(
        "opt_exact: %d frozen, %d nodes, makespan %.9f",
        len(problem.frozen),
        search.nodes,
        search.best,
    )
    if search.best_events is None:
        # nothing beat the greedy incumbent
        return incumbent
    return problem.solution(search.best_events)


def opt_bruteforce(inst):
    """Exhaustive oracle over every forest of ordered waker sequences.

    Awake robots are processed from a work list; each one picks its complete
    ordered sequence among the robots nobody has claimed yet, and the robots
    it wakes join the work list. Every assignment is produced exactly once.

    :raises TooLarge: above :data:`BRUTEFORCE_CAP` frozen robots
    """
    validate(inst)
    problem = _Problem(inst)
    _check_cap(problem, BRUTEFORCE_CAP)
    if not problem.frozen:
        return _trivial(problem)

    best = [float("inf"), None]
    events = []

    def finish(queue, remaining, makespan):
        if not queue:
            if not remaining and makespan < best[0]:
                best[0], best[1] = makespan, list(events)
            return
        agent, free = queue[0]
        extend(agent, agent, free, queue[1:], remaining, makespan, [])

    def extend(agent, here, time, queue, remaining, makespan, woken):
        finish(queue + woken, remaining, makespan)
        for f in list(remaining):
            wake = max(time + problem.dist[here][f], problem.release[f])
            remaining.remove(f)
            events.append((agent, f, wake))
            extend(
                agent,
                f,
                wake,
                queue,
                remaining,
                max(makespan, wake),
                woken + [(f, wake)],
            )
            events.pop()
            remaining.add(f)

    finish([(a, 0.0) for a in problem.active], set(problem.frozen), 0.0)
    ordered = sorted(best[1], key=lambda e: e[2])
    return problem.solution(ordered)


def evaluate(sol, inst):
    """Recomputes every wake time from the waker sequences alone.

    :return: The recomputed makespan
    :rtype: float
    :raises InconsistentSolution: on unknown robots, robots woken twice,
        frozen robots never woken (cycles or orphans), reported wake times
        before release, or a wake time or makespan disagreeing with the
        recomputation
    """
    by_id = {r.id: r for r in inst.robots}
    waker_of = {}
    for waker, seq in sol.waker_seq.items():
        if waker not in by_id:
            raise InconsistentSolution("unknown waker %s" % waker)
        for child in seq:
            if child not in by_id:
                raise InconsistentSolution("unknown robot %s" % child)
            if by_id[child].active:
                raise InconsistentSolution(
                    "robot %s is active from the start" % child
                )
            if child in waker_of:
                raise InconsistentSolution("robot %s woken twice" % child)
            waker_of[child] = waker

    wake = {r.id: 0.0 for r in inst.robots if r.active}
    queue = [r.id for r in inst.robots if r.active]
    while queue:
        waker = queue.pop(0)
        here, time = by_id[waker].home, wake[waker]
        for child in sol.waker_seq.get(waker, ()):
            target = by_id[child]
            time = max(
                time + distance(inst.metric, here, target.home), target.release
            )
            here = target.home
            wake[child] = time
            queue.append(child)

    for r in inst.robots:
        if r.id not in wake:
            raise InconsistentSolution(
                "robot %s is never woken (orphan or cycle)" % r.id
            )
        reported = sol.wake_time.get(r.id)
        if reported is None:
            continue
        if reported < r.release - EPS:
            raise InconsistentSolution(
                "robot %s woken at %r before its release %r"
                % (r.id, reported, r.release)
            )
        if abs(reported - wake[r.id]) > EPS:
            raise InconsistentSolution(
                "robot %s reported awake at %r, schedule gives %r"
                % (r.id, reported, wake[r.id])
            )
    makespan = max(wake.values(), default=0.0)
    if abs(sol.makespan - makespan) > EPS:
        raise InconsistentSolution(
            "reported makespan %r, schedule gives %r" % (sol.makespan, makespan)
        )
    return makespan
