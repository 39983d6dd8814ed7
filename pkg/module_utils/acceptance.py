# -*- coding: utf-8 -*-

# Copyright: (c) 2026, ftag contributors
# MIT License (see LICENSE)

"""Acceptance criteria as executable checks.

Each check returns a :class:`Row` with what it expected, what it observed and
whether it passed. Criteria 2, 3 and 9 share one seeded random suite, solved
and simulated once per :class:`Verifier`.
"""

import fnmatch
import logging
import math
import os
import time
from dataclasses import dataclass

from module_utils.adversary import (
    SPOKE_LENGTH,
    AdversaryOptions,
    build_metric_k,
    r_bound,
    r_bound_recurrence,
    run_adversary,
    tree_size,
)
from module_utils.engine import (
    WAKE,
    SimOptions,
    positions_at,
    ratio,
    sample_times,
    simulate,
)
from module_utils.instance import load_metric, random_suite, read_instance
from module_utils.metric import Point, distance, is_isomorphic
from module_utils.solver import DEFAULT_SOLVER_CAP, opt_bruteforce, opt_exact
from module_utils.strategies import strategy_factory

logger = logging.getLogger(__name__)

FIXTURES = os.path.join(os.path.dirname(os.path.dirname(__file__)), "fixtures")
SQRT2 = math.sqrt(2)
UPPER = 1 + SQRT2


def fixture_path(name):
    return os.path.join(FIXTURES, name)


@dataclass(frozen=True)
class SuiteConfig(object):
    seed: int = 2026
    suite_size: int = 200
    oracle_size: int = 100
    sample_dt: float = 0.01
    adversary_dt: float = 1e-3
    slack: float = 0.01
    solver_cap: int = DEFAULT_SOLVER_CAP
    enforce_budgets: bool = True


@dataclass(frozen=True)
class Row(object):
    criterion: str
    expected: str
    observed: str
    tolerance: str
    passed: bool
    seconds: float = 0.0
    budget: float = None

    def to_dict(self):
        return {
            "criterion": self.criterion,
            "expected": self.expected,
            "observed": self.observed,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "seconds": round(self.seconds, 3),
        }


def _fmt(value):
    return "%.9f" % value


class Verifier(object):
    """Runs the acceptance criteria, optionally filtered by name."""

    def __init__(self, config=None):
        self.config = config or SuiteConfig()
        self._suite = None
        self.criteria = [
            ("1-opt-feasibility", self.opt_feasibility, 1.0),
            ("2-upper-bound", self.upper_bound, 120.0),
            ("3-nearby", self.nearby, 120.0),
            ("4-lower-bound-k1", self.lower_bound_k1, 10.0),
            ("5-lower-bound-k2", self.lower_bound_k2, 120.0),
            ("6-construction", self.construction, 10.0),
            ("7-r-identity", self.r_identity, 1.0),
            ("8-oracle", self.oracle, 60.0),
            ("9-engine", self.engine_properties, 120.0),
        ]

    def names(self):
        return [name for name, _, _ in self.criteria]

    def run(self, pattern=None):
        rows = []
        for name, check, budget in self.criteria:
            if pattern and pattern not in name and not fnmatch.fnmatch(name, pattern):
                continue
            rows.extend(self._timed(name, check, budget))
        return rows

    def _timed(self, name, check, budget):
        started = time.perf_counter()
        produced = check()
        elapsed = time.perf_counter() - started
        over = self.config.enforce_budgets and elapsed > budget
        if over:
            logger.warning("%s took %.1fs, budget %.1fs", name, elapsed, budget)
        rows = []
        for row in produced:
            rows.append(
                Row(
                    "%s %s" % (name, row.criterion) if row.criterion else name,
                    row.expected,
                    row.observed,
                    row.tolerance,
                    row.passed and not over,
                    elapsed,
                    budget,
                )
            )
        return rows

    # shared suite

    def suite(self):
        """``(instance, opt, trace)`` for the seeded random suite under the
        patience strategy with the exact backend."""
        if self._suite is None:
            runs = []
            factory = strategy_factory(
                "patience", {"solver_cap": self.config.solver_cap}
            )
            for inst in random_suite(self.config.seed, self.config.suite_size):
                opt = opt_exact(inst, cap=self.config.solver_cap).makespan
                runs.append((inst, opt, simulate(inst, factory())))
            self._suite = runs
        return self._suite

    # criteria

    def opt_feasibility(self):
        rows = []
        for fixture, expected in (
            ("sigma_a.json", 1.0),
            ("sigma_a_one_starter.json", 2.0),
        ):
            got = opt_exact(read_instance(fixture_path(fixture))).makespan
            rows.append(
                Row(
                    fixture,
                    _fmt(expected),
                    _fmt(got),
                    "1e-9",
                    abs(got - expected) <= 1e-9,
                )
            )
        return rows

    def upper_bound(self):
        worst, worst_index = 0.0, None
        for index, (inst, opt, trace) in enumerate(self.suite()):
            if opt <= 0:
                value = 1.0 if trace.makespan <= 1e-9 else float("inf")
            else:
                value = ratio(trace, opt)
            if value > worst:
                worst, worst_index = value, index
        logger.info(
            "worst patience ratio %.9f on suite instance %s", worst, worst_index
        )
        return [
            Row(
                "",
                "<= %s" % _fmt(UPPER),
                _fmt(worst),
                "1e-6",
                worst <= UPPER + 1e-6,
            )
        ]

    def nearby(self):
        worst = 0.0
        for inst, _, trace in self.suite():
            homes = {r.id: r.home for r in inst.robots}
            for t in sample_times(trace, self.config.sample_dt):
                t = float(t)
                for rid, point in positions_at(trace, t).items():
                    excess = distance(inst.metric, point, homes[rid]) - t / UPPER
                    worst = max(worst, excess)
        return [
            Row(
                "",
                "distance to home <= T/(1+sqrt2)",
                "max excess %.3e" % worst,
                "1e-6",
                worst <= 1e-6,
            )
        ]

    def _adversary_rows(self, k, threshold, exact_patience=None):
        opts = AdversaryOptions(dt=self.config.adversary_dt)
        rows = []
        for name in ("greedy", "patience"):
            options = {}
            if name == "patience":
                options = {"solver_cap": self.config.solver_cap}
            report = run_adversary(k, strategy_factory(name, options), opts)
            rows.append(
                Row(
                    "%s (%s)" % (name, report.case),
                    ">= %s" % _fmt(threshold),
                    _fmt(report.achieved_ratio),
                    "%g" % self.config.slack,
                    report.achieved_ratio >= threshold - 1e-12,
                )
            )
            if name == "patience" and exact_patience is not None:
                rows.append(
                    Row(
                        "patience exact",
                        _fmt(exact_patience),
                        _fmt(report.achieved_ratio),
                        "1e-6",
                        abs(report.achieved_ratio - exact_patience) <= 1e-6,
                    )
                )
        return rows

    def lower_bound_k1(self):
        return self._adversary_rows(1, r_bound(1) - self.config.slack, UPPER)

    def lower_bound_k2(self):
        return self._adversary_rows(2, r_bound(2) - self.config.slack)

    def construction(self):
        sizes = tuple(tree_size(k) for k in range(4))
        rows = [
            Row(
                "N_k", "(1, 2, 5, 26)", str(sizes), "exact", sizes == (1, 2, 5, 26)
            )
        ]
        for k in (1, 2):
            lower = build_metric_k(k)
            origin = Point.at(lower.origin)
            tree_err = max(
                abs(distance(lower.metric, origin, Point.at(v)) - 1.0)
                for copy in lower.copies
                for v in copy
            )
            leaf_err = max(
                abs(lower.tree.root_path_length(leaf) - 1.0)
                for leaf in lower.tree.leaves()
            )
            spoke_err = max(
                abs(distance(lower.metric, origin, Point.at(s)) - SPOKE_LENGTH)
                for s in lower.spokes
            )
            worst = max(tree_err, leaf_err, spoke_err)
            rows.append(
                Row(
                    "M_%d distances" % k,
                    "tree 1, root-to-leaf 1, spoke 1+sqrt2",
                    "max error %.3e" % worst,
                    "1e-9",
                    worst <= 1e-9,
                )
            )
        for k, fixture in ((1, "fig1_metric.json"), (2, "m2_metric.json")):
            with open(fixture_path(fixture)) as stream:
                shipped = load_metric(stream.read())
            same = is_isomorphic(build_metric_k(k).metric, shipped)
            rows.append(
                Row(
                    "M_%d ~ %s" % (k, fixture),
                    "isomorphic",
                    "isomorphic" if same else "different",
                    "1e-9",
                    same,
                )
            )
        return rows

    def r_identity(self):
        drift = max(abs(r_bound(k) - r_bound_recurrence(k)) for k in range(11))
        rows = [
            Row(
                "recurrence",
                "drift <= 1e-12",
                "%.3e" % drift,
                "1e-12",
                drift <= 1e-12,
            ),
            Row(
                "R_0",
                _fmt(2.0),
                _fmt(r_bound(0)),
                "1e-12",
                abs(r_bound(0) - 2) <= 1e-12,
            ),
            Row(
                "R_1",
                _fmt(3 * SQRT2 - 2),
                _fmt(r_bound(1)),
                "1e-12",
                abs(r_bound(1) - (3 * SQRT2 - 2)) <= 1e-12,
            ),
            Row(
                "R_2",
                _fmt(UPPER - (SQRT2 - 1) ** 3),
                _fmt(r_bound(2)),
                "1e-12",
                abs(r_bound(2) - (UPPER - (SQRT2 - 1) ** 3)) <= 1e-12,
            ),
            Row(
                "1+sqrt2 - R_10",
                "< 1e-3",
                "%.3e" % (UPPER - r_bound(10)),
                "exact",
                UPPER - r_bound(10) < 1e-3,
            ),
        ]
        return rows

    def oracle(self):
        worst = 0.0
        for inst in random_suite(self.config.seed + 1, self.config.oracle_size):
            exact = opt_exact(inst, cap=self.config.solver_cap).makespan
            brute = opt_bruteforce(inst).makespan
            worst = max(worst, abs(exact - brute))
        return [
            Row(
                "",
                "opt_exact == opt_bruteforce",
                "max gap %.3e" % worst,
                "1e-9",
                worst <= 1e-9,
            )
        ]

    def engine_properties(self):
        speed, causality, determinism = 0.0, True, True
        dt = self.config.sample_dt
        factory = strategy_factory(
            "patience", {"solver_cap": self.config.solver_cap}
        )
        for inst, _, trace in self.suite():
            previous = None
            for t in sample_times(trace, dt):
                t = float(t)
                now = positions_at(trace, t)
                if previous is not None:
                    elapsed = t - previous[0]
                    for rid, point in now.items():
                        moved = distance(inst.metric, previous[1][rid], point)
                        speed = max(speed, moved - elapsed)
                previous = (t, now)

            wakes = {e.robot: e.time for e in trace.events if e.kind == WAKE}
            for robot in inst.frozen_robots:
                woke = wakes.get(robot.id)
                if woke is None or woke < robot.release - 1e-9:
                    causality = False
                    continue
                before = positions_at(trace, max(woke - 1e-9, 0.0))[robot.id]
                if distance(inst.metric, before, robot.home) > 1e-9:
                    causality = False

            again = simulate(inst, factory(), SimOptions())
            if again.events != trace.events:
                determinism = False
        return [
            Row(
                "speed",
                "displacement <= elapsed",
                "max excess %.3e" % speed,
                "1e-9",
                speed <= 1e-9,
            ),
            Row(
                "causality",
                "wake >= release, frozen still",
                str(causality),
                "1e-9",
                causality,
            ),
            Row(
                "determinism",
                "identical reruns",
                str(determinism),
                "exact",
                determinism,
            ),
        ]


def all_passed(rows):
    return all(row.passed for row in rows)
