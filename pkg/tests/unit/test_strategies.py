import math

import pytest

from module_utils.engine import WAKE, positions_at, ratio, sample_times, simulate
from module_utils.errors import ConfigError, OptBackendFailure, UnknownStrategy
from module_utils.instance import Instance, RobotSpec, random_suite
from module_utils.metric import Point, build_metric, distance
from module_utils.solver import opt_exact
from module_utils.strategies import (
    GREEDY_UPPER_BOUND,
    GreedyStrategy,
    PatienceConfig,
    PatienceStrategy,
    make_strategy,
    strategy_factory,
)

UPPER = 1 + math.sqrt(2)


def test_greedy_on_two_starters(sigma_a):
    trace = simulate(sigma_a, GreedyStrategy())
    assert trace.makespan == pytest.approx(2.0)
    assert {e.robot: e.by for e in trace.events if e.kind == WAKE} == {2: 0, 3: 1}


def test_patience_on_two_starters(sigma_a):
    strategy = PatienceStrategy()
    trace = simulate(sigma_a, strategy)
    assert trace.makespan == pytest.approx(UPPER)
    assert ratio(trace, 1.0) == pytest.approx(UPPER)
    assert strategy.replans == 2
    assert strategy.overruns == []
    assert strategy.schedule.offset == pytest.approx(math.sqrt(2))


def test_patience_wait_factor_one_is_opt_plus_replay(sigma_a):
    trace = simulate(sigma_a, PatienceStrategy(PatienceConfig(wait_factor=1.0)))
    assert trace.makespan == pytest.approx(2.0)


def test_patience_robots_return_home(sigma_a):
    trace = simulate(sigma_a, PatienceStrategy())
    final = positions_at(trace, trace.end_time)
    assert final == {r.id: r.home for r in sigma_a.robots}


def test_patience_reports_overruns():
    m = build_metric(["a", "b"], [("a", "b", 10.0)])
    inst = Instance(
        m,
        (
            RobotSpec(0, Point.at("a"), 0.0, True),
            RobotSpec(1, Point.at("b"), 0.0, False),
            RobotSpec(2, Point.at("a"), 18.0, False),
        ),
    )
    strategy = PatienceStrategy(PatienceConfig(wait_factor=1.0))
    trace = simulate(inst, strategy)
    assert len(strategy.overruns) == 1
    overrun = strategy.overruns[0]
    assert overrun.robot == 0
    assert overrun.time == pytest.approx(18.0)
    assert overrun.arrival == pytest.approx(26.0)
    assert overrun.offset == pytest.approx(20.0)
    assert set(trace.wake_times) == {1, 2}


def test_patience_backend_failure_keeps_exit_code(sigma_a):
    strategy = PatienceStrategy(PatienceConfig(solver_cap=1))
    with pytest.raises(OptBackendFailure) as ex:
        simulate(sigma_a, strategy)
    assert ex.value.rc == 3


def test_patience_greedy_backend_is_not_guaranteed(sigma_a):
    strategy = PatienceStrategy(PatienceConfig(opt_backend=GREEDY_UPPER_BOUND))
    assert strategy.describe()["guaranteed"] is False
    trace = simulate(sigma_a, strategy)
    assert trace.makespan >= UPPER - 1e-9


def test_patience_ratio_and_nearby_on_random_suite():
    for inst in random_suite(3, 8):
        opt = opt_exact(inst).makespan
        trace = simulate(inst, PatienceStrategy())
        if opt > 0:
            assert ratio(trace, opt) <= UPPER + 1e-6
        homes = {r.id: r.home for r in inst.robots}
        for t in sample_times(trace, 0.05):
            t = float(t)
            for rid, point in positions_at(trace, t).items():
                assert distance(inst.metric, point, homes[rid]) <= t / UPPER + 1e-6


@pytest.mark.parametrize(
    "name,options,exc",
    [
        pytest.param("lazy", {}, UnknownStrategy, id="unknown_name"),
        pytest.param("patience", {"wait_factor": 0.5}, ConfigError, id="small_wait"),
        pytest.param("patience", {"opt_backend": "magic"}, ConfigError, id="backend"),
        pytest.param("patience", {"colour": "red"}, ConfigError, id="unknown_key"),
        pytest.param("greedy", {"wait_factor": 2.0}, ConfigError, id="greedy_opts"),
    ],
)
def test_make_strategy_rejects(name, options, exc):
    with pytest.raises(exc):
        make_strategy(name, options)


def test_strategy_factory_returns_fresh_instances():
    factory = strategy_factory("patience", {"wait_factor": 1.5})
    first, second = factory(), factory()
    assert first is not second
    assert first.config.wait_factor == 1.5
    assert isinstance(strategy_factory("greedy")(), GreedyStrategy)


def test_strategy_factory_validates_eagerly():
    with pytest.raises(ConfigError):
        strategy_factory("patience", {"wait_factor": 0.0})


def test_patience_schedules_robot_released_within_tolerance():
    m = build_metric(["a", "b", "c"], [("a", "b", 1.0), ("a", "c", 1.0)])
    inst = Instance(
        m,
        (
            RobotSpec(0, Point.at("a"), 0.0, True),
            RobotSpec(1, Point.at("b"), 1.0, False),
            RobotSpec(2, Point.at("c"), math.sqrt(2) + 3e-10, False),
        ),
    )
    strategy = PatienceStrategy()
    trace = simulate(inst, strategy)
    # OPT grows to 3 once robot 2 is known; its replay starts at 3 * sqrt(2)
    assert strategy.schedule.offset == pytest.approx(3 * math.sqrt(2))
    assert trace.wake_times[2] == pytest.approx(3 + 3 * math.sqrt(2))
    assert trace.makespan == pytest.approx(3 + 3 * math.sqrt(2))


def test_patience_incidental_wake_mid_edge():
    m = build_metric(["a", "b"], [("a", "b", 2.0)])
    middle = m.point_on_edge(0, 1.0)
    inst = Instance(
        m,
        (
            RobotSpec(0, Point.at("a"), 0.0, True),
            RobotSpec(1, Point.at("b"), 0.0, False),
            RobotSpec(2, middle, 5.0, False),
        ),
    )
    strategy = PatienceStrategy()
    trace = simulate(inst, strategy)
    sqrt2 = math.sqrt(2)
    # robot 0 wakes robot 1 at 2 + 2 sqrt2 and is heading home when robot 2
    # is released, so it runs over robot 2 before the new replay offset
    wake = trace.events_of(WAKE)[-1]
    assert (wake.robot, wake.by) == (2, 0)
    assert wake.time == pytest.approx(3 + 2 * sqrt2)
    assert strategy.schedule.offset == pytest.approx(5 * sqrt2)
    assert wake.time < strategy.schedule.offset
    assert strategy.overruns == []
    # robot 2 holds its home until its replay slot and ends there
    for t in sample_times(trace, 0.25):
        if t >= wake.time:
            assert positions_at(trace, float(t))[2] == middle
    assert trace.makespan == pytest.approx(3 + 2 * sqrt2)


def test_greedy_dispatches_the_nearer_starter():
    m = build_metric(["a", "b", "c"], [("a", "b", 1.0), ("b", "c", 2.0)])
    inst = Instance(
        m,
        (
            RobotSpec(0, Point.at("a"), 0.0, True),
            RobotSpec(1, Point.at("c"), 0.0, True),
            RobotSpec(2, Point.at("b"), 0.0, False),
        ),
    )
    trace = simulate(inst, GreedyStrategy())
    assert trace.events_of(WAKE)[0].by == 0
    assert trace.makespan == pytest.approx(1.0)
    assert positions_at(trace, trace.end_time)[1] == Point.at("c")
