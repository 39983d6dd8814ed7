import pytest

from module_utils.errors import InconsistentSolution, NoActiveRobot, TooLarge
from module_utils.instance import Instance, RobotSpec, random_suite, read_instance
from module_utils.metric import Point, build_metric
from module_utils.solver import (
    OfflineSolution,
    evaluate,
    greedy_upper_bound,
    opt_bruteforce,
    opt_exact,
)
from .common import fixture


def line(n_frozen, release=0.0):
    """One active robot at 0 and frozen robots at 1..n on a unit-spaced line"""
    names = ["x%d" % i for i in range(n_frozen + 1)]
    m = build_metric(names, [(a, b, 1.0) for a, b in zip(names, names[1:])])
    robots = [RobotSpec(0, Point.at("x0"), 0.0, True)]
    robots.extend(
        RobotSpec(i, Point.at(names[i]), release, False)
        for i in range(1, n_frozen + 1)
    )
    return Instance(m, tuple(robots))


@pytest.mark.parametrize(
    "name,exp",
    [
        pytest.param("sigma_a.json", 1.0, id="two_starters"),
        pytest.param("sigma_a_one_starter.json", 2.0, id="one_starter"),
        pytest.param("five_robots.json", 4.0, id="late_release_at_start"),
        pytest.param("empty_frozen.json", 0.0, id="nothing_to_wake"),
    ],
)
def test_opt_exact_known_values(name, exp):
    inst = read_instance(fixture(name))
    sol = opt_exact(inst)
    assert sol.makespan == pytest.approx(exp, abs=1e-9)
    assert evaluate(sol, inst) == pytest.approx(sol.makespan, abs=1e-9)


def test_opt_exact_waits_for_release():
    sol = opt_exact(line(1, release=5.0))
    assert sol.makespan == 5.0
    assert sol.wake_time[1] == 5.0
    assert sol.waker_seq[0] == (1,)


def test_opt_exact_woken_robots_help():
    # waking along the line is sequential anyway
    sol = opt_exact(line(3))
    assert sol.makespan == pytest.approx(3.0)


def test_opt_exact_cap():
    with pytest.raises(TooLarge) as ex:
        opt_exact(line(4), cap=3)
    assert ex.value.rc == 3
    assert opt_exact(line(3), cap=3).makespan == pytest.approx(3.0)


def test_opt_exact_validates():
    m = build_metric(["a"], [])
    with pytest.raises(NoActiveRobot):
        opt_exact(Instance(m, (RobotSpec(0, Point.at("a"), 0.0),)))


def test_bruteforce_cap():
    with pytest.raises(TooLarge):
        opt_bruteforce(line(8))


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_exact_matches_bruteforce(seed):
    for inst in random_suite(seed, 10):
        exact = opt_exact(inst)
        brute = opt_bruteforce(inst)
        assert exact.makespan == pytest.approx(brute.makespan, abs=1e-9)
        assert evaluate(exact, inst) == pytest.approx(exact.makespan, abs=1e-9)
        assert evaluate(brute, inst) == pytest.approx(brute.makespan, abs=1e-9)


def test_greedy_upper_bound_is_feasible_and_not_better():
    for inst in random_suite(5, 15):
        greedy = greedy_upper_bound(inst)
        assert evaluate(greedy, inst) == pytest.approx(greedy.makespan, abs=1e-9)
        assert greedy.makespan >= opt_exact(inst).makespan - 1e-9


def test_solution_to_dict(sigma_a):
    data = opt_exact(sigma_a).to_dict()
    assert data["makespan"] == 1.0
    assert data["wake_times"] == {"0": 0.0, "1": 0.0, "2": 1.0, "3": 1.0}
    assert sorted(data["waker_seq"]["0"] + data["waker_seq"]["1"]) == [2, 3]


@pytest.mark.parametrize(
    "waker_seq,wake_time,makespan",
    [
        pytest.param({0: (2, 3), 1: (2,)}, {}, 1.0, id="woken_twice"),
        pytest.param({0: (2,), 1: ()}, {}, 1.0, id="orphan"),
        pytest.param({0: (), 1: (), 2: (3,), 3: (2,)}, {}, 1.0, id="cycle"),
        pytest.param({0: (2,), 1: (3,)}, {2: 0.5}, 1.0, id="before_release"),
        pytest.param({0: (2,), 1: (3,)}, {2: 1.5}, 1.0, id="wrong_time"),
        pytest.param({0: (2, 9), 1: (3,)}, {}, 1.0, id="unknown_robot"),
        pytest.param({0: (1,), 1: (2, 3)}, {}, 1.0, id="wakes_active"),
        pytest.param({0: (2,), 1: (3,)}, {}, 7.0, id="wrong_makespan"),
    ],
)
def test_evaluate_rejects(sigma_a, waker_seq, wake_time, makespan):
    with pytest.raises(InconsistentSolution):
        evaluate(OfflineSolution(waker_seq, wake_time, makespan), sigma_a)


def test_evaluate_recomputes(sigma_a_one_starter):
    sol = OfflineSolution({0: (2,), 2: (3,)}, {2: 1.0, 3: 2.0}, 2.0)
    assert evaluate(sol, sigma_a_one_starter) == pytest.approx(2.0)
    slow = OfflineSolution({0: (3, 2)}, {}, 2.0)
    assert evaluate(slow, sigma_a_one_starter) == pytest.approx(2.0)


@pytest.mark.parametrize(
    "d,release,exp",
    [
        pytest.param(2.0, 0.0, 2.0, id="travel_bound"),
        pytest.param(2.0, 5.0, 5.0, id="release_bound"),
        pytest.param(3.0, 3.0, 3.0, id="tie"),
    ],
)
def test_single_dispatch(d, release, exp):
    m = build_metric(["a", "b"], [("a", "b", d)])
    inst = Instance(
        m,
        (
            RobotSpec(0, Point.at("a"), 0.0, True),
            RobotSpec(1, Point.at("b"), release, False),
        ),
    )
    assert opt_exact(inst).makespan == pytest.approx(exp)
    assert opt_bruteforce(inst).makespan == pytest.approx(exp)


@pytest.mark.parametrize("seed", range(5))
def test_adding_a_frozen_robot_never_lowers_opt(seed):
    for inst in random_suite(300 + seed, 6, max_frozen=5):
        if not inst.frozen_robots:
            continue
        fewer = Instance(inst.metric, inst.robots[:-1])
        assert opt_exact(fewer).makespan <= opt_exact(inst).makespan + 1e-9
