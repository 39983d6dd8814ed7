import json

import pytest

from .common import FakeFtagModule, ModuleExitJson, ModuleFailJson, fixture
from library import ftag_solve


@pytest.mark.usefixtures("mock_module_helper")
def test_module_fail_when_required_args_missing():
    with pytest.raises(ModuleFailJson) as ex:
        FakeFtagModule.set_module_args([])
        ftag_solve.main()
    assert ex.value.args[0]["rc"] == 2


@pytest.mark.usefixtures("mock_module_helper")
@pytest.mark.parametrize(
    "args,exp",
    [
        pytest.param([fixture("sigma_a.json")], 1.0, id="exact"),
        pytest.param(
            ["--method", "bruteforce", fixture("five_robots.json")],
            4.0,
            id="bruteforce",
        ),
        pytest.param(
            [fixture("sigma_a_one_starter.json"), "--method", "greedy-upper-bound"],
            2.0,
            id="greedy_upper_bound",
        ),
    ],
)
def test_solve(args, exp):
    FakeFtagModule.set_module_args(args)
    with pytest.raises(ModuleExitJson) as ex:
        ftag_solve.main()
    result = ex.value.args[0]
    assert result["makespan"] == pytest.approx(exp)
    assert result["msg"] == ["makespan %.9f" % exp]
    assert result["changed"] is False


@pytest.mark.usefixtures("mock_module_helper")
def test_solve_writes_solution(tmp_path):
    path = str(tmp_path / "opt.json")
    FakeFtagModule.set_module_args(["--solution", path, fixture("sigma_a.json")])
    with pytest.raises(ModuleExitJson) as ex:
        ftag_solve.main()
    assert ex.value.args[0]["changed"] is True
    assert ex.value.args[0]["solution"] == path
    with open(path) as stream:
        data = json.load(stream)
    assert data["makespan"] == 1.0
    assert data["wake_times"]["3"] == 1.0


@pytest.mark.usefixtures("mock_module_helper")
def test_solve_cap_from_flag():
    FakeFtagModule.set_module_args(["--solver-cap", "3", fixture("five_robots.json")])
    with pytest.raises(ModuleFailJson) as ex:
        ftag_solve.main()
    assert ex.value.args[0]["rc"] == 3


@pytest.mark.usefixtures("mock_module_helper")
def test_solve_cap_from_environment(monkeypatch):
    monkeypatch.setenv("FTAG_SOLVER_CAP", "3")
    FakeFtagModule.set_module_args([fixture("five_robots.json")])
    with pytest.raises(ModuleFailJson) as ex:
        ftag_solve.main()
    assert ex.value.args[0]["rc"] == 3


@pytest.mark.usefixtures("mock_module_helper")
def test_solve_flag_beats_environment(monkeypatch):
    monkeypatch.setenv("FTAG_SOLVER_CAP", "3")
    FakeFtagModule.set_module_args(["--solver-cap", "12", fixture("five_robots.json")])
    with pytest.raises(ModuleExitJson) as ex:
        ftag_solve.main()
    assert ex.value.args[0]["makespan"] == pytest.approx(4.0)


@pytest.mark.usefixtures("mock_module_helper")
@pytest.mark.parametrize(
    "content,rc",
    [
        pytest.param("{broken", 2, id="parse_error"),
        pytest.param('{"metric": {"vertices": ["a"]}}', 2, id="schema_error"),
        pytest.param(
            json.dumps(
                {
                    "metric": {"vertices": ["a"], "edges": []},
                    "robots": [{"id": 0, "point": {"vertex": "a"}}],
                }
            ),
            1,
            id="no_active_robot",
        ),
    ],
)
def test_solve_bad_input(tmp_path, content, rc):
    path = tmp_path / "bad.json"
    path.write_text(content)
    FakeFtagModule.set_module_args([str(path)])
    with pytest.raises(ModuleFailJson) as ex:
        ftag_solve.main()
    assert ex.value.args[0]["rc"] == rc


@pytest.mark.usefixtures("mock_module_helper")
def test_solve_missing_file():
    FakeFtagModule.set_module_args([fixture("nope.json")])
    with pytest.raises(ModuleFailJson) as ex:
        ftag_solve.main()
    assert ex.value.args[0]["rc"] == 2
