import json

import pytest

from .common import FakeFtagModule, ModuleExitJson, ModuleFailJson
from library import ftag_adversary
from module_utils.instance import read_instance


@pytest.mark.usefixtures("mock_module_helper")
def test_module_fail_when_required_args_missing():
    with pytest.raises(ModuleFailJson) as ex:
        FakeFtagModule.set_module_args(["--strategy", "greedy"])
        ftag_adversary.main()
    assert ex.value.args[0]["rc"] == 2


@pytest.mark.usefixtures("mock_module_helper")
def test_greedy_k1(tmp_path):
    report = str(tmp_path / "report.json")
    realized = str(tmp_path / "realized.json")
    FakeFtagModule.set_module_args(
        [
            "--k",
            "1",
            "--strategy",
            "greedy",
            "--dt",
            "0.01",
            "--report",
            report,
            "--instance",
            realized,
        ]
    )
    with pytest.raises(ModuleExitJson) as ex:
        ftag_adversary.main()
    result = ex.value.args[0]
    assert result["case"] == "case2"
    assert result["t_star"] == pytest.approx(2.0)
    assert result["ratio"] == pytest.approx(2.5)
    assert result["passed"] is True
    assert result["changed"] is True
    assert result["msg"][0] == "case case2"
    assert result["msg"][-1] == "PASS (slack 0.01)"

    with open(report) as stream:
        data = json.load(stream)
    assert data["case"] == "case2"
    assert data["makespan"] == pytest.approx(5.0)
    inst = read_instance(realized)
    assert len(inst.active_robots) == 2
    assert len(inst.frozen_robots) == 3


@pytest.mark.usefixtures("mock_module_helper")
def test_patience_k1():
    FakeFtagModule.set_module_args(
        ["--k", "1", "--strategy", "patience", "--dt", "0.01"]
    )
    with pytest.raises(ModuleExitJson) as ex:
        ftag_adversary.main()
    result = ex.value.args[0]
    assert result["case"] == "case1"
    assert "t_star" not in result
    assert result["certified_opt"] == 1.0
    assert result["ratio"] == pytest.approx(2.414213562, abs=1e-6)


@pytest.mark.usefixtures("mock_module_helper")
def test_slack_decides_pass():
    FakeFtagModule.set_module_args(
        ["--k", "1", "--strategy", "greedy", "--dt", "0.01", "--slack", "-1"]
    )
    with pytest.raises(ModuleExitJson) as ex:
        ftag_adversary.main()
    assert ex.value.args[0]["passed"] is False


@pytest.mark.usefixtures("mock_module_helper")
@pytest.mark.parametrize("k", ["0", "4"])
def test_k_out_of_range(k):
    FakeFtagModule.set_module_args(["--k", k, "--strategy", "greedy"])
    with pytest.raises(ModuleFailJson) as ex:
        ftag_adversary.main()
    assert ex.value.args[0]["rc"] == 1
