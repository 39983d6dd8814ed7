import pytest
from ansible.module_utils.basic import env_fallback

from .common import ModuleExitJson, fixture
from library import ftag
from module_utils.errors import ConfigError
from module_utils.ftag import FtagModule, load_options, strategy_options


@pytest.mark.usefixtures("mock_module_helper")
def test_dispatch_to_command():
    with pytest.raises(ModuleExitJson) as ex:
        ftag.main(["solve", fixture("sigma_a.json")])
    assert ex.value.args[0]["makespan"] == 1.0


@pytest.mark.parametrize(
    "argv,code",
    [
        pytest.param([], 2, id="no_command"),
        pytest.param(["--help"], 0, id="help"),
        pytest.param(["fly"], 2, id="unknown_command"),
    ],
)
def test_dispatch_usage(argv, code, capsys):
    with pytest.raises(SystemExit) as ex:
        ftag.main(argv)
    assert ex.value.code == code
    out, err = capsys.readouterr()
    assert "usage: ftag" in out + err


SPEC = dict(
    name=dict(required=True, type="str", positional=True),
    count=dict(required=False, type="int", default=2),
    format=dict(required=False, type="str", default="text"),
)


def test_exit_json_text(capsys):
    module = FtagModule(SPEC, "ftag test", argv=["x"])
    with pytest.raises(SystemExit) as ex:
        module.exit_json(changed=False, msg=["one", "two"])
    assert ex.value.code == 0
    assert capsys.readouterr().out == "one\ntwo\n"


def test_exit_json_yaml(capsys):
    module = FtagModule(SPEC, "ftag test", argv=["x"])
    module.output_format = "yaml"
    with pytest.raises(SystemExit):
        module.exit_json(changed=False, makespan=1.5)
    assert capsys.readouterr().out == "changed: false\nmakespan: 1.5\n"


def test_fail_json(capsys):
    module = FtagModule(SPEC, "ftag test", argv=["x"])
    with pytest.raises(SystemExit) as ex:
        module.fail_json(msg="boom", rc=3, lines=["partial"])
    assert ex.value.code == 3
    out, err = capsys.readouterr()
    assert out == "partial\n"
    assert err == "ftag test: error: boom\n"


def test_parse_defaults_and_types():
    module = FtagModule(SPEC, "ftag test", argv=["x", "--count", "5"])
    assert module.params["name"] == "x"
    assert module.params["count"] == 5
    assert module.params["format"] == "text"


def test_parse_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as ex:
        FtagModule(SPEC, "ftag test", argv=["x", "--count", "many"])
    assert ex.value.code == 2


@pytest.mark.parametrize(
    "text,exp",
    [
        pytest.param(None, {}, id="none"),
        pytest.param("", {}, id="empty"),
        pytest.param('{"wait_factor": 2}', {"wait_factor": 2}, id="json"),
        pytest.param("wait_factor: 2\nopt_backend: exact", None, id="yaml"),
    ],
)
def test_load_options(text, exp):
    if exp is None:
        exp = {"wait_factor": 2, "opt_backend": "exact"}
    assert load_options(text) == exp


@pytest.mark.parametrize("text", ["[1]", "{unclosed", "3"])
def test_load_options_rejects(text):
    with pytest.raises(ConfigError):
        load_options(text)


def test_strategy_options_overlay():
    params = dict(
        strategy="patience",
        options='{"wait_factor": 2}',
        wait_factor=1.5,
        backend="greedy-upper-bound",
    )
    assert strategy_options(params, 9) == {
        "wait_factor": 1.5,
        "opt_backend": "greedy-upper-bound",
        "solver_cap": 9,
    }
    assert strategy_options(dict(strategy="greedy"), 9) == {}


CHECKED = dict(
    name=dict(required=True, type="str", positional=True),
    mode=dict(required=False, type="str", default="a", choices=["a", "b"]),
    cap=dict(required=False, type="int", fallback=(env_fallback, ["FTAG_TEST_CAP"])),
    left=dict(required=False, type="float"),
    right=dict(required=False, type="float"),
    quiet=dict(required=False, type="bool", default=False),
)


def parse(argv):
    return FtagModule(
        CHECKED, "ftag test", mutually_exclusive=[["left", "right"]], argv=argv
    ).params


def test_parse_with_argument_spec_validator(monkeypatch):
    monkeypatch.setenv("FTAG_TEST_CAP", "7")
    params = parse(["x", "--left", "1", "--quiet"])
    assert params == dict(name="x", mode="a", cap=7, left=1.0, right=None, quiet=True)
    assert parse(["x", "--cap", "3"])["cap"] == 3


@pytest.mark.parametrize(
    "argv,env,needle",
    [
        pytest.param([], None, "missing required arguments: name", id="required"),
        pytest.param(["x", "--mode", "c"], None, "mode", id="choices"),
        pytest.param(
            ["x", "--left", "1", "--right", "2"], None, "left", id="exclusive"
        ),
        pytest.param(["x"], "lots", "cap", id="bad_fallback"),
    ],
)
def test_parse_rejects(monkeypatch, capsys, argv, env, needle):
    if env is not None:
        monkeypatch.setenv("FTAG_TEST_CAP", env)
    with pytest.raises(SystemExit) as ex:
        parse(argv)
    assert ex.value.code == 2
    assert needle in capsys.readouterr().err
