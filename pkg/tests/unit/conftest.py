import pytest

from module_utils import ftag
from module_utils.instance import read_instance
from .common import FakeFtagModule, fixture

try:  # Python 3.3 +
    from unittest.mock import patch
except ImportError:
    from mock import patch


@pytest.fixture()
def mock_module_helper(request):
    """Patches ftag command exit_json and fail_json methods

    :param request: requesting test context
    :type request: FixtureRequest
    """
    mock_module_helper = patch.multiple(
        ftag.FtagModule,
        exit_json=FakeFtagModule.exit_json,
        fail_json=FakeFtagModule.fail_json,
    )
    mock_module_helper.start()
    request.addfinalizer(mock_module_helper.stop)

    def reset_args():
        ftag._FTAG_ARGS = None

    request.addfinalizer(reset_args)


@pytest.fixture
def sigma_a():
    """Two starters at the origin of M_1, two requests at t=1 on one copy

    :return: Loaded instance
    :rtype: Instance
    """
    return read_instance(fixture("sigma_a.json"))


@pytest.fixture
def sigma_a_one_starter():
    return read_instance(fixture("sigma_a_one_starter.json"))


@pytest.fixture
def five_robots():
    return read_instance(fixture("five_robots.json"))
