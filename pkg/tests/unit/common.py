import os

from module_utils import ftag

FIXTURES = os.path.join(
    os.path.dirname(os.path.dirname(os.path.dirname(__file__))), "fixtures"
)


def fixture(name):
    """Absolute path of a shipped fixture file

    :param name: File name under fixtures/
    :type name: str
    :return: Fixture path
    :rtype: str
    """
    return os.path.join(FIXTURES, name)


class FakeFtagModule:
    """Collection of methods for working with a patched ftag command
    """

    @staticmethod
    def set_module_args(args):
        """prepare arguments so that they will be picked up during command creation

        :param args: command line arguments, without the program name
        :type args: list
        """
        ftag._FTAG_ARGS = [str(a) for a in args]

    @staticmethod
    def exit_json(*args, **kwargs):
        """function to patch over exit_json; package return data into an exception.
        If changed not provided as kwarg, defaults to False.

        :raises ModuleExitJson: command exit with kwargs as the result
        """
        if "changed" not in kwargs:
            kwargs["changed"] = False
        raise ModuleExitJson(kwargs)

    @staticmethod
    def fail_json(*args, **kwargs):
        """Function to patch over fail_json; package return data into an exception

        :raises ModuleFailJson: command failure with kwargs as the result
        """
        kwargs["failed"] = True
        raise ModuleFailJson(kwargs)


class ModuleExitJson(Exception):
    """Exception class to be raised by module.exit_json and caught by the
    test case.
    """

    pass


class ModuleFailJson(Exception):
    """Exception class to be raised by module.fail_json and caught by the
    test case.
    """

    pass
