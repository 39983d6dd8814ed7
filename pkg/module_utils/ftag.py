# -*- coding: utf-8 -*-

# Copyright: (c) 2026, ftag contributors
# MIT License (see LICENSE)

"""Shared plumbing for the ftag commands: argument specs, option parsing,
logging setup and the ``exit_json`` / ``fail_json`` exit points."""

import argparse
import functools
import json
import logging
import sys
from io import StringIO

from ansible.module_utils.basic import env_fallback
from ansible.module_utils.common.arg_spec import ArgumentSpecValidator
from ruamel.yaml import YAML
from ruamel.yaml.error import YAMLError

from module_utils.errors import ConfigError, FtagError
from module_utils.solver import DEFAULT_SOLVER_CAP
from module_utils.strategies import OPT_BACKENDS, STRATEGIES

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
LOG_LEVELS = ["debug", "info", "warning", "error"]

# argv override, set by the unit tests
_FTAG_ARGS = None

FTAG_COMMON_ARGS = dict(
    solver_cap=dict(
        required=False,
        type="int",
        default=DEFAULT_SOLVER_CAP,
        fallback=(env_fallback, ["FTAG_SOLVER_CAP"]),
    ),
    log_level=dict(
        required=False, type="str", default="warning", choices=LOG_LEVELS
    ),
    format=dict(
        required=False, type="str", default="text", choices=["text", "yaml"]
    ),
)

COMMON_HELP = dict(
    solver_cap="Largest number of frozen robots the exact solver accepts"
    " (env FTAG_SOLVER_CAP).",
    log_level="Logging threshold for messages written to stderr.",
    format="Print results as plain text lines or as a YAML document.",
)

# options shared by the commands that drive a strategy
STRATEGY_ARGS = dict(
    strategy=dict(required=True, type="str", choices=sorted(STRATEGIES)),
    options=dict(required=False, type="str", default=None),
    wait_factor=dict(required=False, type="float", default=None),
    backend=dict(required=False, type="str", default=None, choices=list(OPT_BACKENDS)),
    max_time=dict(required=False, type="float", default=100.0),
)


def strategy_options(params, solver_cap):
    """Strategy options from ``--options`` overlaid with the dedicated flags."""
    options = load_options(params.get("options"))
    if params.get("wait_factor") is not None:
        options["wait_factor"] = params["wait_factor"]
    if params.get("backend") is not None:
        options["opt_backend"] = params["backend"]
    if params["strategy"] == "patience":
        options.setdefault("solver_cap", solver_cap)
    return options


def dump_yaml(data):
    """Block-style YAML text for ``data``."""
    yaml = YAML(typ="safe")
    yaml.default_flow_style = False
    with StringIO() as stream:
        yaml.dump(data, stream)
        return stream.getvalue()


def load_options(text):
    """Parses a strategy options object given as JSON or YAML text.

    :raises ConfigError: if the text is not a mapping
    """
    if not text:
        return {}
    try:
        options = YAML(typ="safe").load(text)
    except YAMLError as err:
        raise ConfigError("cannot parse options: %s" % err)
    if options is None:
        return {}
    if not isinstance(options, dict):
        raise ConfigError("options must be a mapping, got %r" % (options,))
    return dict(options)


def _option_help(documentation):
    if not documentation:
        return "", dict(COMMON_HELP)
    doc = YAML(typ="safe").load(documentation) or {}
    helps = dict(COMMON_HELP)
    for name, option in (doc.get("options") or {}).items():
        description = option.get("description", "")
        if isinstance(description, list):
            description = " ".join(description)
        helps[name] = description
    return doc.get("short_description", ""), helps


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class FtagModule(object):
    """Reads command arguments and owns the exit points of a command.

    argv is only split into raw strings here; coercion, ``required``,
    ``choices``, defaults, fallbacks and mutually exclusive groups are checked
    by Ansible's ``ArgumentSpecValidator`` against the argument spec. The one
    ftag-specific spec key is ``positional``.
    """

    def __init__(
        self,
        argument_spec,
        prog,
        documentation=None,
        mutually_exclusive=None,
        argv=None,
    ):
        self.argument_spec = argument_spec
        self.prog = prog
        self.output_format = "text"
        self.description, self.helps = _option_help(documentation)
        self.mutually_exclusive = mutually_exclusive or []
        if argv is None:
            argv = _FTAG_ARGS if _FTAG_ARGS is not None else sys.argv[1:]
        self.params = self._parse(list(argv))

    def _parser(self):
        parser = _Parser(prog=self.prog, description=self.description)
        for name, spec in self.argument_spec.items():
            kwargs = {"help": self.helps.get(name), "default": None}
            if spec.get("type") == "bool":
                kwargs["action"] = "store_true"
            if spec.get("positional"):
                parser.add_argument(name, nargs="?", **kwargs)
            else:
                kwargs["dest"] = name
                parser.add_argument("--" + name.replace("_", "-"), **kwargs)
        return parser

    def _validator(self):
        spec = dict(
            (name, dict((k, v) for k, v in entry.items() if k != "positional"))
            for name, entry in self.argument_spec.items()
        )
        return ArgumentSpecValidator(spec, mutually_exclusive=self.mutually_exclusive)

    def _parse(self, argv):
        try:
            raw = vars(self._parser().parse_args(argv))
        except _UsageError as err:
            self.fail_json(msg=str(err), rc=2)

        given = dict((k, v) for k, v in raw.items() if v is not None)
        result = self._validator().validate(given)
        if result.error_messages:
            self.fail_json(msg="; ".join(result.error_messages), rc=2)
        return result.validated_parameters

    def exit_json(self, **result):
        """Prints the result and exits with status 0.

        Text output prints ``msg`` (a line or a list of lines); YAML output
        dumps the whole result.
        """
        if self.output_format == "yaml":
            sys.stdout.write(dump_yaml(result))
        else:
            lines = result.get("msg") or []
            if isinstance(lines, str):
                lines = [lines]
            for line in lines:
                sys.stdout.write("%s\n" % line)
        sys.stdout.flush()
        sys.exit(0)

    def fail_json(self, msg, rc=1, **kwargs):
        """Reports ``msg`` on stderr and exits with ``rc``."""
        if self.output_format == "yaml":
            failure = dict(kwargs, failed=True, msg=msg, rc=rc)
            sys.stdout.write(dump_yaml(failure))
        else:
            for line in kwargs.get("lines") or []:
                sys.stdout.write("%s\n" % line)
        sys.stdout.flush()
        sys.stderr.write("%s: error: %s\n" % (self.prog, msg))
        sys.exit(rc)


class FtagModuleBase(object):
    def __init__(
        self,
        derived_arg_spec,
        prog,
        documentation=None,
        mutually_exclusive=None,
        argv=None,
    ):
        merged_arg_spec = dict()
        merged_arg_spec.update(FTAG_COMMON_ARGS)
        if derived_arg_spec:
            merged_arg_spec.update(derived_arg_spec)

        self.module = FtagModule(
            merged_arg_spec,
            prog,
            documentation=documentation,
            mutually_exclusive=mutually_exclusive,
            argv=argv,
        )
        self._configure_logging()
        self._build_config()
        self._strip_common_params()

    def _configure_logging(self):
        logging.basicConfig(
            level=getattr(logging, self.module.params["log_level"].upper()),
            format=LOG_FORMAT,
            stream=sys.stderr,
        )

    def _build_config(self):
        self.module.output_format = self.module.params["format"]
        self.solver_cap = self.module.params["solver_cap"]
        if self.solver_cap < 0:
            self.module.fail_json(
                msg="solver cap must be non-negative, got %d" % self.solver_cap,
                rc=2,
            )

    def _strip_common_params(self):
        """Remove the params we've handled, so the rest of the command doesn't
        have to worry about them.
        """
        for key in FTAG_COMMON_ARGS:
            del self.module.params[key]

    def write_json(self, path, data):
        with open(path, "w") as stream:
            json.dump(data, stream, indent=2)
            stream.write("\n")


class Decorators(object):
    @classmethod
    def fail_on_error(self, func):
        """Decorator that turns ftag errors raised by the wrapped method into
        ``fail_json`` calls carrying the error's exit code.

        :param func: Function to wrap
        :type func: func
        :return: Wrapped function
        :rtype: func
        """

        @functools.wraps(func)
        def wrapper(self, *args, **kwargs):
            try:
                return func(self, *args, **kwargs)
            except FtagError as err:
                self.module.fail_json(msg=str(err), rc=err.rc)
            except (IOError, OSError) as err:
                self.module.fail_json(msg=str(err), rc=1)

        return wrapper
