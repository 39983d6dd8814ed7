#!/usr/bin/python
# -*- coding: utf-8 -*-

# Copyright: (c) 2026, ftag contributors
# MIT License (see LICENSE)

DOCUMENTATION = r"""
---
module: ftag_verify

short_description: Run the acceptance checks and print a result table.

description:
  - Runs every acceptance check, or those whose name matches C(filter), and
    prints one row per check with the expected value, the observed value,
    the tolerance and PASS or FAIL.
  - Exits with code 1 when any row fails.

options:
  filter:
    description:
      - Substring or glob pattern selecting checks by name,
        e.g. C(lower-bound) or C(?-oracle).
    type: str
  seed:
    description:
      - Seed of the random suites.
    type: int
    default: 2026
  suite_size:
    description:
      - Number of random instances for the upper-bound, nearby and engine
        checks.
    type: int
    default: 200
  oracle_size:
    description:
      - Number of random instances compared against the exhaustive solver.
    type: int
    default: 100
  no_budgets:
    description:
      - Do not fail checks that exceed their time budget.
    type: bool
    default: false
"""

EXAMPLES = r"""
- name: all checks
  command: ftag verify

- name: only the lower-bound checks, without time budgets
  command: ftag verify --filter lower-bound --no-budgets
"""

RETURN = r"""
rows:
  description: One entry per check.
  type: list
  returned: always
passed:
  description: Whether every row passed.
  type: bool
  returned: always
"""

from module_utils.acceptance import SuiteConfig, Verifier, all_passed
from module_utils.errors import ConfigError
from module_utils.ftag import Decorators, FtagModuleBase

COLUMNS = ("criterion", "expected", "observed", "tolerance", "result")


def format_table(rows):
    """Aligned text table of acceptance rows.

    :param rows: Rows returned by :meth:`Verifier.run`
    :type rows: list
    :rtype: list
    """
    cells = [
        (
            row.criterion,
            row.expected,
            row.observed,
            row.tolerance,
            "PASS" if row.passed else "FAIL",
        )
        for row in rows
    ]
    widths = [
        max([len(header)] + [len(line[i]) for line in cells])
        for i, header in enumerate(COLUMNS)
    ]
    template = "  ".join("%%-%ds" % w for w in widths)
    lines = [template % COLUMNS]
    lines.extend(template % line for line in cells)
    return [line.rstrip() for line in lines]


class FtagVerify(FtagModuleBase):
    """Represents the ftag verify command implementation"""

    def __init__(self, argv=None):
        self.module_arg_spec = dict(
            filter=dict(required=False, type="str", default=None),
            seed=dict(required=False, type="int", default=2026),
            suite_size=dict(required=False, type="int", default=200),
            oracle_size=dict(required=False, type="int", default=100),
            no_budgets=dict(required=False, type="bool", default=False),
        )
        FtagModuleBase.__init__(
            self,
            self.module_arg_spec,
            "ftag verify",
            documentation=DOCUMENTATION,
            argv=argv,
        )

    def build_config(self):
        params = self.module.params
        return SuiteConfig(
            seed=params["seed"],
            suite_size=params["suite_size"],
            oracle_size=params["oracle_size"],
            solver_cap=self.solver_cap,
            enforce_budgets=not params["no_budgets"],
        )

    @Decorators.fail_on_error
    def exec_module(self):
        """Entry point for the command

        :return: Results of command execution
        :rtype: dict
        """
        verifier = Verifier(self.build_config())
        rows = verifier.run(self.module.params["filter"])
        if not rows:
            raise ConfigError(
                "no check matches %r, known checks: %s"
                % (self.module.params["filter"], ", ".join(verifier.names()))
            )
        table = format_table(rows)
        result = {
            "changed": False,
            "rows": [row.to_dict() for row in rows],
            "passed": all_passed(rows),
            "msg": table,
        }
        if not result["passed"]:
            failed = sum(1 for row in rows if not row.passed)
            self.module.fail_json(
                msg="%d of %d checks failed" % (failed, len(rows)),
                rc=1,
                lines=table,
                rows=result["rows"],
            )
        return result


def main(argv=None):
    s = FtagVerify(argv)
    result = s.exec_module()
    s.module.exit_json(**result)


if __name__ == "__main__":
    main()
