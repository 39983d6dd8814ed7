#!/usr/bin/python
# -*- coding: utf-8 -*-

# Copyright: (c) 2026, ftag contributors
# MIT License (see LICENSE)

DOCUMENTATION = r"""
---
module: ftag_adversary

short_description: Play the adaptive lower-bound adversary against a strategy.

description:
  - Builds the lower-bound metric for depth C(k), watches the strategy and
    releases requests in reaction to it, then reports the ratio the strategy
    achieved against the certified offline optimum.
  - The check passes when the achieved ratio is at least R_k minus C(slack).

options:
  k:
    description:
      - Depth of the construction, 1 to 3.
    type: int
    required: true
  strategy:
    description:
      - Online strategy to attack.
    type: str
    required: true
    choices:
      - greedy
      - patience
  dt:
    description:
      - Monitoring step used to detect the trigger time.
    type: float
    default: 0.001
  slack:
    description:
      - Allowed shortfall of the achieved ratio below R_k.
    type: float
    default: 0.01
  report:
    description:
      - Write the full report as JSON to this path.
    type: path
  instance:
    description:
      - Write the realized instance (starters and every released request)
        to this path.
    type: path
  wait_factor:
    description:
      - Patience only. Replay offset as a multiple of OPT, at least 1.
    type: float
  backend:
    description:
      - Patience only. How OPT is recomputed at each release.
    type: str
    choices:
      - exact
      - greedy-upper-bound
  options:
    description:
      - Strategy options as a JSON or YAML mapping.
    type: str
  max_time:
    description:
      - Simulation horizon.
    type: float
    default: 100
"""

EXAMPLES = r"""
- name: greedy on the first construction
  command: ftag adversary --k 1 --strategy greedy

- name: patience on depth two, keep the realized input
  command: ftag adversary --k 2 --strategy patience --instance m2_realized.json
"""

RETURN = r"""
case:
  description: C(case1) when the strategy kept its robots near the origin,
    C(case2) when the adversary placed requests on the spokes.
  type: str
  returned: always
t_star:
  description: Trigger time, absent in case1.
  type: float
  returned: case2
certified_opt:
  description: Offline optimum the adversary certifies for the realized input.
  type: float
  returned: always
ratio:
  description: Achieved makespan over certified_opt.
  type: float
  returned: always
r_bound:
  description: R_k for the requested depth.
  type: float
  returned: always
"""

from module_utils.adversary import AdversaryOptions, run_adversary
from module_utils.ftag import (
    STRATEGY_ARGS,
    Decorators,
    FtagModuleBase,
    strategy_options,
)
from module_utils.instance import write_instance
from module_utils.strategies import strategy_factory


class FtagAdversary(FtagModuleBase):
    """Represents the ftag adversary command implementation"""

    def __init__(self, argv=None):
        self.module_arg_spec = dict(
            k=dict(required=True, type="int"),
            dt=dict(required=False, type="float", default=1e-3),
            slack=dict(required=False, type="float", default=0.01),
            report=dict(required=False, type="path", default=None),
            instance=dict(required=False, type="path", default=None),
        )
        self.module_arg_spec.update(STRATEGY_ARGS)
        FtagModuleBase.__init__(
            self,
            self.module_arg_spec,
            "ftag adversary",
            documentation=DOCUMENTATION,
            argv=argv,
        )

    @Decorators.fail_on_error
    def exec_module(self):
        """Entry point for the command

        :return: Results of command execution
        :rtype: dict
        """
        params = self.module.params
        factory = strategy_factory(
            params["strategy"], strategy_options(params, self.solver_cap)
        )
        report = run_adversary(
            params["k"],
            factory,
            AdversaryOptions(dt=params["dt"], max_time=params["max_time"]),
        )
        if params["report"]:
            self.write_json(params["report"], report.to_dict())
        if params["instance"]:
            write_instance(report.instance, params["instance"])
        return self.build_result(report)

    def build_result(self, report):
        """Builds dict of results to pass to module.exit_json()

        :param report: Outcome of the adversary run
        :type report: AdversaryReport
        :return: Results of command execution
        :rtype: dict
        """
        params = self.module.params
        passed = report.achieved_ratio >= report.r_bound - params["slack"]
        result = {
            "changed": bool(params["report"] or params["instance"]),
            "case": report.case,
            "certified_opt": report.certified_opt,
            "makespan": report.trace.makespan,
            "ratio": report.achieved_ratio,
            "r_bound": report.r_bound,
            "passed": passed,
            "msg": ["case %s" % report.case],
        }
        if report.t_star is not None:
            result["t_star"] = report.t_star
            result["msg"].append("t_star %.9f" % report.t_star)
        result["msg"].extend(
            [
                "certified opt %.9f" % report.certified_opt,
                "makespan %.9f" % report.trace.makespan,
                "ratio %.9f" % report.achieved_ratio,
                "R_%d %.9f" % (report.k, report.r_bound),
                "%s (slack %g)" % ("PASS" if passed else "FAIL", params["slack"]),
            ]
        )
        return result


def main(argv=None):
    s = FtagAdversary(argv)
    result = s.exec_module()
    s.module.exit_json(**result)


if __name__ == "__main__":
    main()
