#!/usr/bin/python
# -*- coding: utf-8 -*-

# Copyright: (c) 2026, ftag contributors
# MIT License (see LICENSE)

DOCUMENTATION = r"""
---
module: ftag_solve

short_description: Compute the offline optimum OPT of a freeze-tag instance.

description:
  - Reads an instance file and computes a minimum makespan schedule that
    respects every release time.
  - The exact branch-and-bound solver accepts at most C(solver_cap) frozen
    robots; larger instances fail with exit code 3.

options:
  instance:
    description:
      - Path of the instance JSON file.
    type: path
    required: true
  solution:
    description:
      - Write the waker sequences and wake times as JSON to this path.
    type: path
    required: false
  method:
    description:
      - C(exact) runs branch-and-bound, C(bruteforce) enumerates every
        schedule (at most 7 frozen robots), C(greedy-upper-bound) returns the
        nearest-robot heuristic schedule.
    type: str
    default: exact
    choices:
      - exact
      - bruteforce
      - greedy-upper-bound

requirements:
  - python >= 3.8
  - networkx
  - pydantic >= 2
"""

EXAMPLES = r"""
- name: optimum of the two-starter lower-bound input
  command: ftag solve fixtures/sigma_a.json

- name: check the solver against the exhaustive oracle
  command: ftag solve --method bruteforce fixtures/five_robots.json

- name: save the schedule
  command: ftag solve --solution opt.json fixtures/sigma_a.json
"""

RETURN = r"""
makespan:
  description: Optimal makespan (last wake time).
  type: float
  returned: always
  sample: 1.0
wake_times:
  description: Wake time of every robot, keyed by robot id.
  type: dict
  returned: always
solution:
  description: Path the solution JSON was written to.
  type: str
  returned: when solution is given
"""

from module_utils.ftag import Decorators, FtagModuleBase
from module_utils.instance import read_instance
from module_utils.solver import greedy_upper_bound, opt_bruteforce, opt_exact


class FtagSolve(FtagModuleBase):
    """Represents the ftag solve command implementation"""

    def __init__(self, argv=None):
        self.module_arg_spec = dict(
            instance=dict(required=True, type="path", positional=True),
            solution=dict(required=False, type="path", default=None),
            method=dict(
                required=False,
                type="str",
                default="exact",
                choices=["exact", "bruteforce", "greedy-upper-bound"],
            ),
        )
        FtagModuleBase.__init__(
            self,
            self.module_arg_spec,
            "ftag solve",
            documentation=DOCUMENTATION,
            argv=argv,
        )

    def solve(self, inst):
        method = self.module.params["method"]
        if method == "bruteforce":
            return opt_bruteforce(inst)
        if method == "greedy-upper-bound":
            return greedy_upper_bound(inst)
        return opt_exact(inst, cap=self.solver_cap)

    @Decorators.fail_on_error
    def exec_module(self):
        """Entry point for the command

        :return: Results of command execution
        :rtype: dict
        """
        inst = read_instance(self.module.params["instance"])
        solution = self.solve(inst)
        if self.module.params["solution"]:
            self.write_json(self.module.params["solution"], solution.to_dict())
        return self.build_result(solution)

    def build_result(self, solution):
        """Builds dict of results to pass to module.exit_json()

        :param solution: Computed schedule
        :type solution: OfflineSolution
        :return: Results of command execution
        :rtype: dict
        """
        result = {
            "changed": bool(self.module.params["solution"]),
            "makespan": solution.makespan,
            "wake_times": solution.to_dict()["wake_times"],
            "msg": ["makespan %.9f" % solution.makespan],
        }
        if self.module.params["solution"]:
            result["solution"] = self.module.params["solution"]
        return result


def main(argv=None):
    s = FtagSolve(argv)
    result = s.exec_module()
    s.module.exit_json(**result)


if __name__ == "__main__":
    main()
