#!/usr/bin/python
# -*- coding: utf-8 -*-

# Copyright: (c) 2026, ftag contributors
# MIT License (see LICENSE)

DOCUMENTATION = r"""
---
module: ftag_simulate

short_description: Run an online strategy on an instance and report its makespan.

description:
  - Plays the instance online, revealing every frozen robot at its release
    time, and prints the strategy's makespan.
  - The competitive ratio is printed against C(opt) when given, otherwise
    against the exact optimum when the instance is within the solver cap.
  - With C(suite) a seeded random suite is played instead and the worst
    ratio against the exact optimum is reported.

options:
  instance:
    description:
      - Path of the instance JSON file. Required unless C(suite) is given.
    type: path
  strategy:
    description:
      - Online strategy to run.
    type: str
    required: true
    choices:
      - greedy
      - patience
  opt:
    description:
      - Known optimum used as the ratio denominator.
    type: float
  trace:
    description:
      - Write the event trace as CSV (time,event,robot,location).
    type: path
  positions:
    description:
      - Write positions of every robot sampled every C(dt) time units as CSV.
    type: path
  dt:
    description:
      - Sampling step of the positions export.
    type: float
    default: 0.01
  wait_factor:
    description:
      - Patience only. Replay offset as a multiple of OPT, at least 1.
    type: float
  backend:
    description:
      - Patience only. How OPT is recomputed at each release;
        C(greedy-upper-bound) voids the competitive guarantee.
    type: str
    choices:
      - exact
      - greedy-upper-bound
  options:
    description:
      - 'Strategy options as a JSON or YAML mapping, e.g. C({"wait_factor": 1.5}).'
    type: str
  max_time:
    description:
      - Simulation horizon.
    type: float
    default: 100
  suite:
    description:
      - Number of seeded random instances to play instead of C(instance).
    type: int
  seed:
    description:
      - Seed of the random suite.
    type: int
    default: 2026
"""

EXAMPLES = r"""
- name: patience on the two-starter lower-bound input
  command: ftag simulate --strategy patience fixtures/sigma_a.json

- name: greedy with a known optimum and a trace export
  command: ftag simulate --strategy greedy --opt 1 --trace out.csv fixtures/sigma_a.json

- name: worst patience ratio over 50 random instances with a smaller wait factor
  command: ftag simulate --strategy patience --wait-factor 1.2 --suite 50 --seed 7
"""

RETURN = r"""
makespan:
  description: Time of the last wake.
  type: float
  returned: single instance
opt:
  description: Ratio denominator, given or computed.
  type: float
  returned: when known
ratio:
  description: makespan / opt.
  type: float
  returned: when opt is known and positive
overruns:
  description: Patience replans where a robot could not be home by the replay offset.
  type: int
  returned: patience
worst_ratio:
  description: Largest ratio over the suite.
  type: float
  returned: suite
"""

import math

from module_utils.engine import (
    SimOptions,
    ratio,
    simulate,
    write_positions_csv,
    write_trace_csv,
)
from module_utils.errors import ConfigError, TooLarge
from module_utils.ftag import (
    STRATEGY_ARGS,
    Decorators,
    FtagModuleBase,
    strategy_options,
)
from module_utils.instance import random_suite, read_instance
from module_utils.solver import opt_exact
from module_utils.strategies import make_strategy

BOUND = 1 + math.sqrt(2)


class FtagSimulate(FtagModuleBase):
    """Represents the ftag simulate command implementation"""

    def __init__(self, argv=None):
        self.module_arg_spec = dict(
            instance=dict(required=False, type="path", positional=True),
            opt=dict(required=False, type="float", default=None),
            trace=dict(required=False, type="path", default=None),
            positions=dict(required=False, type="path", default=None),
            dt=dict(required=False, type="float", default=0.01),
            suite=dict(required=False, type="int", default=None),
            seed=dict(required=False, type="int", default=2026),
        )
        self.module_arg_spec.update(STRATEGY_ARGS)
        FtagModuleBase.__init__(
            self,
            self.module_arg_spec,
            "ftag simulate",
            documentation=DOCUMENTATION,
            mutually_exclusive=[["instance", "suite"]],
            argv=argv,
        )

    def new_strategy(self):
        params = self.module.params
        return make_strategy(
            params["strategy"], strategy_options(params, self.solver_cap)
        )

    def optimum(self, inst):
        if self.module.params["opt"] is not None:
            return self.module.params["opt"]
        try:
            return opt_exact(inst, cap=self.solver_cap).makespan
        except TooLarge:
            return None

    @Decorators.fail_on_error
    def exec_module(self):
        """Entry point for the command

        :return: Results of command execution
        :rtype: dict
        """
        params = self.module.params
        if params["suite"] is not None:
            return self.run_suite()
        if not params["instance"]:
            raise ConfigError("an instance file or --suite is required")
        return self.run_single(read_instance(params["instance"]))

    def run_single(self, inst):
        params = self.module.params
        strategy = self.new_strategy()
        trace = simulate(inst, strategy, SimOptions(max_time=params["max_time"]))
        if params["trace"]:
            with open(params["trace"], "w") as stream:
                write_trace_csv(trace, stream)
        if params["positions"]:
            with open(params["positions"], "w") as stream:
                write_positions_csv(trace, stream, params["dt"])

        result = {
            "changed": bool(params["trace"] or params["positions"]),
            "makespan": trace.makespan,
            "strategy": strategy.describe(),
            "msg": ["makespan %.9f" % trace.makespan],
        }
        opt = self.optimum(inst)
        if opt is not None:
            result["opt"] = opt
            result["msg"].append("opt %.9f" % opt)
            if opt > 0 or self.module.params["opt"] is not None:
                result["ratio"] = ratio(trace, opt)
                result["msg"].append("ratio %.9f" % result["ratio"])
        return self.annotate(result, strategy)

    def run_suite(self):
        params = self.module.params
        worst, worst_index, played, overruns = 0.0, None, 0, 0
        strategy = None
        for index, inst in enumerate(random_suite(params["seed"], params["suite"])):
            opt = opt_exact(inst, cap=self.solver_cap).makespan
            strategy = self.new_strategy()
            trace = simulate(inst, strategy, SimOptions(max_time=params["max_time"]))
            overruns += len(getattr(strategy, "overruns", ()))
            if opt <= 0:
                continue
            played += 1
            value = ratio(trace, opt)
            if value > worst:
                worst, worst_index = value, index
        result = {
            "changed": False,
            "instances": params["suite"],
            "worst_ratio": worst,
            "worst_instance": worst_index,
            "msg": [
                "instances %d (%d with positive opt)" % (params["suite"], played),
                "worst ratio %.9f (instance %s)" % (worst, worst_index),
                "bound %.9f" % BOUND,
            ],
        }
        if strategy is None:
            return result
        return self.annotate(result, strategy, overruns)

    def annotate(self, result, strategy, overruns=None):
        if hasattr(strategy, "overruns"):
            if overruns is None:
                overruns = len(strategy.overruns)
            result["overruns"] = overruns
            result["msg"].append("step-1 overruns %d" % overruns)
        if strategy.describe().get("guaranteed") is False:
            result["msg"].append(
                "note: greedy-upper-bound backend, no competitive guarantee"
            )
        return result


def main(argv=None):
    s = FtagSimulate(argv)
    result = s.exec_module()
    s.module.exit_json(**result)


if __name__ == "__main__":
    main()
