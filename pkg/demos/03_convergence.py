"""
Outer-iteration traces
======================

The literal block cycle against the accelerated one (relaxed steps plus a
power-scale search) on a single default-scenario realization.
"""
from dataclasses import replace

from hybrid_ris import experiments as ex
from hybrid_ris.optimizer import bca_solve

scenario = ex.validate_scenario("default")
label, channels, system, _ = next(ex.trial_problems(scenario, 0, 0))

traces = {}
for name, accelerate in (("literal", False), ("accelerated", True)):
    cfg = replace(scenario.solver, accelerate=accelerate)
    _, _, _, rng = next(ex.trial_problems(scenario, 0, 0))
    traces[name] = [r.eta for r in bca_solve(channels, system, cfg, rng).trace]

print(" iter   literal   accelerated")
for t in (1, 2, 3, 5, 10, 20, 30, 40, 50):
    row = [traces[k][t - 1] if t <= len(traces[k]) else float("nan") for k in traces]
    print(f"{t:5d}  {row[0]:8.4f}  {row[1]:10.4f}")
