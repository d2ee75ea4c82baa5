"""
Energy-efficient beamforming on the default scenario
====================================================

One channel realization, every architecture, plus the zero-forcing baseline.
"""
import numpy as np

from hybrid_ris import experiments as ex
from hybrid_ris.metrics import sum_rate_and_ee, tpc
from hybrid_ris.optimizer import bca_solve, zf_heuristic

scenario = ex.validate_scenario("default")
labels = ("sc_passive", "fc_passive", "sc_sc", "sc", "passive", "zf:sc_passive")

for label, channels, system, rng in ex.trial_problems(scenario, 0, 0, labels):
    if label.startswith("zf:"):
        w, phis = zf_heuristic(channels, system, rng)
    else:
        state = bca_solve(channels, system, scenario.solver, rng)
        w, phis = state.w, state.phis
    R, ee = sum_rate_and_ee(w, channels, phis, system)
    P = tpc(w, channels, phis, system)
    print(f"{label:14s} EE {ee:6.3f} bit/J/Hz   R {R:6.2f} bps/Hz   "
          f"P {P.P_total:6.2f} W (BS {P.P_BS:.2f}, surfaces {np.round(P.P_surfaces, 2)})")
