import numpy as np
import pytest

from hybrid_ris.channel import ChannelSet
from hybrid_ris.metrics import PowerParams, SystemParams, constraint_report, sum_rate_and_ee
from hybrid_ris.optimizer import PER_CONVERGENCE, SolverConfig, bca_solve
from hybrid_ris.ris_model import HybridRisConfig, RsArchitecture

from conftest import make_instance

FAST = SolverConfig(T_max=8, record_blocks=True)


def _feasible(state, ch, system, tol=1e-6):
    rep = constraint_report(state.w, ch, state.phis, system)
    return max(v for k, v in rep.items() if k != "umc") <= tol and rep["umc"] <= 1e-12


@pytest.mark.parametrize("label", ["fc_passive", "sc_passive", "fc_sc", "sc_sc", "fc_fc"])
def test_monotone_and_feasible(label):
    ch, system, rng = make_instance(label, N=16, seed=1)
    state = bca_solve(ch, system, FAST, rng)
    for rec in state.block_trace:
        assert np.all(np.diff(rec) >= -1e-9 * np.maximum(1.0, np.abs(rec[1:])))
    etas = [r.eta for r in state.trace]
    assert np.all(np.diff(etas) >= -1e-9 * max(etas))
    assert _feasible(state, ch, system)
    R, ee = sum_rate_and_ee(state.w, ch, state.phis, system)
    assert ee == pytest.approx(state.trace[-1].eta, rel=1e-9)


def test_improves_over_start():
    ch, system, rng = make_instance(seed=2)
    state = bca_solve(ch, system, SolverConfig(T_max=3), rng)
    assert state.trace[-1].eta > state.trace[0].eta_used


def test_accelerated_monotone_and_not_worse():
    ch, system, _ = make_instance("sc_passive", N=16, seed=3)
    plain = bca_solve(ch, system, SolverConfig(T_max=6), np.random.default_rng(0))
    fast = bca_solve(ch, system, SolverConfig(T_max=6, accelerate=True), np.random.default_rng(0))
    etas = [r.eta for r in fast.trace]
    assert np.all(np.diff(etas) >= -1e-9 * max(etas))
    assert _feasible(fast, ch, system)
    assert fast.trace[-1].eta >= plain.trace[-1].eta * 0.999


def test_per_convergence_mode():
    ch, system, rng = make_instance(N=16, seed=4)
    state = bca_solve(ch, system, SolverConfig(T_max=4, eta_update=PER_CONVERGENCE, bca_max_passes=5), rng)
    assert state.diagnostics.bca_passes >= len(state.trace)
    assert _feasible(state, ch, system)


def test_projection_off_is_fc_like():
    ch, system, rng = make_instance("sc_passive", N=16, seed=5)
    state = bca_solve(ch, system, SolverConfig(T_max=3, sc_projection=False), rng)
    assert not state.diagnostics.projection_deviation


def test_sc_structure_kept():
    ch, system, rng = make_instance("sc_passive", N=16, seed=6)
    state = bca_solve(ch, system, SolverConfig(T_max=4), rng)
    assert state.beamforming()[0].violations(system.surfaces[0].arch) == []


def test_zero_channels():
    ris = HybridRisConfig(8, 0.5, RsArchitecture.fc_active())
    system = SystemParams(ris, PowerParams(), 1e-11)
    ch = ChannelSet(np.zeros((1, 2)), (np.zeros((4, 2)), np.zeros((4, 2))),
                    (np.zeros((1, 4)), np.zeros((1, 4))))
    state = bca_solve(ch, system, SolverConfig(T_max=3), 0)
    assert state.trace[-1].R == 0.0
    assert np.all(np.isfinite(state.w))


def test_bs_budget_must_cover_static_power():
    with pytest.raises(ValueError):
        PowerParams(W_BS=8.0, P_BS_max=8.0)


def test_tiny_bs_budget_stays_feasible():
    ch, system, _ = make_instance(N=16)
    tight = SystemParams(system.ris, PowerParams(W_BS=8.0, P_BS_max=8.0 + 1e-6), system.sigma_sq)
    state = bca_solve(ch, tight, SolverConfig(T_max=2), 0)
    assert _feasible(state, ch, tight)


def test_deterministic():
    ch, system, _ = make_instance(N=16)
    a = bca_solve(ch, system, SolverConfig(T_max=3), 7)
    b = bca_solve(ch, system, SolverConfig(T_max=3), 7)
    np.testing.assert_array_equal(a.w, b.w)


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(T_max=0)
    with pytest.raises(ValueError):
        SolverConfig(lambda_q_mode="nope")
