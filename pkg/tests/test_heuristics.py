import numpy as np
import pytest

from hybrid_ris.errors import RankDeficientDirectChannel
from hybrid_ris.metrics import reflect_power, sinr, transmit_sum_power
from hybrid_ris.optimizer import zf_heuristic, zf_precoder

from conftest import make_instance


def test_zero_forcing_nulls_interference():
    rng = np.random.default_rng(0)
    g = rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5))
    w, alpha = zf_precoder(g, 2.0)
    A = np.array([[np.vdot(g[k], w[i]) for i in range(3)] for k in range(3)])
    np.testing.assert_allclose(A, alpha * np.eye(3), atol=1e-12)
    assert transmit_sum_power(w) == pytest.approx(2.0)


def test_rank_checks():
    with pytest.raises(RankDeficientDirectChannel):
        zf_precoder(np.ones((3, 2)), 1.0)
    with pytest.raises(RankDeficientDirectChannel):
        zf_precoder(np.ones((2, 3)), 1.0)


def test_heuristic_spends_budgets():
    ch, system, rng = make_instance("fc_passive")
    w, phis = zf_heuristic(ch, system, rng)
    assert transmit_sum_power(w) == pytest.approx(system.power.transmit_budget)
    s = system.surfaces[0]
    assert reflect_power(phis[0], ch.G[0], w, s.delta_sq) == pytest.approx(s.reflect_budget)
    np.testing.assert_allclose(np.abs(phis[1]), 1.0)
    assert np.all(sinr(w, ch, phis, system) >= 0)
