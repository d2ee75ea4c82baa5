import numpy as np
import pytest

from hybrid_ris.channel import FadingSpec, Geometry, drop_users, generate_channels
from hybrid_ris.metrics import PowerParams, SystemParams
from hybrid_ris.ris_model import HybridRisConfig, RsArchitecture
from hybrid_ris.units import dbm_to_watt

ARCH_PAIRS = {
    "fc_passive": (RsArchitecture.fc_active(), RsArchitecture.passive()),
    "sc_passive": (RsArchitecture.sc_active(4), RsArchitecture.passive()),
    "fc_sc": (RsArchitecture.fc_active(), RsArchitecture.sc_active(4)),
    "sc_sc": (RsArchitecture.sc_active(4), RsArchitecture.sc_active(4)),
    "fc_fc": (RsArchitecture.fc_active(), RsArchitecture.fc_active()),
}

_ACCEPTANCE = []


def make_instance(label="fc_passive", N=32, a=0.5, M=4, K=2, seed=0, noise_dbm=-80.0):
    """Channels and system parameters on the default geometry."""
    arch1, arch2 = ARCH_PAIRS[label]
    ris = HybridRisConfig(N, a, arch1, arch2, delta_sq=dbm_to_watt(noise_dbm))
    system = SystemParams(ris, PowerParams(), sigma_sq=dbm_to_watt(noise_dbm))
    rng = np.random.default_rng(seed)
    geom = Geometry(K=K)
    users = drop_users(geom, rng)
    channels = generate_channels(geom, users, ris.sizes, M, FadingSpec(), rng)
    return channels, system, rng


@pytest.fixture
def instance():
    return make_instance


@pytest.fixture
def acceptance():
    """Record ``(criterion, passed, detail)``; lines are printed in the terminal summary."""
    def record(name, passed, detail=""):
        line = f"{name}: {'PASS' if passed else 'FAIL'}  {detail}".rstrip()
        _ACCEPTANCE.append(line)
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in _ACCEPTANCE:
        terminalreporter.write_line(line)
