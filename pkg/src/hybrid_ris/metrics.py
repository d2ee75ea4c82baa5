"""Power consumption, SINR, sum rate and energy efficiency.

All powers are in watts and rates in bps/Hz.  Precoders are stored as a
``(K, M)`` array whose row ``k`` is ``w_k``.  Amplification noise enters the
SINR only for active surfaces, so the active/passive and active/active SINR
expressions are the same function evaluated on different configurations.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import effective_channels
from .ris_model import HybridRisConfig


@dataclass(frozen=True)
class PowerParams:
    xi: float = 0.909
    W_BS: float = 10 ** 0.6
    P_BS_max: float = 10 ** 0.9

    def __post_init__(self):
        if not 0.0 < self.xi <= 1.0:
            raise ValueError("BS amplifier efficiency must lie in (0, 1]")
        if self.W_BS < 0 or self.P_BS_max <= self.W_BS:
            raise ValueError("BS budget must exceed its static power")

    @property
    def transmit_budget(self):
        """TSP budget ``xi * (P_BS_max - W_BS)``."""
        return self.xi * (self.P_BS_max - self.W_BS)


@dataclass(frozen=True)
class SystemParams:
    """Everything besides channels that the metrics and the optimizer need."""

    ris: HybridRisConfig
    power: PowerParams = PowerParams()
    sigma_sq: float = 1e-11

    @property
    def surfaces(self):
        return self.ris.surfaces


@dataclass(frozen=True)
class PowerBreakdown:
    P_BS: float
    P_surfaces: tuple
    P_total: float

    @property
    def P_RIS(self):
        return float(sum(self.P_surfaces))


def _phi_array(phi):
    return np.asarray(getattr(phi, "phi", phi), dtype=complex)


def transmit_sum_power(w):
    return float(np.sum(np.abs(np.asarray(w)) ** 2))


def reflect_power(phi, G, w, delta_sq):
    """Radiated power of an active surface: amplified signal plus amplified noise."""
    phi = _phi_array(phi)
    incident = np.asarray(G) @ np.atleast_2d(w).T          # (N_s, K)
    amp_sq = np.abs(phi) ** 2
    return float(np.sum(amp_sq[:, None] * np.abs(incident) ** 2) + delta_sq * np.sum(amp_sq))


def tpc(w, channels, phis, system):
    """Total power consumption split into BS and per-surface parts."""
    power = system.power
    P_BS = transmit_sum_power(w) / power.xi + power.W_BS
    parts = []
    for s, Gs, phi in zip(system.surfaces, channels.G, phis):
        if s.active:
            parts.append(reflect_power(phi, Gs, w, s.delta_sq) / s.zeta + s.static_power)
        else:
            parts.append(s.n * s.P_PS)
    parts = tuple(parts)
    return PowerBreakdown(P_BS, parts, P_BS + sum(parts))


def constraint_report(w, channels, phis, system):
    """Relative budget violations (``<= 0`` means satisfied) and passive UMC error."""
    out = {"bs": transmit_sum_power(w) / system.power.transmit_budget - 1.0}
    umc = 0.0
    for s, Gs, phi in zip(system.surfaces, channels.G, phis):
        if s.active:
            out[f"rs{s.index + 1}"] = reflect_power(phi, Gs, w, s.delta_sq) / s.reflect_budget - 1.0
        else:
            umc = max(umc, float(np.max(np.abs(np.abs(_phi_array(phi)) - 1.0))))
    out["umc"] = umc
    return out


def gains(w, channels, phis):
    """Matrix ``A[k, i] = h_k^H w_i`` of effective link gains."""
    H = effective_channels(channels, phis)
    return H.conj() @ np.atleast_2d(w).T


def noise_powers(channels, phis, system):
    """Per-user noise: receiver noise plus amplification noise of active surfaces."""
    out = np.full(channels.K, system.sigma_sq, dtype=float)
    for s, fs, phi in zip(system.surfaces, channels.f, phis):
        if s.active and s.delta_sq > 0:
            out += s.delta_sq * (np.abs(fs) ** 2 @ np.abs(_phi_array(phi)) ** 2)
    return out


def sinr(w, channels, phis, system, k=None):
    """SINR of every user (or of user ``k``)."""
    A = gains(w, channels, phis)
    power = np.abs(A) ** 2
    signal = np.diag(power)
    interference = power.sum(axis=1) - signal
    out = signal / (interference + noise_powers(channels, phis, system))
    return out if k is None else float(out[k])


def sum_rate(gammas):
    return float(np.sum(np.log2(1.0 + np.asarray(gammas))))


def sum_rate_and_ee(w, channels, phis, system):
    """Sum rate ``R`` (bps/Hz) and energy efficiency ``R / P`` (bps/Hz/W)."""
    R = sum_rate(sinr(w, channels, phis, system))
    P = tpc(w, channels, phis, system).P_total
    return R, R / P
