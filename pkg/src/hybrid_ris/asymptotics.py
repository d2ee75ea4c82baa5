"""Large-RIS SNR laws for single-user SISO links with a blocked direct path.

Every active RS uses a single shared amplifier (common amplitude over the
surface).  Closed forms are expressed in linear units; the per-surface
channel variances ``rho_f_sq`` / ``rho_g_sq`` and amplification noise
``delta_sq`` may differ between surfaces.

Two families of active-RS laws live here:

* ``gamma_active`` and everything built on it carry a weight of 4 on the
  receiver-noise terms of the denominator.  These are the reported laws and
  reproduce the published loss and threshold figures.
* ``gamma_active_realized`` is the large-``N`` limit of the SNR actually
  realized by the optimal SISO solution (what ``mc_siso_snr`` measures).  Its
  receiver-noise terms carry unit weight, which equals ``gamma_active`` with
  the reflect budget multiplied by 4.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidRegime
from .units import db_to_lin, dbm_to_watt

PI_SQ_16 = math.pi ** 2 / 16.0


def _seq(value, n):
    if np.ndim(value) == 0:
        return [float(value)] * n
    value = [float(v) for v in value]
    if len(value) < n:
        raise ValueError(f"need {n} per-surface values, got {len(value)}")
    return value


@dataclass(frozen=True)
class AsymptoticParams:
    """Channel variances, noise powers and total radiated budget (linear)."""

    rho_f_sq: object = 1e-7
    rho_g_sq: object = 1e-7
    delta_sq: object = 1e-13
    sigma_sq: float = 1e-13
    P_max: float = 2.0

    @classmethod
    def running_example(cls):
        """-70 dB channel variances, -100 dBm noise powers, 2 W budget."""
        return cls(db_to_lin(-70.0), db_to_lin(-70.0), dbm_to_watt(-100.0), dbm_to_watt(-100.0), 2.0)

    def surface(self, s):
        """``(rho_f_sq, rho_g_sq, delta_sq)`` of surface ``s`` (0-based)."""
        pick = lambda v: float(v) if np.ndim(v) == 0 else float(v[s])
        return pick(self.rho_f_sq), pick(self.rho_g_sq), pick(self.delta_sq)

    def equal_split(self, S=1):
        """``(P_t, P_r_per_surface)`` under the equal radiated-budget rule."""
        return self.P_max / 2.0, self.P_max / (2.0 * S)


def _denominator(P_t, P_r, rf, rg, d2, s2, weight):
    return P_r * d2 * rf + weight * (P_t * s2 * rg + s2 * d2)


def gamma_active(N1, P_t, P_r, params, s=0):
    """SNR of an active RS with ``N1`` elements, linear in ``N1``."""
    rf, rg, d2 = params.surface(s)
    return N1 * P_t * P_r * PI_SQ_16 * rf * rg / _denominator(P_t, P_r, rf, rg, d2, params.sigma_sq, 4.0)


def gamma_active_realized(N1, P_t, P_r, params, s=0):
    """Large-``N1`` limit of the SNR realized by the optimal SISO solution."""
    rf, rg, d2 = params.surface(s)
    return N1 * P_t * P_r * PI_SQ_16 * rf * rg / _denominator(P_t, P_r, rf, rg, d2, params.sigma_sq, 1.0)


def gamma_passive(N2, P_t, params, s=1):
    """SNR of a passive RS with ``N2`` elements, quadratic in ``N2``."""
    rf, rg, _ = params.surface(s)
    return N2 ** 2 * P_t * PI_SQ_16 * rf * rg / params.sigma_sq


@dataclass(frozen=True)
class ActivePassiveSnr:
    total: float
    active: float          # active-RS term
    passive: float         # passive-RS term, already scaled by ``c``
    c: float


def _passive_weight(P_t, P_r1, params, weight):
    rf, rg, d2 = params.surface(0)
    s2 = params.sigma_sq
    return weight * (P_t * rg + d2) * s2 / _denominator(P_t, P_r1, rf, rg, d2, s2, weight)


def gamma_active_passive(N, a, params, P_t=None, P_r1=None):
    """Active/passive SNR with ``a*N`` active elements, plus its decomposition.

    ``total`` is evaluated from the joint expression; ``active + passive``
    reproduces it (the passive term is ``c * gamma_passive``).
    """
    if not 0.0 < a < 1.0:
        raise ValueError("split fraction must lie in (0, 1)")
    P_t = params.P_max / 2.0 if P_t is None else P_t
    P_r1 = params.P_max / 2.0 if P_r1 is None else P_r1
    N1, N2 = a * N, (1.0 - a) * N
    rf1, rg1, d1 = params.surface(0)
    rf2, rg2, _ = params.surface(1)
    s2 = params.sigma_sq
    num = P_t * math.pi ** 2 * (P_r1 * rf1 * rg1 * N1 + 4.0 * rf2 * rg2 * (P_t * rg1 + d1) * N2 ** 2)
    total = num / (16.0 * _denominator(P_t, P_r1, rf1, rg1, d1, s2, 4.0))
    c = _passive_weight(P_t, P_r1, params, 4.0)
    return ActivePassiveSnr(total, gamma_active(N1, P_t, P_r1, params, 0),
                            c * gamma_passive(N2, P_t, params, 1), c)


def gamma_active_passive_realized(N, a, params, P_t=None, P_r1=None):
    """Realized-SNR limit of the active/passive link (unit noise weights)."""
    P_t = params.P_max / 2.0 if P_t is None else P_t
    P_r1 = params.P_max / 2.0 if P_r1 is None else P_r1
    N1, N2 = a * N, (1.0 - a) * N
    c = _passive_weight(P_t, P_r1, params, 1.0)
    active = gamma_active_realized(N1, P_t, P_r1, params, 0)
    passive = c * gamma_passive(N2, P_t, params, 1)
    return ActivePassiveSnr(active + passive, active, passive, c)


def passive_weight(params, P_t=None, P_r1=None):
    """Weight ``c`` of the passive term in the active/passive decomposition."""
    P_t = params.P_max / 2.0 if P_t is None else P_t
    P_r1 = params.P_max / 2.0 if P_r1 is None else P_r1
    return _passive_weight(P_t, P_r1, params, 4.0)


def passive_to_active_ratio(params, P_t=None, P_r1=None):
    """``c'`` with ``c * gamma_p(N2) == c' * N2 * gamma_a(N2)``."""
    P_t = params.P_max / 2.0 if P_t is None else P_t
    P_r1 = params.P_max / 2.0 if P_r1 is None else P_r1
    _, rg1, d1 = params.surface(0)
    return 4.0 * (rg1 * P_t + d1) / P_r1


def gamma_active_active(N, S, params, P_t=None, P_r=None, realized=False):
    """SNR of ``S`` active RSs with ``N/S`` elements and ``P_r/S`` reflect budget each."""
    if S < 1:
        raise ValueError("need at least one surface")
    P_t = params.P_max / 2.0 if P_t is None else P_t
    P_r = params.P_max / 2.0 if P_r is None else P_r
    law = gamma_active_realized if realized else gamma_active
    return sum(law(N / S, P_t, P_r / S, params, s) for s in range(S))


def gamma_active_active_symmetric(N, S, params):
    """Equal-split, identical-surface closed form of the active/active SNR."""
    rf, rg, d2 = params.surface(0)
    P, s2 = params.P_max, params.sigma_sq
    return N * P ** 2 * math.pi ** 2 * rf * rg / (32.0 * (P * d2 * rf + 4.0 * S * (P * s2 * rg + 2.0 * s2 * d2)))


LIMIT_REGIMES = (
    "active_large_reflect",
    "active_large_transmit",
    "active_passive_large_reflect",
    "active_passive_large_transmit",
    "active_active_large_reflect",
    "active_active_large_transmit",
)


def limit_snrs(kind, N, params, a=None, S=None, P_t=None, P_r=None):
    """Limiting SNRs when either the reflect or the transmit budget grows without bound.

    Finite budgets default to the equal split.  ``large_reflect`` keeps
    ``P_t``; ``large_transmit`` keeps the total reflect budget ``P_r``
    (shared equally by ``S`` surfaces for active/active).
    """
    P_t = params.P_max / 2.0 if P_t is None else P_t
    P_r = params.P_max / 2.0 if P_r is None else P_r
    s2 = params.sigma_sq

    def reflect_bound(n, s):
        _, rg, d2 = params.surface(s)
        return n * P_t * PI_SQ_16 * rg / d2

    def transmit_bound(n, pr, s):
        rf, _, _ = params.surface(s)
        return n * pr * PI_SQ_16 * rf / (4.0 * s2)

    if kind == "active_large_reflect":
        return reflect_bound(N, 0)
    if kind == "active_large_transmit":
        return transmit_bound(N, P_r, 0)
    if kind == "active_passive_large_reflect":
        return reflect_bound(a * N, 0)
    if kind == "active_passive_large_transmit":
        return gamma_passive((1.0 - a) * N, P_t, params, 1)
    if kind == "active_active_large_reflect":
        return sum(reflect_bound(N, s) for s in range(S)) / S
    if kind == "active_active_large_transmit":
        return sum(transmit_bound(N / S, P_r / S, s) for s in range(S))
    raise InvalidRegime(f"unknown regime {kind!r}; expected one of {LIMIT_REGIMES}")


def _common(params):
    rf, rg, d2 = params.surface(0)
    return rf, rg, d2, params.sigma_sq


def threshold_passive_vs_active(params, P_t_active=None, P_r=None, P_t_passive=None):
    """Element count above which a passive RIS beats an active RIS."""
    rf, rg, d2, s2 = _common(params)
    P_ta = params.P_max / 2.0 if P_t_active is None else P_t_active
    P_r = params.P_max / 2.0 if P_r is None else P_r
    P_tp = params.P_max if P_t_passive is None else P_t_passive
    return P_ta / P_tp * P_r * s2 / _denominator(P_ta, P_r, rf, rg, d2, s2, 4.0)


def threshold_passive_vs_active_passive(a, params, **kw):
    """Element count above which a passive RIS beats an active/passive RIS."""
    return a * threshold_passive_vs_active(params, **kw)


def threshold_passive_vs_active_active(S, params):
    """Element count above which a passive RIS beats an active/active RIS."""
    rf, rg, d2, s2 = _common(params)
    P = params.P_max
    return s2 * P / (2.0 * P * d2 * rf + 8.0 * S * s2 * (P * rg + 2.0 * d2))


def threshold_active_passive_vs_active(a, params, P_t_ap=None, P_r1=None, P_t_a=None, P_r=None):
    """Element count above which an active/passive RIS beats an active RIS."""
    P_tap = params.P_max / 2.0 if P_t_ap is None else P_t_ap
    P_r1 = params.P_max / 2.0 if P_r1 is None else P_r1
    P_ta = params.P_max / 2.0 if P_t_a is None else P_t_a
    P_r = params.P_max / 2.0 if P_r is None else P_r
    rf1, rg1, d1 = params.surface(0)
    rf2, rg2, _ = params.surface(1)
    rf, rg, d2 = rf1, rg1, d1
    s2 = params.sigma_sq
    den_ap = _denominator(P_tap, P_r1, rf1, rg1, d1, s2, 4.0)
    den_a = _denominator(P_ta, P_r, rf, rg, d2, s2, 4.0)
    num = P_ta * P_r * rf * rg * den_ap - a * P_tap * P_r1 * rf1 * rg1 * den_a
    return num / (4.0 * (1.0 - a) ** 2 * P_tap * rf2 * rg2 * (P_tap * rg1 + d1) * den_a)


def active_active_size_ratio(S, params, P_t=None, P_r=None):
    """``N / N_a`` at which ``S`` active RSs match one active RIS of ``N_a`` elements."""
    rf, rg, d2, s2 = _common(params)
    P_t = params.P_max / 2.0 if P_t is None else P_t
    P_r = params.P_max / 2.0 if P_r is None else P_r
    return (P_r * d2 * rf + 4.0 * S * s2 * (P_t * rg + d2)) / (P_r * d2 * rf + 4.0 * s2 * (P_t * rg + d2))


THRESHOLDS = {
    "passive_vs_active": threshold_passive_vs_active,
    "passive_vs_active_passive": threshold_passive_vs_active_passive,
    "passive_vs_active_active": threshold_passive_vs_active_active,
    "active_passive_vs_active": threshold_active_passive_vs_active,
    "active_active_vs_active": active_active_size_ratio,
}


def size_thresholds(kind, params, **kw):
    """Dispatch to one of the RIS-size thresholds in ``THRESHOLDS``.

    ``active_active_vs_active`` returns the ratio ``N / N_a``; the others an
    element count (real-valued, not rounded).
    """
    try:
        fn = THRESHOLDS[kind]
    except KeyError:
        raise InvalidRegime(f"unknown threshold {kind!r}") from None
    return fn(params=params, **kw)


def gamma_los(kind, N, params, a=None, S=None):
    """Equal-split large-RIS SNR with deterministic (LoS) channels."""
    P, s2 = params.P_max, params.sigma_sq
    if kind == "active_passive":
        rf1, rg1, d1 = params.surface(0)
        rf2, rg2, _ = params.surface(1)
        active = a * N * P ** 2 * rf1 * rg1 / (4.0 * (P * d1 * rf1 + P * s2 * rg1 + 2.0 * s2 * d1))
        return active + (1.0 - a) ** 2 * N ** 2 * P * rf2 * rg2 / (8.0 * s2)
    if kind == "active_active":
        total = 0.0
        for s in range(S):
            rf, rg, d2 = params.surface(s)
            total += P ** 2 * rf * rg / (4.0 * (P * d2 * rf + S * P * s2 * rg + 2.0 * S * s2 * d2))
        return N / S * total
    raise InvalidRegime(f"unknown LoS configuration {kind!r}")


# --------------------------------------------------------------------------
# Monte-Carlo oracle


def _cn(rng, n, variance):
    return math.sqrt(variance / 2.0) * (rng.standard_normal(n) + 1j * rng.standard_normal(n))


def _aligned_gain(f, g, w):
    """``|f^H diag(e^{j psi}) g w|`` with the co-phasing choice of phases."""
    psi = np.angle(f) - np.angle(g * w)
    return abs(np.sum(np.conj(f) * np.exp(1j * psi) * g * w))


def _active_term(f, g, w, P_r, delta_sq, sigma_sq):
    """Active-RS SNR term and its denominator with the optimal shared amplitude."""
    n = f.size
    beta_sq = n * P_r / (abs(w) ** 2 * np.sum(np.abs(g) ** 2) + n * delta_sq)
    den = beta_sq * np.sum(np.abs(f) ** 2) * delta_sq + n * sigma_sq
    return beta_sq * _aligned_gain(f, g, w) ** 2 / den, den


def siso_realized_snr(kind, f, g, params, P_t, P_r=None):
    """SNR of one channel realization under the optimal SISO solution.

    ``f`` and ``g`` are lists of per-surface reflected/incident vectors; for
    ``active_passive`` the first surface is active.  ``P_r`` is the reflect
    budget of each active surface.
    """
    w = math.sqrt(P_t)
    s2 = params.sigma_sq
    if kind == "passive":
        return _aligned_gain(f[0], g[0], w) ** 2 / s2
    if kind == "active_passive":
        d1 = params.surface(0)[2]
        first, den = _active_term(f[0], g[0], w, P_r, d1, s2)
        second = f[0].size * _aligned_gain(f[1], g[1], w) ** 2 / den
        return first + second
    if kind == "active_active":
        return sum(_active_term(f[s], g[s], w, P_r, params.surface(s)[2], s2)[0]
                   for s in range(len(f)))
    raise InvalidRegime(f"unknown SISO configuration {kind!r}")


@dataclass(frozen=True)
class MonteCarloSnr:
    mean: float
    stderr: float
    samples: np.ndarray


def mc_siso_snr(kind, N, params, trials, rng, a=None, S=None, P_t=None, P_r=None):
    """Monte-Carlo SNR of a Rayleigh SISO link with optimal transmit/RIS settings.

    ``kind`` is ``passive`` (all budget at the BS unless ``P_t`` is given),
    ``active_passive`` (``a*N`` active elements) or ``active_active`` (``S``
    equal surfaces; ``S=1`` is a single active RIS).  Finite budgets follow
    the equal split unless overridden; ``P_r`` is the total reflect budget.
    Each trial uses an independent stream spawned from ``rng``.
    """
    if kind == "passive":
        P_t = params.P_max if P_t is None else P_t
    else:
        P_t = params.P_max / 2.0 if P_t is None else P_t
    P_r = params.P_max / 2.0 if P_r is None else P_r
    if kind == "passive":
        sizes, per_surface_Pr = [int(N)], None
    elif kind == "active_passive":
        n1 = int(round(a * N))
        sizes, per_surface_Pr = [n1, int(N) - n1], P_r
    elif kind == "active_active":
        sizes, per_surface_Pr = [int(N) // S] * S, P_r / S
    else:
        raise InvalidRegime(f"unknown SISO configuration {kind!r}")
    streams = rng.spawn(trials) if hasattr(rng, "spawn") else [np.random.default_rng(rng)] * trials
    samples = np.empty(trials)
    surf_index = (lambda s: 1) if kind == "passive" else (lambda s: s)
    for t, stream in enumerate(streams):
        f, g = [], []
        for s, n in enumerate(sizes):
            rf, rg, _ = params.surface(surf_index(s))
            f.append(_cn(stream, n, rf))
            g.append(_cn(stream, n, rg))
        samples[t] = siso_realized_snr(kind, f, g, params, P_t, per_surface_Pr)
    stderr = float(samples.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return MonteCarloSnr(float(samples.mean()), stderr, samples)


def with_noise(params, delta_sq=None, sigma_sq=None):
    """Copy of ``params`` with replaced noise powers."""
    out = params
    if delta_sq is not None:
        out = replace(out, delta_sq=delta_sq)
    if sigma_sq is not None:
        out = replace(out, sigma_sq=sigma_sq)
    return out
