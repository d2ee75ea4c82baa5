"""Zero-forcing precoding with random RIS phases (non-optimized baseline)."""
from __future__ import annotations

import math

import numpy as np

from ..errors import RankDeficientDirectChannel
from ..metrics import reflect_power


def zf_precoder(g, budget):
    """ZF on the direct channels, scaled so the transmit sum power equals ``budget``.

    ``g`` holds ``g_k`` as rows, so the direct-channel matrix is ``D = conj(g)``
    and ``D W = alpha I`` with ``W = alpha D^H (D D^H)^{-1}``.  Returns the
    ``(K, M)`` stack (row ``k`` is column ``k`` of ``W``) and ``alpha``.
    """
    D = np.conj(np.asarray(g, dtype=complex))
    K, M = D.shape
    if K > M:
        raise RankDeficientDirectChannel(f"zero forcing needs K <= M (got K={K}, M={M})")
    gram = D @ D.conj().T
    sv = np.linalg.svd(D, compute_uv=False)
    if sv[-1] <= 1e-12 * max(sv[0], 1e-300):
        raise RankDeficientDirectChannel("direct-channel matrix is not full row rank")
    F = D.conj().T @ np.linalg.inv(gram)
    alpha = math.sqrt(budget / float(np.real(np.trace(F @ F.conj().T))))
    return (alpha * F).T, alpha


def zf_heuristic(channels, system, rng):
    """ZF precoder plus random phases; active surfaces use a common amplitude
    that spends the whole reflect budget, passive ones unit modulus."""
    w, _ = zf_precoder(channels.g, system.power.transmit_budget)
    phis = []
    for s, Gs in zip(system.surfaces, channels.G):
        phase = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, s.n))
        if s.active:
            unit = reflect_power(phase, Gs, w, s.delta_sq)
            phase = phase * math.sqrt(s.reflect_budget / unit)
        phis.append(phase)
    return w, phis
