"""Optional safeguarded steps that speed up the block cycle.

At high SINR the quadratic-transform lower bound is far more curved than
the rate it bounds, so each exact block update moves only a small fraction
of the way along the power-scale directions.  Two cheap corrections act on
the true objective and are accepted only when it improves:

* a relaxed block step ``x0 + omega (x1 - x0)`` with ``omega = 2, 4, ...``
  while the Dinkelbach objective keeps rising and the budgets hold;
* a golden-section search over the power scale of every user's precoder
  and every active surface, maximizing the energy efficiency.

Neither changes a fixed point of the block cycle.
"""
from __future__ import annotations

import math

import numpy as np

from ..metrics import constraint_report, reflect_power, sum_rate_and_ee, tpc

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
MAX_DOUBLINGS = 14
LOG_SCALE_FLOOR = -7.0


def true_objective(w, phis, channels, system, eta):
    """Dinkelbach objective ``R - eta P`` (bps/Hz)."""
    R, _ = sum_rate_and_ee(w, channels, phis, system)
    return R - eta * tpc(w, channels, phis, system).P_total


def feasible(w, phis, channels, system):
    rep = constraint_report(w, channels, phis, system)
    return max(v for k, v in rep.items() if k != "umc") <= 0.0


def relaxed_step(x0, x1, evaluate, max_doublings=MAX_DOUBLINGS):
    """Extrapolate from ``x0`` through ``x1`` while ``evaluate`` keeps rising.

    ``evaluate(x)`` returns ``(value, x_repaired)`` or ``None`` when ``x`` is
    infeasible.  Returns the best repaired point (``x1`` itself if nothing
    beats it).
    """
    first = evaluate(x1)
    if first is None:
        return x1
    best_val, best = first
    omega = 2.0
    for _ in range(max_doublings):
        out = evaluate(x0 + omega * (x1 - x0))
        if out is None or out[0] <= best_val:
            break
        best_val, best = out
        omega *= 2.0
    return best


def golden_max(fun, lo, hi, iters=40):
    """Golden-section maximization of ``fun`` on ``[lo, hi]``; returns ``(x, fun(x))``."""
    a, b = lo, hi
    c, d = b - GOLDEN * (b - a), a + GOLDEN * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(iters):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = fun(d)
    return (c, fc) if fc > fd else (d, fd)


def _max_user_scale(k, w, phis, channels, system):
    """Largest ``t`` such that scaling row ``k`` of ``w`` by ``t`` keeps every budget."""
    W = np.atleast_2d(w)
    own = float(np.sum(np.abs(W[k]) ** 2))
    if own <= 0:
        return 0.0
    t_sq = 1.0 + (system.power.transmit_budget - float(np.sum(np.abs(W) ** 2))) / own
    for s, Gs, phi in zip(system.surfaces, channels.G, phis):
        if not s.active:
            continue
        amp_sq = np.abs(phi) ** 2
        p_k = float(np.sum(amp_sq * np.abs(Gs @ W[k]) ** 2))
        if p_k > 0:
            rest = reflect_power(phi, Gs, W, s.delta_sq) - p_k
            t_sq = min(t_sq, (s.reflect_budget - rest) / p_k)
    return math.sqrt(max(t_sq, 0.0))


def _max_surface_scale(j, w, phis, channels, system):
    s = system.surfaces[j]
    p = reflect_power(phis[j], channels.G[j], w, s.delta_sq)
    return math.sqrt(s.reflect_budget / p) if p > 0 else 0.0


def scale_search(w, phis, channels, system, sweeps=2, iters=40):
    """Coordinate-wise energy-efficiency search over power scales.

    Coordinates are the rows of ``w`` and the coefficient vectors of active
    surfaces (a common factor keeps sub-connected structure).  Returns
    ``(w, phis, ee)``.
    """
    w = np.array(w, dtype=complex)
    phis = [np.array(p, dtype=complex) for p in phis]
    best = sum_rate_and_ee(w, channels, phis, system)[1]
    coords = [("w", k) for k in range(w.shape[0])]
    coords += [("phi", j) for j, s in enumerate(system.surfaces) if s.active]
    for _ in range(sweeps):
        for kind, idx in coords:
            if kind == "w":
                t_max = _max_user_scale(idx, w, phis, channels, system)
            else:
                t_max = _max_surface_scale(idx, w, phis, channels, system)
            if t_max <= 0:
                continue

            def build(lt, kind=kind, idx=idx):
                t = math.exp(lt)
                if kind == "w":
                    w2 = w.copy()
                    w2[idx] *= t
                    return w2, phis
                p2 = list(phis)
                p2[idx] = phis[idx] * t
                return w, p2

            hi = math.log(t_max) - 1e-12      # stay strictly inside the budgets
            lo = min(LOG_SCALE_FLOOR, hi - 1.0)

            def ee(lt):
                cand = build(lt)
                return sum_rate_and_ee(cand[0], channels, cand[1], system)[1]

            lt, val = golden_max(ee, lo, hi, iters)
            if val > best:
                cand = build(lt)
                if feasible(cand[0], cand[1], channels, system):
                    w, phis, best = cand[0], list(cand[1]), val
    return w, phis, best
