"""Lagrange-multiplier search for quadratic maximizations with power budgets.

Each block update has the form ``x(lam) = argmax L(x, lam)`` with constraint
values ``c_j(x(lam))`` that are non-increasing in their own multiplier.
Multipliers are resolved level by level: the outer level fixes ``lam_0``,
the inner levels are re-solved for every trial value, and the outer
constraint value stays monotone because it is the derivative of a partially
minimized (convex) dual function.

Each level first tries ``lam = 0``; only a violated constraint triggers a
bracket-and-refine search, which returns the feasible end of the bracket so
complementary slackness holds up to the tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

MAX_STEPS = 200


@dataclass
class SearchStats:
    evaluations: int = 0
    searches: int = 0
    steps: list = field(default_factory=list)


@dataclass(frozen=True)
class SearchResult:
    multipliers: tuple
    payload: object
    values: np.ndarray
    evaluations: int


def _transform(c, b):
    # 1/sqrt(c) is close to affine in the multiplier for quadratic forms
    if not np.isfinite(c):
        return -1.0 / math.sqrt(b)
    return 1.0 / math.sqrt(max(c, 1e-300)) - 1.0 / math.sqrt(b)


def search_level(evaluate, budget, tol, scale=1.0, floor=1e-14, stats=None):
    """Smallest ``lam >= 0`` with ``evaluate(lam)[0] <= budget``.

    ``evaluate`` returns ``(constraint_value, payload)`` and must be
    non-increasing in ``lam``; ``inf`` marks an unbounded subproblem.
    Returns ``(lam, value, payload)`` with the value feasible and, when
    ``lam > 0``, within ``tol`` (relative) of the budget or at the
    resolution limit ``floor * scale``.
    """
    c0, p0 = evaluate(0.0)
    if c0 <= budget:
        return 0.0, c0, p0
    if stats is not None:
        stats.searches += 1
    lo, c_lo = 0.0, c0
    hi = max(float(scale), 1e-300)
    c_hi, p_hi = evaluate(hi)
    steps = 1
    while c_hi > budget:
        lo, c_lo = hi, c_hi
        hi *= 10.0
        c_hi, p_hi = evaluate(hi)
        steps += 1
        if steps > MAX_STEPS or not math.isfinite(hi):
            raise FloatingPointError("multiplier bracket did not close")
    r_lo, r_hi = _transform(c_lo, budget), _transform(c_hi, budget)
    side = 0
    while steps < MAX_STEPS:
        if c_hi >= budget * (1.0 - tol) or hi - lo <= tol * hi or hi <= floor * scale:
            break
        # Illinois step on the transformed residual, bisection as fallback
        if r_hi > r_lo:
            lam = hi - r_hi * (hi - lo) / (r_hi - r_lo)
        else:
            lam = 0.5 * (lo + hi)
        if not lo < lam < hi:
            lam = 0.5 * (lo + hi)
        c, p = evaluate(lam)
        steps += 1
        r = _transform(c, budget)
        if c <= budget:
            hi, c_hi, p_hi, r_hi = lam, c, p, r
            if side == 1:
                r_lo *= 0.5
            side = 1
        else:
            lo, c_lo, r_lo = lam, c, r
            if side == -1:
                r_hi *= 0.5
            side = -1
    if stats is not None:
        stats.steps.append(steps)
    return hi, c_hi, p_hi


def nested_search(solve, values, budgets, tol, scales=None, stats=None):
    """Resolve one multiplier per constraint by nested monotone searches.

    ``solve(lams)`` returns a payload (``None`` if the Lagrangian is
    unbounded for these multipliers) and ``values(payload)`` the array of
    constraint values, ``budgets`` the matching limits.  Level ``j`` of the
    nest governs constraint ``j``.
    """
    budgets = [float(b) for b in budgets]
    n = len(budgets)
    scales = [1.0] * n if scales is None else list(scales)
    stats = SearchStats() if stats is None else stats
    start = stats.evaluations

    def leaf(lams):
        stats.evaluations += 1
        payload = solve(tuple(lams))
        if payload is None:
            return None, np.full(n, np.inf)
        return payload, np.asarray(values(payload), dtype=float)

    def level(j, fixed):
        if j == n:
            payload, vals = leaf(fixed)
            return tuple(fixed), payload, vals

        def evaluate(lam):
            out = level(j + 1, fixed + [lam])
            return out[2][j], out

        _, _, out = search_level(evaluate, budgets[j], tol, scales[j], stats=stats)
        return out

    lams, payload, vals = level(0, [])
    return SearchResult(lams, payload, vals, stats.evaluations - start)


class SpectralQuadratic:
    """``x(lam) = 0.5 (Q + lam R)^{-1} v`` for Hermitian ``Q`` and diagonal ``R > 0``.

    The whitened pencil is diagonalized once so that ``x(lam)`` and the
    constraint value ``x^H R x`` cost ``O(n)`` per multiplier.
    """

    def __init__(self, Q, r_diag, v, rel_eps=1e-13):
        r_diag = np.asarray(r_diag, dtype=float)
        self.r_sqrt = np.sqrt(r_diag)
        Qw = Q / np.outer(self.r_sqrt, self.r_sqrt)
        Qw = 0.5 * (Qw + Qw.conj().T)
        self.eigvals, self.V = np.linalg.eigh(Qw)
        self.coef = self.V.conj().T @ (v / self.r_sqrt)
        top = max(float(np.max(np.abs(self.eigvals), initial=0.0)), 1e-300)
        self.null = self.eigvals <= rel_eps * top
        self.unbounded_at_zero = bool(np.any(np.abs(self.coef[self.null]) > 1e-12 * (np.linalg.norm(self.coef) + 1e-300)))
        self.scale = top

    def _denoms(self, lam):
        d = self.eigvals + lam
        return d

    def power(self, lam):
        """Constraint value ``x(lam)^H R x(lam)``."""
        if lam == 0.0 and self.unbounded_at_zero:
            return math.inf
        d = self._denoms(lam)
        keep = d > 0 if lam > 0 else ~self.null
        return float(np.sum(np.abs(self.coef[keep]) ** 2 / (4.0 * d[keep] ** 2)))

    def solution(self, lam):
        d = self._denoms(lam)
        keep = d > 0 if lam > 0 else ~self.null
        y = np.zeros_like(self.coef)
        y[keep] = self.coef[keep] / (2.0 * d[keep])
        return (self.V @ y) / self.r_sqrt
