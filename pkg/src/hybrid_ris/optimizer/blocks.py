"""Closed-form block updates of the transformed energy-efficiency objective.

With auxiliary variables ``(mu, nu)`` the Dinkelbach objective ``R - eta P``
is lower-bounded (tightly, at the optimal ``(mu, nu)``) by

    g = sum_k [ln(1+mu_k) - mu_k + 2 sqrt(1+mu_k) Re{nu_k^* a_kk} - |nu_k|^2 B_k] - eta' P

where ``a_ki = h_k^H w_i``, ``B_k = sum_i |a_ki|^2 + noise_k`` and
``eta' = eta ln 2`` so that rates are in nats internally.  ``g`` is concave
and quadratic in ``w`` and in every active ``phi_s`` separately; every
update below maximizes it exactly over one block.  Reported values of ``g``
are divided by ``ln 2`` (bps/Hz units, equal to ``R - eta P`` at the optimal
auxiliary variables).

All functions take ``phis`` as a sequence of plain complex vectors, one per
non-empty surface in configuration order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..channel import effective_channels
from ..errors import InfeasibleBudget
from ..metrics import gains, noise_powers, sum_rate, tpc
from .multipliers import SpectralQuadratic, nested_search, search_level

LN2 = math.log(2.0)


@dataclass(frozen=True)
class AuxVars:
    mu: np.ndarray       # (K,) nonnegative
    nu: np.ndarray       # (K,) complex

    def __post_init__(self):
        if np.any(np.asarray(self.mu) < 0):
            raise ValueError("mu must be nonnegative")


def _as_phis(phis):
    return [np.asarray(getattr(p, "phi", p), dtype=complex) for p in phis]


def dinkelbach_objective(w, channels, phis, system, eta):
    """``R - eta P`` in bps/Hz."""
    phis = _as_phis(phis)
    R = sum_rate(_sinr_from(gains(w, channels, phis), noise_powers(channels, phis, system)))
    return R - eta * tpc(w, channels, phis, system).P_total


def _sinr_from(A, noise):
    power = np.abs(A) ** 2
    signal = np.diag(power)
    return signal / (power.sum(axis=1) - signal + noise)


def transformed_objective(w, phis, aux, channels, system, eta):
    """Value of ``g`` (bps/Hz units) at the given blocks."""
    phis = _as_phis(phis)
    A = gains(w, channels, phis)
    B = np.sum(np.abs(A) ** 2, axis=1) + noise_powers(channels, phis, system)
    mu, nu = np.asarray(aux.mu, dtype=float), np.asarray(aux.nu, dtype=complex)
    d = np.diag(A)
    g = np.sum(np.log1p(mu) - mu + 2.0 * np.sqrt(1.0 + mu) * np.real(np.conj(nu) * d) - np.abs(nu) ** 2 * B)
    P = tpc(w, channels, phis, system).P_total
    return float(g / LN2 - eta * P)


def mu_from_rho(rho):
    """Maximizer of ``ln(1+mu) - mu + 2 rho sqrt(1+mu)`` over ``mu >= 0`` (for ``rho >= 0``)."""
    rho = np.maximum(np.asarray(rho, dtype=float), 0.0)
    return 0.5 * rho * (rho + np.sqrt(rho ** 2 + 4.0))


def update_aux(w, phis, channels, system):
    """Jointly optimal ``(mu, nu)``: ``mu = SINR`` and ``nu = sqrt(1+mu) a_kk / B_k``.

    This is the fixed point of the alternating formulas
    ``mu = mu_from_rho(Re{nu^* a_kk})`` and the ``nu`` update.
    """
    phis = _as_phis(phis)
    A = gains(w, channels, phis)
    B = np.sum(np.abs(A) ** 2, axis=1) + noise_powers(channels, phis, system)
    d = np.diag(A)
    signal = np.abs(d) ** 2
    rest = B - signal
    with np.errstate(divide="ignore", invalid="ignore"):
        mu = np.where(signal > 0, signal / np.where(rest > 0, rest, np.inf), 0.0)
        nu = np.where(B > 0, np.sqrt(1.0 + mu) * d / np.where(B > 0, B, 1.0), 0.0)
    return AuxVars(mu, nu.astype(complex))


# --------------------------------------------------------------------------
# precoder block


@dataclass(frozen=True)
class PrecoderBlocks:
    A: np.ndarray          # (M, M) Hermitian PSD quadratic term
    U: np.ndarray          # (K, M) linear terms, row k = u_k
    E: tuple               # (M, M) incident-power matrices of active surfaces
    budgets: tuple         # (BS budget, active-surface budgets for the signal part)


def precoder_blocks(aux, phis, channels, system, eta):
    """Assemble ``w_k = 0.5 (A + lam_0 I + sum_s psi_s E_s)^{-1} u_k``."""
    phis = _as_phis(phis)
    H = effective_channels(channels, phis)                     # (K, M)
    eta_n = eta * LN2
    mu, nu = np.asarray(aux.mu), np.asarray(aux.nu)
    M = channels.M
    A = (np.abs(nu) ** 2)[:, None, None] * (H[:, :, None] * H[:, None, :].conj())
    A = A.sum(axis=0) + (eta_n / system.power.xi) * np.eye(M)
    E, budgets = [], [system.power.transmit_budget]
    for s, Gs, phi in zip(system.surfaces, channels.G, phis):
        if not s.active:
            continue
        Es = Gs.conj().T @ ((np.abs(phi) ** 2)[:, None] * Gs)
        Es = 0.5 * (Es + Es.conj().T)
        A = A + (eta_n / s.zeta) * Es
        E.append(Es)
        budgets.append(s.reflect_budget - s.delta_sq * float(np.sum(np.abs(phi) ** 2)))
    A = 0.5 * (A + A.conj().T)
    U = 2.0 * (np.sqrt(1.0 + mu) * nu)[:, None] * H
    return PrecoderBlocks(A, U, tuple(E), tuple(budgets))


def _solve_psd(Mtx, U, rel_eps=1e-13):
    """``0.5 Mtx^{-1} U^T`` as rows, or ``None`` if the maximization is unbounded."""
    vals, V = np.linalg.eigh(Mtx)
    top = max(float(np.max(np.abs(vals), initial=0.0)), 1e-300)
    null = vals <= rel_eps * top
    coef = V.conj().T @ U.T                                     # (M, K)
    if np.any(null):
        if np.any(np.abs(coef[null]) > 1e-10 * (np.linalg.norm(coef) + 1e-300)):
            return None
        coef = coef.copy()
        coef[null] = 0.0
        vals = np.where(null, 1.0, vals)
    return (V @ (coef / (2.0 * vals[:, None]))).T


def _precoder_values(W, E):
    out = [float(np.sum(np.abs(W) ** 2))]
    for Es in E:
        out.append(float(np.real(np.einsum("km,mn,kn->", W.conj(), Es, W))))
    return out


def update_precoder(aux, phis, channels, system, eta, tol=1e-12, stats=None, blocks=None):
    """Optimal precoder stack for fixed auxiliary variables and RIS coefficients.

    Returns ``(w, multipliers)`` where ``multipliers = (lam_0, psi_...)``.
    Raises ``InfeasibleBudget`` if amplification noise alone exhausts an
    active surface's budget.
    """
    blk = precoder_blocks(aux, phis, channels, system, eta) if blocks is None else blocks
    for j, b in enumerate(blk.budgets):
        if b <= 0:
            who = "BS" if j == 0 else f"active surface {j}"
            raise InfeasibleBudget(f"no power left for the signal at the {who}")
    M = channels.M
    eye = np.eye(M)
    mats = (eye,) + blk.E

    def solve(lams):
        Mtx = blk.A.copy()
        for lam, C in zip(lams, mats):
            if lam:
                Mtx = Mtx + lam * C
        return _solve_psd(Mtx, blk.U)

    base = max(float(np.real(np.trace(blk.A))) / M, 1e-300)
    scales = [base] + [base * M / max(float(np.real(np.trace(C))), 1e-300) for C in blk.E]
    res = nested_search(solve, lambda W: _precoder_values(W, blk.E), blk.budgets, tol,
                        scales=scales, stats=stats)
    return res.payload, res.multipliers


# --------------------------------------------------------------------------
# reflection-coefficient blocks


@dataclass(frozen=True)
class PhiBlocks:
    Q: np.ndarray          # (N_s, N_s) Hermitian PSD
    r_diag: np.ndarray     # diagonal of the reflect-power matrix R_s (active only)
    upsilon: np.ndarray    # linear term; g = Re{phi^H upsilon} - phi^H Q phi + const


def _split_gains(s_pos, w, phis, channels):
    """``c[k, i]`` (all but surface ``s_pos``) and ``b[k, i, :]`` for surface ``s_pos``."""
    W = np.atleast_2d(w)
    A = gains(W, channels, phis)
    Gs, fs, phi = channels.G[s_pos], channels.f[s_pos], phis[s_pos]
    pi = Gs @ W.T                                               # (N_s, K): column i = pi_{s,i}
    b = fs.conj()[:, None, :] * pi.T[None, :, :]                # (K, K, N_s)
    own = np.einsum("n,kin->ki", phi.conj(), b)
    return A - own, b, pi


def phi_blocks(s_pos, aux, w, phis, channels, system, eta):
    """Quadratic model of ``g`` in the coefficients of surface ``s_pos``."""
    phis = _as_phis(phis)
    surf = system.surfaces[s_pos]
    c, b, pi = _split_gains(s_pos, w, phis, channels)
    mu, nu = np.asarray(aux.mu), np.asarray(aux.nu)
    K = channels.K
    wt = np.abs(nu) ** 2
    Q = np.einsum("k,kin,kim->nm", wt, b, b.conj())
    ups = np.zeros(surf.n, dtype=complex)
    for k in range(K):
        ups += 2.0 * math.sqrt(1.0 + mu[k]) * np.conj(nu[k]) * b[k, k]
        ups -= 2.0 * wt[k] * np.einsum("i,in->n", np.conj(c[k]), b[k])
    r_diag = np.zeros(surf.n)
    if surf.active:
        fs = channels.f[s_pos]
        Q = Q + surf.delta_sq * np.diag(wt @ (np.abs(fs) ** 2))
        r_diag = np.sum(np.abs(pi) ** 2, axis=1) + surf.delta_sq
        Q = Q + (eta * LN2 / surf.zeta) * np.diag(r_diag)
    Q = 0.5 * (Q + Q.conj().T)
    return PhiBlocks(Q, r_diag, ups)


def update_phi_active(s_pos, aux, w, phis, channels, system, eta, tol=1e-12, stats=None, blocks=None):
    """Optimal coefficients ``0.5 (Q + varpi R)^{-1} upsilon`` of an active surface.

    Returns ``(phi, varpi)`` with ``phi^H R phi <= reflect budget``.
    Coordinates with a vanishing reflect-power weight do not affect ``g``
    and keep their previous values.
    """
    phis = _as_phis(phis)
    surf = system.surfaces[s_pos]
    budget = surf.reflect_budget
    if budget <= 0:
        raise InfeasibleBudget(f"surface {surf.index + 1} has no reflect budget")
    blk = phi_blocks(s_pos, aux, w, phis, channels, system, eta) if blocks is None else blocks
    live = blk.r_diag > 1e-300
    out = phis[s_pos].copy()
    if not np.any(live):
        return out, 0.0
    Q = blk.Q[np.ix_(live, live)]
    sq = SpectralQuadratic(Q, blk.r_diag[live], blk.upsilon[live])
    # frozen coordinates consume part of the budget
    frozen = float(np.sum(blk.r_diag[~live] * np.abs(out[~live]) ** 2))
    lam, _, _ = search_level(lambda v: (sq.power(v), None), budget - frozen, tol,
                             scale=max(sq.scale, 1e-300), stats=stats)
    out[live] = sq.solution(lam)
    return out, lam


def phi_model(phi, blocks):
    """``Re{phi^H upsilon} - phi^H Q phi``: ``g`` as a function of one surface, up to a constant."""
    phi = np.asarray(phi, dtype=complex)
    return float(np.real(np.vdot(phi, blocks.upsilon)) - np.real(np.vdot(phi, blocks.Q @ phi)))


def sc_amplitude_update(phi, partitions, blocks, budget, tol=1e-12, stats=None):
    """Best common amplitude per partition with the phases of ``phi`` held fixed.

    Writing ``phi = P beta`` with ``P[n, l] = exp(j arg phi_n)`` on partition
    ``l`` makes ``g`` a real quadratic in ``beta`` with a diagonal power
    constraint.  A negative ``beta_l`` flips the partition's phases by pi.
    """
    phi = np.asarray(phi, dtype=complex)
    n = phi.size
    T = n // partitions
    U = unit_modulus(phi).reshape(partitions, T)
    P = np.zeros((n, partitions), dtype=complex)
    for l in range(partitions):
        P[l * T:(l + 1) * T, l] = U[l]
    Qb = np.real(P.conj().T @ blocks.Q @ P)
    vb = np.real(P.conj().T @ blocks.upsilon)
    rb = blocks.r_diag.reshape(partitions, T).sum(axis=1)
    if np.any(rb <= 1e-300):
        return phi
    sq = SpectralQuadratic(Qb, rb, vb)
    lam, _, _ = search_level(lambda v: (sq.power(v), None), budget, tol,
                             scale=max(sq.scale, 1e-300), stats=stats)
    beta = np.real(sq.solution(lam))
    return P @ beta


def mm_objective(phi, Q, upsilon):
    """Objective minimized by the passive update: ``phi^H Q phi - Re{phi^H upsilon}``."""
    return float(np.real(np.vdot(phi, Q @ phi)) - np.real(np.vdot(phi, upsilon)))


def lambda_q(Q, mode="max_eigenvalue"):
    if mode == "max_eigenvalue":
        return float(np.linalg.eigvalsh(Q)[-1]) if Q.size else 0.0
    if mode == "trace":
        return float(np.real(np.trace(Q)))
    raise ValueError(f"unknown lambda_Q mode {mode!r}")


def surrogate(phi, phi_t, Q, upsilon, lam_q):
    """Majorizer ``z(phi | phi_t)`` of ``mm_objective`` with ``X = lam_q I``."""
    Xq_t = lam_q * phi_t - Q @ phi_t
    return float(lam_q * np.real(np.vdot(phi, phi))
                 - 2.0 * np.real(np.vdot(phi, Xq_t))
                 + np.real(np.vdot(phi_t, Xq_t))
                 - np.real(np.vdot(phi, upsilon)))


def unit_modulus(phi, fallback=None):
    """``exp(j arg phi)``; zero entries take the phase of ``fallback`` (or 0)."""
    phi = np.asarray(phi, dtype=complex)
    mag = np.abs(phi)
    out = np.ones_like(phi)
    nz = mag > 1e-300
    out[nz] = phi[nz] / mag[nz]
    if fallback is not None and np.any(~nz):
        out[~nz] = unit_modulus(np.asarray(fallback)[~nz])
    return out


def mm_step(phi_t, Q, upsilon, lam_q):
    """Minimizer of the surrogate over unit-modulus vectors."""
    q = lam_q * phi_t - Q @ phi_t + 0.5 * upsilon
    return unit_modulus(q, fallback=phi_t)


def run_mm(phi0, Q, upsilon, mode="max_eigenvalue", tol=1e-9, max_iter=100):
    """MM iterations from ``phi0`` (projected to unit modulus).

    Stops when the relative objective decrease falls below ``tol``.
    Returns ``(phi, iterations, objective_history)``.
    """
    lam = lambda_q(Q, mode)
    phi = unit_modulus(phi0)
    hist = [mm_objective(phi, Q, upsilon)]
    it = 0
    while it < max_iter:
        nxt = mm_step(phi, Q, upsilon, lam)
        val = mm_objective(nxt, Q, upsilon)
        it += 1
        if val > hist[-1]:
            # guard against round-off: never accept an ascent step
            break
        phi = nxt
        hist.append(val)
        if hist[-2] - val <= tol * max(abs(val), abs(hist[-2]), 1e-300):
            break
    return phi, it, hist


def sc_phase_update(phi, blocks, mode="max_eigenvalue", tol=1e-9, max_iter=100):
    """MM over the phases of ``phi`` with its amplitudes held fixed.

    With ``phi = D u``, ``D = diag|phi|`` and ``|u_n| = 1``, the problem has
    the unit-modulus form of the passive update with ``D Q D`` and ``D upsilon``.
    """
    phi = np.asarray(phi, dtype=complex)
    d = np.abs(phi)
    u, _, _ = run_mm(unit_modulus(phi), d[:, None] * blocks.Q * d[None, :], d * blocks.upsilon,
                     mode, tol, max_iter)
    return d * u


def update_phi_passive_mm(s_pos, aux, w, phis, channels, system, mode="max_eigenvalue",
                          tol=1e-9, max_iter=100, blocks=None):
    """Unit-modulus coefficients of a passive surface by majorization-minimization.

    Starts from the current coefficients.  Returns ``(phi, iterations)``.
    """
    phis = _as_phis(phis)
    blk = phi_blocks(s_pos, aux, w, phis, channels, system, 0.0) if blocks is None else blocks
    phi, it, _ = run_mm(phis[s_pos], blk.Q, blk.upsilon, mode, tol, max_iter)
    return phi, it
