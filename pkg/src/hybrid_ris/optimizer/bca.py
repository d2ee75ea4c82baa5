"""Dinkelbach outer loop around block-coordinate ascent.

One outer iteration runs the block cycle aux -> w -> phi_1 -> phi_2 with a
fixed ``eta`` and then sets ``eta = R / P`` at the new point.  The same code
handles active/passive and active/active systems; which coefficient update
runs for a surface follows from its architecture.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import InfeasibleBudget, NonFiniteValue
from ..metrics import constraint_report, reflect_power, sum_rate_and_ee, tpc
from ..ris_model import SC_ACTIVE, RsBeamforming, decompose_phi, project_to_architecture
from .blocks import (AuxVars, phi_blocks, phi_model, sc_amplitude_update, sc_phase_update, transformed_objective,
                     update_aux, update_phi_active, update_phi_passive_mm, update_precoder)
from .acceleration import feasible, relaxed_step, scale_search, true_objective
from .multipliers import SearchStats

PER_PASS = "per_pass"
PER_CONVERGENCE = "per_convergence"


@dataclass(frozen=True)
class SolverConfig:
    T_max: int = 50
    bca_tol: float = 1e-6
    dinkelbach_tol: float = 1e-4
    multiplier_tol: float = 1e-12
    mm_iters: int = 100
    lambda_q_mode: str = "max_eigenvalue"
    sc_projection: bool = True
    eta_update: str = PER_PASS
    bca_max_passes: int = 50          # per-convergence mode only
    init_fraction: float = 0.5
    record_blocks: bool = False
    accelerate: bool = False          # safeguarded relaxed steps and power-scale search

    def __post_init__(self):
        if self.T_max < 1 or self.mm_iters < 1 or self.bca_max_passes < 1:
            raise ValueError("iteration caps must be at least 1")
        for name in ("bca_tol", "dinkelbach_tol", "multiplier_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.lambda_q_mode not in ("max_eigenvalue", "trace"):
            raise ValueError(f"unknown lambda_q_mode {self.lambda_q_mode!r}")
        if self.eta_update not in (PER_PASS, PER_CONVERGENCE):
            raise ValueError(f"unknown eta_update {self.eta_update!r}")
        if not 0.0 < self.init_fraction <= 1.0:
            raise ValueError("init_fraction must lie in (0, 1]")


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    g: float              # transformed objective at the end of the pass (eta used in the pass)
    R: float
    P_total: float
    eta: float            # R / P after the pass
    eta_used: float
    residual: float       # |R - eta_used P| / P
    violation: float      # largest relative budget violation (<= 0 when feasible)


@dataclass
class Diagnostics:
    outer_iterations: int = 0          # I_0
    bca_passes: int = 0
    mm_iterations: list = field(default_factory=list)   # I_MM per passive update
    multiplier_evaluations: int = 0
    multiplier_searches: int = 0
    projection_deviation: list = field(default_factory=list)
    headroom_guards: int = 0


@dataclass
class SolverState:
    w: np.ndarray
    phis: list
    aux: AuxVars
    eta: float
    trace: list = field(default_factory=list)
    block_trace: list = field(default_factory=list)   # per pass: g before and after each block
    diagnostics: Diagnostics = field(default_factory=Diagnostics)
    converged: bool = False

    @property
    def R(self):
        return self.trace[-1].R if self.trace else float("nan")

    @property
    def P_total(self):
        return self.trace[-1].P_total if self.trace else float("nan")

    def beamforming(self):
        return [RsBeamforming(p) for p in self.phis]

    def trace_rows(self):
        """Rows ``(iteration, g, R, P_total, eta, residual, violation)`` for CSV export."""
        return [(r.iteration, r.g, r.R, r.P_total, r.eta, r.residual, r.violation) for r in self.trace]


def _check_finite(name, *arrays):
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise NonFiniteValue(f"{name} update produced non-finite values")


def initial_point(channels, system, rng, fraction=0.5):
    """Random interior start: ``w`` at ``fraction`` of the BS budget, random
    phases, and a common active amplitude filling ``fraction`` of each reflect
    budget."""
    K, M = channels.K, channels.M
    w = rng.standard_normal((K, M)) + 1j * rng.standard_normal((K, M))
    w *= math.sqrt(fraction * system.power.transmit_budget / np.sum(np.abs(w) ** 2))
    phis = []
    for s, Gs in zip(system.surfaces, channels.G):
        phase = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, s.n))
        if s.active:
            unit = reflect_power(phase, Gs, w, s.delta_sq)
            beta = math.sqrt(fraction * s.reflect_budget / unit) if unit > 0 else 1.0
            if math.isfinite(s.arch.beta_max):
                T = s.arch.partition_size(s.n)
                beta = min(beta, s.arch.beta_max / math.sqrt(T))
            phase = beta * phase
        phis.append(phase)
    return w, phis


def _max_violation(w, channels, phis, system):
    rep = constraint_report(w, channels, phis, system)
    return max(v for k, v in rep.items() if k != "umc")


def _restore_structure(phi, surf, Gs, w, diag, blocks, prev, cfg, stats):
    """Project onto the surface's structure without losing ground on ``g``.

    SC candidates: the projected free solution, and the previous coefficients
    after a phase (MM) step; both then get the best common amplitude per
    partition.  The highest-scoring feasible candidate wins, the previous
    coefficients included.
    """
    arch = surf.arch
    if arch.kind != SC_ACTIVE and not math.isfinite(arch.beta_max):
        return phi
    budget = surf.reflect_budget
    if arch.kind == SC_ACTIVE:
        diag.projection_deviation.append(decompose_phi(phi, arch.partitions)[2])
    candidates = [project_to_architecture(phi, arch).phi.copy()]
    prev_ok = not RsBeamforming(prev).violations(arch)
    if prev_ok:
        p = reflect_power(prev, Gs, w, surf.delta_sq)
        prev = prev * math.sqrt(budget / p) if p > budget else prev.copy()
    if arch.kind == SC_ACTIVE and not math.isfinite(arch.beta_max):
        if prev_ok:
            candidates.append(sc_phase_update(prev, blocks, cfg.lambda_q_mode, cfg.bca_tol, cfg.mm_iters))
        candidates = [sc_amplitude_update(c, arch.partitions, blocks, budget, cfg.multiplier_tol, stats)
                      for c in candidates]
    for c in candidates:
        p = reflect_power(c, Gs, w, surf.delta_sq)
        if p > budget:
            c *= math.sqrt(budget / p)
    if prev_ok:
        candidates.append(prev)
    return max(candidates, key=lambda c: phi_model(c, blocks))


def _headroom_guard(w, channels, phis, system, diag):
    # keep room for the signal in every active budget (w is fixed here)
    for j, (s, Gs) in enumerate(zip(system.surfaces, channels.G)):
        if not s.active:
            continue
        noise = s.delta_sq * float(np.sum(np.abs(phis[j]) ** 2))
        if s.reflect_budget - noise <= 1e-12 * s.reflect_budget:
            scale = math.sqrt(0.9 * s.reflect_budget / max(noise, 1e-300))
            phis[j] = phis[j] * scale
            diag.headroom_guards += 1


def _repair(phi, surf, Gs, w, project):
    out = project_to_architecture(phi, surf.arch).phi.copy() if project else phi
    p = reflect_power(out, Gs, w, surf.delta_sq)
    if p > surf.reflect_budget:
        out = out * math.sqrt(surf.reflect_budget / p)
    return out


def _relax_precoder(w0, w1, state, channels, system, eta):
    def evaluate(x):
        if not feasible(x, state.phis, channels, system):
            return None
        return true_objective(x, state.phis, channels, system, eta), x
    return relaxed_step(w0, w1, evaluate)


def _relax_surface(j, phi0, phi1, state, channels, system, eta, project):
    surf, Gs = system.surfaces[j], channels.G[j]

    def evaluate(x):
        x = _repair(x, surf, Gs, state.w, project)
        phis = list(state.phis)
        phis[j] = x
        return true_objective(state.w, phis, channels, system, eta), x
    return relaxed_step(phi0, phi1, evaluate)


def bca_pass(state, channels, system, cfg, eta, stats):
    """One block cycle at fixed ``eta``; returns the list of ``g`` values.

    With ``cfg.accelerate`` the auxiliary variables are refreshed before
    every surface block, block steps are extrapolated, and a power-scale
    search closes the pass.
    """
    diag = state.diagnostics
    record = [transformed_objective(state.w, state.phis, state.aux, channels, system, eta)] \
        if cfg.record_blocks else []

    state.aux = update_aux(state.w, state.phis, channels, system)
    _check_finite("auxiliary", state.aux.mu, state.aux.nu)
    if cfg.record_blocks:
        record.append(transformed_objective(state.w, state.phis, state.aux, channels, system, eta))

    _headroom_guard(state.w, channels, state.phis, system, diag)
    w, _ = update_precoder(state.aux, state.phis, channels, system, eta, cfg.multiplier_tol, stats)
    _check_finite("precoder", w)
    if cfg.accelerate:
        w = _relax_precoder(state.w, w, state, channels, system, eta)
    state.w = w
    if cfg.record_blocks:
        record.append(transformed_objective(state.w, state.phis, state.aux, channels, system, eta))

    for j, s in enumerate(system.surfaces):
        if cfg.accelerate:
            state.aux = update_aux(state.w, state.phis, channels, system)
        if s.active:
            blk = phi_blocks(j, state.aux, state.w, state.phis, channels, system, eta)
            phi, _ = update_phi_active(j, state.aux, state.w, state.phis, channels, system, eta,
                                       cfg.multiplier_tol, stats, blocks=blk)
            if cfg.sc_projection:
                phi = _restore_structure(phi, s, channels.G[j], state.w, diag, blk,
                                         state.phis[j], cfg, stats)
            if cfg.accelerate:
                phi = _relax_surface(j, state.phis[j], phi, state, channels, system, eta,
                                     cfg.sc_projection)
        else:
            phi, it = update_phi_passive_mm(j, state.aux, state.w, state.phis, channels, system,
                                            cfg.lambda_q_mode, cfg.bca_tol, cfg.mm_iters)
            diag.mm_iterations.append(it)
        _check_finite("reflection-coefficient", phi)
        state.phis[j] = phi
        if cfg.record_blocks:
            record.append(transformed_objective(state.w, state.phis, state.aux, channels, system, eta))
    if cfg.accelerate:
        state.w, state.phis, _ = scale_search(state.w, state.phis, channels, system)
    diag.bca_passes += 1
    return record


def bca_solve(channels, system, solver_config=None, rng=None, init=None):
    """Maximize energy efficiency ``R / P`` over precoders and RIS coefficients.

    ``init`` may supply a starting ``(w, phis)``; otherwise a random interior
    point is drawn from ``rng`` (a ``numpy.random.Generator`` or seed).
    """
    cfg = SolverConfig() if solver_config is None else solver_config
    if system.power.transmit_budget <= 0:
        raise InfeasibleBudget("BS budget does not cover its static power")
    if init is None:
        rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
        w, phis = initial_point(channels, system, rng, cfg.init_fraction)
    else:
        w = np.array(init[0], dtype=complex)
        phis = [np.array(getattr(p, "phi", p), dtype=complex) for p in init[1]]
    aux = update_aux(w, phis, channels, system)
    state = SolverState(w, phis, aux, 0.0)
    stats = SearchStats()
    eta = 0.0
    calm = 0
    for t in range(1, cfg.T_max + 1):
        if cfg.eta_update == PER_PASS:
            rec = bca_pass(state, channels, system, cfg, eta, stats)
            if cfg.record_blocks:
                state.block_trace.append(rec)
        else:
            prev = None
            for _ in range(cfg.bca_max_passes):
                rec = bca_pass(state, channels, system, cfg, eta, stats)
                if cfg.record_blocks:
                    state.block_trace.append(rec)
                g = transformed_objective(state.w, state.phis, state.aux, channels, system, eta)
                if prev is not None and abs(g - prev) <= cfg.bca_tol * max(abs(g), 1.0):
                    break
                prev = g
        g = transformed_objective(state.w, state.phis, state.aux, channels, system, eta)
        R, _ = sum_rate_and_ee(state.w, channels, state.phis, system)
        P = tpc(state.w, channels, state.phis, system).P_total
        new_eta = R / P
        residual = abs(R - eta * P) / P
        state.trace.append(IterationRecord(t, g, R, P, new_eta, eta,
                                           residual, _max_violation(state.w, channels, state.phis, system)))
        rel = residual / max(new_eta, 1e-300) if new_eta > 0 else 0.0
        calm = calm + 1 if (residual < cfg.dinkelbach_tol and rel < cfg.dinkelbach_tol) else 0
        eta = new_eta
        state.eta = eta
        if calm >= 2:
            state.converged = True
            break
    d = state.diagnostics
    d.outer_iterations = len(state.trace)
    d.multiplier_evaluations = stats.evaluations
    d.multiplier_searches = stats.searches
    return state
