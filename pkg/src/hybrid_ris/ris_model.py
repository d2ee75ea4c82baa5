"""Hybrid RIS architectures and per-surface reflection-coefficient vectors.

A hybrid RIS is split into two reflecting sub-surfaces (RSs).  Each RS is
passive (unit-modulus coefficients), fully-connected active (one amplifier
per element) or sub-connected active (one amplifier shared by each block of
``T`` consecutive elements, common amplitude ``beta_tilde / sqrt(T)`` inside
the block).

Reflection coefficients are always stored as one complex vector ``phi`` per
surface; amplitudes, phases and the beamforming matrix are derived views.
The beamforming matrix acting on the incident signal is
``diag(conj(phi))``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AmplitudeExceedsCap, InvariantViolation

PASSIVE = "passive"
FC_ACTIVE = "fc"
SC_ACTIVE = "sc"
_KINDS = (PASSIVE, FC_ACTIVE, SC_ACTIVE)

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class RsArchitecture:
    """Architecture of one reflecting sub-surface.

    ``partitions`` is only meaningful for sub-connected surfaces and
    ``beta_max`` (amplitude cap, possibly infinite) only for active ones.
    """

    kind: str
    partitions: int | None = None
    beta_max: float = math.inf

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown RS architecture {self.kind!r}")
        if self.kind == PASSIVE:
            if self.partitions is not None or math.isfinite(self.beta_max):
                raise ValueError("passive surfaces carry no amplitude parameters")
        elif self.kind == FC_ACTIVE:
            if self.partitions is not None:
                raise ValueError("partitions apply to sub-connected surfaces only")
        else:
            if self.partitions is None or int(self.partitions) != self.partitions or self.partitions < 1:
                raise ValueError("sub-connected surfaces need an integer partition count >= 1")
        if self.beta_max <= 1.0:
            raise ValueError("beta_max must exceed 1 (amplifying surface)")

    @classmethod
    def passive(cls):
        return cls(PASSIVE)

    @classmethod
    def fc_active(cls, beta_max=math.inf):
        return cls(FC_ACTIVE, None, beta_max)

    @classmethod
    def sc_active(cls, partitions, beta_max=math.inf):
        return cls(SC_ACTIVE, int(partitions), beta_max)

    @property
    def is_active(self):
        return self.kind != PASSIVE

    def partition_size(self, n_elements):
        """Elements per amplifier, ``T = N_s / L_s`` (1 for FC, N_s for passive)."""
        if self.kind == SC_ACTIVE:
            if n_elements % self.partitions:
                raise InvariantViolation(
                    f"{self.partitions} partitions do not divide {n_elements} elements")
            return n_elements // self.partitions
        if self.kind == FC_ACTIVE:
            return 1
        return n_elements

    def amplifier_count(self, n_elements):
        if self.kind == SC_ACTIVE:
            return self.partitions
        if self.kind == FC_ACTIVE:
            return n_elements
        return 0

    def label(self):
        if self.kind == SC_ACTIVE:
            return f"sc(L={self.partitions})"
        return self.kind


def coupling_matrix(L, T):
    """Binary partition-to-element map ``I_L kron 1_T`` of shape ``(L*T, L)``."""
    if L < 1 or T < 1:
        raise ValueError("L and T must be positive")
    return np.kron(np.eye(L, dtype=int), np.ones((T, 1), dtype=int))


@dataclass(frozen=True)
class RsBeamforming:
    """Reflection coefficients of one surface (diagonal of ``conj(Phi_s)``)."""

    phi: np.ndarray

    def __post_init__(self):
        phi = np.asarray(self.phi, dtype=complex).reshape(-1)
        phi.setflags(write=False)
        object.__setattr__(self, "phi", phi)

    def __len__(self):
        return self.phi.size

    @property
    def amplitudes(self):
        return np.abs(self.phi)

    @property
    def phases(self):
        """Phase shifts wrapped to ``[0, 2*pi)``."""
        return np.mod(np.angle(self.phi), TWO_PI)

    @property
    def phase_shifter_settings(self):
        """Physical phase-shifter settings of an SC partition (half the phase)."""
        return self.phases / 2.0

    def matrix(self):
        """Beamforming matrix ``Phi_s = diag(conj(phi))``."""
        return np.diag(np.conj(self.phi))

    def violations(self, arch, tol=1e-9):
        """Human-readable list of architecture invariants that do not hold."""
        amp = self.amplitudes
        out = []
        if arch.kind == PASSIVE:
            if np.max(np.abs(amp - 1.0), initial=0.0) > max(tol, 1e-12):
                out.append("passive entries are not unit-modulus")
            return out
        if np.any(amp > arch.beta_max * (1 + tol)):
            out.append("amplitude exceeds beta_max")
        if arch.kind == SC_ACTIVE:
            T = arch.partition_size(amp.size)
            blocks = amp.reshape(arch.partitions, T)
            scale = np.maximum(blocks.max(axis=1), 1e-300)
            if np.any((blocks.max(axis=1) - blocks.min(axis=1)) / scale > tol):
                out.append("amplitude not constant within a partition")
            if np.any(blocks[:, 0] * math.sqrt(T) > arch.beta_max * (1 + tol)):
                out.append("partition amplitude exceeds beta_max")
        return out


def assemble_sc_phi(beta_tilde, theta, beta_max=math.inf):
    """Sub-connected coefficients ``phi_n = beta_tilde[l(n)] / sqrt(T) * exp(j*theta_n)``.

    Partitions are contiguous blocks of ``T = len(theta) / len(beta_tilde)``
    elements.
    """
    beta_tilde = np.asarray(beta_tilde, dtype=float).reshape(-1)
    theta = np.asarray(theta, dtype=float).reshape(-1)
    L = beta_tilde.size
    if theta.size % L:
        raise ValueError("phase vector length must be a multiple of the partition count")
    if np.any(beta_tilde < 0):
        raise ValueError("partition amplitudes must be nonnegative")
    if np.any(beta_tilde > beta_max):
        raise AmplitudeExceedsCap(f"partition amplitude above cap {beta_max}")
    T = theta.size // L
    amp = coupling_matrix(L, T) @ beta_tilde / math.sqrt(T)
    return RsBeamforming(amp * np.exp(1j * theta))


def decompose_phi(phi, L):
    """Split coefficients into ``(beta_tilde, theta, deviation)``.

    ``beta_tilde[l]`` is ``sqrt(T)`` times the mean amplitude of partition
    ``l``; ``deviation`` is the largest within-partition amplitude spread
    (zero for an exactly sub-connected vector).
    """
    phi = phi.phi if isinstance(phi, RsBeamforming) else np.asarray(phi, dtype=complex)
    if phi.size % L:
        raise ValueError("length not divisible by the partition count")
    T = phi.size // L
    blocks = np.abs(phi).reshape(L, T)
    beta_tilde = math.sqrt(T) * blocks.mean(axis=1)
    theta = np.mod(np.angle(phi), TWO_PI)
    deviation = float(np.max(blocks.max(axis=1) - blocks.min(axis=1)))
    return beta_tilde, theta, deviation


def static_power(arch, n_elements, P_PS, P_DC):
    """Circuit power of a surface: phase shifters plus amplifier DC bias."""
    return n_elements * P_PS + arch.amplifier_count(n_elements) * P_DC


def project_to_architecture(phi, arch):
    """Nearest coefficient vector satisfying the architecture's structure.

    Phases are kept.  Passive: unit modulus.  FC: amplitudes clipped at
    ``beta_max``.  SC: each partition takes its mean amplitude (least-squares
    common value), clipped at ``beta_max / sqrt(T)``.
    """
    phi = phi.phi if isinstance(phi, RsBeamforming) else np.asarray(phi, dtype=complex)
    phase = np.exp(1j * np.angle(phi))
    amp = np.abs(phi)
    if arch.kind == PASSIVE:
        return RsBeamforming(phase)
    if arch.kind == FC_ACTIVE:
        return RsBeamforming(np.minimum(amp, arch.beta_max) * phase)
    T = arch.partition_size(phi.size)
    common = amp.reshape(arch.partitions, T).mean(axis=1)
    common = np.minimum(common, arch.beta_max / math.sqrt(T))
    return RsBeamforming(np.repeat(common, T) * phase)


@dataclass(frozen=True)
class Surface:
    """Resolved view of one non-empty RS inside a hybrid configuration."""

    index: int
    arch: RsArchitecture
    n: int
    offset: int
    delta_sq: float
    zeta: float
    P_max: float
    P_PS: float
    P_DC: float

    @property
    def active(self):
        return self.arch.is_active

    @property
    def static_power(self):
        return static_power(self.arch, self.n, self.P_PS, self.P_DC)

    @property
    def reflect_budget(self):
        """Radiated reflect-power budget ``zeta * (P_max - W_r)`` (active only)."""
        return self.zeta * (self.P_max - self.static_power)

    @property
    def slice(self):
        return slice(self.offset, self.offset + self.n)


def _pair(value, name):
    if np.ndim(value) == 0:
        return (float(value), float(value))
    value = tuple(float(v) for v in value)
    if len(value) != 2:
        raise ValueError(f"{name} needs one value or one per surface")
    return value


@dataclass(frozen=True)
class HybridRisConfig:
    """Element split and per-surface hardware/power parameters.

    Per-surface fields accept a scalar (shared) or a pair.  ``a == 1`` is
    accepted as a single-surface RIS built from ``arch1`` alone, used for
    the non-hybrid benchmark architectures.
    """

    N: int
    a: float
    arch1: RsArchitecture
    arch2: RsArchitecture = field(default_factory=RsArchitecture.passive)
    delta_sq: tuple = 1e-11
    zeta: tuple = 0.909
    P_PS: float = 0.01
    P_DC: float = 0.01
    P_max: tuple = 10 ** 0.9

    def __post_init__(self):
        for name in ("delta_sq", "zeta", "P_max"):
            object.__setattr__(self, name, _pair(getattr(self, name), name))
        if not 0.0 < self.a <= 1.0:
            raise InvariantViolation("split fraction must lie in (0, 1]", "a")
        n1 = self.a * self.N
        if abs(n1 - round(n1)) > 1e-9:
            raise InvariantViolation(f"a*N = {n1:g} is not an integer", "a")
        if round(n1) < 1 or (self.a < 1 and round(n1) >= self.N):
            raise InvariantViolation("both surfaces need at least one element", "a")
        if any(not 0.0 < z <= 1.0 for z in self.zeta):
            raise InvariantViolation("amplifier efficiency must lie in (0, 1]", "zeta")
        if any(d < 0 for d in self.delta_sq):
            raise InvariantViolation("noise power must be nonnegative", "delta_sq")
        for s in self.surfaces:
            s.arch.partition_size(s.n)
            if s.active and s.reflect_budget <= 0:
                raise InvariantViolation(
                    f"surface {s.index + 1} budget does not cover its static power", "P_max")

    @property
    def N1(self):
        return int(round(self.a * self.N))

    @property
    def N2(self):
        return self.N - self.N1

    @property
    def single(self):
        return self.N2 == 0

    @property
    def surfaces(self):
        archs = (self.arch1, self.arch2)
        sizes = (self.N1, self.N2)
        out, offset = [], 0
        for s in range(2):
            if sizes[s] == 0:
                continue
            out.append(Surface(s, archs[s], sizes[s], offset, self.delta_sq[s],
                               self.zeta[s], self.P_max[s], self.P_PS, self.P_DC))
            offset += sizes[s]
        return out

    @property
    def sizes(self):
        return tuple(s.n for s in self.surfaces)

    @property
    def active_count(self):
        return sum(s.active for s in self.surfaces)

    def label(self):
        if self.single:
            return self.arch1.label()
        return f"{self.arch1.label()}/{self.arch2.label()}"
