"""Channel realizations, path loss, user drops and effective channels.

Storage convention: ``g[k]`` is the direct BS->user vector ``g_k``,
``G[s]`` the BS->RS matrix and ``f[s][k]`` the RS->user vector ``f_{k,s}``.
The received signal coefficient for a precoder ``w`` is
``h_k^H w = g_k^H w + sum_s f_{k,s}^H diag(conj(phi_s)) G_s w``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidDistance, ShapeError
from .units import db_to_lin

RAYLEIGH = "rayleigh"
RICIAN = "rician"
PURE_LOS = "los"

# (intercept dB, slope dB/decade); distances in metres, valid for d >= 1 m
PATH_LOSS_MODELS = {
    "bs_ris": (37.3, 22.0),
    "ris_user": (37.3, 22.0),
    "bs_user": (41.2, 28.7),
}


@dataclass(frozen=True)
class Geometry:
    bs_pos: tuple = (0.0, -60.0)
    ris_pos: tuple = (300.0, 10.0)
    D: float = 300.0
    r: float = 5.0
    K: int = 2

    def __post_init__(self):
        if self.D <= 0:
            raise ValueError("cluster distance D must be positive")
        if self.r < 0:
            raise ValueError("cluster radius must be nonnegative")

    @property
    def cluster_center(self):
        return np.array([self.D, 0.0])


@dataclass(frozen=True)
class FadingSpec:
    """Small-scale fading law; ``kappa`` is the linear Rician factor."""

    kind: str = RICIAN
    kappa: float = 1.0

    def __post_init__(self):
        if self.kind not in (RAYLEIGH, RICIAN, PURE_LOS):
            raise ValueError(f"unknown fading kind {self.kind!r}")
        if self.kappa < 0:
            raise ValueError("Rician factor must be nonnegative")

    @classmethod
    def rayleigh(cls):
        return cls(RAYLEIGH, 0.0)

    @classmethod
    def rician(cls, kappa):
        return cls(RICIAN, float(kappa))

    @classmethod
    def pure_los(cls):
        return cls(PURE_LOS, math.inf)


@dataclass(frozen=True)
class ChannelSet:
    g: np.ndarray          # (K, M)
    G: tuple               # per surface (N_s, M)
    f: tuple               # per surface (K, N_s)

    def __post_init__(self):
        g = np.asarray(self.g, dtype=complex)
        if g.ndim != 2:
            raise ShapeError("direct channels must be a (K, M) array")
        G = tuple(np.asarray(x, dtype=complex) for x in self.G)
        f = tuple(np.asarray(x, dtype=complex) for x in self.f)
        if len(G) != len(f):
            raise ShapeError("need one incident and one reflected channel per surface")
        K, M = g.shape
        for Gs, fs in zip(G, f):
            if Gs.ndim != 2 or Gs.shape[1] != M or fs.shape != (K, Gs.shape[0]):
                raise ShapeError("channel dimensions are inconsistent")
        for arr in (g, *G, *f):
            if not np.all(np.isfinite(arr)):
                raise ShapeError("channel entries must be finite")
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "f", f)

    @property
    def K(self):
        return self.g.shape[0]

    @property
    def M(self):
        return self.g.shape[1]

    @property
    def sizes(self):
        return tuple(Gs.shape[0] for Gs in self.G)

    @classmethod
    def from_full(cls, g, G_full, f_full, sizes):
        """Split full-array channels ``(N, M)`` / ``(K, N)`` into contiguous surfaces."""
        if sum(sizes) != G_full.shape[0]:
            raise ShapeError("surface sizes do not add up to the array size")
        edges = np.cumsum((0,) + tuple(sizes))
        G = tuple(G_full[edges[i]:edges[i + 1]] for i in range(len(sizes)))
        f = tuple(f_full[:, edges[i]:edges[i + 1]] for i in range(len(sizes)))
        return cls(g, G, f)

    def scaled(self, factor):
        return ChannelSet(self.g * factor, tuple(x * factor for x in self.G),
                          tuple(x * factor for x in self.f))


def path_loss_db(d, link):
    """Distance-dependent path loss in dB for ``link`` in {bs_ris, ris_user, bs_user}."""
    try:
        intercept, slope = PATH_LOSS_MODELS[link]
    except KeyError:
        raise ValueError(f"unknown link {link!r}") from None
    d = np.asarray(d, dtype=float)
    if np.any(d < 1.0):
        raise InvalidDistance("path-loss model is not calibrated below 1 m")
    out = intercept + slope * np.log10(d)
    return float(out) if out.ndim == 0 else out


def _cn(rng, shape, variance):
    scale = math.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def sample_channel(rows, cols, variance, fading, rng, los=None):
    """Draw a ``rows x cols`` channel with per-entry power ``variance``.

    Rician entries are ``sqrt(k/(1+k)) * sqrt(variance) * L + sqrt(1/(1+k)) * S``
    with ``S`` i.i.d. CN(0, variance) and ``L`` a unit-modulus LoS component.
    ``L`` is drawn from ``rng`` (random but then fixed phases) unless given.
    """
    if variance <= 0:
        raise ValueError("variance must be positive")
    shape = (rows, cols)
    if fading.kind == RAYLEIGH:
        return _cn(rng, shape, variance)
    if los is None:
        los = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, shape))
    los = np.asarray(los, dtype=complex).reshape(shape)
    if fading.kind == PURE_LOS:
        return math.sqrt(variance) * los
    k = fading.kappa
    scattered = _cn(rng, shape, variance)
    return math.sqrt(k / (1 + k)) * math.sqrt(variance) * los + math.sqrt(1 / (1 + k)) * scattered


def drop_users(geom, rng):
    """``K`` positions uniform over the disk of radius ``r`` around ``(D, 0)``."""
    radius = geom.r * np.sqrt(rng.uniform(size=geom.K))
    angle = rng.uniform(0.0, 2.0 * np.pi, size=geom.K)
    return geom.cluster_center + np.stack([radius * np.cos(angle), radius * np.sin(angle)], axis=1)


def link_variances(geom, users):
    """Linear large-scale gains ``(bs_ris, ris_user[K], bs_user[K])``."""
    bs = np.asarray(geom.bs_pos, dtype=float)
    ris = np.asarray(geom.ris_pos, dtype=float)
    d_br = np.linalg.norm(ris - bs)
    d_ru = np.linalg.norm(users - ris, axis=1)
    d_bu = np.linalg.norm(users - bs, axis=1)
    return (db_to_lin(-path_loss_db(d_br, "bs_ris")),
            db_to_lin(-path_loss_db(d_ru, "ris_user")),
            db_to_lin(-path_loss_db(d_bu, "bs_user")))


def generate_channels(geom, users, sizes, M, fading, rng):
    """One realization of all links for a hybrid RIS with surface ``sizes``.

    The two surfaces share one physical panel at ``geom.ris_pos``; the full
    ``N``-element array is drawn once and split contiguously, so different
    splits of the same realization see the same element channels.
    """
    N = int(sum(sizes))
    K = users.shape[0]
    v_br, v_ru, v_bu = link_variances(geom, users)
    G_full = sample_channel(N, M, v_br, fading, rng)
    f_full = np.vstack([sample_channel(1, N, v_ru[k], fading, rng) for k in range(K)])
    g = np.vstack([sample_channel(1, M, v_bu[k], fading, rng) for k in range(K)])
    return ChannelSet.from_full(g, G_full, f_full, sizes)


def effective_channel(k, channels, phis):
    """Effective BS->user vector ``h_k`` (so that the gain is ``vdot(h_k, w)``)."""
    if len(phis) != len(channels.G):
        raise ShapeError("need one coefficient vector per surface")
    h = channels.g[k].copy()
    for Gs, fs, phi in zip(channels.G, channels.f, phis):
        phi = np.asarray(getattr(phi, "phi", phi), dtype=complex)
        if phi.shape != (Gs.shape[0],):
            raise ShapeError("coefficient vector length does not match the surface")
        h += Gs.conj().T @ (phi * fs[k])
    return h


def effective_channels(channels, phis):
    """All effective channels stacked as rows, shape ``(K, M)``."""
    return np.stack([effective_channel(k, channels, phis) for k in range(channels.K)])
