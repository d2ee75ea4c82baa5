"""Hybrid passive/active RIS modelling, asymptotic SNR laws and EE optimization."""
from .asymptotics import AsymptoticParams
from .channel import ChannelSet, FadingSpec, Geometry, effective_channel, generate_channels
from .metrics import PowerParams, SystemParams, sinr, sum_rate_and_ee, tpc
from .optimizer import SolverConfig, bca_solve, zf_heuristic
from .ris_model import HybridRisConfig, RsArchitecture, RsBeamforming

__version__ = "0.1.0"
