"""Energy-efficiency maximization for hybrid-RIS downlinks."""
from .bca import (PER_CONVERGENCE, PER_PASS, Diagnostics, IterationRecord, SolverConfig,
                  SolverState, bca_pass, bca_solve, initial_point)
from .blocks import (AuxVars, PhiBlocks, PrecoderBlocks, dinkelbach_objective, lambda_q,
                     mm_objective, mm_step, mu_from_rho, phi_blocks, precoder_blocks, run_mm,
                     surrogate, transformed_objective, unit_modulus, update_aux,
                     update_phi_active, update_phi_passive_mm, update_precoder)
from .heuristics import zf_heuristic, zf_precoder
from .multipliers import SearchStats, SpectralQuadratic, nested_search, search_level
