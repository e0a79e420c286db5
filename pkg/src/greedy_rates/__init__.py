"""Greedy expansions in Hilbert and l_q spaces with their rate bounds."""

from .banach import DgaParams, dga_step_size, residual_decrease_check, run_dga
from .dictionaries import (Dictionary, Selection, a1_norm_basis, a1_norm_small, r_D,
                           select_weak)
from .hilbert import energy_identity_check, run_oga, run_pga, run_wga
from .oracles import sigma_m_basis, sigma_m_hilbert_bruteforce
from .spaces import (DualFunctional, Element, SpaceSpec, empirical_modulus, inner, norm,
                     norming_functional, pair, smoothness_majorant)
from .trace import GreedyTrace, IterationRecord

__version__ = "0.1.0"
