"""Monte Carlo uplink MC-CDMA simulator with blind adaptive subcarrier
combining (BASC) against EGC and MRC baselines."""

from ._kernel import BACKEND as kernel_backend
from .channel import FadingTrace, fading_trace
from .combiners import (CombinerState, DIVERGENCE_LIMIT, basc_init, basc_step,
                        combine_decide, egc_weights, mrc_weights)
from .linkmodel import (ReceivedFrame, SymbolBatch, noise_sigma,
                        received_frame, symbol_batch)
from .montecarlo import (BerRecord, SimPoint, analytic_mrc_ber, run_combiners,
                         run_point, sweep, wilson_ci)
from .sequences import SpreadingSet, cross_corr, gold_set, walsh_set

__version__ = "0.1.0"

__all__ = [
    "BerRecord", "CombinerState", "DIVERGENCE_LIMIT", "FadingTrace",
    "ReceivedFrame", "SimPoint", "SpreadingSet", "SymbolBatch",
    "analytic_mrc_ber", "basc_init", "basc_step", "combine_decide",
    "cross_corr", "egc_weights", "fading_trace", "gold_set",
    "kernel_backend", "mrc_weights", "noise_sigma", "received_frame",
    "run_combiners", "run_point", "sweep", "symbol_batch", "walsh_set",
    "wilson_ci", "__version__",
]
