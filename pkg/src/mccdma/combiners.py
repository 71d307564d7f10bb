"""Subcarrier combining receivers: EGC, MRC and blind adaptive (BASC).

All three share the same detection rule: weight each subcarrier sample,
sum, and take the sign.  They differ only in where the weights come from:

* EGC uses the fixed weights 1/c_n.  For antipodal chips this is N*c_n,
  so its decisions coincide with a sign-matched correlator.
* MRC uses a_n * c_n with genie-provided channel amplitudes.
* BASC starts from the user's own chip row and adapts per symbol by
  gradient descent on the constant-modulus error e = z*(z^2 - gamma),
  which simultaneously suppresses other users and tracks the channel
  amplitude without any channel knowledge or training.  gamma = 1 for
  BPSK.  The decision for symbol m uses the pre-update weights; the
  update applies from the next symbol.

The recursion has no projection or renormalisation, so an aggressive
step-size can diverge.  A step that would push any weight magnitude past
``DIVERGENCE_LIMIT`` is not committed: the state freezes (decisions
continue with the last finite weights) and carries a ``diverged`` flag so
sweeps can report instability instead of crashing or silently feeding
garbage forward.
"""

from dataclasses import dataclass, replace

import numpy as np

from ._ops import ordered_dot
from .linkmodel import ReceivedFrame

__all__ = ["CombinerState", "DIVERGENCE_LIMIT", "egc_weights", "mrc_weights",
           "combine_decide", "basc_init", "basc_step"]

DIVERGENCE_LIMIT = 1e6


@dataclass(frozen=True)
class CombinerState:
    """Adaptive combiner state for one user."""

    weights: np.ndarray  # (N,) float64
    mu: float
    gamma: float
    user_row: np.ndarray  # (N,) chip vector the weights were initialised from
    diverged: bool = False

    def __post_init__(self):
        if not np.all(np.isfinite(self.weights)):
            raise ValueError("combiner weights must be finite")


def egc_weights(row: np.ndarray) -> np.ndarray:
    """Equal gain combining weights, 1/c_n per subcarrier."""
    row = np.asarray(row, dtype=np.float64)
    if np.any(row == 0.0):
        raise ValueError("equal gain weights are undefined for zero chips")
    return 1.0 / row


def mrc_weights(row: np.ndarray, amps_m: np.ndarray) -> np.ndarray:
    """Maximum ratio combining weights a_n * c_n (perfect channel knowledge)."""
    row = np.asarray(row, dtype=np.float64)
    amps_m = np.asarray(amps_m, dtype=np.float64)
    if np.any(amps_m < 0):
        raise ValueError("amplitudes must be non-negative")
    return amps_m * row


def combine_decide(weights: np.ndarray, frame: ReceivedFrame) -> tuple[float, int]:
    """Weight, combine and decide one symbol: z = sum_n w_n r_n, bit = sign(z).

    A zero decision variable resolves to +1 so runs are reproducible.
    """
    r = frame.r
    if weights.shape != r.shape:
        raise ValueError("weights and frame length disagree")
    z = ordered_dot(weights, r)
    return z, (1 if z >= 0.0 else -1)


def basc_init(row: np.ndarray, mu: float, gamma: float = 1.0) -> CombinerState:
    """Fresh adaptive state with weights set to the user's chip row."""
    if mu <= 0.0:
        raise ValueError("step-size mu must be positive")
    row = np.asarray(row, dtype=np.float64)
    return CombinerState(weights=row.copy(), mu=float(mu), gamma=float(gamma),
                         user_row=row.copy())


def basc_step(state: CombinerState, frame: ReceivedFrame
              ) -> tuple[float, int, CombinerState]:
    """One blind adaptation step on one received symbol.

    Returns the decision variable, the decided bit and the state for the
    next symbol.  On the constant-modulus circle (z^2 == gamma) the error
    vanishes and the weights are left untouched; a diverging update is
    rejected as described in the module docstring.
    """
    z, bit = combine_decide(state.weights, frame)
    if state.diverged:
        return z, bit, state
    e = z * (z * z - state.gamma)
    gain = state.mu * e
    new_w = state.weights - gain * frame.r
    if np.max(np.abs(new_w)) > DIVERGENCE_LIMIT:
        return z, bit, replace(state, diverged=True)
    return z, bit, replace(state, weights=new_w)
