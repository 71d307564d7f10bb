"""Low-level array ops shared by the receiver paths.

Reductions here accumulate strictly left to right (via cumsum, which NumPy
evaluates as a running prefix), matching the plain C loops of the compiled
kernel so both backends produce bit-identical trajectories.
"""

import numpy as np


def ordered_dot(x: np.ndarray, y: np.ndarray) -> float:
    """Dot product accumulated in index order."""
    return float(np.cumsum(x * y)[-1])


def row_dots(w: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Per-row dot products of a (K, N) matrix with a length-N vector,
    each accumulated in subcarrier order."""
    return np.cumsum(w * r[None, :], axis=1)[:, -1]


def compose_frame(amps_m: np.ndarray, bits_m: np.ndarray, chips: np.ndarray,
                  noise_m: np.ndarray) -> np.ndarray:
    """Received per-subcarrier samples for one symbol period.

    r_n = sum_k  a[k, n] * b[k] * c[k, n]  +  noise[n], users accumulated
    in index order.
    """
    terms = (amps_m * bits_m[:, None]) * chips
    return np.cumsum(terms, axis=0)[-1] + noise_m
