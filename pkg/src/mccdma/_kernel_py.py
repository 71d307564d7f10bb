"""Pure-NumPy simulation kernel: the per-symbol receiver loop for one point.

This is the fallback used when the compiled extension is unavailable.  It
is semantically identical to ``_kernel_cy`` and, because every reduction
accumulates in the same index order (see ``_ops``), also bit-identical.
"""

import numpy as np

from ._ops import compose_frame, row_dots

EGC, MRC, BASC = 0, 1, 2


def run_symbols(combiner: int, chips: np.ndarray, bits: np.ndarray,
                amps: np.ndarray, noise: np.ndarray, mu: float, gamma: float,
                div_limit: float):
    """Simulate M symbol periods for all K users with one combiner.

    Parameters
    ----------
    combiner : EGC, MRC or BASC
    chips : (K, N) spreading rows
    bits : (M, K) transmitted +-1 symbols
    amps : (M, K, N) fading amplitudes
    noise : (M, N) additive noise samples (already scaled by sigma)
    mu, gamma : BASC step-size and constant-modulus target
    div_limit : weight magnitude beyond which a BASC update is rejected

    Returns
    -------
    errors : (K,) int64 bit error counts
    diverged : (K,) uint8 per-user divergence flags
    weights : (K, N) final weight matrix (diagnostic)
    """
    n_symbols, n_users = bits.shape
    errors = np.zeros(n_users, dtype=np.int64)
    diverged = np.zeros(n_users, dtype=np.uint8)

    if combiner == EGC:
        weights = 1.0 / chips
    elif combiner == BASC:
        weights = chips.copy()
    else:
        weights = np.empty_like(chips)

    for m in range(n_symbols):
        r = compose_frame(amps[m], bits[m], chips, noise[m])
        if combiner == MRC:
            weights = amps[m] * chips
        z = row_dots(weights, r)
        decided = np.where(z >= 0.0, 1.0, -1.0)
        errors += decided != bits[m]
        if combiner == BASC:
            alive = diverged == 0
            err = z * (z * z - gamma)
            new_w = weights - (mu * err)[:, None] * r[None, :]
            blown = alive & (np.max(np.abs(new_w), axis=1) > div_limit)
            diverged[blown] = 1
            keep = alive & ~blown
            weights = np.where(keep[:, None], new_w, weights)
    return errors, diverged, weights
