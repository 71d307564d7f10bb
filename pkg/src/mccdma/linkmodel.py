"""Symbol-rate real-baseband link: data, frame composition, noise level.

The carrier-level waveform is never simulated.  With coherent detection,
perfect phase knowledge and synchronous users, one received sample per
subcarrier per symbol captures the system exactly:

    r_n(m) = sum_k a[k, n](m) * b_k(m) * c[k, n]  +  eta_n(m)

with eta_n i.i.d. zero-mean Gaussian of standard deviation sigma.

Noise calibration: each user's average received symbol energy is
Eb = E[a^2] * sum_n c^2 = 1 (unit-power fading, unit-energy rows), and the
real-sample noise variance is N0/2, so sigma = sqrt(1 / (2 * Eb/N0)).
"""

from dataclasses import dataclass

import numpy as np

from ._ops import compose_frame
from .sequences import SpreadingSet

__all__ = ["SymbolBatch", "ReceivedFrame", "noise_sigma", "symbol_batch",
           "received_frame"]


@dataclass(frozen=True)
class SymbolBatch:
    """K x M matrix of +-1 BPSK symbols, reproducible from its seed."""

    bits: np.ndarray  # (K, M) int8, entries +-1
    seed: int

    def __post_init__(self):
        if not np.all(np.abs(self.bits) == 1):
            raise ValueError("symbols must be +-1")
        self.bits.setflags(write=False)


@dataclass(frozen=True)
class ReceivedFrame:
    """Length-N received vector for one symbol period."""

    r: np.ndarray  # (N,) float64
    symbol_index: int

    def __post_init__(self):
        if not np.all(np.isfinite(self.r)):
            raise ValueError("received samples must be finite")


def noise_sigma(ebn0_db: float) -> float:
    """Per-sample noise standard deviation for a given Eb/N0 in dB."""
    return float(np.sqrt(1.0 / (2.0 * 10.0 ** (ebn0_db / 10.0))))


def symbol_batch(n_users: int, n_symbols: int, seed: int) -> SymbolBatch:
    """Draw K x M equiprobable BPSK symbols from a dedicated stream."""
    rng = np.random.default_rng(np.random.SeedSequence(int(seed)))
    bits = (2 * rng.integers(0, 2, size=(n_users, n_symbols), dtype=np.int8) - 1)
    return SymbolBatch(bits=bits, seed=int(seed))


def received_frame(bits_m: np.ndarray, amps_m: np.ndarray, sset: SpreadingSet,
                   sigma: float, rng: np.random.Generator,
                   symbol_index: int = 0) -> ReceivedFrame:
    """Compose one symbol's N received samples.

    ``bits_m`` is the K users' symbols at this period, ``amps_m`` the K x N
    fading amplitudes; noise is drawn from ``rng`` (exactly N draws).
    """
    bits_m = np.asarray(bits_m, dtype=np.float64)
    amps_m = np.asarray(amps_m, dtype=np.float64)
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    k, n = amps_m.shape
    if bits_m.shape != (k,) or sset.chips.shape != (k, n):
        raise ValueError("bits, amplitudes and spreading set dimensions disagree")
    noise = sigma * rng.standard_normal(n)
    r = compose_frame(amps_m, bits_m, sset.chips, noise)
    return ReceivedFrame(r=r, symbol_index=symbol_index)
