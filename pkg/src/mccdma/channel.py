"""Time-varying Rayleigh fading amplitudes per (user, subcarrier) cell.

Two generators are available:

* ``jakes`` -- a sum-of-sinusoids synthesis of a complex Gaussian process
  with the Clarke/Jakes Doppler spectrum (Zheng-Xiao variant: random
  arrival angles and phases, 16 oscillators per quadrature), sampled once
  per symbol period.  The normalised Doppler rate fd*Tb sets how fast the
  amplitude decorrelates from symbol to symbol; the ensemble
  autocorrelation of the complex process is J0(2*pi*fd*Tb*lag).
* ``iid`` -- an independent Rayleigh draw per symbol, matching the
  assumptions of closed-form diversity BER expressions exactly.

Cells are seeded by (seed, user, subcarrier), so enlarging K or N never
perturbs the fading seen by existing cells.  Amplitudes have unit average
power; phases are not modelled (detection is assumed coherent with perfect
phase knowledge, so only amplitudes reach the receiver).
"""

from dataclasses import dataclass

import numpy as np

__all__ = ["FadingTrace", "fading_trace", "jakes_complex_gains", "OSCILLATORS"]

OSCILLATORS = 16  # sinusoids per quadrature component
_MODELS = ("jakes", "iid")
_BLOCK = 256  # symbols synthesised per vectorised chunk


@dataclass(frozen=True)
class FadingTrace:
    """Amplitude series a[k, n, m] for K users, N subcarriers, M symbols."""

    n_users: int
    n_subcarriers: int
    n_symbols: int
    fd_tb: float
    model: str
    amps: np.ndarray  # (K, N, M) float64, >= 0

    def __post_init__(self):
        if self.amps.shape != (self.n_users, self.n_subcarriers, self.n_symbols):
            raise ValueError("amplitude array shape disagrees with declared dims")
        self.amps.setflags(write=False)


def _synth_jakes(seed_seqs, fd_tb: float, n_symbols: int) -> np.ndarray:
    """Complex Jakes-spectrum gains, one row per seed sequence.

    Each row uses its own random arrival-angle offset and oscillator
    phases; rows are statistically independent.  Unit mean power.
    """
    n_traces = len(seed_seqs)
    L = OSCILLATORS
    theta = np.empty(n_traces)
    phi = np.empty((n_traces, L))
    psi = np.empty((n_traces, L))
    for i, ss in enumerate(seed_seqs):
        rng = np.random.default_rng(ss)
        theta[i] = rng.uniform(-np.pi, np.pi)
        phi[i] = rng.uniform(-np.pi, np.pi, L)
        psi[i] = rng.uniform(-np.pi, np.pi, L)
    # Arrival angles spread over (0, pi/2) with a random per-trace offset;
    # this makes the ensemble autocorrelation exactly Bessel-J0.
    ell = np.arange(1, L + 1)
    alpha = (2.0 * np.pi * ell[None, :] - np.pi + theta[:, None]) / (4.0 * L)
    omega_c = 2.0 * np.pi * fd_tb * np.cos(alpha)  # (T, L)
    omega_s = 2.0 * np.pi * fd_tb * np.sin(alpha)

    gains = np.empty((n_traces, n_symbols), dtype=np.complex128)
    scale = 1.0 / np.sqrt(L)
    for start in range(0, n_symbols, _BLOCK):
        m = np.arange(start, min(start + _BLOCK, n_symbols), dtype=np.float64)
        gc = np.cos(omega_c[:, :, None] * m[None, None, :] + phi[:, :, None]).sum(axis=1)
        gs = np.cos(omega_s[:, :, None] * m[None, None, :] + psi[:, :, None]).sum(axis=1)
        gains[:, start : start + m.size] = scale * (gc + 1j * gs)
    return gains


def jakes_complex_gains(fd_tb: float, n_traces: int, n_symbols: int, seed) -> np.ndarray:
    """Independent complex Jakes-fading traces, shape (n_traces, n_symbols).

    Exposed for statistical validation of the underlying process (the
    amplitude traces discard the quadratures).
    """
    if not 0.0 <= fd_tb < 0.5:
        raise ValueError("jakes requires 0 <= fd_tb < 0.5 at symbol-rate sampling")
    seqs = [np.random.SeedSequence([_as_seed_int(seed), i]) for i in range(n_traces)]
    return _synth_jakes(seqs, fd_tb, n_symbols)


def _as_seed_int(seed) -> int:
    seed = int(seed)
    if seed < 0:
        raise ValueError("seed must be a non-negative integer")
    return seed


def fading_trace(model: str, fd_tb: float, n_users: int, n_subcarriers: int,
                 n_symbols: int, seed) -> FadingTrace:
    """Generate the K x N x M amplitude array for one simulation point.

    Deterministic given (model, fd_tb, dims, seed).  For ``jakes``,
    fd_tb = 0 freezes every cell at a constant amplitude; fd_tb >= 0.5 is
    rejected because one sample per symbol would undersample the process.
    ``iid`` ignores fd_tb except to record it.
    """
    if model not in _MODELS:
        raise ValueError(f"unknown channel model {model!r}")
    if n_symbols < 1 or n_users < 1 or n_subcarriers < 1:
        raise ValueError("dimensions must be positive")
    if fd_tb < 0.0:
        raise ValueError("fd_tb must be non-negative")
    base = _as_seed_int(seed)

    if model == "jakes":
        if fd_tb >= 0.5:
            raise ValueError("jakes requires fd_tb < 0.5 at symbol-rate sampling")
        seqs = [
            np.random.SeedSequence([base, k, n])
            for k in range(n_users)
            for n in range(n_subcarriers)
        ]
        gains = _synth_jakes(seqs, fd_tb, n_symbols)
        amps = np.abs(gains).reshape(n_users, n_subcarriers, n_symbols)
    else:
        amps = np.empty((n_users, n_subcarriers, n_symbols))
        sigma = np.sqrt(0.5)  # unit mean-square Rayleigh
        for k in range(n_users):
            for n in range(n_subcarriers):
                rng = np.random.default_rng(np.random.SeedSequence([base, k, n]))
                amps[k, n] = rng.rayleigh(scale=sigma, size=n_symbols)

    return FadingTrace(
        n_users=n_users,
        n_subcarriers=n_subcarriers,
        n_symbols=n_symbols,
        fd_tb=float(fd_tb),
        model=model,
        amps=amps,
    )
