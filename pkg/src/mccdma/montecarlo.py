"""End-to-end Monte Carlo BER experiments.

A :class:`SimPoint` pins every parameter of one operating point, including
the seed.  Runs are deterministic: the same point always yields the same
:class:`BerRecord`, no matter the thread count or execution order.

Randomness is split into named substreams derived from the point seed
(data bits, noise, fading, Gold append bits), so changing one factor --
say the combiner or the step-size -- leaves every other draw untouched.
That makes combiner comparisons on a shared seed exactly paired.  Sweep
points get per-value child seeds derived from (master seed, axis index),
so each value is statistically independent yet individually reproducible.

BER pools all K users' bits; the users are symmetric (equal power, random
sequencing of data), so pooling just multiplies the sample count.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import _kernel
from .channel import fading_trace
from .combiners import DIVERGENCE_LIMIT
from .linkmodel import noise_sigma, symbol_batch
from .sequences import SpreadingSet, gold_set, walsh_set

__all__ = ["SimPoint", "BerRecord", "run_point", "run_combiners",
           "analytic_mrc_ber", "sweep", "wilson_ci", "SWEEP_AXES"]

# substream tags; never reuse a value
_STREAM_DATA = 1
_STREAM_NOISE = 2
_STREAM_FADING = 3
_STREAM_GOLD = 4
_STREAM_SWEEP = 5

SWEEP_AXES = {"ebn0": "ebn0_db", "k_users": "k_users", "mu": "mu"}

COMBINERS = ("egc", "mrc", "basc")

# "ones" is a test hook (constant unit amplitudes) for exactness checks;
# the CLI only exposes the first two.
_CHANNEL_MODELS = ("jakes", "iid", "ones")


@dataclass(frozen=True)
class SimPoint:
    """One operating point of the simulator."""

    combiner: str
    seq_kind: str
    k_users: int
    n_subcarriers: int
    ebn0_db: float
    fd_tb: float
    mu: float
    n_symbols: int
    channel_model: str
    seed: int

    def validate(self):
        if self.combiner not in COMBINERS:
            raise ValueError(f"unknown combiner {self.combiner!r}")
        if self.seq_kind not in ("walsh", "gold"):
            raise ValueError(f"unknown sequence kind {self.seq_kind!r}")
        if self.channel_model not in _CHANNEL_MODELS:
            raise ValueError(f"unknown channel model {self.channel_model!r}")
        if self.n_symbols < 1:
            raise ValueError("n_symbols must be >= 1")
        if self.k_users < 1:
            raise ValueError("k_users must be >= 1")
        if self.combiner == "basc" and not self.mu > 0.0:
            raise ValueError("basc requires mu > 0")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass(frozen=True)
class BerRecord:
    """Result of one simulated operating point."""

    point: SimPoint
    bit_errors: int
    bits_total: int
    ber: float
    ci95: tuple[float, float]
    diverged: bool


def _child_seed(seed: int, *tags: int) -> int:
    """Derive an independent 64-bit child seed from (seed, tags)."""
    words = np.random.SeedSequence([int(seed), *tags]).generate_state(2)
    return int(words[0]) | (int(words[1]) << 32)


def _spreading(point: SimPoint) -> SpreadingSet:
    if point.seq_kind == "walsh":
        return walsh_set(point.n_subcarriers, point.k_users)
    if point.n_subcarriers != 32:
        raise ValueError("gold sequences are defined for 32 subcarriers")
    return gold_set(point.k_users, _child_seed(point.seed, _STREAM_GOLD))


def _point_inputs(point: SimPoint):
    """Generate the kernel inputs for a point: chips, bits, amps, noise.

    Everything random comes from named substreams of the point seed, so
    two points differing only in combiner or mu share identical draws.
    """
    k, n, m = point.k_users, point.n_subcarriers, point.n_symbols
    sset = _spreading(point)
    batch = symbol_batch(k, m, _child_seed(point.seed, _STREAM_DATA))
    if point.channel_model == "ones":
        amps = np.ones((m, k, n))
    else:
        trace = fading_trace(point.channel_model, point.fd_tb, k, n, m,
                             _child_seed(point.seed, _STREAM_FADING))
        amps = np.ascontiguousarray(np.moveaxis(trace.amps, 2, 0))
    sigma = noise_sigma(point.ebn0_db)
    noise_rng = np.random.default_rng(
        np.random.SeedSequence([point.seed, _STREAM_NOISE]))
    noise = sigma * noise_rng.standard_normal((m, n))
    bits = np.ascontiguousarray(batch.bits.T, dtype=np.float64)
    return sset, bits, amps, noise


def _record(point: SimPoint, errors: np.ndarray, diverged: np.ndarray) -> BerRecord:
    bits_total = point.k_users * point.n_symbols
    bit_errors = int(errors.sum())
    return BerRecord(
        point=point,
        bit_errors=bit_errors,
        bits_total=bits_total,
        ber=bit_errors / bits_total,
        ci95=wilson_ci(bit_errors, bits_total),
        diverged=bool(diverged.any()),
    )


def run_point(point: SimPoint) -> BerRecord:
    """Simulate one operating point end to end and count bit errors."""
    point.validate()
    sset, bits, amps, noise = _point_inputs(point)
    errors, diverged, _ = _kernel.run_symbols(
        point.combiner, sset.chips, bits, amps, noise,
        point.mu, 1.0, DIVERGENCE_LIMIT)
    return _record(point, errors, diverged)


def run_combiners(point: SimPoint, combiners=COMBINERS) -> list[BerRecord]:
    """Run several combiners on one point's shared data/channel/noise.

    Equivalent to ``run_point(replace(point, combiner=c))`` for each c,
    but generates the inputs only once.
    """
    records = []
    sset = bits = amps = noise = None
    for comb in combiners:
        sub = replace(point, combiner=comb)
        sub.validate()
        if sset is None:
            sset, bits, amps, noise = _point_inputs(sub)
        errors, diverged, _ = _kernel.run_symbols(
            comb, sset.chips, bits, amps, noise, sub.mu, 1.0, DIVERGENCE_LIMIT)
        records.append(_record(sub, errors, diverged))
    return records


def analytic_mrc_ber(ebn0_db: float, n_branches: int) -> float:
    """Closed-form BPSK BER for L-branch MRC over i.i.d. Rayleigh fading.

    The total average Eb/N0 is split evenly across branches
    (gamma_c = Eb/N0 / L), matching the simulator's unit-energy rows.
    Classic result: with p = (1 - sqrt(gamma_c/(1+gamma_c)))/2,

        BER = p^L * sum_{l=0}^{L-1} C(L-1+l, l) * (1-p)^l
    """
    if n_branches < 1:
        raise ValueError("need at least one branch")
    snr = 10.0 ** (ebn0_db / 10.0) / n_branches
    if math.isinf(snr):
        return 0.0
    p = 0.5 * (1.0 - math.sqrt(snr / (1.0 + snr)))
    total = 0.0
    for l in range(n_branches):
        total += math.comb(n_branches - 1 + l, l) * (1.0 - p) ** l
    return p**n_branches * total


def wilson_ci(errors: int, trials: int, z: float = 1.959963984540054
              ) -> tuple[float, float]:
    """95% Wilson score interval for an error proportion."""
    if trials < 1 or not 0 <= errors <= trials:
        raise ValueError("need 0 <= errors <= trials, trials >= 1")
    phat = errors / trials
    denom = 1.0 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / trials
                         + z * z / (4.0 * trials * trials)) / denom
    low = 0.0 if errors == 0 else max(0.0, centre - half)
    high = 1.0 if errors == trials else min(1.0, centre + half)
    return low, high


def _default_jobs() -> int:
    env = os.environ.get("MCCDMA_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def sweep(base: SimPoint, axis: str, values, n_jobs: int | None = None
          ) -> list[BerRecord]:
    """Run one point per value along an axis, in sweep order.

    Results are merged by axis index, never by completion order, so any
    worker count produces the same list.
    """
    if axis not in SWEEP_AXES:
        raise ValueError(f"unknown sweep axis {axis!r}; pick one of {sorted(SWEEP_AXES)}")
    values = list(values)
    if not values:
        raise ValueError("sweep needs at least one value")
    field = SWEEP_AXES[axis]
    points = [
        replace(base, **{field: v}, seed=_child_seed(base.seed, _STREAM_SWEEP, i))
        for i, v in enumerate(values)
    ]
    n_jobs = _default_jobs() if n_jobs is None else max(1, n_jobs)
    if n_jobs == 1:
        return [run_point(p) for p in points]
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(run_point, points))
