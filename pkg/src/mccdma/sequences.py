"""Frequency-domain spreading sequences for synchronous MC-CDMA users.

Two families are provided:

* Walsh-Hadamard rows (mutually orthogonal, zero cross-correlation), and
* Gold sequences of length 31 extended to 32 chips by one random bit per
  user, a standard trick to fit a power-of-two subcarrier count.  Gold
  sequences are deliberately non-orthogonal and act as the multiple-access
  interference driver in experiments.

Chips are stored already normalised so every row has unit energy.
"""

from dataclasses import dataclass

import numpy as np

__all__ = ["SpreadingSet", "walsh_set", "gold_set", "cross_corr"]

# Degree-5 preferred pair of feedback polynomials (octal 45 / 75):
#   x^5 + x^2 + 1   and   x^5 + x^4 + x^3 + x^2 + 1.
# Taps are the exponents of the non-leading, non-constant terms.
_MSEQ_TAPS_A = (2,)
_MSEQ_TAPS_B = (4, 3, 2)
_MSEQ_DEGREE = 5
_MSEQ_PERIOD = 2**_MSEQ_DEGREE - 1  # 31
GOLD_FAMILY_SIZE = _MSEQ_PERIOD + 2  # 33


@dataclass(frozen=True)
class SpreadingSet:
    """K users' spreading sequences over N subcarriers, one row per user.

    Every row is a +-1/sqrt(N) chip vector with unit energy.  Instances are
    immutable and safe to share between threads.
    """

    kind: str  # "walsh" | "gold"
    n_chips: int
    n_users: int
    chips: np.ndarray  # (K, N) float64

    def __post_init__(self):
        if self.kind not in ("walsh", "gold"):
            raise ValueError(f"unknown sequence kind {self.kind!r}")
        k, n = self.chips.shape
        if (k, n) != (self.n_users, self.n_chips):
            raise ValueError("chip matrix shape disagrees with declared K x N")
        mag = 1.0 / np.sqrt(self.n_chips)
        if not np.all(np.abs(self.chips) == mag):
            raise ValueError("chips must be binary antipodal +-1/sqrt(N)")
        energy = np.sum(self.chips**2, axis=1)
        if np.any(np.abs(energy - 1.0) > 1e-12):
            raise ValueError("spreading rows must have unit energy")
        self.chips.setflags(write=False)


def walsh_set(n: int, k: int) -> SpreadingSet:
    """Build k orthogonal Walsh sequences of length n (n a power of two).

    Users take rows 1..k of the order-n Sylvester-Hadamard matrix; the
    all-ones row 0 is excluded because a DC signature behaves pathologically
    under fading.  At most n-1 users can be supported.
    """
    if n < 2 or n > 64 or (n & (n - 1)) != 0:
        raise ValueError(f"spreading length must be a power of two in [2, 64], got {n}")
    if not 1 <= k <= n - 1:
        raise ValueError(f"walsh supports at most {n - 1} users for n={n}, got k={k}")
    # Sylvester construction in exact integer arithmetic: H[i, j] = (-1)^popcount(i & j).
    idx = np.arange(n)
    signs = np.bitwise_and(idx[:, None], idx[None, :])
    parity = np.array([bin(v).count("1") & 1 for v in signs.ravel()]).reshape(n, n)
    hadamard = 1 - 2 * parity
    chips = hadamard[1 : k + 1].astype(np.float64) / np.sqrt(n)
    return SpreadingSet(kind="walsh", n_chips=n, n_users=k, chips=chips)


def _msequence(taps, degree: int) -> np.ndarray:
    """Full-period m-sequence bits from a Fibonacci LFSR, all-ones start."""
    period = 2**degree - 1
    state = [1] * degree
    bits = np.empty(period, dtype=np.int8)
    for i in range(period):
        bits[i] = state[-1]
        feedback = state[-1]
        for t in taps:
            feedback ^= state[t - 1]
        state = [feedback] + state[:-1]
    return bits


def _gold_family_bits() -> np.ndarray:
    """All 33 length-31 Gold family members: both m-sequences plus the
    31 relative-shift XOR sums, in shift order 0..30."""
    u = _msequence(_MSEQ_TAPS_A, _MSEQ_DEGREE)
    v = _msequence(_MSEQ_TAPS_B, _MSEQ_DEGREE)
    family = [u, v]
    for shift in range(_MSEQ_PERIOD):
        family.append(u ^ np.roll(v, -shift))
    return np.stack(family)


def gold_set(k: int, seed) -> SpreadingSet:
    """Build k Gold sequences of length 31 appended to 32 chips.

    Bits map 0 -> +1, 1 -> -1; the appended +-1 chip is drawn per family
    member from a stream seeded by `seed`, so the same (k, seed) pair always
    yields the same matrix and row i does not depend on k.
    """
    if not 1 <= k <= GOLD_FAMILY_SIZE:
        raise ValueError(f"gold family has {GOLD_FAMILY_SIZE} members, got k={k}")
    bits = _gold_family_bits()
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    appended = rng.integers(0, 2, size=GOLD_FAMILY_SIZE, dtype=np.int8)
    full = np.hstack([bits, appended[:, None]])
    chips = (1.0 - 2.0 * full[:k].astype(np.float64)) / np.sqrt(_MSEQ_PERIOD + 1)
    return SpreadingSet(kind="gold", n_chips=_MSEQ_PERIOD + 1, n_users=k, chips=chips)


def cross_corr(sset: SpreadingSet) -> np.ndarray:
    """K x K matrix of inner products between users' chip rows.

    Computed as an exact integer sign correlation scaled once at the end,
    so orthogonal rows really do yield 0.0 rather than float residue.
    """
    mag = 1.0 / np.sqrt(sset.n_chips)
    signs = np.rint(sset.chips / mag).astype(np.int64)
    return (signs @ signs.T).astype(np.float64) * (mag * mag)
