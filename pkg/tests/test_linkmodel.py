import numpy as np
import pytest

from mccdma.linkmodel import noise_sigma, received_frame, symbol_batch
from mccdma.sequences import SpreadingSet, walsh_set


def _two_user_set():
    chips = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2)
    return SpreadingSet(kind="walsh", n_chips=2, n_users=2, chips=chips)


@pytest.mark.parametrize("db,sigma", [
    (0.0, 0.7071068), (10.0, 0.2236068), (20.0, 0.0707107),
])
def test_noise_sigma_calibration(db, sigma):
    assert noise_sigma(db) == pytest.approx(sigma, abs=1e-6)


def test_noise_sigma_limits():
    assert noise_sigma(np.inf) == 0.0
    assert noise_sigma(-10.0) > noise_sigma(0.0) > noise_sigma(10.0)


def test_symbol_batch_antipodal_and_deterministic():
    a = symbol_batch(4, 1000, seed=5)
    b = symbol_batch(4, 1000, seed=5)
    assert np.array_equal(a.bits, b.bits)
    assert set(np.unique(a.bits)) == {-1, 1}
    assert not np.array_equal(a.bits, symbol_batch(4, 1000, seed=6).bits)


def test_single_user_noiseless_frame_is_scaled_chip_row():
    s = walsh_set(8, 1)
    rng = np.random.default_rng(0)
    for b in (+1, -1):
        fr = received_frame([b], np.ones((1, 8)), s, 0.0, rng)
        assert np.array_equal(fr.r, b * s.chips[0])


def test_two_user_hand_sum():
    s = _two_user_set()
    fr = received_frame([1, 1], np.ones((2, 2)), s, 0.0, np.random.default_rng(0))
    assert fr.r[0] == pytest.approx(np.sqrt(2), abs=1e-15)
    assert fr.r[1] == 0.0


def test_zero_channel_gives_pure_noise():
    s = walsh_set(32, 1)
    rng = np.random.default_rng(33)
    samples = np.concatenate([
        received_frame([1], np.zeros((1, 32)), s, 1.0, rng).r for _ in range(3000)
    ])
    assert abs(np.var(samples) - 1.0) < 0.05
    assert abs(np.mean(samples)) < 0.01


def test_linearity_of_superposition():
    rng = np.random.default_rng(4)
    s = walsh_set(16, 5)
    amps = rng.rayleigh(np.sqrt(0.5), (5, 16))
    bits = np.array([1, -1, 1, 1, -1], dtype=float)
    full = received_frame(bits, amps, s, 0.5, np.random.default_rng(77)).r
    acc = 0.5 * np.random.default_rng(77).standard_normal(16)
    parts = np.zeros(16)
    for k in range(5):
        single = SpreadingSet(kind="walsh", n_chips=16, n_users=1,
                              chips=s.chips[k : k + 1].copy())
        parts += received_frame(bits[k : k + 1], amps[k : k + 1], single, 0.0,
                                np.random.default_rng(0)).r
    assert np.array_equal(full, parts + acc)


def test_walsh_orthogonality_kills_mai_noiselessly():
    s = walsh_set(32, 31)
    bits = symbol_batch(31, 1, seed=9).bits[:, 0].astype(float)
    fr = received_frame(bits, np.ones((31, 32)), s, 0.0, np.random.default_rng(0))
    for k in range(31):
        z = float(np.cumsum(s.chips[k] * fr.r)[-1])
        assert z == pytest.approx(bits[k], abs=1e-12)
        assert np.sign(z) == bits[k]


def test_energy_calibration_single_user():
    # K=1, noiseless, unit-power fading: long-run mean energy per symbol -> 1
    rng = np.random.default_rng(8)
    s = walsh_set(32, 1)
    total, n_frames = 0.0, 4000
    for _ in range(n_frames):
        amps = rng.rayleigh(np.sqrt(0.5), (1, 32))
        fr = received_frame([1.0], amps, s, 0.0, np.random.default_rng(0))
        total += np.sum(fr.r**2)
    assert abs(total / n_frames - 1.0) < 0.01


def test_dimension_mismatch_rejected():
    s = walsh_set(8, 2)
    with pytest.raises(ValueError):
        received_frame([1.0], np.ones((2, 8)), s, 0.0, np.random.default_rng(0))
    with pytest.raises(ValueError):
        received_frame([1.0, 1.0], np.ones((2, 4)), s, 0.0, np.random.default_rng(0))
    with pytest.raises(ValueError):
        received_frame([1.0, 1.0], np.ones((2, 8)), s, -1.0, np.random.default_rng(0))
