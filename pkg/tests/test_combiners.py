import numpy as np
import pytest

from mccdma._ops import ordered_dot
from mccdma.combiners import (CombinerState, DIVERGENCE_LIMIT, basc_init,
                              basc_step, combine_decide, egc_weights,
                              mrc_weights)
from mccdma.linkmodel import ReceivedFrame
from mccdma.sequences import walsh_set


def _frame(values):
    return ReceivedFrame(r=np.asarray(values, dtype=float), symbol_index=0)


def _cm_cost(w, r, gamma=1.0):
    return (ordered_dot(w, r) ** 2 - gamma) ** 2


# ---------------------------------------------------------------- EGC / MRC

def test_egc_weights_two_chips():
    w = egc_weights(np.array([1.0, -1.0]) / np.sqrt(2))
    np.testing.assert_allclose(w, [np.sqrt(2), -np.sqrt(2)])


def test_egc_weights_magnitude_for_32_chips():
    w = egc_weights(walsh_set(32, 3).chips[2])
    assert np.all(np.abs(w) == pytest.approx(np.sqrt(32), rel=1e-15))


def test_egc_rejects_zero_chip():
    with pytest.raises(ValueError):
        egc_weights(np.array([0.5, 0.0]))


def test_egc_decisions_match_sign_correlator():
    rng = np.random.default_rng(11)
    row = walsh_set(32, 5).chips[4]
    w = egc_weights(row)
    for _ in range(500):
        fr = _frame(rng.standard_normal(32))
        _, b_egc = combine_decide(w, fr)
        _, b_corr = combine_decide(row, fr)
        assert b_egc == b_corr


def test_mrc_weights_elementwise():
    c = np.array([1.0, 1.0]) / np.sqrt(2)
    np.testing.assert_allclose(mrc_weights(c, np.array([1.0, 1.0])),
                               [0.7071068, 0.7071068], atol=1e-7)
    np.testing.assert_allclose(mrc_weights(c, np.array([2.0, 0.5])),
                               [1.41421356, 0.35355339], atol=1e-7)
    assert np.all(mrc_weights(c, np.zeros(2)) == 0.0)


def test_mrc_rejects_negative_amplitude():
    with pytest.raises(ValueError):
        mrc_weights(np.array([0.7, 0.7]), np.array([1.0, -1.0]))


# ------------------------------------------------------------ combine_decide

def test_combine_decide_unit_case():
    row = walsh_set(32, 1).chips[0]
    z, bit = combine_decide(row, _frame(row))
    assert z == pytest.approx(1.0, abs=1e-12)
    assert bit == 1


def test_combine_decide_hand_case():
    z, bit = combine_decide(np.array([0.7, 0.7]), _frame([1.0, -0.2]))
    assert z == pytest.approx(0.56, abs=1e-12)
    assert bit == 1


def test_combine_decide_tie_goes_positive():
    z, bit = combine_decide(np.array([0.7, 0.7]), _frame([0.0, 0.0]))
    assert z == 0.0 and bit == 1


# -------------------------------------------------------------------- BASC

def test_basc_init_copies_row_and_defaults():
    row = walsh_set(32, 1).chips[0]
    s1 = basc_init(row, mu=0.003)
    s2 = basc_init(row, mu=0.003)
    assert np.array_equal(s1.weights, row)
    assert np.array_equal(s1.weights, s2.weights)
    assert s1.gamma == 1.0 and s1.mu == 0.003 and not s1.diverged
    s1.weights[0] = 9.0  # state owns a copy
    assert np.array_equal(s2.weights, row)


@pytest.mark.parametrize("mu", [0.0, -0.1])
def test_basc_init_rejects_nonpositive_mu(mu):
    with pytest.raises(ValueError):
        basc_init(np.array([0.5, -0.5]), mu=mu)


def test_basc_step_hand_case():
    state = basc_init(np.array([0.7, 0.7]), mu=0.1)
    z, bit, nxt = basc_step(state, _frame([1.0, -0.2]))
    assert z == pytest.approx(0.56, abs=1e-12)
    assert bit == 1
    # e = z(z^2 - 1) = -0.384384, grad = e*r, w' = w - mu*grad
    np.testing.assert_allclose(nxt.weights, [0.7384384, 0.69231232], atol=1e-8)
    assert np.array_equal(state.weights, [0.7, 0.7])  # input state untouched


@pytest.mark.parametrize("sign", [1.0, -1.0])
def test_basc_step_on_cm_circle_is_stationary(sign):
    w = np.array([1.0, 0.25, -0.5])
    r = np.array([sign, 0.0, 0.0])  # z = sign exactly, e = 0
    state = basc_init(w, mu=0.05)
    z, bit, nxt = basc_step(state, _frame(r))
    assert z == sign
    assert bit == (1 if sign > 0 else -1)
    assert np.array_equal(nxt.weights, w)


def test_basc_zero_mu_state_never_updates():
    row = walsh_set(16, 2).chips[1]
    state = CombinerState(weights=row.copy(), mu=0.0, gamma=1.0, user_row=row)
    rng = np.random.default_rng(2)
    for _ in range(50):
        fr = _frame(rng.standard_normal(16))
        z_fixed, b_fixed = combine_decide(row, fr)
        z, b, state = basc_step(state, fr)
        assert (z, b) == (z_fixed, b_fixed)
    assert np.array_equal(state.weights, row)


def test_basc_gradient_matches_finite_differences():
    rng = np.random.default_rng(7)
    for _ in range(100):
        w = rng.standard_normal(32)
        r = rng.standard_normal(32)
        z = ordered_dot(w, r)
        grad = z * (z * z - 1.0) * r  # quarter-gradient of the CM cost
        fd = np.empty(32)
        for n in range(32):
            h = 1e-6 * max(1.0, abs(w[n]))
            wp, wm = w.copy(), w.copy()
            wp[n] += h
            wm[n] -= h
            fd[n] = (_cm_cost(wp, r) - _cm_cost(wm, r)) / (2 * h)
        assert np.linalg.norm(fd / 4 - grad) / np.linalg.norm(grad) < 1e-6


def test_basc_single_step_descends_cost():
    # weights and samples drawn at the receiver's operating scale (unit-order
    # weight norm, z of order one)
    rng = np.random.default_rng(3)
    checked = 0
    for _ in range(200):
        w = rng.standard_normal(32) / np.sqrt(32)
        r = rng.standard_normal(32)
        z = ordered_dot(w, r)
        if abs(z * (z * z - 1.0)) < 1e-9:
            continue
        state = CombinerState(weights=w, mu=1e-4, gamma=1.0, user_row=w)
        _, _, nxt = basc_step(state, _frame(r))
        assert _cm_cost(nxt.weights, r) < _cm_cost(w, r)
        checked += 1
    assert checked > 150


def test_basc_divergence_freezes_and_flags():
    row = walsh_set(8, 1).chips[0]
    state = basc_init(row, mu=50.0)
    rng = np.random.default_rng(1)
    for _ in range(200):
        _, _, state = basc_step(state, _frame(3.0 * rng.standard_normal(8)))
        if state.diverged:
            break
    assert state.diverged
    frozen = state.weights.copy()
    assert np.all(np.abs(frozen) <= DIVERGENCE_LIMIT)
    z, bit, nxt = basc_step(state, _frame(rng.standard_normal(8)))
    assert bit in (-1, 1) and np.isfinite(z)
    assert np.array_equal(nxt.weights, frozen)
    assert nxt.diverged


def test_combiner_state_rejects_nonfinite_weights():
    with pytest.raises(ValueError):
        CombinerState(weights=np.array([np.nan, 1.0]), mu=0.1, gamma=1.0,
                      user_row=np.array([1.0, 1.0]))


def test_basc_operation_count_scales_linearly():
    # instrumented scalar mirror of the adaptation step; verified against the
    # vectorised implementation, then used to count arithmetic operations
    def counted_step(w, r, mu, gamma):
        ops = 0
        z = 0.0
        for n in range(len(w)):
            z += w[n] * r[n]
            ops += 2
        e = z * (z * z - gamma)
        gain = mu * e
        ops += 4
        out = np.empty_like(w)
        for n in range(len(w)):
            out[n] = w[n] - gain * r[n]
            ops += 2
        return z, out, ops

    rng = np.random.default_rng(12)
    counts = []
    sizes = [8, 16, 32, 64]
    for n in sizes:
        w = rng.standard_normal(n)
        r = rng.standard_normal(n)
        z, out, ops = counted_step(w, r, 0.01, 1.0)
        state = CombinerState(weights=w.copy(), mu=0.01, gamma=1.0, user_row=w)
        z_ref, _, nxt = basc_step(state, _frame(r))
        assert z == z_ref
        np.testing.assert_allclose(out, nxt.weights, rtol=1e-12)
        counts.append(ops)
    slope = np.polyfit(np.log(sizes), np.log(counts), 1)[0]
    assert abs(slope - 1.0) < 0.1
