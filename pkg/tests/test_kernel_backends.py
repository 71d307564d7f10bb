"""The compiled and pure-Python kernels must agree bit for bit."""

import numpy as np
import pytest

from mccdma import _kernel, _kernel_py
from mccdma.sequences import gold_set, walsh_set

cy = pytest.importorskip("mccdma._kernel_cy")


def _inputs(k=10, n=32, m=2000, sigma=0.2, seed=0, gold=False):
    rng = np.random.default_rng(seed)
    chips = gold_set(k, seed=1).chips if gold else walsh_set(n, k).chips
    bits = np.where(rng.integers(0, 2, (m, k)) == 1, 1.0, -1.0)
    amps = rng.rayleigh(np.sqrt(0.5), (m, k, n))
    noise = sigma * rng.standard_normal((m, n))
    return chips, bits, amps, noise


@pytest.mark.parametrize("comb", ["egc", "mrc", "basc"])
@pytest.mark.parametrize("gold", [False, True])
def test_backends_bit_identical(comb, gold):
    chips, bits, amps, noise = _inputs(gold=gold)
    a = _kernel.run_symbols(comb, chips, bits, amps, noise, 0.003, 1.0, 1e6, impl=cy)
    b = _kernel.run_symbols(comb, chips, bits, amps, noise, 0.003, 1.0, 1e6,
                            impl=_kernel_py)
    assert np.array_equal(a[0], b[0])  # error counts
    assert np.array_equal(a[1], b[1])  # divergence flags
    assert np.array_equal(a[2], b[2])  # final weights, exact


def test_backends_agree_through_divergence():
    chips, bits, amps, noise = _inputs(k=6, m=800, sigma=1.0, seed=5)
    a = _kernel.run_symbols("basc", chips, bits, amps, noise, 30.0, 1.0, 1e6, impl=cy)
    b = _kernel.run_symbols("basc", chips, bits, amps, noise, 30.0, 1.0, 1e6,
                            impl=_kernel_py)
    assert a[1].any(), "expected at least one diverged user at this step-size"
    assert np.array_equal(a[0], b[0])
    assert np.array_equal(a[1], b[1])
    assert np.array_equal(a[2], b[2])
    assert np.all(np.abs(a[2]) <= 1e6)  # frozen at the last accepted update


def test_selected_backend_reports_compiled():
    assert _kernel.BACKEND == "compiled"


def test_kernel_rejects_shape_mismatch():
    chips, bits, amps, noise = _inputs(k=4, m=50)
    with pytest.raises(ValueError):
        _kernel.run_symbols("egc", chips, bits[:, :3], amps, noise, 0.1, 1.0, 1e6)
    with pytest.raises(ValueError):
        _kernel.run_symbols("egc", chips, bits, amps[:, :, :8], noise, 0.1, 1.0, 1e6)
    with pytest.raises(ValueError):
        _kernel.run_symbols("egc", chips, bits[:0], amps[:0], noise[:0], 0.1, 1.0, 1e6)
