"""Kernel backend selection.

Prefers the compiled extension; falls back to the NumPy implementation
when the extension was not built.  Both produce bit-identical results, so
the choice only affects speed.
"""

import numpy as np

from . import _kernel_py

try:
    from . import _kernel_cy as _impl
    BACKEND = "compiled"
except ImportError:
    _impl = _kernel_py
    BACKEND = "python"

COMBINER_CODES = {"egc": _kernel_py.EGC, "mrc": _kernel_py.MRC, "basc": _kernel_py.BASC}


def run_symbols(combiner: str, chips, bits, amps, noise, mu: float,
                gamma: float, div_limit: float, impl=None):
    """Validate and dispatch one simulation point to a kernel backend.

    ``bits`` is (M, K) +-1, ``amps`` is (M, K, N), ``noise`` is (M, N);
    see ``_kernel_py.run_symbols``.  ``impl`` overrides the backend (used
    by the benchmark and the backend-equivalence tests).
    """
    code = COMBINER_CODES[combiner]
    chips = np.ascontiguousarray(chips, dtype=np.float64)
    bits = np.ascontiguousarray(bits, dtype=np.float64)
    amps = np.ascontiguousarray(amps, dtype=np.float64)
    noise = np.ascontiguousarray(noise, dtype=np.float64)
    n_users, n_sub = chips.shape
    n_symbols = bits.shape[0]
    if n_symbols < 1:
        raise ValueError("need at least one symbol")
    if bits.shape != (n_symbols, n_users):
        raise ValueError("bits shape disagrees with chips")
    if amps.shape != (n_symbols, n_users, n_sub):
        raise ValueError("amplitude array shape disagrees with chips/bits")
    if noise.shape != (n_symbols, n_sub):
        raise ValueError("noise shape disagrees")
    backend = _impl if impl is None else impl
    return backend.run_symbols(code, chips, bits, amps, noise,
                               float(mu), float(gamma), float(div_limit))
