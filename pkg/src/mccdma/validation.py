"""Self-validation suite: invariant and oracle checks runnable in seconds.

Each check is deterministic (fixed seeds) and independent; ``run_all``
prints one line per check and reports overall success.  The full pytest
suite is stricter; this battery is the quick field check wired to the
``validate`` CLI subcommand.
"""

import io
import math

import numpy as np

from . import _kernel, _kernel_py
from ._ops import ordered_dot
from .combiners import basc_init, basc_step
from .linkmodel import ReceivedFrame, noise_sigma
from .montecarlo import SimPoint, analytic_mrc_ber, run_point, sweep
from .sequences import cross_corr, gold_set, walsh_set

_GOLD_PERIOD = 31


def _check_walsh_exactness():
    sset = walsh_set(32, 20)
    corr = cross_corr(sset)
    off = corr - np.diag(np.diag(corr))
    if np.any(off != 0.0):
        return False, "walsh rows are not exactly orthogonal"
    energy = np.sum(sset.chips**2, axis=1)
    worst = float(np.max(np.abs(energy - 1.0)))
    if worst > 1e-12:
        return False, f"row energy off by {worst:.2e}"
    return True, f"20 rows orthogonal, max energy error {worst:.1e}"


def _check_gold_properties():
    sset = gold_set(33, seed=7)
    raw = np.rint(sset.chips[:, :_GOLD_PERIOD] * np.sqrt(32)).astype(int)
    allowed = {-1, -9, 7}
    for j in range(6):  # spot-check pairs; the test suite sweeps all of them
        for k in range(j + 1, 6):
            for shift in range(_GOLD_PERIOD):
                c = int(np.dot(raw[j], np.roll(raw[k], shift)))
                if c not in allowed:
                    return False, f"cross-corr {c} at pair ({j},{k}) shift {shift}"
    off = cross_corr(sset) - np.eye(33)
    worst = float(np.max(np.abs(off - np.diag(np.diag(off)))))
    if worst > 10.0 / 32.0 + 1e-12:
        return False, f"appended-chip cross-correlation too large: {worst:.4f}"
    return True, "three-valued cross-correlation, appended bound holds"


def _check_noise_calibration():
    expected = {0.0: 0.7071068, 10.0: 0.2236068, 20.0: 0.0707107}
    for db, want in expected.items():
        if abs(noise_sigma(db) - want) > 1e-6:
            return False, f"sigma({db} dB) = {noise_sigma(db)}"
    return True, "sigma(0/10/20 dB) match"


def _check_basc_hand_case():
    state = basc_init(np.array([0.7, 0.7]), mu=0.1)
    frame = ReceivedFrame(r=np.array([1.0, -0.2]), symbol_index=0)
    z, bit, nxt = basc_step(state, frame)
    ok = (abs(z - 0.56) < 1e-12 and bit == 1
          and np.allclose(nxt.weights, [0.7384384, 0.6923123], atol=1e-7))
    return ok, f"z={z:.6f}, w'={nxt.weights}"


def _check_gradient():
    rng = np.random.default_rng(42)
    gamma = 1.0
    worst = 0.0
    for _ in range(200):
        w = rng.standard_normal(32)
        r = rng.standard_normal(32)
        z = ordered_dot(w, r)
        grad = z * (z * z - gamma) * r
        fd = np.empty(32)
        for n in range(32):
            h = 1e-6 * max(1.0, abs(w[n]))
            wp, wm = w.copy(), w.copy()
            wp[n] += h
            wm[n] -= h
            jp = (ordered_dot(wp, r) ** 2 - gamma) ** 2
            jm = (ordered_dot(wm, r) ** 2 - gamma) ** 2
            fd[n] = (jp - jm) / (2.0 * h)
        rel = np.linalg.norm(fd / 4.0 - grad) / np.linalg.norm(grad)
        worst = max(worst, rel)
    return worst < 1e-6, f"worst relative gradient error {worst:.2e}"


def _check_mrc_oracle():
    for ebn0 in (0.0, 5.0):
        point = SimPoint("mrc", "walsh", 1, 32, ebn0, 0.0, 0.003, 50_000, "iid", 1234)
        rec = run_point(point)
        p = analytic_mrc_ber(ebn0, 32)
        slack = 4.0 * math.sqrt(p * (1.0 - p) / rec.bits_total)
        if abs(rec.ber - p) > slack:
            return False, f"{ebn0} dB: ber {rec.ber:.5f} vs analytic {p:.5f}"
    return True, "single-user MRC BER matches the closed form at 0 and 5 dB"


def _check_walsh_zero_mai():
    for comb in ("egc", "mrc", "basc"):
        point = SimPoint(comb, "walsh", 16, 32, math.inf, 0.0, 0.003, 1000, "ones", 99)
        rec = run_point(point)
        if rec.bit_errors != 0:
            return False, f"{comb}: {rec.bit_errors} errors in the orthogonal case"
    return True, "noiseless unit-channel walsh BER is exactly 0 for all combiners"


def _check_mu_limit():
    base = SimPoint("basc", "walsh", 8, 32, 10.0, 0.0, 1e-300, 2000, "iid", 5)
    rec_basc = run_point(base)
    from dataclasses import replace
    rec_egc = run_point(replace(base, combiner="egc"))
    ok = rec_basc.bit_errors == rec_egc.bit_errors
    return ok, (f"mu->0 BASC errors {rec_basc.bit_errors} vs fixed-weight "
                f"{rec_egc.bit_errors}")


def _check_backends():
    if _kernel.BACKEND != "compiled":
        return True, "python backend only; nothing to compare"
    rng = np.random.default_rng(8)
    k, n, m = 8, 32, 1500
    chips = walsh_set(n, k).chips
    bits = np.where(rng.integers(0, 2, (m, k)) == 1, 1.0, -1.0)
    amps = rng.rayleigh(np.sqrt(0.5), (m, k, n))
    noise = 0.2 * rng.standard_normal((m, n))
    for comb in ("egc", "mrc", "basc"):
        a = _kernel.run_symbols(comb, chips, bits, amps, noise, 0.01, 1.0, 1e6)
        b = _kernel.run_symbols(comb, chips, bits, amps, noise, 0.01, 1.0, 1e6,
                                impl=_kernel_py)
        if not (np.array_equal(a[0], b[0]) and np.array_equal(a[2], b[2])):
            return False, f"{comb}: compiled and python kernels disagree"
    return True, "compiled and python kernels bit-identical"


def _check_csv_schema():
    from . import cli

    frozen = ("combiner,seq,k_users,n_subcarriers,ebn0_db,fd_tb,mu,symbols,"
              "bit_errors,bits_total,ber,ci95_low,ci95_high,diverged,seed")
    if cli.CSV_HEADER != frozen:
        return False, "CSV header drifted from the frozen schema"
    rec = run_point(SimPoint("egc", "walsh", 2, 32, 10.0, 0.0, 0.003, 100, "iid", 3))
    buf = io.StringIO()
    cli.write_csv([rec], buf)
    lines = buf.getvalue().splitlines()
    if lines[0] != frozen or len(lines) != 2:
        return False, "CSV emission does not match the schema"
    cfg = cli.parse_config("ber-users", ["--users", "2:1:4", "--ebn0", "12"])
    cfg2 = cli.parse_config("ber-users", [], config_text=cli.format_config(cfg))
    if cfg2 != cfg:
        return False, "config round-trip is not idempotent"
    return True, "schema frozen and config round-trip idempotent"


def _check_determinism():
    base = SimPoint("basc", "walsh", 4, 32, 8.0, 0.003, 0.01, 300, "jakes", 77)
    a = sweep(base, "k_users", [2, 3, 4], n_jobs=1)
    b = sweep(base, "k_users", [2, 3, 4], n_jobs=2)
    return a == b, "sweep identical across thread counts"


CHECKS = [
    ("walsh exactness", _check_walsh_exactness),
    ("gold properties", _check_gold_properties),
    ("noise calibration", _check_noise_calibration),
    ("basc hand case", _check_basc_hand_case),
    ("cm gradient", _check_gradient),
    ("mrc analytic oracle", _check_mrc_oracle),
    ("walsh zero-MAI", _check_walsh_zero_mai),
    ("mu->0 equivalence", _check_mu_limit),
    ("kernel backends", _check_backends),
    ("csv schema", _check_csv_schema),
    ("thread determinism", _check_determinism),
]


def run_all(out=None) -> bool:
    """Run every check, print one line each, return overall success."""
    import sys

    out = sys.stdout if out is None else out
    all_ok = True
    for name, fn in CHECKS:
        ok, detail = fn()
        all_ok &= ok
        print(f"[{'ok' if ok else 'FAIL'}] {name}: {detail}", file=out)
    print("validation " + ("PASSED" if all_ok else "FAILED"), file=out)
    return all_ok
