"""Acceptance gate: one test and one summary line per criterion.

Tolerances are fixed here and are not tuned to the results. Each test records
a PASS/FAIL line (printed in the terminal summary) before asserting.
"""

import math
import subprocess
import sys
import time
import warnings

import numpy as np
import pytest
from scipy.optimize import minimize_scalar as scipy_min

from mpae_bounds import kernels, replication
from mpae_bounds.asymptotics import (HIGH_SNR_KINDS, constant_crossovers, critical_snr,
                                     high_snr_constant, verify_high_snr)
from mpae_bounds.bounds import (BoundKind, achievability_bound, cap_area_ratio,
                                channel_coding_converse, evaluate)
from mpae_bounds.cli import SweepSpec, sweep
from mpae_bounds.kernels import _alpha0_equation, alpha0, e0, ex, gamma_alpha, unlimited_quantize_exponent
from mpae_bounds.montecarlo import SimConfig, simulate_replication_detector
from mpae_bounds.replication import (decoding_exponent_G, eta_star, eta_star_quadratic,
                                     noncentral_lower_exponent, tilted_objective)

CC, SC, SP = BoundKind.CHANNEL_CODING, BoundKind.SPHERICAL_CAP, BoundKind.SPECTRUM_REPLICATION
CONVERSE_COLS = ("dpt", "channel_coding", "spherical_cap", "spectrum_replication", "unlimited")


def _clear_caches():
    kernels.alpha0.cache_clear()
    kernels.psi.cache_clear()
    replication._eta_star.cache_clear()


@pytest.fixture(scope="module")
def sweeps():
    """Criterion-5 grids: 100 log points over [0.1, 1e3], timed from cold caches."""
    out = {}
    for alpha in (0.1, 2.0, 10.0):
        _clear_caches()
        t0 = time.perf_counter()
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            cols = sweep(SweepSpec(alpha, 0.1, 1e3, 100, "log", tuple(BoundKind)))
        out[alpha] = (cols, time.perf_counter() - t0)
    return out


def test_criterion_01_alpha0(acceptance_line):
    times = []
    for _ in range(5):
        kernels.alpha0.cache_clear()
        t0 = time.perf_counter()
        a0 = alpha0()
        times.append(time.perf_counter() - t0)
    fast = min(times) < 1e-3
    close = abs(a0 - 1.5875) <= 1e-3
    ok = fast and close
    acceptance_line(1, ok, f"alpha0={a0:.10f} (target 1.5875 +-1e-3, residual "
                           f"{_alpha0_equation(a0):.1e}); runtime {min(times) * 1e3:.3f} ms (<1 ms)")
    assert ok


def test_criterion_02_gamma_alpha_high_branch(acceptance_line):
    exact2 = gamma_alpha(2.0).value == 1.0 / 3.0
    alphas = np.concatenate([[2.0], np.geomspace(2.0, 1e3, 200)[1:], [5.0, 10.0, 1e6]])
    mism = [a for a in alphas if gamma_alpha(a).value != a / (2.0 * (1.0 + a))]
    ok = exact2 and not mism
    acceptance_line(2, ok, f"gamma_2 == 1/3: {exact2}; alpha/(2(1+alpha)) exact on "
                           f"{len(alphas) - len(mism)}/{len(alphas)} orders >= 2")
    assert ok


def test_criterion_03_kernel_identities(acceptance_line):
    grid = np.geomspace(1e-3, 1e6, 50)
    e0_zero = max(abs(e0(0.0, g).value) for g in grid)
    ex_e0 = max(abs(ex(1.0, g).value - e0(1.0, g).value) for g in grid)
    gaps = np.array([abs(ex(1e6, g).value - g / 4) for g in grid])
    bad = grid[gaps > 1e-3]
    ok = e0_zero <= 1e-12 and ex_e0 <= 1e-9 and bad.size == 0
    detail = (f"max|E0(0,G)|={e0_zero:.1e} (<=1e-12); max|Ex(1,G)-E0(1,G)|={ex_e0:.1e} (<=1e-9); "
              f"|Ex(1e6,G)-G/4|<=1e-3 at {grid.size - bad.size}/{grid.size} grid points")
    if bad.size:
        detail += f" (fails from G={bad[0]:.4g}, worst {gaps.max():.3g} at G=1e6)"
    acceptance_line(3, ok, detail)
    assert ok


def test_criterion_04_unlimited_optimum(acceptance_line):
    worst_r = worst_v = 0.0
    for a in (2.0, 5.0, 10.0):
        for c in (1.0, 4.0):
            r, v = unlimited_quantize_exponent(a, c)
            worst_r = max(worst_r, abs(r - c / (2 * (a + 1))))
            worst_v = max(worst_v, abs(v - 2 * gamma_alpha(a).value * c))
    ok = worst_r <= 1e-6 and worst_v <= 1e-6
    acceptance_line(4, ok, f"max|R*-C/(2(a+1))|={worst_r:.1e}, max|value-2 gamma C|={worst_v:.1e} "
                           "(<=1e-6)")
    assert ok


def _is_min(cols, name, tie=1e-12):
    other = np.min([cols[c] for c in CONVERSE_COLS], axis=0)
    return cols[name] <= other + tie


def test_criterion_05_figure_ordering(sweeps, acceptance_line):
    c01, t01 = sweeps[0.1]
    c10, t10 = sweeps[10.0]
    c2, t2 = sweeps[2.0]
    cc_min = _is_min(c01, "channel_coding")
    sc_min = _is_min(c10, "spherical_cap")
    sp_min = _is_min(c2, "spectrum_replication")
    # smallest grid index from which replication stays the minimum
    tail = np.flatnonzero(~sp_min)
    start = 0 if tail.size == 0 else tail[-1] + 1
    has_tail = start < sp_min.size
    threshold = c2["snr"][start] if has_tail else float("nan")
    timing = max(t01, t2, t10) < 10.0
    ok = cc_min.all() and sc_min.all() and has_tail and timing
    acceptance_line(5, ok, f"alpha=0.1 cc min at {cc_min.sum()}/100; alpha=10 sc min at "
                           f"{sc_min.sum()}/100; alpha=2 replication min for G>={threshold:.4g}; "
                           f"sweeps {t01:.2f}/{t2:.2f}/{t10:.2f} s (<10 s)")
    assert ok


def test_criterion_06_high_snr_constants(acceptance_line):
    got = [high_snr_constant(k, 2.0).c for k in HIGH_SNR_KINDS]
    want = (-1.2958, -1.5835, -2.1589)
    const_ok = all(abs(g - w) <= 1e-3 for g, w in zip(got, want))
    mono = True
    for k in HIGH_SNR_KINDS:
        res = [abs(verify_high_snr(k, 2.0, g)) for g in (1e3, 1e4, 1e5, 1e6)]
        # 1e-12 absorbs rounding in the spherical-cap residual, which is exactly zero in theory
        mono &= all(b <= a + 1e-12 for a, b in zip(res, res[1:]))
    found = constant_crossovers()
    cc_sc = [a for a, p in found if set(p) == {CC, SC}]
    sc_sp = [a for a, p in found if set(p) == {SC, SP}]
    cross_ok = (len(cc_sc) == 1 and abs(cc_sc[0] - 1.34) <= 0.05
                and len(sc_sp) == 1 and abs(sc_sp[0] - 3.0) <= 1e-9)
    ok = const_ok and mono and cross_ok
    acceptance_line(6, ok, "c_2=(" + ", ".join(f"{g:.4f}" for g in got) + ") within 1e-3; "
                           f"residuals monotone: {mono}; crossovers {cc_sc[0]:.4f} (1.34+-0.05), "
                           f"{sc_sp[0]:.12f} (3 +-1e-9)")
    assert ok


def test_criterion_07_low_snr_slope(acceptance_line):
    g = 1e-4
    slopes = {a: channel_coding_converse(a, g) / g for a in (0.5, 1.0, 2.0, 10.0)}
    errs = {a: abs(s - a / (2 * (1 + a))) for a, s in slopes.items()}
    within = all(e <= 1e-3 for e in errs.values())
    no_gap_2 = abs(slopes[2.0] - gamma_alpha(2.0).value) <= 1e-3
    gap_1 = slopes[1.0] < gamma_alpha(1.0).value
    ok = within and no_gap_2 and gap_1
    parts = ", ".join(f"a={a:g}: {s:.5f} vs {a / (2 * (1 + a)):.5f}" for a, s in slopes.items())
    acceptance_line(7, ok, f"cc(a,1e-4)/1e-4 [{parts}] (tol 1e-3); a=2 equals gamma_2: {no_gap_2}; "
                           f"a=1 strictly below gamma_1={gamma_alpha(1.0).value:.5f}: {gap_1}")
    assert ok


def test_criterion_08_achievability(sweeps, acceptance_line):
    ratios = {a: achievability_bound(a, 1e6) / (a * math.log(1e6)) for a in (1.0, 2.0, 10.0)}
    scale_ok = all(0.9 <= r <= 1.1 for r in ratios.values())
    below = True
    for cols, _ in sweeps.values():
        conv = np.min([cols[c] for c in CONVERSE_COLS], axis=0)
        below &= bool(np.all(cols["achievability"] <= conv + 1e-9))
    ok = scale_ok and below
    acceptance_line(8, ok, "achievability/(a log G) at G=1e6: " +
                    ", ".join(f"a={a:g}: {r:.4f}" for a, r in ratios.items()) +
                    f" (in [0.9, 1.1]); achievability <= every converse on criterion-5 grids: {below}")
    assert ok


def test_criterion_09_critical_snrs(acceptance_line):
    sc2 = critical_snr(SC, 2.0).gamma_crit
    sc10 = critical_snr(SC, 10.0).gamma_crit
    exact = abs(sc2 - 6.0) <= 1e-12 and abs(sc10 - 22.0) <= 1e-12
    signs = True
    largest = True
    table = []
    for a in (1.0, 2.0, 5.0, 10.0):
        ga = gamma_alpha(a).value
        gcc = critical_snr(CC, a).gamma_crit
        gsp = critical_snr(SP, a).gamma_crit
        gsc = critical_snr(SC, a).gamma_crit
        d_cc = lambda G: ga * G - 2 * e0(a, G).value  # noqa: E731
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            signs &= d_cc(gcc * 0.999) < 0 < d_cc(gcc * 1.001)
            signs &= (replication.lambda_alpha(a, gsp * 0.999) < 0
                      < replication.lambda_alpha(a, gsp * 1.001))
        largest &= gsc > max(gcc, gsp)
        table.append(f"a={a:g}: cc={gcc:.4g} sc={gsc:.4g} sp={gsp:.4g}")
    ok = exact and signs and largest
    acceptance_line(9, ok, f"G_sc(2)={sc2!r}, G_sc(10)={sc10!r}; sign changes verified: {signs}; "
                           f"sc largest: {largest} [{'; '.join(table)}]")
    assert ok


def test_criterion_10_replication_internals(acceptance_line):
    e = eta_star(1.0, 10.0)
    q = eta_star_quadratic(1.0, 10.0)
    eta_ok = abs(e - 3.87083) <= 1e-4 and abs(q - 3.87083) <= 1e-4
    worst = 0.0
    for gamma in (0.5, 2.0, 10.0, 50.0, 300.0):
        for frac in (0.1, 0.4, 0.7, 0.95):
            eta = frac * (1 + gamma)
            closed = noncentral_lower_exponent(eta, gamma).lower_tail_noncentral
            res = scipy_min(lambda s: -tilted_objective(s, eta, gamma), bounds=(-500.0, 0.0),
                            method="bounded", options={"xatol": 1e-12})
            worst = max(worst, abs(-res.fun - closed))
    ok = eta_ok and worst <= 1e-8
    acceptance_line(10, ok, f"eta*(1,10)={e:.8f}, quadratic root {q:.8f} (3.87083 +-1e-4); "
                            f"closed form vs scipy tilted sup on 20 points: max diff {worst:.1e} (<=1e-8)")
    assert ok


def test_criterion_11_monte_carlo(acceptance_line):
    cfg = SimConfig(64, 10.0, 2.0, 8, 1_000_000, 20240611)
    t0 = time.perf_counter()
    rep = simulate_replication_detector(cfg)
    elapsed = time.perf_counter() - t0
    bound = 10 * math.exp(-32 * decoding_exponent_G(10.0, 2 * math.log(8) / 64))
    ex_ = rep.extras
    z_act = abs(ex_["active_energy_mean"] - 64 * 11) / ex_["active_energy_se"]
    z_idle = abs(ex_["idle_energy_mean"] - 64) / ex_["idle_energy_se"]
    ok = rep.empirical_error_prob <= bound and z_act <= 3 and z_idle <= 3 and elapsed < 60
    acceptance_line(11, ok, f"p_err={rep.empirical_error_prob:.3g} <= 10 exp(-N G/2)={bound:.3g}; "
                            f"mean z-scores {z_act:.2f}, {z_idle:.2f} (<=3); {elapsed:.2f} s (<60 s)")
    assert ok


def test_criterion_12_cap_geometry(acceptance_line):
    r3 = cap_area_ratio(3, math.pi / 3).exact
    r200 = cap_area_ratio(200, math.pi / 4).exact
    expo = 2 / 200 * math.log(r200)
    ok = abs(r3 - 0.25) <= 1e-9 and abs(expo + math.log(2)) <= 0.05
    acceptance_line(12, ok, f"ratio(3, pi/3)={r3:.12f} (1/4 +-1e-9); (2/N)log ratio(200, pi/4)="
                            f"{expo:.5f} (-log 2 +-0.05)")
    assert ok


def _cli(*argv):
    return subprocess.run([sys.executable, "-m", "mpae_bounds", *argv], capture_output=True,
                          check=True).stdout


def test_criterion_13_determinism(acceptance_line):
    runs = [
        ("simulate", "--seed", "99", "--trials", "30000", "--snr", "1", "--levels", "16"),
        ("simulate", "--seed", "99", "--trials", "30000", "--workers", "3", "--snr", "1"),
        ("simulate", "--scheme", "quantize", "--seed", "4", "--trials", "20000", "--u", "sweep",
         "--snr", "0.5", "--n-dim", "16", "--levels", "8"),
        ("bounds", "--alpha", "2", "--points", "25"),
    ]
    same = [_cli(*argv) == _cli(*argv) for argv in runs]
    ok = all(same)
    acceptance_line(13, ok, f"byte-identical repeated runs: {sum(same)}/{len(same)} "
                            "(3 simulate variants, 1 bounds sweep)")
    assert ok
