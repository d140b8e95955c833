"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line.  Tolerances are fixed here, not tuned at runtime.

Criterion 3 is expected to fail at N in {4, 16}: the non-diagonal
average-gain closed form treats distinct sorted-amplitude order statistics
as uncorrelated, so simulated gains sit ~5.9% (N=4) and ~2.6% (N=16) above
it, outside the 2% target.  See README "Known discrepancies".
"""
import time
from dataclasses import replace
from itertools import permutations

import numpy as np
import pytest
from scipy import special

from ris_nd import theory
from ris_nd.channel import FadingParams, Geometry, sample_channels, trial_rng
from ris_nd.experiments import _run_sweep_point, figure_presets, run_scenario
from ris_nd.phase_design import (alt_opt_miso, baseline_gains, channel_gain,
                                 diag_phases_siso, nondiag_siso)
from ris_nd.sdp import SdpProblem, brute_force_phases, recover_q, solve_unit_diag_sdp


def _report(name: str, ok: bool, detail: str = "") -> None:
    print(f"[ACCEPT] {name}: {'PASS' if ok else 'FAIL'}  {detail}")


def _rayleigh(rng, shape):
    return rng.rayleigh(scale=np.sqrt(0.5), size=shape)


def test_c01_worked_example():
    t0 = time.time()
    g = np.array([1.4 * np.exp(-3j * np.pi / 4), 0.2 * np.exp(5j * np.pi / 6),
                  0.4 * np.exp(-7j * np.pi / 8), 0.8 * np.exp(-1j * np.pi / 6)])
    hH = np.array([0.6 * np.exp(-1j * np.pi / 4), 1.0 * np.exp(2j * np.pi / 3),
                   0.3 * np.exp(1j * np.pi / 3), 0.1 * np.exp(1j * np.pi / 8)])
    diag_sum = np.sqrt(channel_gain(hH, diag_phases_siso(g, hH), g))
    nond_sum = np.sqrt(channel_gain(hH, nondiag_siso(g, hH), g))
    mapping = {i + 1: int(m) + 1 for i, m in enumerate(nondiag_siso(g, hH).bijection())}
    ok = (abs(diag_sum - 1.24) < 1e-12 and abs(nond_sum - 2.02) < 1e-12
          and mapping == {1: 2, 2: 4, 3: 3, 4: 1} and time.time() - t0 < 1.0)
    _report("C1 worked-example", ok,
            f"sums {diag_sum:.12f}/{nond_sum:.12f}, bijection {mapping}")
    assert ok


def test_c02_rearrangement_dominance():
    t0 = time.time()
    rng = np.random.default_rng(202)
    all_ok = True
    detail = []
    for N in (2, 4, 16, 64):
        a = _rayleigh(rng, (100000, N))
        b = _rayleigh(rng, (100000, N))
        diag = (a * b).sum(axis=1) ** 2
        nond = (np.sort(a, axis=1) * np.sort(b, axis=1)).sum(axis=1) ** 2
        bound = (a ** 2).sum(axis=1) * (b ** 2).sum(axis=1)
        dom = np.all(nond >= diag - 1e-9 * np.maximum(1, nond))
        bnd = np.all(nond <= bound + 1e-9 * bound) and np.all(diag <= bound + 1e-9 * bound)
        all_ok &= bool(dom and bnd)
        detail.append(f"N={N}:{'ok' if dom and bnd else 'VIOLATED'}")
        # the amplitude formulas above are exactly what the operators compute
        for t in range(50):
            r = trial_rng(771, N, t)
            g = (r.standard_normal(N) + 1j * r.standard_normal(N)) / np.sqrt(2)
            hh = (r.standard_normal(N) + 1j * r.standard_normal(N)) / np.sqrt(2)
            want = np.sum(np.sort(np.abs(g)) * np.sort(np.abs(hh))) ** 2
            got = channel_gain(hh, nondiag_siso(g, hh), g)
            assert abs(got - want) < 1e-10 * max(1, want)
    elapsed = time.time() - t0
    ok = all_ok and elapsed < 60
    _report("C2 rearrangement-dominance", ok, f"{' '.join(detail)} ({elapsed:.1f}s)")
    assert ok


def test_c03_fig5_closed_form_vs_mc():
    """Known-failing at N in {4, 16}: the closed form drops order-statistic
    correlations (uncorrelated cross terms), so paired-draw MC exceeds it by
    more than the 2% target there.  Kept at its stated tolerance."""
    t0 = time.time()
    cfg = replace(figure_presets("5", seed=31)[0], trials=100000)
    recs = run_scenario(cfg)
    mc = {(r.sweep_value, r.architecture): r.mean for r in recs}
    failures = []
    lines = []
    for N in (4, 16, 64):
        diag_th = theory.diag_gain_rician(N, 0.0, 0.0) / N ** 2
        nond_th = theory.nondiag_gain_rayleigh(N) / N ** 2
        d_dev = abs(mc[(N, "conventional")] - diag_th) / diag_th
        n_dev = abs(mc[(N, "nondiag")] - nond_th) / nond_th
        lines.append(f"N={N}: diag dev {d_dev * 100:.2f}%, nondiag dev {n_dev * 100:.2f}%")
        if d_dev > 0.02:
            failures.append(f"diag@{N}")
        if n_dev > 0.02:
            failures.append(f"nondiag@{N}")
        if not (mc[(N, "conventional")] < mc[(N, "nondiag")] <= mc[(N, "fully")] * (1 + 1e-9)):
            failures.append(f"ordering@{N}")
    ratio64 = mc[(64, "nondiag")] / mc[(64, "fully")]
    if ratio64 < 0.95:
        failures.append("proposed/fully@64")
    elapsed = time.time() - t0
    if elapsed > 300:
        failures.append("runtime")
    ok = not failures
    _report("C3 fig5-closed-form-vs-MC", ok,
            f"{'; '.join(lines)}; proposed/fully@64 {ratio64:.3f} ({elapsed:.0f}s)")
    assert ok, (f"sub-checks failed: {failures} — expected: the closed form's "
                "uncorrelated cross terms undershoot simulation at small N "
                "(README, Known discrepancies)")


def test_c04_asymptote_n256():
    t0 = time.time()
    N = 256
    diag = theory.diag_gain_rician(N, 0.0, 0.0) / N ** 2
    nond = theory.nondiag_gain_rayleigh(N) / N ** 2
    target = np.pi ** 2 / 16.0
    elapsed = time.time() - t0
    ok = abs(diag - target) / target < 0.03 and nond >= 0.95 and elapsed < 300
    _report("C4 asymptote-N256", ok,
            f"diag {diag:.4f} (target {target:.4f}), nondiag {nond:.4f} ({elapsed:.0f}s)")
    assert ok


def test_c05_order_statistic_engine():
    t0 = time.time()
    ok = True
    worst_pdf = 0.0
    x = np.linspace(0.02, 4.0, 80)
    for N in range(1, 17):
        for i in range(1, N + 1):
            dev = np.max(np.abs(theory.ordstat_rayleigh_pdf(i, N, x)
                                - theory.ordstat_pdf_generic(i, N, x)))
            worst_pdf = max(worst_pdf, dev)
            total, _ = __import__("scipy.integrate", fromlist=["quad"]).quad(
                lambda t: theory.ordstat_rayleigh_pdf(i, N, t), 0, 12, limit=200)
            ok &= abs(total - 1.0) < 1e-8
    ok &= worst_pdf < 1e-8
    worst_sum = 0.0
    for kappa in (0.0, 0.1, 1.0, 10.0):
        for N in (8, 16):
            s = sum(theory.ordstat_moment(i, N, kappa, 2) for i in range(1, N + 1))
            worst_sum = max(worst_sum, abs(s - N))
    ok &= worst_sum < 1e-8
    elapsed = time.time() - t0
    ok &= elapsed < 60
    _report("C5 order-statistic-engine", ok,
            f"max pdf dev {worst_pdf:.2e}, max moment-sum dev {worst_sum:.2e} "
            f"({elapsed:.0f}s)")
    assert ok


def test_c06_outage_bound():
    t0 = time.time()
    cfg = replace(figure_presets("8a", seed=47)[0], trials=50000)
    recs = run_scenario(cfg)
    mc = {r.sweep_value: r.mean for r in recs if r.architecture == "nondiag"}
    rho, wth = cfg.Pt, cfg.omega_th
    n = cfg.trials
    ok = True
    lines = []
    bounds = []
    for N in (8, 16, 32, 64):
        bound = theory.outage_probability(wth, theory.SnrModel(rho=rho, N=N))
        bounds.append(bound)
        p = mc[N]
        allow = max(3 * np.sqrt(p * (1 - p) / n), 3.0 / n)
        ok &= bound <= p + allow
        lines.append(f"N={N}: bound {bound:.3e} <= MC {p:.3e}+{allow:.0e}")
    ok &= all(b > a - 1e-15 for a, b in zip(bounds[1:], bounds))  # decreasing in N
    elapsed = time.time() - t0
    ok &= elapsed < 300
    _report("C6 outage-bound", ok, f"{'; '.join(lines)} ({elapsed:.0f}s)")
    assert ok


def test_c07_ber_sweep():
    t0 = time.time()
    N, T = 4, 100000
    rng = np.random.default_rng(88)
    ya = rng.gamma(N, 1.0, T)
    yb = rng.gamma(N, 1.0, T)
    a = _rayleigh(rng, (T, N))
    b = _rayleigh(rng, (T, N))
    prop_gain = (np.sort(a, axis=1) * np.sort(b, axis=1)).sum(axis=1) ** 2
    rhos = 10 ** (np.linspace(-12.0, 8.0, 20) / 10.0)
    theory_vals, ok = [], True
    for rho in rhos:
        th = theory.average_ber(theory.SnrModel(rho=rho, N=N), 0.5, 1.0)
        theory_vals.append(th)
        per = 0.5 * special.erfc(np.sqrt(rho * ya * yb))
        se = per.std() / np.sqrt(T)
        ok &= abs(per.mean() - th) <= 3 * se
        per_p = 0.5 * special.erfc(np.sqrt(rho * prop_gain))
        se_p = per_p.std() / np.sqrt(T)
        ok &= per_p.mean() >= th - 3 * se_p
    mono = all(b <= a + 1e-14 for a, b in zip(theory_vals, theory_vals[1:]))
    ok &= mono
    elapsed = time.time() - t0
    ok &= elapsed < 300
    _report("C7 ber-sweep", ok,
            f"20 points in [{theory_vals[-1]:.2e}, {theory_vals[0]:.3f}], "
            f"monotone={mono} ({elapsed:.0f}s)")
    assert ok


def test_c08_sdp_vs_brute_force():
    t0 = time.time()
    rng = np.random.default_rng(99)
    worst_ratio, worst_gap, ok = 1.0, 0.0, True
    for _ in range(100):
        B = rng.standard_normal((4, 6)) + 1j * rng.standard_normal((4, 6))
        A = B @ B.conj().T
        Q, obj, gap = solve_unit_diag_sdp(SdpProblem(A=A, tol=1e-6))
        _, bf = brute_force_phases(A, 16)
        q = recover_q(Q)
        rec = float(np.real(q.conj() @ A @ q))
        ok &= obj >= bf - 1e-9
        ok &= gap <= 1e-6
        worst_ratio = min(worst_ratio, rec / bf)
        worst_gap = max(worst_gap, gap)
    ok &= worst_ratio >= 0.95
    elapsed = time.time() - t0
    ok &= elapsed < 120
    _report("C8 sdp-vs-brute-force", ok,
            f"worst recovery ratio {worst_ratio:.4f}, worst gap {worst_gap:.2e} "
            f"({elapsed:.0f}s)")
    assert ok


def test_c09_algorithm1():
    t0 = time.time()
    ok = True
    worst_iters = 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        G = (rng.standard_normal((64, 4)) + 1j * rng.standard_normal((64, 4))) / np.sqrt(2)
        hH = (rng.standard_normal(64) + 1j * rng.standard_normal(64)) / np.sqrt(2)
        _, _, tr_p = alt_opt_miso(G, hH, sort_perms=True)
        _, _, tr_c = alt_opt_miso(G, hH, sort_perms=False)
        for tr in (tr_p, tr_c):
            ok &= all(b >= a - 1e-9 * max(1, abs(a)) for a, b in zip(tr, tr[1:]))
            converged = len(tr) >= 2 and (tr[-1] - tr[-2]) < 1e-4 * max(1.0, tr[-1])
            ok &= converged and len(tr) <= 50
            worst_iters = max(worst_iters, len(tr))
        ok &= tr_p[-1] >= tr_c[-1] - 1e-9 * tr_c[-1]
    elapsed = time.time() - t0
    ok &= elapsed < 120
    _report("C9 algorithm1", ok,
            f"100 instances, worst iterations {worst_iters} ({elapsed:.0f}s)")
    assert ok


def test_c10_mu_mimo_trend():
    t0 = time.time()
    cfg = next(c for c in figure_presets("10b", seed=7) if c.K == 2)
    cfg = replace(cfg, trials=150, metrics=("rate",))
    ok = True
    lines = []
    for si, N in enumerate(cfg.sweep_grid):
        values, failures, _ = _run_sweep_point(cfg, si, 0, cfg.trials)
        rp = np.asarray(values["nondiag"]["rate"])
        rc = np.asarray(values["conventional"]["rate"])
        d = rp - rc  # paired by construction
        se = d.std(ddof=1) / np.sqrt(d.size)
        ok &= d.mean() > 0
        if N == 64:
            ok &= d.mean() > 3 * se
        lines.append(f"N={int(N)}: diff {d.mean():.3f}+-{se:.3f}")
        ok &= failures["nondiag"] == 0
    elapsed = time.time() - t0
    ok &= elapsed < 600
    _report("C10 mu-mimo-trend", ok, f"{'; '.join(lines)} ({elapsed:.0f}s)")
    assert ok


def test_c11_complexity_table():
    t0 = time.time()
    ok = True
    for N in (4, 8, 16, 32, 64, 128, 256):
        for G in (2, 4, 8):
            if N % G:
                continue
            c = theory.complexity_counts(N, G)
            ok &= c["impedances"] == {"conventional": N, "nondiag": N,
                                      "group": N * (G + 1) // 2,
                                      "fully": N * (N + 1) // 2}
            ok &= c["control_load"] == {"conventional": N, "nondiag": 2 * N,
                                        "group": N * (G + 1) // 2,
                                        "fully": N * (N + 1) // 2}
    elapsed = time.time() - t0
    ok &= elapsed < 1.0
    _report("C11 complexity-table", ok, f"exact match ({elapsed:.2f}s)")
    assert ok
