"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Criterion 10 is implemented exactly as stated and is expected to fail: the
truncated near-origin BER series has expansion parameter ~ 1/mean_snr^(alpha/2)
and therefore diverges at low SNR; see tests/test_metrics.py::TestAsymptoticBer
for the regime where the same code agrees with the exact values.
"""

import math
import os
import subprocess
import sys

import numpy as np
import scipy.special as sp

from fadekit import (
    AlphaKappaMu,
    AlphaKappaMuExtreme,
    HopChain,
    McConfig,
    MeijerGSpec,
    QuadSpec,
    ber_asymptotic,
    ber_coherent,
    ber_noncoherent,
    capacity_cifr,
    capacity_opra,
    capacity_ora,
    capacity_tifr,
    estimate_metric,
    integrate,
    marcum_q,
    meijer_g,
    modulation,
    nuttall_q,
    opra_cutoff,
    outage_probability,
    tifr_inversion_integral,
)
from fadekit.metrics import opra_cutoff_residual

TIGHT = QuadSpec(rel_tol=1e-11, abs_tol=1e-14, max_subdivisions=1500)


def db(x):
    return 10.0 ** (x / 10.0)


def report(num, ok, detail):
    print(f"[criterion {num:02d}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, detail


def test_c01_normalization_grid():
    worst_norm = 0.0
    worst_cdf = 0.0
    for alpha in (1.0, 2.0, 3.5):
        for kappa in (0.5, 2.0, 5.0):
            for mu in (0.5, 1.0, 2.7):
                law = AlphaKappaMu(alpha, kappa, mu, 2.0)
                total, _ = integrate(law.pdf, 0.0, math.inf, TIGHT)
                worst_norm = max(worst_norm, abs(total - 1.0))
                part, _ = integrate(law.pdf, 0.0, 1.5 * law.mean_snr, TIGHT)
                worst_cdf = max(worst_cdf, abs(part - law.cdf(1.5 * law.mean_snr)))
    for alpha in (1.0, 2.0, 3.5):
        for m in (0.5, 1.5, 3.0):
            law = AlphaKappaMuExtreme(alpha, m, 2.0)
            total, _ = integrate(law.pdf, 0.0, math.inf, TIGHT)
            worst_norm = max(worst_norm, abs(total + law.zero_mass - 1.0))
            part, _ = integrate(law.pdf, 0.0, 1.5 * law.mean_snr, TIGHT)
            worst_cdf = max(
                worst_cdf, abs(part + law.zero_mass - law.cdf(1.5 * law.mean_snr))
            )
    report(
        1,
        worst_norm <= 1e-8 and worst_cdf <= 1e-7,
        f"normalization err {worst_norm:.2e} (<=1e-8), cdf-integral err {worst_cdf:.2e} (<=1e-7)",
    )


def test_c02_moments_closed_form_vs_quadrature():
    worst = 0.0
    laws = [
        AlphaKappaMu(1.5, 3.0, 2.0, 1.0),
        AlphaKappaMu(2.8, 1.2, 0.9, 3.0),
        AlphaKappaMuExtreme(3.0, 2.0, 1.0),
    ]
    for law in laws:
        for r in (0.5, 1.0, 2.0, 3.0):
            num, _ = integrate(lambda g: g**r * law.pdf(g), 0.0, math.inf, TIGHT)
            worst = max(worst, abs(law.moment(r) - num) / abs(num))
    chain = HopChain(
        (AlphaKappaMu(2.0, 1.0, 1.5, db(10.0)), AlphaKappaMu(2.0, 0.7, 1.1, db(10.0))),
        gamma_th=1.0,
    )
    mean_identity = abs(
        chain.end_moment(1.0) - chain.decode_through * chain.hops[-1].moment(1.0)
    )
    # at alpha = 2 the scale parameter is the first moment itself
    scale_identity = abs(chain.end_moment(1.0) - chain.decode_through * db(10.0))
    report(
        2,
        worst <= 1e-6 and mean_identity <= 1e-12 and scale_identity <= 1e-9,
        f"moment rel err {worst:.2e} (<=1e-6), mean identity {mean_identity:.2e} (<=1e-12)",
    )


def _mc_chains():
    for n in (1, 2, 3):
        for snr_db in (0.0, 10.0, 20.0):
            level = db(snr_db)
            hops = [
                AlphaKappaMu(2.0, 0.8, 1.1, level),
                AlphaKappaMu(2.5, 1.2, 1.6, level),
                AlphaKappaMuExtreme(2.0, 1.5, level),
            ][:n]
            yield n, snr_db, HopChain(tuple(hops), gamma_th=1.0)


def test_c03_monte_carlo_corroboration():
    trials = 1_000_000
    failures = []
    seed = 1_700_000
    for n, snr_db, chain in _mc_chains():
        targets = {
            "op": outage_probability(chain, chain.gamma_th),
            "bpsk": ber_coherent(chain, modulation("bpsk")),
            "dbpsk": ber_noncoherent(chain, modulation("dbpsk")),
            "ora": capacity_ora(chain).value,
        }
        for tag, want in targets.items():
            seed += 1
            cfg = McConfig(trials=trials, seed=seed, streams=4)
            if tag == "op":
                est = estimate_metric(chain, cfg, "op")
            elif tag == "ora":
                est = estimate_metric(chain, cfg, "ora")
            else:
                est = estimate_metric(chain, cfg, "ber", mod=modulation(tag))
            gap = abs(est.mean - want)
            if gap > 4.0 * est.std_error:
                failures.append(f"{tag} n={n} {snr_db}dB: |{est.mean:.5g}-{want:.5g}|>{4*est.std_error:.2g}")
    report(3, not failures, f"36 estimates within 4 standard errors" if not failures else "; ".join(failures))


def test_c04_special_function_identities():
    worst_nuttall = 0.0
    for a in (0.5, 1.0, 1.5, 2.5, 4.0):
        for b in (0.0, 0.5, 1.0, 2.0, 3.5):
            for n_ord in (0.0, 1.0, 2.5):
                lhs = nuttall_q(n_ord + 1.0, n_ord, a, b)
                rhs = a**n_ord * marcum_q(n_ord + 1.0, a, b)
                worst_nuttall = max(worst_nuttall, abs(lhs - rhs) / abs(rhs))
    mono_ok = True
    for nu in (0.5, 1.0, 2.5):
        for a in (0.5, 2.0):
            vals = [marcum_q(nu, a, b) for b in np.linspace(0.0, 6.0, 20)]
            mono_ok &= all(0.0 <= v <= 1.0 for v in vals)
            mono_ok &= all(x >= y - 1e-13 for x, y in zip(vals, vals[1:]))
        for b in (0.5, 2.0):
            vals = [marcum_q(nu, a, b) for a in np.linspace(0.0, 6.0, 20)]
            mono_ok &= all(y >= x - 1e-13 for x, y in zip(vals, vals[1:]))
    worst_g = 0.0
    exp_spec = MeijerGSpec(1, 0, 0, 1, (), (0.0,))
    inv_spec = MeijerGSpec(1, 1, 1, 1, (0.0,), (0.0,))
    for z in (0.1, 0.5, 1.0, 2.0, 10.0):
        worst_g = max(worst_g, abs(meijer_g(exp_spec, z) - math.exp(-z)))
        worst_g = max(worst_g, abs(meijer_g(inv_spec, z) - 1.0 / (1.0 + z)))
    report(
        4,
        worst_nuttall <= 1e-10 and mono_ok and worst_g <= 1e-10,
        f"nuttall-marcum rel err {worst_nuttall:.2e} (<=1e-10), marcum monotone/bounded: {mono_ok}, "
        f"meijer identity err {worst_g:.2e} (<=1e-10)",
    )


def test_c05_rayleigh_reduction():
    law = AlphaKappaMu(2.0, 1e-9, 1.0, 1.0)
    chain = HopChain((law,))
    cdf_err = max(abs(law.cdf(g) - (1.0 - math.exp(-g))) for g in (0.1, 0.5, 1.0, 2.0, 5.0))
    ber = ber_coherent(chain, modulation("bpsk"))
    ber_want = 0.5 * (1.0 - math.sqrt(1.0 / 2.0))  # 0.146447 at unit mean SNR
    ora = capacity_ora(chain).value
    ora_want = math.e * float(sp.exp1(1.0)) / math.log(2.0)
    ok = cdf_err <= 1e-5 and abs(ber - ber_want) <= 1e-5 and abs(ora - ora_want) <= 1e-5
    report(
        5,
        ok,
        f"cdf err {cdf_err:.2e}, BPSK {ber:.6f} vs {ber_want:.6f}, "
        f"rate-adaptive {ora:.6f} vs {ora_want:.6f} (all <=1e-5)",
    )


def test_c06_severe_fading_error_floor():
    chain = HopChain((AlphaKappaMuExtreme(2.0, 1.5, db(60.0)),))
    got = ber_noncoherent(chain, modulation("dbpsk"))
    want = 0.5 * math.exp(-3.0)  # 0.0248935
    ok = abs(got - want) / want <= 0.02
    report(6, ok, f"DBPSK floor {got:.7f} vs (1/2)e^-3 = {want:.7f} (within 2%)")


_ORDERING_ROWS = []


def _capacity_sweep(chain_factory):
    rows = []
    for snr_db in np.linspace(0.0, 30.0, 20):
        chain = chain_factory(db(snr_db))
        cut = opra_cutoff(chain)
        opra = capacity_opra(chain)
        ora = capacity_ora(chain)
        tifr = capacity_tifr(chain, gamma_o=cut)
        cifr = capacity_cifr(chain)
        rows.append((snr_db, chain, cut, opra.value, ora.value, tifr.value, cifr.value))
    return rows


def test_c07_capacity_ordering():
    general = _capacity_sweep(
        lambda lv: HopChain(tuple(AlphaKappaMu(2.5, 1.5, 1.8, lv) for _ in range(3)))
    )
    severe = _capacity_sweep(
        lambda lv: HopChain(tuple(AlphaKappaMuExtreme(2.0, 3.0, lv) for _ in range(3)))
    )
    _ORDERING_ROWS.extend(general + severe)
    bad = [
        f"{r[0]:.1f}dB"
        for r in general + severe
        if not (r[3] >= r[4] >= r[5] >= r[6])
    ]
    report(7, not bad, "ordering holds at all 40 sweep points" if not bad else f"violations at {bad}")


def test_c08_opra_cutoff_constraint():
    if not _ORDERING_ROWS:
        _ORDERING_ROWS.extend(
            _capacity_sweep(
                lambda lv: HopChain(tuple(AlphaKappaMu(2.5, 1.5, 1.8, lv) for _ in range(3)))
            )
        )
    rows = _ORDERING_ROWS
    worst = 0.0
    in_range = True
    for snr_db, chain, cut, *_ in rows:
        worst = max(worst, abs(opra_cutoff_residual(chain, cut)))
        in_range &= 0.0 < cut <= 1.0
    report(8, worst <= 1e-8 and in_range, f"max residual {worst:.2e} (<=1e-8), cutoffs in (0,1]: {in_range}")


def test_c09_truncated_inversion_consistency():
    # the truncated-to-full gap closes like gamma_o^(alpha*mu/2 - 1), so the
    # 0.1% target at gamma_o = 1e-6 needs alpha*mu comfortably above 2
    gaps = []
    for alpha, kappa, mu in ((2.5, 1.0, 1.5), (3.2, 2.0, 1.5)):
        chain = HopChain((AlphaKappaMu(alpha, kappa, mu, db(10.0)),))
        tifr = capacity_tifr(chain, gamma_o=1e-6).value
        cifr = capacity_cifr(chain).value
        gaps.append(abs(tifr - cifr) / cifr)
    worst_routes = 0.0
    for alpha, kappa, mu in ((4.0, 1.0, 1.5), (2.5, 1.3, 2.0), (5.0, 0.6, 1.0)):
        chain = HopChain((AlphaKappaMu(alpha, kappa, mu, 2.0),))
        for go in (0.2, 0.8, 2.0):
            a = tifr_inversion_integral(chain, go, method="quad")
            b = tifr_inversion_integral(chain, go, method="nuttall")
            worst_routes = max(worst_routes, abs(a - b) / abs(a))
    ok = max(gaps) <= 1e-3 and worst_routes <= 1e-6
    report(
        9,
        ok,
        f"truncated-to-full gap {max(gaps):.2e} (<=1e-3), "
        f"inversion-integral route mismatch {worst_routes:.2e} (<=1e-6)",
    )


def test_c10_low_snr_series_ber_accuracy():
    """Target: 10-term series BER within 5% of exact for mean SNR <= -5 dB.

    Kept failing deliberately rather than weakened: the partial sums provably
    diverge in this regime (term ratio ~ mu(kappa+1)/(rho*mean_snr)^(alpha/2)
    exceeds 1 below roughly 5 dB), so no truncation order meets the target
    there.  The same series is verified to 5% at 10 dB and to machine
    precision by 20 dB in test_metrics.py::TestAsymptoticBer.
    """
    failures = []
    mod = modulation("dbpsk")
    for snr_db in (-10.0, -7.5, -5.0):
        level = db(snr_db)
        hops = (AlphaKappaMu(2.0, 1.0, 1.5, level), AlphaKappaMu(2.0, 1.0, 1.5, level))
        chain = HopChain(hops, gamma_th=0.1)
        exact = ber_noncoherent(chain, mod)
        approx = ber_asymptotic(chain, mod, n_terms=10)
        rel = abs(approx - exact) / exact
        if rel > 0.05:
            failures.append(f"general {snr_db}dB rel={rel:.3g}")
        extreme = HopChain((AlphaKappaMuExtreme(2.0, 1.0, level),))
        exact_e = ber_noncoherent(extreme, mod)
        rel_e = abs(ber_asymptotic(extreme, mod, n_terms=10) - exact_e) / exact_e
        if rel_e > 0.05:
            failures.append(f"severe {snr_db}dB rel={rel_e:.3g}")
    report(10, not failures, "series within 5% at low SNR" if not failures else "; ".join(failures))


def test_c11_deterministic_cli_output(tmp_path):
    config = tmp_path / "det.toml"
    config.write_text(
        """
metric = "ber"
modulation = "dbpsk"
gamma_th_db = 0.0

[[hops]]
alpha = 2.0
kappa = 1.0
mu = 1.5

[[hops]]
alpha = 2.5
kappa = 0.8
mu = 1.2

[sweep]
start_db = 0.0
stop_db = 20.0
points = 8

[mc]
enabled = true
trials = 50000
seed = 42
streams = 4
"""
    )
    outputs = {}
    for workers in ("1", "8"):
        out = tmp_path / f"det{workers}"
        env = dict(os.environ, FADEKIT_THREADS=workers)
        proc = subprocess.run(
            [sys.executable, "-m", "fadekit.cli", "run", str(config), "--out", str(out)],
            capture_output=True,
            text=True,
            env=env,
        )
        assert proc.returncode == 0, proc.stderr
        outputs[workers] = (out.with_suffix(".csv")).read_bytes()
    ok = outputs["1"] == outputs["8"] and len(outputs["1"]) > 0
    report(11, ok, f"CSV byte-identical across 1 and 8 worker threads ({len(outputs['1'])} bytes)")
