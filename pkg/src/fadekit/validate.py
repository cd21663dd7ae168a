"""Named self-check suites behind `fadekit validate <suite>`.

Each suite returns (name, passed, detail) triples; everything here is a
fast subset of the full acceptance tests shipped with the source tree.
"""

from __future__ import annotations

import math

import scipy.special as sp

from . import metrics
from .channel import AlphaKappaMu, AlphaKappaMuExtreme
from .numerics import QuadSpec, integrate
from .specfun import MeijerGSpec, marcum_q, meijer_g, nuttall_q
from .system import HopChain

Check = tuple[str, bool, str]

_TIGHT = QuadSpec(rel_tol=1e-10, abs_tol=1e-14, max_subdivisions=800)


def _norm_check(law, mass: float) -> tuple[float, float]:
    total, _ = integrate(law.pdf, 0.0, math.inf, _TIGHT)
    total += mass
    probe = 1.5 * law.mean_snr
    part, _ = integrate(law.pdf, 0.0, probe, _TIGHT)
    cdf_err = abs(part + mass - law.cdf(probe))
    return abs(total - 1.0), cdf_err


def suite_normalization() -> list[Check]:
    checks: list[Check] = []
    for alpha, kappa, mu in [(1.0, 0.5, 2.7), (2.0, 2.0, 1.0), (3.5, 5.0, 0.5)]:
        law = AlphaKappaMu(alpha, kappa, mu, 2.0)
        norm_err, cdf_err = _norm_check(law, 0.0)
        checks.append(
            (
                f"akm({alpha},{kappa},{mu}) pdf normalization",
                norm_err <= 1e-8 and cdf_err <= 1e-7,
                f"norm err {norm_err:.2e}, cdf err {cdf_err:.2e}",
            )
        )
    for alpha, m in [(2.0, 0.5), (3.0, 1.5), (1.5, 3.0)]:
        law = AlphaKappaMuExtreme(alpha, m, 2.0)
        norm_err, cdf_err = _norm_check(law, law.zero_mass)
        checks.append(
            (
                f"extreme({alpha},{m}) pdf + mass normalization",
                norm_err <= 1e-8 and cdf_err <= 1e-7,
                f"norm err {norm_err:.2e}, cdf err {cdf_err:.2e}",
            )
        )
    return checks


def suite_reductions() -> list[Check]:
    checks: list[Check] = []
    ray = AlphaKappaMu(2.0, 1e-9, 1.0, 1.0)
    cdf_err = max(
        abs(ray.cdf(g) - (1.0 - math.exp(-g))) for g in (0.1, 0.5, 1.0, 2.0, 5.0)
    )
    checks.append(("Rayleigh-limit CDF", cdf_err <= 1e-6, f"max err {cdf_err:.2e}"))

    chain = HopChain((ray,))
    ber = metrics.ber_coherent(chain, metrics.modulation("bpsk"))
    want = 0.5 * (1.0 - math.sqrt(0.5))
    checks.append(
        ("Rayleigh-limit BPSK BER", abs(ber - want) <= 1e-5, f"{ber:.8f} vs {want:.8f}")
    )

    ora = metrics.capacity_ora(chain).value
    want = math.e * float(sp.exp1(1.0)) / math.log(2.0)
    checks.append(
        ("Rayleigh-limit rate-adaptive capacity", abs(ora - want) <= 1e-5, f"{ora:.8f} vs {want:.8f}")
    )
    return checks


def suite_ordering() -> list[Check]:
    checks: list[Check] = []
    for db in (0.0, 6.0, 12.0, 18.0, 24.0, 30.0):
        level = 10.0 ** (db / 10.0)
        hops = tuple(AlphaKappaMu(2.5, 1.5, 1.8, level) for _ in range(3))
        chain = HopChain(hops, gamma_th=0.0)
        opra = metrics.capacity_opra(chain)
        ora = metrics.capacity_ora(chain)
        tifr = metrics.capacity_tifr(chain, gamma_o=opra.cutoff)
        cifr = metrics.capacity_cifr(chain)
        ok = opra.value >= ora.value >= tifr.value >= cifr.value
        checks.append(
            (
                f"capacity ordering at {db:g} dB",
                ok,
                f"P={opra.value:.5f} O={ora.value:.5f} T={tifr.value:.5f} c={cifr.value:.5f}",
            )
        )
    return checks


def suite_specfun() -> list[Check]:
    checks: list[Check] = []
    worst = 0.0
    for n_ord in (0.0, 1.0, 2.0):
        for a in (0.5, 1.3, 2.0):
            for b in (0.0, 0.7, 1.5):
                lhs = nuttall_q(n_ord + 1.0, n_ord, a, b)
                rhs = a**n_ord * marcum_q(n_ord + 1.0, a, b)
                worst = max(worst, abs(lhs - rhs) / rhs)
    checks.append(("Nuttall-Marcum identity", worst <= 1e-9, f"max rel err {worst:.2e}"))

    worst = 0.0
    for a, b in [(1.0, 1.0), (2.0, 0.5), (0.5, 2.0)]:
        resid = abs(
            marcum_q(0.0, a, b)
            - marcum_q(1.0, a, b)
            + math.exp(-0.5 * (a * a + b * b)) * float(sp.i0(a * b))
        )
        worst = max(worst, resid)
    checks.append(("zero-order consistency", worst <= 1e-13, f"max resid {worst:.2e}"))

    exp_spec = MeijerGSpec(1, 0, 0, 1, (), (0.0,))
    inv_spec = MeijerGSpec(1, 1, 1, 1, (0.0,), (0.0,))
    worst = 0.0
    for z in (0.1, 0.5, 1.0, 2.0, 10.0):
        worst = max(worst, abs(meijer_g(exp_spec, z) - math.exp(-z)))
        worst = max(worst, abs(meijer_g(inv_spec, z) - 1.0 / (1.0 + z)))
    checks.append(("Meijer G closed-form identities", worst <= 1e-10, f"max err {worst:.2e}"))
    return checks


SUITES = {
    "normalization": suite_normalization,
    "reductions": suite_reductions,
    "ordering": suite_ordering,
    "specfun": suite_specfun,
}


def run_suite(name: str) -> list[Check]:
    if name == "all":
        out: list[Check] = []
        for fn in SUITES.values():
            out.extend(fn())
        return out
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name]()
