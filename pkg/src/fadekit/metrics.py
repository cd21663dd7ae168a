"""End-to-end performance metrics for decode-and-forward chains.

Every quantity is computed from its defining one-dimensional integral against
the end-to-end SNR law (survival-function forms where integration by parts
gives them), and a handful of closed forms are kept where they are univariate
and independently checkable: the second-order amount of fading, the moments,
the channel-inversion inverse moment as a Meijer G contour value, and the
truncated-inversion integral as a Nuttall Q value when alpha*mu > 4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import scipy.special as sp

from .channel import AlphaKappaMu, AlphaKappaMuExtreme, poincare_series
from .errors import DivergentInverseMoment, DomainError
from .numerics import QuadSpec, fixed_point, integrate_split
from .specfun import MeijerGSpec, kummer_m_scaled, meijer_g, nuttall_q
from .system import HopChain

__all__ = [
    "Modulation",
    "modulation",
    "CapacityResult",
    "amount_of_fading",
    "outage_probability",
    "ber_coherent",
    "ber_noncoherent",
    "ber_asymptotic",
    "capacity_ora",
    "opra_cutoff",
    "capacity_opra",
    "capacity_cifr",
    "capacity_tifr",
    "cifr_inverse_moment",
    "tifr_inversion_integral",
]

_SPEC = QuadSpec(rel_tol=1e-10, abs_tol=1e-280, max_subdivisions=800)
_LN2 = math.log(2.0)


def _scale_cuts(mean: float, *extra: float) -> tuple[float, ...]:
    # bracket the fading scale by three decades either side so adaptive
    # quadrature cannot step over the density support, whatever the SNR
    return (1e-3 * mean, mean, 1e3 * mean) + extra


@dataclass(frozen=True)
class Modulation:
    """Conditional-BER constants (phi, rho) of a modulation scheme."""

    name: str
    coherent: bool
    phi: float
    rho: float


_COHERENT = {
    "bfsk_coh": (1.0, 1.0),
    "bpsk": (1.0, math.sqrt(2.0)),
    "qpsk": (2.0, 1.0),
    "qam4": (2.0, 1.0),
}
_NONCOHERENT = {
    "bfsk_nc": (0.5, 0.5),
    "dbpsk": (0.5, 1.0),
}


def modulation(name: str, m_ary: int | None = None) -> Modulation:
    """Look up a modulation tag; MPAM and MFSK need the constellation size."""
    key = name.lower()
    if key in _COHERENT:
        phi, rho = _COHERENT[key]
        return Modulation(key, True, phi, rho)
    if key in _NONCOHERENT:
        phi, rho = _NONCOHERENT[key]
        return Modulation(key, False, phi, rho)
    if key == "mpam":
        if not m_ary or m_ary < 2:
            raise DomainError("MPAM requires m_ary >= 2")
        return Modulation(key, True, 2.0 * (1.0 - 1.0 / m_ary), math.sqrt(6.0 / (m_ary**2 - 1.0)))
    if key == "mfsk":
        if not m_ary or m_ary < 2:
            raise DomainError("MFSK requires m_ary >= 2")
        return Modulation(key, False, (m_ary - 1.0) / 2.0, 0.5)
    raise DomainError(f"unknown modulation tag '{name}'")


@dataclass(frozen=True)
class CapacityResult:
    """Capacity in bits/s (per unit bandwidth when bandwidth = 1)."""

    value: float
    cutoff: float | None
    scheme: str
    diverged: bool = False


# ---------------------------------------------------------------------------
# Amount of fading and outage
# ---------------------------------------------------------------------------


def amount_of_fading(chain: HopChain, order: int = 2) -> float:
    """Normalized fading severity E[g^order] / E[g]^order - 1.

    Order 2 (the variance-to-squared-mean ratio) is evaluated in closed form
    from the last hop's moment constants; higher orders go through the moment
    formula directly.
    """
    if order < 2:
        raise DomainError(f"amount_of_fading order must be >= 2, got {order}")
    abar = chain.decode_through
    if abar <= 0.0:
        raise DomainError("amount of fading undefined when the chain is in certain outage")
    if order != 2:
        m1 = chain.end_moment(1.0)
        return chain.end_moment(float(order)) / m1**order - 1.0
    hop = chain.last
    if isinstance(hop, AlphaKappaMu):
        mk = hop.mu * hop.kappa
        num = math.exp(sp.gammaln(4.0 / hop.alpha + hop.mu) - sp.gammaln(hop.mu)) * kummer_m_scaled(
            4.0 / hop.alpha + hop.mu, hop.mu, mk
        )
        den = math.exp(sp.gammaln(2.0 / hop.alpha + hop.mu) - sp.gammaln(hop.mu)) * kummer_m_scaled(
            2.0 / hop.alpha + hop.mu, hop.mu, mk
        )
        return num / (abar * den**2) - 1.0
    two_m = 2.0 * hop.m
    num = float(sp.gamma(4.0 / hop.alpha + 1.0)) * kummer_m_scaled(4.0 / hop.alpha + 1.0, 2.0, two_m)
    den = float(sp.gamma(2.0 / hop.alpha + 1.0)) * kummer_m_scaled(2.0 / hop.alpha + 1.0, 2.0, two_m)
    return num / (abar * two_m * den**2) - 1.0


def outage_probability(chain: HopChain, gamma_th_op: float) -> float:
    """P(end-to-end SNR <= gamma_th_op)."""
    if gamma_th_op < 0.0:
        raise DomainError(f"outage threshold must be >= 0, got {gamma_th_op}")
    return chain.end_cdf(gamma_th_op)


# ---------------------------------------------------------------------------
# Bit error rates
# ---------------------------------------------------------------------------


def ber_coherent(chain: HopChain, mod: Modulation) -> float:
    """Average (phi/2) erfc(rho sqrt(g/2)) over the end-to-end law.

    The point mass at zero contributes phi/2 exactly since erfc(0) = 1.
    """
    if not mod.coherent:
        raise DomainError(f"{mod.name} is not a coherent scheme")
    phi, rho = mod.phi, mod.rho
    last = chain.last
    cont, _ = integrate_split(
        lambda g: sp.erfc(rho * math.sqrt(0.5 * g)) * last.pdf(g),
        0.0,
        math.inf,
        _scale_cuts(last.mean_snr, 2.0 / rho**2),
        _SPEC,
    )
    return 0.5 * phi * chain.end_point_mass() + 0.5 * phi * chain.decode_through * cont


def ber_noncoherent(chain: HopChain, mod: Modulation) -> float:
    """phi * MGF(rho); the point masses ride along inside the MGF."""
    if mod.coherent:
        raise DomainError(f"{mod.name} is not a non-coherent scheme")
    return mod.phi * chain.end_mgf(mod.rho)


def ber_asymptotic(chain: HopChain, mod: Modulation, n_terms: int = 10) -> float:
    """BER from the truncated near-origin expansion of the last hop's density.

    The expansion parameter shrinks like 1/mean_snr^(alpha/2): partial sums
    are accurate at high per-hop SNR and diverge once the mean SNR drops below
    roughly the dominant/scattered power scale.  The zero-SNR masses are
    carried through exactly.
    """
    series = poincare_series(chain.last, n_terms)
    mass = chain.end_point_mass()
    abar = chain.decode_through
    phi, rho = mod.phi, mod.rho
    if mod.coherent:
        tail = sum(
            d * 2.0**t * float(sp.gamma(1.5 + t)) / ((t + 1.0) * rho ** (2.0 * (t + 1.0)))
            for d, t in zip(series.coefficients, series.exponents)
        )
        return 0.5 * phi * mass + phi * abar * tail / math.sqrt(math.pi)
    tail = sum(
        d * float(sp.gamma(t + 1.0)) / rho ** (t + 1.0)
        for d, t in zip(series.coefficients, series.exponents)
    )
    return phi * mass + phi * abar * tail


# ---------------------------------------------------------------------------
# Adaptive-transmission capacities
# ---------------------------------------------------------------------------


def _inversion_integral(chain: HopChain, lo: float) -> float:
    """(1-A) * integral of f_last(g)/g over (lo, inf)."""
    last = chain.last
    value, _ = integrate_split(
        lambda g: last.pdf(g) / g, lo, math.inf, _scale_cuts(last.mean_snr), _SPEC
    )
    return chain.decode_through * value


def capacity_ora(chain: HopChain, bandwidth: float = 1.0, method: str = "survival") -> CapacityResult:
    """Ergodic capacity under rate-only adaptation.

    method="survival" integrates S(g)/(1+g) (the integrated-by-parts form);
    method="density" integrates ln(1+g) against the density, for cross checks.
    """
    scale = bandwidth / (chain.n * _LN2)
    cuts = _scale_cuts(chain.last.mean_snr, 1.0)
    if method == "survival":
        val, _ = integrate_split(
            lambda g: chain.end_sf(g) / (1.0 + g), 0.0, math.inf, cuts, _SPEC
        )
    elif method == "density":
        last = chain.last
        cont, _ = integrate_split(
            lambda g: math.log1p(g) * last.pdf(g), 0.0, math.inf, cuts, _SPEC
        )
        val = chain.decode_through * cont
    else:
        raise ValueError(f"unknown method '{method}'")
    return CapacityResult(scale * val, None, "ORA")


def opra_cutoff(chain: HopChain, tol: float = 1e-10) -> float:
    """Cutoff SNR of optimal power-and-rate adaptation, in (0, 1].

    Solves g0 = S(g0) / (1 + J(g0)) with S the end-to-end survival and
    J(x) the inversion integral over (x, inf); the map sends [0,1] into
    itself, so the damped iteration stays in the unit interval.
    """
    if chain.decode_through <= 0.0:
        raise DomainError("OPRA cutoff undefined when the chain is in certain outage")

    def xi(x: float) -> float:
        return chain.end_sf(x) / (1.0 + _inversion_integral(chain, x))

    return fixed_point(xi, 0.5, tol)


def opra_cutoff_residual(chain: HopChain, cutoff: float) -> float:
    """Residual of the power-constraint integral at the given cutoff."""
    return (
        chain.end_sf(cutoff) / cutoff - _inversion_integral(chain, cutoff) - 1.0
    )


def capacity_opra(
    chain: HopChain,
    bandwidth: float = 1.0,
    tol: float = 1e-10,
    method: str = "survival",
) -> CapacityResult:
    """Capacity under optimal power and rate adaptation."""
    if chain.decode_through <= 0.0:
        return CapacityResult(0.0, None, "OPRA")
    cutoff = opra_cutoff(chain, tol)
    scale = bandwidth / (chain.n * _LN2)
    cuts = _scale_cuts(chain.last.mean_snr, 1.0)
    if method == "survival":
        val, _ = integrate_split(
            lambda g: chain.end_sf(g) / g, cutoff, math.inf, cuts, _SPEC
        )
    elif method == "density":
        last = chain.last
        cont, _ = integrate_split(
            lambda g: math.log(g / cutoff) * last.pdf(g), cutoff, math.inf, cuts, _SPEC
        )
        val = chain.decode_through * cont
    else:
        raise ValueError(f"unknown method '{method}'")
    return CapacityResult(scale * val, cutoff, "OPRA")


def _cifr_diverges(chain: HopChain) -> bool:
    if chain.end_point_mass() > 0.0:
        return True
    hop = chain.last
    if isinstance(hop, AlphaKappaMuExtreme):
        return True
    return hop.alpha * hop.mu <= 2.0


def cifr_inverse_moment(chain: HopChain, method: str = "quad") -> float:
    """E[1/g] of the end-to-end law, finite only with no zero mass and
    alpha*mu > 2 on the last hop.

    method="meijer_g" evaluates the contour closed form of the same integral
    (general-law chains only).
    """
    if _cifr_diverges(chain):
        raise DivergentInverseMoment(
            "inverse moment diverges: zero-SNR mass present or alpha*mu <= 2"
        )
    hop = chain.last
    if method == "quad":
        return _inversion_integral(chain, 0.0)
    if method == "meijer_g":
        if not isinstance(hop, AlphaKappaMu):
            raise DomainError("Meijer G closed form applies to the general law only")
        om, sg, th = hop.omega, hop.sigma, hop.theta
        spec = MeijerGSpec(
            m=1,
            n=1,
            p=2,
            q=3,
            a_params=(1.0 + 2.0 / hop.alpha - om, hop.mu / 2.0),
            b_params=(om - 1.0, 1.0 - om, hop.mu / 2.0),
        )
        g_val = meijer_g(spec, th / (4.0 * sg))
        pref = (
            2.0
            * math.pi
            * hop.big_k
            * chain.decode_through
            / (hop.alpha * sg ** (om - 2.0 / hop.alpha))
        )
        return pref * g_val
    raise ValueError(f"unknown method '{method}'")


def capacity_cifr(chain: HopChain, bandwidth: float = 1.0) -> CapacityResult:
    """Capacity under full channel inversion.

    When the inverse moment diverges (any zero-SNR mass, severe-fading last
    hop, or alpha*mu <= 2) the channel cannot be inverted at finite power and
    the capacity is reported as zero with the `diverged` flag set.
    """
    if _cifr_diverges(chain):
        return CapacityResult(0.0, None, "CIFR", diverged=True)
    inv = cifr_inverse_moment(chain)
    value = bandwidth / chain.n * math.log2(1.0 + 1.0 / inv)
    return CapacityResult(value, None, "CIFR")


def tifr_inversion_integral(chain: HopChain, gamma_o: float, method: str = "quad") -> float:
    """J = (1-A) * integral of f_last(g)/g over (gamma_o, inf).

    method="nuttall" uses the change of variables u = sqrt(2 s) g^(alpha/4)
    turning J into (1-A)(2s)^(2/alpha)(2 mu kappa)^(1-w) Q_{mu-4/alpha, mu-1};
    it requires a general-law last hop with alpha*mu > 4 (the Nuttall order
    constraint M >= 0 fails otherwise).
    """
    if gamma_o <= 0.0:
        raise DomainError(f"gamma_o must be positive, got {gamma_o}")
    if method == "quad":
        return _inversion_integral(chain, gamma_o)
    if method == "nuttall":
        hop = chain.last
        if not isinstance(hop, AlphaKappaMu):
            raise DomainError("Nuttall form applies to the general law only")
        if hop.alpha * hop.mu <= 4.0:
            raise DomainError(
                f"Nuttall form needs alpha*mu > 4, got {hop.alpha * hop.mu:.3g}"
            )
        mk2 = 2.0 * hop.mu * hop.kappa
        q_val = nuttall_q(
            hop.mu - 4.0 / hop.alpha,
            hop.mu - 1.0,
            math.sqrt(mk2),
            math.sqrt(2.0 * hop.sigma) * gamma_o ** (hop.alpha / 4.0),
        )
        pref = (2.0 * hop.sigma) ** (2.0 / hop.alpha) * mk2 ** (1.0 - hop.omega)
        return chain.decode_through * pref * q_val
    raise ValueError(f"unknown method '{method}'")


def capacity_tifr(
    chain: HopChain, bandwidth: float = 1.0, gamma_o: float | None = None
) -> CapacityResult:
    """Capacity under truncated channel inversion above the fade level gamma_o.

    With no gamma_o given, the OPRA cutoff is reused.
    """
    if chain.decode_through <= 0.0:
        return CapacityResult(0.0, gamma_o, "TIFR")
    if gamma_o is None:
        gamma_o = opra_cutoff(chain)
    inv = tifr_inversion_integral(chain, gamma_o)
    if inv <= 0.0:
        # survival above gamma_o decays faster than the inverted-power log grows
        return CapacityResult(0.0, gamma_o, "TIFR")
    value = bandwidth / chain.n * math.log2(1.0 + 1.0 / inv) * chain.end_sf(gamma_o)
    return CapacityResult(value, gamma_o, "TIFR")
