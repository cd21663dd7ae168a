"""Single-hop fading laws for the SNR per symbol.

Two laws are provided.  The general nonlinear line-of-sight law is
parameterized by (alpha, kappa, mu, mean_snr) and has continuous density

    f(g) = K * g^{(alpha/2) w - 1} * exp(-s * g^{alpha/2})
             * I_{mu-1}( sqrt(t * g^{alpha/2}) )

with w = (mu+1)/2, s = mu(kappa+1)/mean_snr^{alpha/2}, t = 4 mu kappa s and
K the normalizer.  The severe-fading limit is parameterized by (alpha, m,
mean_snr); it keeps a discrete probability mass exp(-2m) at zero SNR plus a
continuous part of the same kernel shape with symbols

    (K, w, s, t, order) -> (a, 1/2, b, c, 2),
    a = alpha m e^{-2m} / mean_snr^{alpha/4},
    b = 2m / mean_snr^{alpha/2},  c = 16 m^2 / mean_snr^{alpha/2}.

Both classes evaluate the kernel through one shared log-space routine (the
scaled Bessel keeps every exponent <= 0), so the symbolic reduction above is
literally how the code is organized.

`mean_snr` is the scale parameter appearing in the density; it equals the
first moment exactly at alpha = 2.  The `from_ebn0` constructors choose the
scale so that the first moment equals Eb/N0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.special as sp

from .errors import DomainError
from .specfun import kummer_m_scaled, marcum_q

__all__ = [
    "AlphaKappaMu",
    "AlphaKappaMuExtreme",
    "PoincareSeries",
    "poincare_series",
]

# exp(mu*kappa) and exp(2m) appear in normalizers; beyond this the doubles
# pipeline silently degrades, so construction refuses it outright
_EXPONENT_CAP = 700.0


def _kernel_logpdf(log_k, omega, sigma, theta, order, alpha, g):
    """Log of the continuous density kernel at SNR g > 0.

    Written as log K + ((alpha/2) w - 1) log g + (sqrt(t y) - s y)
    + log ive(order - 1, sqrt(t y)) with y = g^(alpha/2); the peak of
    sqrt(t y) - s y is t/(4 s), which the normalizer's exponential cancels.
    """
    y = g ** (alpha / 2.0)
    arg = math.sqrt(theta * y)
    bessel = float(sp.ive(order - 1.0, arg))
    if bessel <= 0.0:
        return -math.inf
    return (
        log_k
        + ((alpha / 2.0) * omega - 1.0) * math.log(g)
        + (arg - sigma * y)
        + math.log(bessel)
    )


@dataclass(frozen=True)
class AlphaKappaMu:
    """General nonlinear fading law of the instantaneous SNR."""

    alpha: float
    kappa: float
    mu: float
    mean_snr: float
    omega: float = field(init=False, repr=False)
    sigma: float = field(init=False, repr=False)
    theta: float = field(init=False, repr=False)
    log_k: float = field(init=False, repr=False)

    def __post_init__(self):
        for name in ("alpha", "kappa", "mu", "mean_snr"):
            v = float(getattr(self, name))
            if not (v > 0.0 and math.isfinite(v)):
                raise DomainError(f"{name} must be positive and finite, got {v}")
            object.__setattr__(self, name, v)
        if self.mu * self.kappa > _EXPONENT_CAP:
            raise DomainError(
                f"mu*kappa = {self.mu * self.kappa:.3g} exceeds the overflow bound {_EXPONENT_CAP}"
            )
        omega = 0.5 * (self.mu + 1.0)
        sigma = self.mu * (self.kappa + 1.0) / self.mean_snr ** (self.alpha / 2.0)
        theta = 4.0 * self.mu * self.kappa * sigma
        mk = self.mu * self.kappa
        log_k = (
            math.log(self.alpha / 2.0)
            + omega * math.log(sigma)
            - mk
            - (omega - 1.0) * math.log(mk)
        )
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "log_k", log_k)

    @classmethod
    def from_ebn0(cls, alpha: float, kappa: float, mu: float, ebn0: float) -> "AlphaKappaMu":
        """Law whose first moment equals the given Eb/N0."""
        if ebn0 <= 0.0:
            raise DomainError(f"ebn0 must be positive, got {ebn0}")
        mk = mu * kappa
        if mk > _EXPONENT_CAP:
            raise DomainError(f"mu*kappa = {mk:.3g} exceeds the overflow bound")
        denom = math.exp(sp.gammaln(2.0 / alpha + mu) - sp.gammaln(mu)) * kummer_m_scaled(
            2.0 / alpha + mu, mu, mk
        )
        scale = ebn0 * (mu * (kappa + 1.0)) ** (2.0 / alpha) / denom
        return cls(alpha, kappa, mu, scale)

    @property
    def big_k(self) -> float:
        """Density normalizer K."""
        return math.exp(self.log_k)

    @property
    def point_mass(self) -> float:
        return 0.0

    def _kernel(self):
        return (self.log_k, self.omega, self.sigma, self.theta, self.mu)

    def pdf(self, g: float) -> float:
        if g <= 0.0:
            raise DomainError(f"pdf requires g > 0, got {g}")
        return math.exp(_kernel_logpdf(*self._kernel(), self.alpha, g))

    def sf(self, g: float) -> float:
        """Survival P(snr > g)."""
        if g <= 0.0:
            return 1.0
        return marcum_q(
            self.mu,
            math.sqrt(2.0 * self.kappa * self.mu),
            math.sqrt(2.0 * self.sigma) * g ** (self.alpha / 4.0),
        )

    def cdf(self, g: float) -> float:
        if g < 0.0:
            return 0.0
        return 1.0 - self.sf(g)

    def moment(self, r: float) -> float:
        """E[snr^r], r > 0 (also valid for -mu*alpha/2 < r, used internally)."""
        a = 2.0 * r / self.alpha + self.mu
        if a <= 0.0:
            raise DomainError(f"moment of order {r} diverges")
        mk = self.mu * self.kappa
        scaled = math.exp(sp.gammaln(a) - sp.gammaln(self.mu)) * kummer_m_scaled(a, self.mu, mk)
        return self.mean_snr**r * scaled / (self.mu * (self.kappa + 1.0)) ** (2.0 * r / self.alpha)


@dataclass(frozen=True)
class AlphaKappaMuExtreme:
    """Severe-fading law with a probability mass exp(-2m) at zero SNR."""

    alpha: float
    m: float
    mean_snr: float
    a: float = field(init=False, repr=False)
    b: float = field(init=False, repr=False)
    c: float = field(init=False, repr=False)
    log_a: float = field(init=False, repr=False)

    def __post_init__(self):
        for name in ("alpha", "m", "mean_snr"):
            v = float(getattr(self, name))
            if not (v > 0.0 and math.isfinite(v)):
                raise DomainError(f"{name} must be positive and finite, got {v}")
            object.__setattr__(self, name, v)
        if 2.0 * self.m > _EXPONENT_CAP:
            raise DomainError(f"2m = {2 * self.m:.3g} exceeds the overflow bound {_EXPONENT_CAP}")
        log_a = (
            math.log(self.alpha * self.m)
            - 2.0 * self.m
            - (self.alpha / 4.0) * math.log(self.mean_snr)
        )
        object.__setattr__(self, "a", math.exp(log_a))
        object.__setattr__(self, "b", 2.0 * self.m / self.mean_snr ** (self.alpha / 2.0))
        object.__setattr__(self, "c", 16.0 * self.m**2 / self.mean_snr ** (self.alpha / 2.0))
        object.__setattr__(self, "log_a", log_a)

    @classmethod
    def from_kappa_mu(cls, alpha: float, kappa: float, mu: float, mean_snr: float) -> "AlphaKappaMuExtreme":
        """Construct from the pre-limit shape parameters, m = mu(kappa+1)^2/(2kappa+1)."""
        m = mu * (kappa + 1.0) ** 2 / (2.0 * kappa + 1.0)
        return cls(alpha, m, mean_snr)

    @classmethod
    def from_ebn0(cls, alpha: float, m: float, ebn0: float) -> "AlphaKappaMuExtreme":
        """Law whose first moment equals the given Eb/N0."""
        if ebn0 <= 0.0:
            raise DomainError(f"ebn0 must be positive, got {ebn0}")
        if 2.0 * m > _EXPONENT_CAP:
            raise DomainError(f"2m = {2 * m:.3g} exceeds the overflow bound")
        denom = float(sp.gamma(2.0 / alpha + 1.0)) * kummer_m_scaled(2.0 / alpha + 1.0, 2.0, 2.0 * m)
        scale = ebn0 * (2.0 * m) ** (2.0 / alpha - 1.0) / denom
        return cls(alpha, m, scale)

    @property
    def zero_mass(self) -> float:
        return math.exp(-2.0 * self.m)

    @property
    def point_mass(self) -> float:
        return self.zero_mass

    def _kernel(self):
        return (self.log_a, 0.5, self.b, self.c, 2.0)

    def pdf(self, g: float) -> float:
        """Continuous part only; the mass at zero is `zero_mass`."""
        if g <= 0.0:
            raise DomainError(f"pdf requires g > 0, got {g}")
        return math.exp(_kernel_logpdf(*self._kernel(), self.alpha, g))

    def sf(self, g: float) -> float:
        if g < 0.0:
            return 1.0
        if g == 0.0:
            return 1.0 - self.zero_mass
        return marcum_q(
            0.0,
            2.0 * math.sqrt(self.m),
            2.0 * math.sqrt(self.m * (g / self.mean_snr) ** (self.alpha / 2.0)),
        )

    def cdf(self, g: float) -> float:
        """Right-continuous; cdf(0) equals the zero mass."""
        if g < 0.0:
            return 0.0
        return 1.0 - self.sf(g)

    def moment(self, r: float) -> float:
        a = 2.0 * r / self.alpha + 1.0
        if a <= 0.0:
            raise DomainError(f"moment of order {r} diverges")
        two_m = 2.0 * self.m
        scaled = float(sp.gamma(a)) * kummer_m_scaled(a, 2.0, two_m)
        return self.mean_snr**r * scaled * two_m ** (1.0 - 2.0 * r / self.alpha)


FadingLaw = AlphaKappaMu | AlphaKappaMuExtreme


@dataclass(frozen=True)
class PoincareSeries:
    """Truncated power expansion of a continuous SNR density near zero.

    coefficients[k] * g**exponents[k] approximates the density; leading_mass
    is the discrete probability carried at g = 0 (zero for the general law).
    """

    coefficients: tuple[float, ...]
    exponents: tuple[float, ...]
    order: int
    leading_mass: float

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be >= 1")
        if not (len(self.coefficients) == len(self.exponents) == self.order):
            raise ValueError("coefficient and exponent lists must have length `order`")
        if any(t2 <= t1 for t1, t2 in zip(self.exponents, self.exponents[1:])):
            raise ValueError("exponents must be strictly increasing")

    def density(self, g: float) -> float:
        """Truncated-series approximation of the continuous density."""
        return float(sum(d * g**t for d, t in zip(self.coefficients, self.exponents)))


def poincare_series(law: FadingLaw, n_terms: int) -> PoincareSeries:
    """Expansion coefficients of the law's continuous density near zero.

    d_k = P * sum_{j<=k} (-1)^j s^j (t/4)^{k-j} / (j! (k-j)! Gamma(k+order-j))
    with prefactor P = K (t/4)^{(order-1)/2}, and exponents
    t_k = (alpha/2) (w + (order-1)/2 + k) - 1.
    """
    if n_terms < 1:
        raise DomainError(f"series order must be >= 1, got {n_terms}")
    log_k, omega, sigma, theta, order = law._kernel()
    quarter = theta / 4.0
    prefactor = math.exp(log_k + 0.5 * (order - 1.0) * math.log(quarter))
    coeffs = []
    for k in range(n_terms):
        j = np.arange(0, k + 1)
        terms = (
            (-1.0) ** j
            * sigma**j
            * quarter ** (k - j)
            / (sp.factorial(j) * sp.factorial(k - j) * sp.gamma(k + order - j))
        )
        coeffs.append(prefactor * float(np.sum(terms)))
    base = omega + 0.5 * (order - 1.0)
    exps = [law.alpha * (base + k) / 2.0 - 1.0 for k in range(n_terms)]
    return PoincareSeries(
        coefficients=tuple(coeffs),
        exponents=tuple(exps),
        order=n_terms,
        leading_mass=law.point_mass,
    )
