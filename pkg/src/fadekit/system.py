"""End-to-end SNR law of an n-hop decode-and-forward chain.

A decoded chain is in outage whenever any of the first n-1 hops drops below
the threshold; otherwise the end-to-end SNR is the last hop's SNR.  The
end-to-end law is therefore a mixture

    A * delta(g) + (1 - A) * f_last(g),     A = 1 - prod_{k<n} P(snr_k > g_th),

so every end-to-end statistic reduces to the last hop's plus the scalar A.
Hops may mix both fading families; the prefix-outage product only needs each
hop's own CDF.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

from .channel import FadingLaw
from .errors import DomainError
from .numerics import QuadSpec, integrate_split

__all__ = ["HopChain"]

_MGF_SPEC = QuadSpec(rel_tol=1e-10, abs_tol=1e-280, max_subdivisions=800)


@dataclass(frozen=True)
class HopChain:
    """Ordered per-hop fading laws plus the decode outage threshold (linear)."""

    hops: tuple[FadingLaw, ...]
    gamma_th: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "hops", tuple(self.hops))
        if len(self.hops) < 1:
            raise DomainError("a chain needs at least one hop")
        if not (self.gamma_th >= 0.0 and math.isfinite(self.gamma_th)):
            raise DomainError(f"gamma_th must be finite and >= 0, got {self.gamma_th}")

    @property
    def n(self) -> int:
        return len(self.hops)

    @property
    def last(self) -> FadingLaw:
        return self.hops[-1]

    @cached_property
    def prefix_outage(self) -> float:
        """Probability A that one of the first n-1 hops falls below gamma_th."""
        prod = 1.0
        for hop in self.hops[:-1]:
            prod *= hop.sf(self.gamma_th)
        return 1.0 - prod

    @property
    def decode_through(self) -> float:
        """1 - A, the probability the relays all decode."""
        return 1.0 - self.prefix_outage

    def end_point_mass(self) -> float:
        """Total probability carried at zero end-to-end SNR."""
        return self.prefix_outage + self.decode_through * self.last.point_mass

    def end_pdf(self, g: float) -> float:
        """Continuous part of the end-to-end density."""
        return self.decode_through * self.last.pdf(g)

    def end_sf(self, g: float) -> float:
        return self.decode_through * self.last.sf(g)

    def end_cdf(self, g: float) -> float:
        if g < 0.0:
            return 0.0
        return 1.0 - self.end_sf(g)

    def end_moment(self, r: float) -> float:
        return self.decode_through * self.last.moment(r)

    def end_mgf(self, s: float, spec: QuadSpec = _MGF_SPEC) -> float:
        """E[exp(-s * snr)] for s >= 0, by quadrature of the defining integral.

        The fading scale and the exponential decay scale 1/s can be many
        orders apart, so the integral is cut at both.
        """
        if s < 0.0:
            raise DomainError(f"end_mgf requires s >= 0, got {s}")
        last = self.last
        mean = last.mean_snr
        scales = (1e-3 * mean, mean, 1e3 * mean)
        if s > 0.0:
            scales += (1.0 / s,)
        cont, _ = integrate_split(
            lambda g: math.exp(-s * g) * last.pdf(g), 0.0, math.inf, scales, spec
        )
        return self.end_point_mass() + self.decode_through * cont
