"""Special functions used by the fading-channel analytics.

The Marcum Q family is evaluated through the noncentral chi-square survival
function written as a Poisson mixture of central chi-square tails, which is
valid for any real order nu >= 0 and accurate to near machine precision.  The
zero-order function is the survival of a zero-degrees-of-freedom noncentral
chi-square: its j = 0 Poisson term is the point mass exp(-a**2/2) at zero, so

    Q_0(a, b) = Q_1(a, b) - exp(-(a**2 + b**2)/2) * I_0(a*b)

holds by construction.

The univariate Meijer G-function is computed by numerical Mellin-Barnes
integration.  When the integrand decays on vertical lines (m + n > (p+q)/2)
a straight contour through the gap separating the two gamma pole families is
used; otherwise the contour is a hairpin that enters from +infinity above the
real axis, crosses the gap, and returns below, which converges for q > p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.integrate
import scipy.special as sp

from .errors import ConvergenceError, DomainError, PoleSeparationError
from .numerics import QuadSpec, integrate

__all__ = [
    "bessel_i",
    "erfc",
    "kummer_m",
    "kummer_m_regularized",
    "marcum_q",
    "nuttall_q",
    "MeijerGSpec",
    "meijer_g",
]


def bessel_i(nu: float, x: float, scaled: bool = False) -> float:
    """Modified Bessel function I_nu(x), or exp(-x)*I_nu(x) when scaled."""
    if nu < -1.0:
        raise DomainError(f"bessel_i order must be >= -1, got {nu}")
    if x < 0.0:
        raise DomainError(f"bessel_i argument must be >= 0, got {x}")
    return float(sp.ive(nu, x)) if scaled else float(sp.iv(nu, x))


def erfc(x: float) -> float:
    """Complementary error function."""
    return float(sp.erfc(x))


def _is_nonpositive_integer(b: float) -> bool:
    return b <= 0.0 and b == math.floor(b)


def kummer_m(a: float, b: float, z: float) -> float:
    """Confluent hypergeometric function Phi(a; b; z) (Kummer's M)."""
    if _is_nonpositive_integer(b):
        raise DomainError(f"kummer_m undefined for non-positive integer b={b}")
    val = float(sp.hyp1f1(a, b, z))
    if not math.isfinite(val):
        raise OverflowError(f"kummer_m({a}, {b}, {z}) overflows double precision")
    return val


def kummer_m_regularized(a: float, b: float, z: float) -> float:
    """Regularized confluent hypergeometric Phi(a; b; z) / Gamma(b).

    Finite for every real b: at b = -k (k a non-negative integer) the limit
    equals (a)_{k+1} z^{k+1} Phi(a+k+1; k+2; z) / (k+1)!.
    """
    if _is_nonpositive_integer(b):
        k = int(-b)
        val = (
            float(sp.poch(a, k + 1))
            * z ** (k + 1)
            * float(sp.hyp1f1(a + k + 1, k + 2, z))
            / math.factorial(k + 1)
        )
    else:
        val = float(sp.hyp1f1(a, b, z)) / float(sp.gamma(b))
    if not math.isfinite(val):
        raise OverflowError(f"kummer_m_regularized({a}, {b}, {z}) overflows")
    return val


def kummer_m_scaled(a: float, b: float, z: float) -> float:
    """exp(-z) * Phi(a; b; z) without overflow for large positive z.

    For z beyond the safe range of the power series the large-z asymptotic
    expansion Phi ~ Gamma(b)/Gamma(a) e^z z^(a-b) sum_k (b-a)_k (1-a)_k / (k! z^k)
    is summed to its smallest term.
    """
    if _is_nonpositive_integer(b):
        raise DomainError(f"kummer_m_scaled undefined for non-positive integer b={b}")
    if z <= 300.0:
        return math.exp(-z) * float(sp.hyp1f1(a, b, z))
    pref = math.exp(sp.gammaln(b) - sp.gammaln(a) + (a - b) * math.log(z))
    total = term = 1.0
    for k in range(200):
        nxt = term * (b - a + k) * (1.0 - a + k) / ((k + 1.0) * z)
        if abs(nxt) >= abs(term):
            break
        total += nxt
        term = nxt
        if abs(nxt) < 1e-17 * abs(total):
            break
    return pref * total


def marcum_q(nu: float, a: float, b: float) -> float:
    """Generalized Marcum Q-function Q_nu(a, b) for real order nu >= 0.

    Poisson-mixture form: sum_j e^{-a^2/2} (a^2/2)^j / j! * Q(nu + j, b^2/2)
    with Q the regularized upper incomplete gamma; the sum starts at j = 1
    for nu = 0.  Absolute accuracy is ~1e-14.
    """
    if nu < 0.0 or a < 0.0 or b < 0.0:
        raise DomainError(f"marcum_q requires nu, a, b >= 0, got ({nu}, {a}, {b})")
    x = 0.5 * a * a
    y = 0.5 * b * b
    if b == 0.0:
        return 1.0 if nu > 0.0 else -float(math.expm1(-x))
    if x == 0.0:
        return float(sp.gammaincc(nu, y)) if nu > 0.0 else 0.0
    j_hi = int(math.ceil(x + 12.0 * math.sqrt(x + 1.0) + 60.0))
    j = np.arange(1 if nu == 0.0 else 0, j_hi + 1)
    log_w = j * math.log(x) - x - sp.gammaln(j + 1.0)
    total = float(np.sum(np.exp(log_w) * sp.gammaincc(nu + j, y)))
    return min(total, 1.0)


_NUTTALL_SPEC = QuadSpec(rel_tol=1e-10, abs_tol=1e-280, max_subdivisions=500)


def nuttall_q(order_m: float, order_n: float, a: float, b: float) -> float:
    """Nuttall Q-function: integral of x^M e^{-(x^2+a^2)/2} I_N(a x) over [b, inf).

    Defined for a > 0 and M, N >= 0; the exponentially scaled Bessel keeps the
    integrand bounded, and the quadrature targets 1e-9 relative error.
    """
    if a <= 0.0:
        raise DomainError(f"nuttall_q requires a > 0, got a={a}")
    if order_m < 0.0 or order_n < 0.0:
        raise DomainError(
            f"nuttall_q orders must be >= 0, got M={order_m}, N={order_n}"
        )
    if b < 0.0:
        raise DomainError(f"nuttall_q requires b >= 0, got b={b}")

    def integrand(x: float) -> float:
        if x == 0.0:
            return 0.0 if order_m > 0.0 else math.exp(-0.5 * a * a) * float(sp.ive(order_n, 0.0))
        t = -0.5 * (x - a) ** 2 + order_m * math.log(x)
        return math.exp(t) * float(sp.ive(order_n, a * x))

    value, _ = integrate(integrand, b, math.inf, _NUTTALL_SPEC)
    return value


# ---------------------------------------------------------------------------
# Meijer G via Mellin-Barnes contours
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MeijerGSpec:
    """Parameter block of G^{m,n}_{p,q}(z | a_params ; b_params)."""

    m: int
    n: int
    p: int
    q: int
    a_params: tuple[float, ...]
    b_params: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "a_params", tuple(float(v) for v in self.a_params))
        object.__setattr__(self, "b_params", tuple(float(v) for v in self.b_params))
        if not (0 <= self.n <= self.p and 0 <= self.m <= self.q):
            raise ValueError("need 0 <= n <= p and 0 <= m <= q")
        if len(self.a_params) != self.p or len(self.b_params) != self.q:
            raise ValueError("parameter list lengths must equal p and q")

    @property
    def delta(self) -> float:
        """Exponential decay rate (in units of pi) along vertical contours."""
        return self.m + self.n - 0.5 * (self.p + self.q)

    def inverted(self) -> "MeijerGSpec":
        """Parameters of the identity G(z) = G'(1/z) swapping the families."""
        return MeijerGSpec(
            m=self.n,
            n=self.m,
            p=self.q,
            q=self.p,
            a_params=tuple(1.0 - b for b in self.b_params),
            b_params=tuple(1.0 - a for a in self.a_params),
        )


def _mb_integrand(spec: MeijerGSpec, log_z: float):
    a, b, m, n = spec.a_params, spec.b_params, spec.m, spec.n

    def f(s):
        s = np.asarray(s, dtype=complex)
        tot = s * log_z
        for j in range(m):
            tot = tot + sp.loggamma(b[j] - s)
        for i in range(n):
            tot = tot + sp.loggamma(1.0 - a[i] + s)
        for j in range(m, len(b)):
            tot = tot - sp.loggamma(1.0 - b[j] + s)
        for i in range(n, len(a)):
            tot = tot - sp.loggamma(a[i] - s)
        return np.exp(tot)

    return f


def _trapezoid_uniform(values: np.ndarray, step: float) -> float:
    return float(step * (np.sum(values) - 0.5 * (values[0] + values[-1])))


def _contour_abscissa(spec: MeijerGSpec) -> float:
    """Midpoint of the gap separating the two pole families, nudged off
    points where a denominator gamma is singular."""
    left = -math.inf
    if spec.n:
        left = max(spec.a_params[i] - 1.0 for i in range(spec.n))
    right = min(spec.b_params[j] for j in range(spec.m))
    if not left < right - 1e-12:
        raise PoleSeparationError(
            f"pole families overlap: max(a_i - 1) = {left:.6g} >= min(b_j) = {right:.6g}"
        )
    if math.isinf(left):
        c = right - 0.5
        step = -0.0625
    else:
        c = 0.5 * (left + right)
        step = (right - left) / 16.0

    def hits_lattice(cand: float) -> bool:
        pts = [1.0 - bj + cand for bj in spec.b_params[spec.m :]]
        pts += [ai - cand for ai in spec.a_params[spec.n :]]
        return any(w < 0.5 and abs(w - round(w)) < 1e-9 for w in pts)

    for _ in range(8):
        if not hits_lattice(c):
            return c
        c += step
        if not math.isinf(left) and not left < c < right:
            step = -step / 2.0
            c += step
    return c


def _vertical_contour(spec: MeijerGSpec, z: float, c: float) -> float:
    f = _mb_integrand(spec, math.log(z))
    delta = spec.delta
    height = max(20.0, 45.0 / (math.pi * delta))
    for _ in range(24):
        n_pts = 1025
        prev = None
        converged = False
        while n_pts <= (1 << 21) + 1:
            t = np.linspace(0.0, height, n_pts)
            step = height / (n_pts - 1)
            fv = f(c + 1j * t)
            val = _trapezoid_uniform(np.real(fv), step) / math.pi
            accum = _trapezoid_uniform(np.abs(fv), step)
            if prev is not None and abs(val - prev) <= 1e-9 * max(abs(val), 1e-300):
                converged = True
                break
            prev = val
            n_pts = 2 * n_pts - 1
        tail = abs(fv[-1]) / (math.pi * delta)
        if converged and tail <= 1e-14 * max(accum, 1e-300):
            return val
        if not converged:
            raise ConvergenceError("Meijer G vertical contour failed to refine")
        height *= 1.6
        if height > 5e4:
            raise ConvergenceError("Meijer G tail criterion unmet at height cap")
    raise ConvergenceError("Meijer G vertical contour failed")


def _hairpin_contour(spec: MeijerGSpec, z: float, c: float) -> float:
    if spec.q <= spec.p and not (spec.q == spec.p and z < 1.0):
        raise ConvergenceError(
            "hairpin contour requires q > p (or q == p with z < 1)"
        )
    f = _mb_integrand(spec, math.log(z))
    h = 1.0
    # extend the rays until the integrand magnitude is negligible
    reach = 40.0 + (3.0 * z ** (1.0 / (spec.q - spec.p)) if spec.q > spec.p else 0.0)
    x_end = c + reach
    probe = np.abs(f(np.linspace(c, x_end, 257) + 1j * h))
    peak = float(np.max(probe))
    for _ in range(40):
        if abs(f(x_end + 1j * h)) <= 1e-16 * max(peak, 1e-300):
            break
        x_end += 10.0
        if x_end - c > 5e3:
            raise ConvergenceError("Meijer G hairpin ray failed to decay")

    def ray_im(x):
        return float(np.imag(f(x + 1j * h)))

    def connector(y):
        return float(np.real(f(c + 1j * y)))

    kw = dict(epsabs=1e-14, epsrel=1e-11, limit=800)
    im_ray = scipy.integrate.quad(ray_im, c, x_end, **kw)[0]
    re_conn = scipy.integrate.quad(connector, 0.0, h, **kw)[0]
    return (im_ray + re_conn) / math.pi


def meijer_g(spec: MeijerGSpec, z: float) -> float:
    """Evaluate G^{m,n}_{p,q}(z) for real parameters and real z > 0."""
    if z <= 0.0:
        raise DomainError(f"meijer_g requires z > 0, got {z}")
    if spec.m == 0:
        # no right-hand pole family to anchor the contour; use 1/z inversion
        return meijer_g(spec.inverted(), 1.0 / z)
    c = _contour_abscissa(spec)
    if spec.delta > 1e-12:
        return _vertical_contour(spec, z, c)
    if spec.q < spec.p or (spec.q == spec.p and z > 1.0):
        return meijer_g(spec.inverted(), 1.0 / z)
    return _hairpin_contour(spec, z, c)
