"""Monte-Carlo corroboration of the analytic metrics.

Sampling is exact, not approximate: the general law's power variable is a
noncentral chi-square drawn as a Poisson(mu*kappa) mixture of Gamma(mu+J, 2)
variables (valid for real mu), and the severe-fading law is the same mixture
with Poisson(2m), where J = 0 realizes the discrete mass at zero SNR.  Chain
trials follow the decode rule directly: if any of the first n-1 hops falls
below the threshold the trial emits zero, otherwise a draw from the last hop.

Streams use counter-based Philox generators (period 2^256) with substreams
derived deterministically from the seed via SeedSequence spawning, so a given
(seed, streams, trials) triple is bit-reproducible and streams are
embarrassingly parallel.  Partial sums are accumulated per stream in index
order and merged with exact compensated summation (math.fsum), which keeps
BER-scale means stable over millions of trials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np
import scipy.special as sp

from .channel import AlphaKappaMu, AlphaKappaMuExtreme, FadingLaw
from .errors import DomainError
from .metrics import Modulation
from .system import HopChain

__all__ = [
    "McConfig",
    "Estimate",
    "sample_akm",
    "sample_extreme",
    "sample_law",
    "simulate_chain",
    "estimate_metric",
]

_CHUNK = 1 << 18


@dataclass(frozen=True)
class McConfig:
    """Trial budget, seed, and stream count for one estimation run."""

    trials: int = 1_000_000
    seed: int = 0
    streams: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise DomainError(f"trials must be >= 1, got {self.trials}")
        if self.streams < 1:
            raise DomainError(f"streams must be >= 1, got {self.streams}")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must fit in 64 unsigned bits")


@dataclass(frozen=True)
class Estimate:
    mean: float
    std_error: float
    trials: int


def sample_akm(law: AlphaKappaMu, rng: np.random.Generator, size: int | None = None):
    """Exact draws from the general law via its noncentral chi-square kernel."""
    n = 1 if size is None else size
    j = rng.poisson(law.mu * law.kappa, n)
    power = rng.standard_gamma(law.mu + j) * 2.0
    out = (power / (2.0 * law.sigma)) ** (2.0 / law.alpha)
    return float(out[0]) if size is None else out


def sample_extreme(law: AlphaKappaMuExtreme, rng: np.random.Generator, size: int | None = None):
    """Exact draws from the severe-fading law; J = 0 realizes the zero mass."""
    n = 1 if size is None else size
    j = rng.poisson(2.0 * law.m, n)
    out = np.zeros(n)
    pos = j > 0
    if np.any(pos):
        power = rng.standard_gamma(j[pos].astype(float)) * 2.0
        out[pos] = law.mean_snr * (power / (4.0 * law.m)) ** (2.0 / law.alpha)
    return float(out[0]) if size is None else out


def sample_law(law: FadingLaw, rng: np.random.Generator, size: int | None = None):
    if isinstance(law, AlphaKappaMu):
        return sample_akm(law, rng, size)
    if isinstance(law, AlphaKappaMuExtreme):
        return sample_extreme(law, rng, size)
    raise DomainError(f"cannot sample from {type(law).__name__}")


def _stream_counts(trials: int, streams: int) -> list[int]:
    base, rem = divmod(trials, streams)
    return [base + (1 if i < rem else 0) for i in range(streams)]


def _draw_chain(chain: HopChain, rng: np.random.Generator, n: int) -> np.ndarray:
    ok = np.ones(n, dtype=bool)
    for hop in chain.hops[:-1]:
        ok &= sample_law(hop, rng, n) > chain.gamma_th
    last = sample_law(chain.last, rng, n)
    return np.where(ok, last, 0.0)


def simulate_chain(chain: HopChain, cfg: McConfig) -> Iterator[np.ndarray]:
    """Stream of end-to-end SNR draws, yielded as per-stream chunks."""
    seqs = np.random.SeedSequence(cfg.seed).spawn(cfg.streams)
    for seq, count in zip(seqs, _stream_counts(cfg.trials, cfg.streams)):
        rng = np.random.Generator(np.random.Philox(seq))
        done = 0
        while done < count:
            k = min(_CHUNK, count - done)
            yield _draw_chain(chain, rng, k)
            done += k


def _mean_se(partial_s1, partial_s2, n) -> Estimate:
    s1 = math.fsum(partial_s1)
    s2 = math.fsum(partial_s2)
    mean = s1 / n
    var = max(0.0, (s2 - n * mean * mean) / (n - 1)) if n > 1 else 0.0
    return Estimate(mean, math.sqrt(var / n), n)


def estimate_metric(
    chain: HopChain,
    cfg: McConfig,
    metric: str,
    mod: Modulation | None = None,
    threshold: float | None = None,
    bandwidth: float = 1.0,
) -> Estimate:
    """Sample-mean estimate (with standard error) of one metric.

    metric is one of "op", "ber", "ora", "af"; "ber" needs a modulation and
    "op" uses the chain outage threshold unless one is given explicitly.
    """
    if metric == "op":
        th = chain.gamma_th if threshold is None else threshold
        kernel = lambda g: (g <= th).astype(float)
    elif metric == "ber":
        if mod is None:
            raise DomainError("BER estimation needs a modulation")
        phi, rho = mod.phi, mod.rho
        if mod.coherent:
            kernel = lambda g: 0.5 * phi * sp.erfc(rho * np.sqrt(0.5 * g))
        else:
            kernel = lambda g: phi * np.exp(-rho * g)
    elif metric == "ora":
        scale = bandwidth / chain.n
        kernel = lambda g: scale * np.log2(1.0 + g)
    elif metric == "af":
        return _estimate_af(chain, cfg)
    else:
        raise DomainError(f"unknown metric tag '{metric}'")

    s1, s2 = [], []
    for draws in simulate_chain(chain, cfg):
        v = kernel(draws)
        s1.append(float(np.sum(v)))
        s2.append(float(np.sum(v * v)))
    return _mean_se(s1, s2, cfg.trials)


def _estimate_af(chain: HopChain, cfg: McConfig) -> Estimate:
    """Second-order amount of fading via sample moments, delta-method error."""
    sums = [[] for _ in range(4)]
    for draws in simulate_chain(chain, cfg):
        acc = draws
        for k in range(4):
            sums[k].append(float(np.sum(acc)))
            acc = acc * draws
    n = cfg.trials
    m1, m2, m3, m4 = (math.fsum(s) / n for s in sums)
    af = m2 / (m1 * m1) - 1.0
    # gradient of m2/m1^2 at the sample moments
    g1 = -2.0 * m2 / m1**3
    g2 = 1.0 / (m1 * m1)
    v11 = m2 - m1 * m1
    v12 = m3 - m1 * m2
    v22 = m4 - m2 * m2
    var = max(0.0, g1 * g1 * v11 + 2.0 * g1 * g2 * v12 + g2 * g2 * v22)
    return Estimate(af, math.sqrt(var / n), n)
