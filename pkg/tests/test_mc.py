import math

import numpy as np
import pytest

from fadekit import (
    AlphaKappaMu,
    AlphaKappaMuExtreme,
    DomainError,
    Estimate,
    HopChain,
    McConfig,
    amount_of_fading,
    ber_coherent,
    ber_noncoherent,
    capacity_ora,
    estimate_metric,
    modulation,
    outage_probability,
    sample_akm,
    sample_extreme,
    simulate_chain,
)

SEED = 20240811


def rng_for(seed=SEED):
    return np.random.Generator(np.random.Philox(seed))


def collect(chain, cfg):
    return np.concatenate(list(simulate_chain(chain, cfg)))


class TestSamplers:
    def test_mean_matches_first_moment(self):
        law = AlphaKappaMu(2.6, 1.4, 1.8, 5.0)
        draws = sample_akm(law, rng_for(), 400_000)
        want = law.moment(1.0)
        se = draws.std(ddof=1) / math.sqrt(draws.size)
        assert abs(draws.mean() - want) <= 4.0 * se

    def test_rayleigh_limit_distribution(self):
        # KS distance against the exponential law at the 1% level
        law = AlphaKappaMu(2.0, 1e-9, 1.0, 1.0)
        n = 100_000
        draws = np.sort(sample_akm(law, rng_for(), n))
        ecdf = np.arange(1, n + 1) / n
        ks = np.max(np.abs(ecdf - (1.0 - np.exp(-draws))))
        assert ks < 1.63 / math.sqrt(n)

    def test_empirical_cdf_matches_survival_formula(self):
        law = AlphaKappaMu(1.7, 2.2, 0.8, 2.0)
        n = 200_000
        draws = sample_akm(law, rng_for(), n)
        for q in np.linspace(0.1, 3.0, 20):
            p_hat = float(np.mean(draws <= q))
            p = law.cdf(q)
            se = math.sqrt(max(p * (1.0 - p), 1e-12) / n)
            assert abs(p_hat - p) <= 4.0 * se + 1e-9

    def test_severe_law_zero_mass(self):
        law = AlphaKappaMuExtreme(2.4, 1.2, 3.0)
        n = 200_000
        draws = sample_extreme(law, rng_for(), n)
        p = law.zero_mass
        se = math.sqrt(p * (1.0 - p) / n)
        assert abs(np.mean(draws == 0.0) - p) <= 4.0 * se

    def test_severe_law_cdf_and_mean(self):
        law = AlphaKappaMuExtreme(2.4, 1.2, 3.0)
        n = 200_000
        draws = sample_extreme(law, rng_for(), n)
        se = draws.std(ddof=1) / math.sqrt(n)
        assert abs(draws.mean() - law.moment(1.0)) <= 4.0 * se
        for q in (0.2, 1.0, 3.0, 8.0):
            p = law.cdf(q)
            se_q = math.sqrt(p * (1.0 - p) / n)
            assert abs(np.mean(draws <= q) - p) <= 4.0 * se_q


class TestChainSimulation:
    def chain(self):
        hops = (
            AlphaKappaMu(2.2, 1.0, 1.4, 4.0),
            AlphaKappaMuExtreme(2.0, 1.5, 4.0),
            AlphaKappaMu(2.8, 0.7, 1.1, 4.0),
        )
        return HopChain(hops, gamma_th=0.8)

    def test_zero_mass_matches_analytic(self):
        chain = self.chain()
        cfg = McConfig(trials=300_000, seed=SEED, streams=4)
        draws = collect(chain, cfg)
        p = chain.end_point_mass()
        se = math.sqrt(p * (1.0 - p) / cfg.trials)
        assert abs(np.mean(draws == 0.0) - p) <= 4.0 * se

    def test_mean_matches_end_moment(self):
        chain = self.chain()
        cfg = McConfig(trials=300_000, seed=SEED + 1, streams=4)
        draws = collect(chain, cfg)
        se = draws.std(ddof=1) / math.sqrt(cfg.trials)
        assert abs(draws.mean() - chain.end_moment(1.0)) <= 4.0 * se

    def test_single_hop_reduces_to_law_sampler(self):
        law = AlphaKappaMu(2.2, 1.0, 1.4, 4.0)
        cfg = McConfig(trials=50_000, seed=SEED, streams=1)
        via_chain = collect(HopChain((law,), gamma_th=2.0), cfg)
        direct = sample_akm(law, np.random.Generator(np.random.Philox(np.random.SeedSequence(SEED).spawn(1)[0])), 50_000)
        assert np.array_equal(via_chain, direct)

    def test_reproducible_and_stream_order_fixed(self):
        chain = self.chain()
        cfg = McConfig(trials=100_000, seed=SEED, streams=8)
        a = collect(chain, cfg)
        b = collect(chain, cfg)
        assert np.array_equal(a, b)
        est1 = estimate_metric(chain, cfg, "op")
        est2 = estimate_metric(chain, cfg, "op")
        assert est1 == est2


class TestEstimators:
    def chain(self, gbar=10.0):
        hops = (AlphaKappaMu(2.5, 1.2, 1.6, gbar), AlphaKappaMu(2.0, 0.8, 1.1, gbar))
        return HopChain(hops, gamma_th=1.0)

    def test_outage_estimate(self):
        chain = self.chain()
        cfg = McConfig(trials=400_000, seed=SEED, streams=4)
        est = estimate_metric(chain, cfg, "op")
        want = outage_probability(chain, chain.gamma_th)
        assert abs(est.mean - want) <= 4.0 * est.std_error

    def test_coherent_ber_estimate(self):
        chain = self.chain()
        cfg = McConfig(trials=400_000, seed=SEED + 2, streams=4)
        mod = modulation("bpsk")
        est = estimate_metric(chain, cfg, "ber", mod=mod)
        assert abs(est.mean - ber_coherent(chain, mod)) <= 4.0 * est.std_error

    def test_noncoherent_ber_estimate(self):
        chain = self.chain()
        cfg = McConfig(trials=400_000, seed=SEED + 3, streams=4)
        mod = modulation("dbpsk")
        est = estimate_metric(chain, cfg, "ber", mod=mod)
        assert abs(est.mean - ber_noncoherent(chain, mod)) <= 4.0 * est.std_error

    def test_capacity_estimate(self):
        chain = self.chain()
        cfg = McConfig(trials=400_000, seed=SEED + 4, streams=4)
        est = estimate_metric(chain, cfg, "ora")
        assert abs(est.mean - capacity_ora(chain).value) <= 4.0 * est.std_error

    def test_fading_amount_estimate(self):
        chain = self.chain(gbar=4.0)
        cfg = McConfig(trials=400_000, seed=SEED + 5, streams=4)
        est = estimate_metric(chain, cfg, "af")
        assert est.std_error > 0.0
        assert abs(est.mean - amount_of_fading(chain)) <= 4.0 * est.std_error

    def test_unknown_metric(self):
        with pytest.raises(DomainError):
            estimate_metric(self.chain(), McConfig(trials=10), "snr")

    def test_ber_requires_modulation(self):
        with pytest.raises(DomainError):
            estimate_metric(self.chain(), McConfig(trials=10), "ber")


class TestConfigValidation:
    def test_bounds(self):
        with pytest.raises(DomainError):
            McConfig(trials=0)
        with pytest.raises(DomainError):
            McConfig(trials=10, streams=0)
        with pytest.raises(DomainError):
            McConfig(trials=10, seed=-1)

    def test_estimate_is_value_object(self):
        assert Estimate(1.0, 0.1, 100) == Estimate(1.0, 0.1, 100)
