"""
Tests for the sampler.

Tests cover:
- Seed streams and prefix-stable sign streams
- Tower events and F_0-atoms, including forced bad atoms
- Fast path sums against the brute-force oracle
- Replicate kernels and thread-count independence
"""

import math

import numpy as np
import pytest

from linquench.counterexample import InnovationSpec, coefficients_of_f, counterexample_profile, innovation_spec
from linquench.errors import InfeasibleAlignmentError, PreconditionError
from linquench.experiments.stats import sample_skewness
from linquench.process import CoefficientSeq
from linquench.sampler import (
    PoolState,
    ReplicatePool,
    SignStream,
    Stream,
    annealed_block_maxima,
    annealed_terminal_sums,
    brute_force_path,
    conditional_law,
    derive_seed,
    force_bad_omega,
    get_replicate_pool,
    init_replicate_pool,
    innovation_at,
    path_sum,
    random_signs,
    rng_for,
    sample_omega,
    shutdown_replicate_pool,
    stationarity_moments,
    tower_events,
)


# =============================================================================
# STREAMS
# =============================================================================

class TestStreams:
    """Tests for seed derivation and sign streams."""

    def test_rng_is_deterministic(self):
        assert np.array_equal(rng_for(1, 2, 3).random(5), rng_for(1, 2, 3).random(5))

    def test_keys_separate_streams(self):
        assert derive_seed(7, Stream.OMEGA, 0) != derive_seed(7, Stream.OMEGA, 1)
        assert derive_seed(7, Stream.OMEGA, 0) != derive_seed(7, Stream.REPLICATE, 0)
        assert 0 <= derive_seed(7, Stream.OMEGA, 0) < 2 ** 63

    def test_random_signs_are_prefix_stable(self):
        whole = random_signs(rng_for(3), 10)
        rng = rng_for(3)
        pieces = np.concatenate((random_signs(rng, 4), random_signs(rng, 6)))
        assert np.array_equal(whole, pieces)
        assert set(np.unique(whole)) <= {-1.0, 1.0}

    def test_sign_stream_prefix_stable(self):
        stream = SignStream(seed=11)
        first = stream.signs(1, 5).copy()
        assert np.array_equal(stream.signs(1, 50)[:5], first)
        assert np.array_equal(SignStream(seed=11).signs(1, 50), stream.signs(1, 50))
        assert stream.sign(1, 3) == first[3]

    def test_constant_stream(self):
        assert SignStream.constant(-1.0).signs(2, 3).tolist() == [-1.0, -1.0, -1.0]

    def test_stream_needs_source(self):
        with pytest.raises(ValueError):
            SignStream()


# =============================================================================
# TOWERS AND ATOMS
# =============================================================================

class TestTowerEvents:
    """Tests for tower firing times."""

    def test_events_in_window(self):
        rows, times = tower_events(np.array([0, 1]), 4, -3, 8)
        assert rows.tolist() == [0, 0, 0, 1, 1, 1]
        assert times.tolist() == [0, 4, 8, -1, 3, 7]

    def test_empty_window(self):
        rows, times = tower_events(np.array([1]), 8, 0, 3)
        assert len(rows) == 0 and len(times) == 0

    def test_phase_frequencies_are_uniform(self, demo_innovation):
        phases = [sample_omega(demo_innovation, seed, 0).phases[0] for seed in range(4000)]
        share = np.mean(np.array(phases) == 0)
        assert share == pytest.approx(1 / 4, abs=0.03)


class TestOmega:
    """Tests for F_0-atom sampling."""

    def test_deterministic(self, demo_innovation):
        a = sample_omega(demo_innovation, 99, 256)
        b = sample_omega(demo_innovation, 99, 256)
        assert a.phases == b.phases
        assert a.past_signs == b.past_signs

    def test_past_signs_cover_aligned_times(self, demo_innovation):
        omega = sample_omega(demo_innovation, 5, 40)
        for (k, t) in omega.past_signs:
            assert -40 <= t <= 0
            assert omega.aligned(k, t)
        for k in range(1, 4):
            fired = [t for t in range(-40, 1) if omega.aligned(k, t)]
            assert all((k, t) in omega.past_signs for t in fired)

    def test_negative_window(self, demo_innovation):
        with pytest.raises(PreconditionError):
            sample_omega(demo_innovation, 1, -1)

    def test_force_bad_omega(self, failure_spec):
        inn = innovation_spec(failure_spec)
        omega = force_bad_omega(inn, 1, 128, seed=3, past_window=16, tower_scales=failure_spec.N)
        assert omega.aligned(1, 127)
        assert omega.aligned_towers(127) == (1,)
        assert omega.draws >= 1

    def test_force_outside_block(self, failure_spec):
        inn = innovation_spec(failure_spec)
        with pytest.raises(PreconditionError):
            force_bad_omega(inn, 1, 600, seed=3, past_window=16, tower_scales=failure_spec.N)

    def test_force_infeasible(self):
        inn = InnovationSpec(K=2, weights=(1.0, 1.0), tower_heights=(4, 1), d=1.0)
        with pytest.raises(InfeasibleAlignmentError):
            force_bad_omega(inn, 1, 2, seed=0, past_window=0, tower_scales=[1, 10])

    def test_forced_atom_sign_is_fair(self, failure_spec):
        """The forced atom carries +-w_1 with equal odds over future signs."""
        inn = innovation_spec(failure_spec)
        omega = force_bad_omega(inn, 1, 128, seed=3, past_window=16, tower_scales=failure_spec.N)
        M = 4000
        values = np.array([innovation_at(omega, 127, inn, SignStream(seed=s)) for s in range(M)])
        np.testing.assert_allclose(np.abs(values), inn.weight(1), rtol=1e-15)
        assert abs(np.mean(values > 0) - 0.5) <= 3 / (2 * math.sqrt(M))

    def test_rejection_acceptance_rate(self, demo_innovation):
        """Towers 1 and 3 must miss t = 3: acceptance (3/4)(63/64)."""
        draws = [force_bad_omega(demo_innovation, 2, 4, seed=s, past_window=0).draws for s in range(2000)]
        acceptance = len(draws) / sum(draws)
        assert acceptance >= 0.5
        assert acceptance == pytest.approx(189 / 256, abs=0.03)


# =============================================================================
# PATH SUMS
# =============================================================================

class TestPathSums:
    """Fast path sums agree with the literal double sum."""

    def test_oracle_agreement(self, demo_innovation):
        rng = np.random.default_rng(17)
        innovations = [InnovationSpec.iid_sign(), demo_innovation]
        for trial in range(10):
            a = CoefficientSeq.of(rng.normal(size=int(rng.integers(1, 7))).tolist())
            inn = innovations[trial % 2]
            N = int(rng.integers(1, 257)) if trial % 2 else int(rng.integers(1, 65))
            W = a.support_length + int(rng.integers(0, 4))
            omega = sample_omega(inn, 1000 + trial, W)
            signs = SignStream(seed=2000 + trial)
            fast = path_sum(a, omega, N, inn, future_signs=signs)
            slow = brute_force_path(a, omega, N, inn, signs)
            assert len(fast.s) == N
            np.testing.assert_allclose(fast.s, slow, rtol=1e-9, atol=1e-9)

    def test_iid_conditional_expectation(self, iid_coefficients):
        """For f = e, E(S_N|F_0) is the innovation at time 0."""
        inn = InnovationSpec.iid_sign()
        omega = sample_omega(inn, 4, 0)
        path = path_sum(iid_coefficients, omega, 10, inn, seed=1)
        assert path.cond_exp == omega.past_signs[(1, 0)]
        assert path.s[0] == path.cond_exp
        assert path.innovations_used == 10

    def test_innovation_at_uses_future_stream(self):
        inn = InnovationSpec.iid_sign()
        omega = sample_omega(inn, 4, 0)
        signs = SignStream(seed=8)
        assert innovation_at(omega, 3, inn, signs) == signs.sign(1, 2)

    def test_window_must_cover_support(self, geometric_coefficients):
        inn = InnovationSpec.iid_sign()
        omega = sample_omega(inn, 1, 1)
        with pytest.raises(PreconditionError):
            path_sum(geometric_coefficients, omega, 10, inn, seed=1)


# =============================================================================
# REPLICATE KERNELS
# =============================================================================

class TestReplicatePool:
    """Tests for the chunked pool."""

    def test_chunk_bounds(self):
        pool = ReplicatePool(threads=1, chunk_size=256)
        assert pool.chunk_bounds(600) == [(0, 0, 256), (1, 256, 256), (2, 512, 88)]

    def test_merge_order(self):
        pool = ReplicatePool(threads=4, chunk_size=10)
        out = pool.map_chunks(lambda chunk, start, count: np.arange(start, start + count), 95)
        assert out.tolist() == list(range(95))
        stats = pool.get_stats()
        assert stats["chunks_run"] == 10
        assert stats["replicates"] == 95
        pool.shutdown()
        assert pool.state == PoolState.STOPPED

    def test_invalid_chunk_size(self):
        with pytest.raises(ValueError):
            ReplicatePool(chunk_size=0)

    def test_global_pool(self):
        pool = init_replicate_pool(threads=2, chunk_size=32)
        assert get_replicate_pool() is pool
        assert pool.chunk_size == 32
        shutdown_replicate_pool()
        assert get_replicate_pool() is not pool


class TestConditionalLaw:
    """Tests for replicate draws under m_omega."""

    def test_iid_variance(self, iid_coefficients, single_pool):
        inn = InnovationSpec.iid_sign()
        omega = sample_omega(inn, 1, 0)
        law = conditional_law(iid_coefficients, omega, 50, 4000, 7, inn, pool=single_pool)
        assert law.replicates == 4000
        assert law.future_events == 49
        assert np.mean(law.centered ** 2) / 49 == pytest.approx(1.0, abs=0.15)
        assert law.sigma_bar_n == pytest.approx(7.0)

    def test_needs_enough_replicates(self, iid_coefficients, single_pool):
        inn = InnovationSpec.iid_sign()
        omega = sample_omega(inn, 1, 0)
        with pytest.raises(PreconditionError):
            conditional_law(iid_coefficients, omega, 50, 99, 7, inn, pool=single_pool)

    def test_iid_law_is_symmetric(self, iid_coefficients, single_pool):
        inn = InnovationSpec.iid_sign()
        omega = sample_omega(inn, 1, 0)
        law = conditional_law(iid_coefficients, omega, 50, 10_000, 11, inn, pool=single_pool)
        skew, se = sample_skewness(law.centered)
        assert abs(skew) < 4 * se
        assert law.variance == 49.0

    def test_counterexample_law_is_symmetric(self, demo_spec, demo_innovation, single_pool):
        a = coefficients_of_f(demo_spec)
        omega = sample_omega(demo_innovation, 5, demo_spec.V_K)
        law = conditional_law(a, omega, 256, 10_000, 3, demo_innovation, pool=single_pool)
        M = law.replicates
        assert abs(np.mean(law.centered > 0) - np.mean(law.centered < 0)) < 4 / math.sqrt(M)

    def test_counterexample_variance_matches_exact(self, demo_spec, demo_innovation, single_pool):
        a = coefficients_of_f(demo_spec)
        omega = sample_omega(demo_innovation, 8, demo_spec.V_K)
        law = conditional_law(a, omega, 256, 10_000, 4, demo_innovation, pool=single_pool)
        sq = law.centered ** 2
        se = float(np.std(sq)) / math.sqrt(len(sq))
        assert law.variance > 0
        assert abs(float(np.mean(sq)) - law.variance) <= 4 * se

    def test_counterexample_variance_averages_to_sigma_bar(self, demo_spec, demo_innovation, single_pool):
        """Averaged over omega, the conditional variance is sigma_bar_N^2."""
        a = coefficients_of_f(demo_spec)
        profile = counterexample_profile(demo_spec, 256)
        variances = [
            conditional_law(
                a, sample_omega(demo_innovation, s, demo_spec.V_K), 256, 100, s, demo_innovation,
                profile=profile, pool=single_pool,
            ).variance
            for s in range(400)
        ]
        assert np.mean(variances) / profile.sigma_bar(256) ** 2 == pytest.approx(1.0, rel=0.06)

    def test_thread_count_does_not_change_draws(self, geometric_coefficients):
        inn = InnovationSpec.iid_sign()
        omega = sample_omega(inn, 2, 3)
        one = ReplicatePool(threads=1, chunk_size=64)
        many = ReplicatePool(threads=8, chunk_size=64)
        try:
            x = conditional_law(geometric_coefficients, omega, 200, 1000, 5, inn, pool=one).centered
            y = conditional_law(geometric_coefficients, omega, 200, 1000, 5, inn, pool=many).centered
        finally:
            many.shutdown()
        assert np.array_equal(x, y)


class TestAnnealedKernels:
    """Tests for fresh-omega replicate kernels."""

    def test_terminal_sums_thread_independent(self, demo_spec, demo_innovation):
        from linquench.counterexample import coefficients_of_f
        a = coefficients_of_f(demo_spec)
        one = ReplicatePool(threads=1, chunk_size=128)
        many = ReplicatePool(threads=4, chunk_size=128)
        try:
            x = annealed_terminal_sums(a, demo_innovation, 64, 600, 9, 256, one)
            y = annealed_terminal_sums(a, demo_innovation, 64, 600, 9, 256, many)
        finally:
            many.shutdown()
        assert np.array_equal(x, y)

    def test_iid_terminal_variance(self, iid_coefficients, single_pool):
        draws = annealed_terminal_sums(iid_coefficients, InnovationSpec.iid_sign(), 100, 4000, 1, pool=single_pool)
        assert np.mean(draws ** 2) / 100 == pytest.approx(1.0, abs=0.15)

    def test_block_maxima_first_step(self, iid_coefficients, single_pool):
        """At n = 1 the centered sum is empty and |S_1| = |e_0| = 1."""
        maxima = annealed_block_maxima(iid_coefficients, InnovationSpec.iid_sign(), 1, 2, 300, 4, pool=single_pool)
        assert maxima.shape == (300, 2)
        assert np.all(maxima[:, 0] == 0.0)
        assert np.all(maxima[:, 1] == 1.0)

    def test_block_maxima_bounds(self, iid_coefficients, single_pool):
        maxima = annealed_block_maxima(iid_coefficients, InnovationSpec.iid_sign(), 5, 20, 300, 4, pool=single_pool)
        assert np.all(maxima >= 0.0)
        assert np.all(maxima[:, 0] <= 19.0)

    def test_empty_block_rejected(self, iid_coefficients, single_pool):
        with pytest.raises(PreconditionError):
            annealed_block_maxima(iid_coefficients, InnovationSpec.iid_sign(), 5, 5, 300, 4, pool=single_pool)

    def test_stationary_second_moment(self, demo_innovation, single_pool):
        mean, second = stationarity_moments(CoefficientSeq.of([1.0]), demo_innovation, 7, 20000, 3, single_pool)
        assert mean == pytest.approx(0.0, abs=0.06)
        assert second == pytest.approx(1.0, abs=0.08)

    def test_iid_stationary_moments_exact(self, single_pool):
        _, second = stationarity_moments(CoefficientSeq.of([1.0]), InnovationSpec.iid_sign(), 0, 500, 3, single_pool)
        assert second == 1.0

    @pytest.mark.parametrize("lag", [0, 17, 100])
    def test_stationary_at_every_lag(self, geometric_coefficients, demo_innovation, single_pool, lag):
        """E f o T^j = 0 and E (f o T^j)^2 = sum a_i^2 at every j."""
        mean, second = stationarity_moments(geometric_coefficients, demo_innovation, lag, 20000, 3, single_pool)
        assert mean == pytest.approx(0.0, abs=0.06)
        assert second == pytest.approx(1.328125, abs=0.08)

    @pytest.mark.slow
    def test_tower_innovation_has_unit_variance(self, demo_innovation, single_pool):
        mean, second = stationarity_moments(CoefficientSeq.of([1.0]), demo_innovation, 0, 10**6, 5, single_pool)
        assert mean == pytest.approx(0.0, abs=0.01)
        assert second == pytest.approx(1.0, abs=0.01)
