import math

import numpy as np
import pytest
from scipy.special import erf
from scipy.stats import ks_2samp

from cvue.codec import random_bits
from cvue.ebprep import (
    EbChallengeRecord,
    RestrictedEprSpec,
    eb_prepare,
    eb_rejection_oracle,
    game_equivalence_test,
    sample_eb_mode,
)
from cvue.gaussian import Quadrature
from cvue.protocol import (
    CipherState,
    ProtocolParams,
    QecmKey,
    balanced_string_rank,
    encrypt,
    key_gen,
    sample_key_offset,
)

REFERENCE = ProtocolParams(892, 1000, 35, 0.4, 3.4)


def acceptance_mass(alpha, squeezing):
    # normal mass of (-alpha, alpha) for N(0, cosh(r)/2)
    sigma = math.sqrt(0.5 * math.cosh(squeezing))
    return float(erf(alpha / (sigma * math.sqrt(2.0))))


class TestSpec:
    def test_interval(self):
        spec = RestrictedEprSpec(3.4, 1, 0.4)
        assert spec.interval == (0.0, 0.8)
        spec = RestrictedEprSpec(3.4, -1, 0.4)
        assert spec.interval == (-0.8, 0.0)

    def test_validation(self):
        with pytest.raises(ValueError, match="squeezing"):
            RestrictedEprSpec(0.0, 1, 0.4)
        with pytest.raises(ValueError, match="sign"):
            RestrictedEprSpec(3.4, 2, 0.4)
        with pytest.raises(ValueError, match="alpha"):
            RestrictedEprSpec(3.4, 1, 0.0)


class TestSampleEbMode:
    def test_conditional_covariance_exact(self):
        rng = np.random.default_rng(0)
        spec = RestrictedEprSpec(3.4, 1, 0.4)
        ch = math.cosh(3.4)
        for _ in range(100):
            _, mode = sample_eb_mode(spec, rng)
            assert np.allclose(mode.cov, np.diag([1 / ch, ch]), atol=1e-14)
        _, mode = sample_eb_mode(spec, rng, Quadrature.P)
        assert np.allclose(mode.cov, np.diag([ch, 1 / ch]), atol=1e-14)

    def test_outcome_inside_window(self):
        rng = np.random.default_rng(1)
        for sign in (1, -1):
            spec = RestrictedEprSpec(3.4, sign, 0.4)
            lo, hi = spec.interval
            for _ in range(2000):
                u, _ = sample_eb_mode(spec, rng)
                assert lo < u < hi

    def test_displacement_tracks_outcome(self):
        rng = np.random.default_rng(2)
        spec = RestrictedEprSpec(2.0, -1, 0.3)
        u, mode = sample_eb_mode(spec, rng)
        want = -0.3 + (u + 0.3) * math.tanh(2.0)
        assert np.isclose(mode.disp[0], want)

    def test_derived_offsets_match_keygen_distribution(self):
        # the two samplers draw from the same truncated normal
        rng = np.random.default_rng(3)
        spec = RestrictedEprSpec(3.4, 1, 0.4)
        draws = 100_000
        u = np.array([sample_eb_mode(spec, rng)[0] for _ in range(draws)])
        derived = (u - 0.4) * math.tanh(3.4)
        direct = sample_key_offset(0.4, 3.4, rng, size=draws)
        assert ks_2samp(derived, direct).pvalue > 0.01


class TestEbPrepare:
    def test_cipherstate_matches_direct_encryption_bit_exactly(self):
        params = ProtocolParams(16, 32, 2, 0.4, 3.4)
        rng = np.random.default_rng(4)
        codec = params.make_codec()
        key = key_gen(params, rng)
        message = random_bits(16, rng)
        record = eb_prepare(params, key.pad, key.directions, message, rng, codec)
        eb_key = QecmKey(
            key.pad, key.directions, record.offsets, balanced_string_rank(key.directions)
        )
        direct = encrypt(eb_key, message, params, codec)
        assert np.array_equal(record.cipher.disp, direct.disp)
        assert np.array_equal(record.cipher.cov_diag, direct.cov_diag)

    def test_offsets_inside_truncation_interval(self):
        rng = np.random.default_rng(5)
        codec = REFERENCE.make_codec()
        key = key_gen(REFERENCE, rng)
        message = random_bits(REFERENCE.msg_len, rng)
        bound = REFERENCE.alpha * math.tanh(REFERENCE.squeezing)
        for _ in range(20):
            record = eb_prepare(REFERENCE, key.pad, key.directions, message, rng, codec)
            assert np.all(np.abs(record.offsets) < bound)
            assert np.all(np.abs(record.outcomes) < 2 * REFERENCE.alpha)

    def test_zero_squeezing_rejected(self):
        params = ProtocolParams(8, 16, 2, 0.4, 0.0)
        rng = np.random.default_rng(6)
        with pytest.warns(UserWarning):
            key = key_gen(params, rng)
        with pytest.raises(ValueError, match="positive squeezing"):
            eb_prepare(params, key.pad, key.directions, random_bits(8, rng), rng,
                       params.make_codec())

    def test_record_validation(self):
        cipher = CipherState(np.zeros((2, 2)), np.ones((2, 2)))
        with pytest.raises(ValueError, match="equal length"):
            EbChallengeRecord(np.zeros(3), np.zeros(2), cipher)
        with pytest.raises(ValueError, match="match the cipherstate"):
            EbChallengeRecord(np.zeros(3), np.zeros(3), cipher)


class TestRejectionOracle:
    def test_conditional_matches_closed_form(self):
        rng = np.random.default_rng(7)
        ch = math.cosh(3.4)
        for sign in (1, -1):
            u, mode, _ = eb_rejection_oracle(3.4, 0.4, sign, rng)
            assert np.allclose(mode.cov, np.diag([1 / ch, ch]), atol=1e-10)
            want = sign * 0.4 + (u - sign * 0.4) * math.tanh(3.4)
            assert np.isclose(mode.disp[0], want, atol=1e-10)
            assert np.isclose(mode.disp[1], 0.0, atol=1e-10)

    def test_acceptance_ratio(self):
        rng = np.random.default_rng(8)
        accepted = 2000
        attempts = 0
        for _ in range(accepted):
            _, _, tries = eb_rejection_oracle(3.4, 0.4, 1, rng)
            attempts += tries
        want = acceptance_mass(0.4, 3.4)
        sd = math.sqrt(want * (1 - want) / attempts)
        assert abs(accepted / attempts - want) < 5 * sd

    def test_distribution_matches_inverse_cdf_sampler(self):
        rng = np.random.default_rng(9)
        draws = 5000
        rejected_u = np.array(
            [eb_rejection_oracle(3.4, 0.4, 1, rng)[0] for _ in range(draws)]
        )
        spec = RestrictedEprSpec(3.4, 1, 0.4)
        direct_u = np.array([sample_eb_mode(spec, rng)[0] for _ in range(draws)])
        assert ks_2samp(rejected_u, direct_u).pvalue > 0.01


class TestGameEquivalence:
    def test_candidate_reconstruction_and_range(self):
        params = ProtocolParams(16, 64, 3, 0.4, 3.4)
        report = game_equivalence_test(params, 200, np.random.default_rng(10))
        # u = k/tanh(r) +- alpha holds to floating precision
        assert report.max_candidate_error < 1e-9 * params.alpha
        assert report.outcome_range_ok

    def test_flip_rates_agree(self):
        report = game_equivalence_test(REFERENCE, 1000, np.random.default_rng(11))
        assert abs(report.z_statistic) < 5
        assert report.modes_per_trial == 1000
        assert report.trials == 1000

    def test_needs_trials(self):
        with pytest.raises(ValueError):
            game_equivalence_test(REFERENCE, 0, np.random.default_rng(12))

    def test_report_serializes(self):
        params = ProtocolParams(8, 16, 1, 0.4, 3.4)
        report = game_equivalence_test(params, 20, np.random.default_rng(13))
        d = report.as_dict()
        assert set(d) >= {"flip_rate_direct", "flip_rate_eb", "p_value"}
