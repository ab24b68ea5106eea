"""Tests for PAM modulation, relay detection and SER formulas."""

import math

import numpy as np
import pytest
from django.core.exceptions import ValidationError
from scipy import integrate
from scipy.stats import norm

from ..packets import QPacket
from .channel import NoiseModel, superimpose_and_noise
from .pam import PamScheme, SumConstellation, detect, detect_sum, modulate, pnc_demap
from .ser import (
    gaussian_two_sided_tail,
    ser_p2p_analytic,
    ser_pnc_analytic,
    ser_sum_analytic,
)


def quad_tail(a):
    """Two-sided Gaussian tail by adaptive quadrature."""
    # mass beyond a + 40 underflows a double
    value, _ = integrate.quad(norm.pdf, a, a + 40.0, epsabs=0, epsrel=2e-14, limit=400)
    return 2.0 * value


class TestPamScheme:
    """Test cases for PamScheme."""

    def test_power_calibration(self):
        """Test q = 4 at power 5 gives alpha = 1."""
        scheme = PamScheme.for_power(4, 5)
        assert scheme.alpha == pytest.approx(1.0)
        assert scheme.spacing == pytest.approx(2.0)

    @pytest.mark.parametrize('q', [2, 3, 4, 8, 16])
    def test_mean_energy_matches_power(self, q):
        """Test the mean symbol energy equals the target power."""
        scheme = PamScheme.for_power(q, 3.7)
        assert np.mean(scheme.points ** 2) == pytest.approx(3.7)
        assert scheme.power == pytest.approx(3.7)

    def test_from_snr_db(self):
        """Test 0 dB binary PAM has alpha 1."""
        assert PamScheme.from_snr_db(2, 0).alpha == pytest.approx(1.0)

    def test_from_snr_db_overflow(self):
        """Test an SNR beyond the float range is a domain error."""
        with pytest.raises(ValidationError) as exc_info:
            PamScheme.from_snr_db(2, 4000)
        assert exc_info.value.code == 'invalid_power'

    @pytest.mark.parametrize('q,alpha', [(1, 1.0), (2, 0.0), (2, -1.0), (2, math.inf)])
    def test_invalid(self, q, alpha):
        """Test invalid schemes raise."""
        with pytest.raises(ValidationError):
            PamScheme(q, alpha)

    def test_zero_power(self):
        """Test zero power cannot be calibrated."""
        with pytest.raises(ValidationError):
            PamScheme.for_power(2, 0)


class TestModulate:
    """Test cases for modulate."""

    def test_bpsk(self):
        """Test binary PAM is antipodal."""
        assert modulate([0, 1], PamScheme(2, 1.0)).tolist() == [-1.0, 1.0]

    def test_four_level(self):
        """Test a four-level symbol."""
        assert modulate([2], PamScheme(4, 1.0)).tolist() == [1.0]

    def test_calibrated_corner(self):
        """Test the top symbol at q = 4, power 5."""
        assert modulate([3], PamScheme.for_power(4, 5)) == pytest.approx([3.0])

    def test_accepts_packets(self):
        """Test QPacket input."""
        assert modulate(QPacket([0, 3], 4), PamScheme(4, 1.0)).tolist() == [-3.0, 3.0]

    def test_out_of_range(self):
        """Test symbols outside Z_q raise."""
        with pytest.raises(ValidationError) as exc_info:
            modulate([0, 2], PamScheme(2, 1.0))
        assert exc_info.value.code == 'symbol_out_of_range'


class TestSumConstellation:
    """Test cases for SumConstellation."""

    @pytest.mark.parametrize('q', [2, 3, 4, 8, 16])
    def test_probs(self, q):
        """Test the triangular distribution sums to 1 and is symmetric."""
        sc = SumConstellation.for_scheme(PamScheme(q, 0.7))
        probs = sc.probs
        assert len(probs) == 2 * q - 1
        assert probs.sum() == pytest.approx(1.0, abs=1e-15)
        assert np.allclose(probs, probs[::-1])
        assert probs[0] == pytest.approx(1 / q ** 2)

    def test_points(self):
        """Test points are uniformly spaced by 2 alpha."""
        sc = SumConstellation(3, 0.5)
        assert sc.points.tolist() == pytest.approx([-2.0, -1.0, 0.0, 1.0, 2.0])
        assert np.allclose(np.diff(sc.points), 1.0)

    def test_probs_match_pair_counts(self):
        """Test probabilities count the (u1, u2) pairs with each sum."""
        q = 5
        u1, u2 = np.meshgrid(np.arange(q), np.arange(q))
        counts = np.bincount((u1 + u2).ravel(), minlength=2 * q - 1)
        assert np.allclose(SumConstellation(q, 1.0).probs, counts / q ** 2)


class TestDetection:
    """Test cases for detect_sum, detect and pnc_demap."""

    def setup_method(self):
        self.sc = SumConstellation(2, 1.0)

    def test_nearest_center(self):
        """Test 0.3 maps to the middle point."""
        assert detect_sum([0.3], self.sc).tolist() == [1]

    def test_below_midpoint(self):
        """Test -1.01 maps to the left end point."""
        assert detect_sum([-1.01], self.sc).tolist() == [0]

    def test_tie_goes_low(self):
        """Test a sample on a midpoint goes to the lower index."""
        assert detect_sum([1.0], self.sc).tolist() == [1]
        assert detect_sum([-1.0], self.sc).tolist() == [0]

    def test_far_outside(self):
        """Test samples beyond the end points clamp to the ends."""
        assert detect_sum([-50.0, 50.0], self.sc).tolist() == [0, 2]

    def test_single_user(self):
        """Test single-user detection with ties to the lower symbol."""
        scheme = PamScheme(4, 1.0)
        assert detect([-3.2, -2.0, -0.9, 0.0, 2.5, 9.0], scheme).tolist() == [0, 0, 1, 1, 3, 3]

    def test_single_user_noiseless(self):
        """Test single-user detection inverts modulation."""
        for q in (2, 3, 8, 16):
            scheme = PamScheme(q, 0.3)
            u = np.arange(q)
            assert detect(modulate(u, scheme), scheme).tolist() == u.tolist()

    @pytest.mark.parametrize('m_hat,q,expected', [(2, 2, 0), (5, 4, 1), (0, 4, 0), (6, 4, 2)])
    def test_pnc_demap(self, m_hat, q, expected):
        """Test demapping collapses the sum index mod q."""
        assert int(pnc_demap(m_hat, q)) == expected

    def test_pnc_demap_out_of_range(self):
        """Test indices beyond 2q - 2 raise."""
        with pytest.raises(ValidationError):
            pnc_demap([7], 4)
        with pytest.raises(ValidationError):
            pnc_demap([-1], 4)

    @pytest.mark.parametrize('q', [2, 3, 4, 5, 7, 8, 13, 16])
    def test_noiseless_chain_exhaustive(self, q):
        """Test the noiseless relay recovers (u1 + u2) mod q for every pair."""
        scheme = PamScheme.for_power(q, 2.5)
        u1, u2 = np.meshgrid(np.arange(q), np.arange(q), indexing='ij')
        u1, u2 = u1.ravel(), u2.ravel()
        y = superimpose_and_noise(modulate(u1, scheme), modulate(u2, scheme), NoiseModel.noiseless())
        m_hat = detect_sum(y, SumConstellation.for_scheme(scheme))
        assert np.array_equal(m_hat, u1 + u2)
        assert np.array_equal(pnc_demap(m_hat, q), (u1 + u2) % q)


class TestChannel:
    """Test cases for NoiseModel and superimpose_and_noise."""

    def test_noiseless_sum(self):
        """Test noiseless superposition adds amplitudes."""
        nm = NoiseModel.noiseless()
        assert superimpose_and_noise([-1.0], [1.0], nm).tolist() == [0.0]
        assert superimpose_and_noise([1.0], [1.0], nm).tolist() == [2.0]

    def test_deterministic_seed(self):
        """Test identical inputs and seed give identical output."""
        x = np.linspace(-1, 1, 100)
        a = superimpose_and_noise(x, x, NoiseModel(seed=11))
        b = superimpose_and_noise(x, x, NoiseModel(seed=11))
        c = superimpose_and_noise(x, x, NoiseModel(seed=12))
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_explicit_rng(self):
        """Test an explicit generator is used when given."""
        x = np.zeros(10)
        a = superimpose_and_noise(x, x, NoiseModel(seed=0), rng=np.random.default_rng(5))
        b = np.random.default_rng(5).standard_normal(10)
        assert np.array_equal(a, b)

    def test_unit_variance(self):
        """Test the noise has unit variance."""
        x = np.zeros(200000)
        y = superimpose_and_noise(x, x, NoiseModel(seed=3))
        assert np.var(y) == pytest.approx(1.0, abs=0.02)

    def test_length_mismatch(self):
        """Test unequal lengths raise."""
        with pytest.raises(ValidationError):
            superimpose_and_noise([0.0, 1.0], [1.0], NoiseModel())

    def test_variance_pinned(self):
        """Test other variances are rejected."""
        with pytest.raises(ValidationError):
            NoiseModel(variance=2.0)


class TestGaussianTail:
    """Test cases for gaussian_two_sided_tail."""

    def test_zero(self):
        """Test the whole mass lies beyond 0."""
        assert gaussian_two_sided_tail(0) == 1.0

    def test_one(self):
        """Test the one-sigma tail."""
        assert gaussian_two_sided_tail(1) == pytest.approx(0.31731050786291415, rel=1e-12)

    def test_eight(self):
        """Test the deep tail against the asymptotic expansion."""
        a = 8.0
        series = 1 - 1 / a ** 2 + 3 / a ** 4 - 15 / a ** 6 + 105 / a ** 8
        asymptotic = 2 * math.exp(-a * a / 2) / (a * math.sqrt(2 * math.pi)) * series
        assert gaussian_two_sided_tail(a) == pytest.approx(asymptotic, rel=2e-6)
        assert gaussian_two_sided_tail(a) == pytest.approx(1.244e-15, rel=1e-3)

    @pytest.mark.parametrize('a', [0.1, 0.5, 1.0, 2.0, 3.5, 5.0, 8.0])
    def test_quadrature_oracle(self, a):
        """Test agreement with adaptive quadrature."""
        assert gaussian_two_sided_tail(a) == pytest.approx(quad_tail(a), rel=1e-12)

    def test_negative(self):
        """Test negative thresholds raise."""
        with pytest.raises(ValidationError):
            gaussian_two_sided_tail(-0.1)


class TestAnalyticSer:
    """Test cases for the analytic SER formulas."""

    def test_p2p_binary(self):
        """Test binary PAM at alpha = 1."""
        assert ser_p2p_analytic(PamScheme(2, 1.0)) == pytest.approx(0.15866, abs=1e-5)

    def test_sum_binary(self):
        """Test the superimposed binary constellation at alpha = 1."""
        assert ser_sum_analytic(PamScheme(2, 1.0)) == pytest.approx(0.23798, abs=1e-5)

    @pytest.mark.parametrize('q', [2, 3, 4, 8, 16])
    @pytest.mark.parametrize('alpha', [0.1, 0.5, 1.0, 2.0, 4.0])
    def test_ratio(self, q, alpha):
        """Test ser_sum / ser_p2p = (q + 1) / q."""
        scheme = PamScheme(q, alpha)
        ratio = ser_sum_analytic(scheme) / ser_p2p_analytic(scheme)
        assert ratio == pytest.approx((q + 1) / q, rel=1e-12)

    def test_vanishes_with_alpha(self):
        """Test both rates vanish for large spacing."""
        scheme = PamScheme(4, 40.0)
        assert ser_p2p_analytic(scheme) == 0.0
        assert ser_sum_analytic(scheme) == 0.0

    def test_prefactor_limit(self):
        """Test the point-to-point prefactor tends to 1 with q."""
        scheme = PamScheme(4096, 1.0)
        assert ser_p2p_analytic(scheme) / gaussian_two_sided_tail(1.0) == pytest.approx(1.0, abs=1e-3)

    @pytest.mark.parametrize('q', [2, 4, 8])
    def test_strictly_decreasing(self, q):
        """Test every analytic SER falls as power grows."""
        for formula in (ser_p2p_analytic, ser_sum_analytic, ser_pnc_analytic):
            values = [formula(PamScheme.for_power(q, p)) for p in np.logspace(-1, 1.5, 12)]
            assert all(a > b for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize('q', [2, 3, 4, 8])
    @pytest.mark.parametrize('snr_db', [-5, 0, 5, 10])
    def test_pnc_below_sum(self, q, snr_db):
        """Test the mod-q collapse never adds errors."""
        scheme = PamScheme.from_snr_db(q, snr_db)
        assert ser_pnc_analytic(scheme) <= ser_sum_analytic(scheme) + 1e-15

    def test_pnc_matches_sum_at_high_snr(self):
        """Test errors that jump a whole residue class vanish at high SNR."""
        scheme = PamScheme.from_snr_db(4, 20)
        assert ser_pnc_analytic(scheme) == pytest.approx(ser_sum_analytic(scheme), rel=1e-6)

    def test_pnc_binary_closed_form(self):
        """Test q = 2, where only jumps to the adjacent index err."""
        scheme = PamScheme(2, 1.0)
        # end points err on one side, the middle point on both, minus two-step jumps
        one = norm.sf(1.0) - norm.sf(3.0)
        expected = 0.25 * one + 0.25 * one + 0.5 * 2 * norm.sf(1.0)
        assert ser_pnc_analytic(scheme) == pytest.approx(expected, rel=1e-12)


class TestMonteCarloSanity:
    """Quick Monte Carlo checks of the analytic formulas."""

    def test_p2p(self):
        """Test single-user detection errors against the formula."""
        rng = np.random.default_rng(99)
        scheme = PamScheme.from_snr_db(4, 5)
        n = 200000
        u = rng.integers(0, 4, size=n)
        y = modulate(u, scheme) + rng.standard_normal(n)
        empirical = np.mean(detect(y, scheme) != u)
        analytic = ser_p2p_analytic(scheme)
        assert abs(empirical - analytic) <= 4 * math.sqrt(analytic * (1 - analytic) / n)

    def test_pnc(self):
        """Test PNC demapping errors against the exact formula."""
        rng = np.random.default_rng(100)
        scheme = PamScheme.from_snr_db(2, 0)
        n = 200000
        u1 = rng.integers(0, 2, size=n)
        u2 = rng.integers(0, 2, size=n)
        y = superimpose_and_noise(modulate(u1, scheme), modulate(u2, scheme), NoiseModel(), rng=rng)
        m_hat = detect_sum(y, SumConstellation.for_scheme(scheme))
        empirical = np.mean(pnc_demap(m_hat, 2) != (u1 + u2) % 2)
        analytic = ser_pnc_analytic(scheme)
        assert abs(empirical - analytic) <= 4 * math.sqrt(analytic * (1 - analytic) / n)
