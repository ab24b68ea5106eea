"""Tests for capacity bounds and SIC rates."""

import math

import numpy as np
import pytest
from django.core.exceptions import ValidationError

from .rates import (
    PowerProfile,
    Regime,
    Strategy,
    combine_rates,
    db_to_linear,
    equalize_powers,
    exchange_rate,
    linear_to_db,
    low_snr_gap,
    low_snr_lower_bound,
    shannon_rate,
    sic_efficiency,
    sic_rates,
    upper_bound,
)


def random_profiles(rng, count):
    powers = 10.0 ** rng.uniform(-3, 4, size=(count, 3))
    return [PowerProfile(*row) for row in powers]


class TestPowerProfile:
    """Test cases for PowerProfile."""

    def test_valid(self):
        """Test a valid profile keeps its values."""
        pp = PowerProfile(1, 2, 3)
        assert (pp.p1, pp.p2, pp.p3) == (1.0, 2.0, 3.0)

    def test_negative_power(self):
        """Test negative power is rejected."""
        with pytest.raises(ValidationError) as exc_info:
            PowerProfile(-1, 2, 3)
        assert exc_info.value.code == 'invalid_power'

    @pytest.mark.parametrize('bad', [math.inf, math.nan])
    def test_non_finite_power(self, bad):
        """Test non-finite power is rejected."""
        with pytest.raises(ValidationError):
            PowerProfile(1, bad, 3)

    def test_from_db(self):
        """Test dB construction."""
        pp = PowerProfile.from_db(0, 10, 20)
        assert pp.p1 == pytest.approx(1.0)
        assert pp.p2 == pytest.approx(10.0)
        assert pp.p3 == pytest.approx(100.0)

    def test_weak_strong(self):
        """Test weak and strong end powers."""
        pp = PowerProfile(3, 1, 0)
        assert pp.weak == 1
        assert pp.strong == 3

    def test_db_roundtrip_value(self):
        """Test dB conversion helpers agree."""
        assert linear_to_db(db_to_linear(11.76)) == pytest.approx(11.76)
        assert db_to_linear(11.76) == pytest.approx(15.0, rel=1e-3)

    def test_linear_to_db_rejects_zero(self):
        """Test zero has no dB value."""
        with pytest.raises(ValidationError):
            linear_to_db(0)

    @pytest.mark.parametrize('db', [4000, 3100])
    def test_db_overflow(self, db):
        """Test dB values beyond the float range are domain errors."""
        with pytest.raises(ValidationError) as exc_info:
            db_to_linear(db)
        assert exc_info.value.code == 'invalid_power'
        with pytest.raises(ValidationError):
            PowerProfile.from_db(db, 0, 0)


class TestShannonRate:
    """Test cases for shannon_rate."""

    @pytest.mark.parametrize('p,expected', [(0, 0.0), (1, 0.5), (15, 2.0)])
    def test_values(self, p, expected):
        """Test direct evaluations."""
        assert shannon_rate(p) == pytest.approx(expected, abs=1e-15)

    @pytest.mark.parametrize('bad', [-1e-9, math.inf, math.nan])
    def test_domain_error(self, bad):
        """Test invalid powers raise."""
        with pytest.raises(ValidationError):
            shannon_rate(bad)


class TestCombineRates:
    """Test cases for combine_rates."""

    @pytest.mark.parametrize('uplink,downlink,rate,t1', [
        (2, 2, 1.0, 0.5),
        (0, 5, 0.0, 1.0),
        (1, 3, 0.75, 0.75),
        (0, 0, 0.0, 0.5),
    ])
    def test_values(self, uplink, downlink, rate, t1):
        """Test harmonic combination."""
        got_rate, got_t1 = combine_rates(uplink, downlink)
        assert got_rate == pytest.approx(rate, abs=1e-15)
        assert got_t1 == pytest.approx(t1, abs=1e-15)

    def test_equal_rates_halve(self, rng):
        """Test combine_rates(x, x) = x / 2."""
        for x in rng.uniform(0, 20, size=200):
            assert combine_rates(x, x)[0] == pytest.approx(x / 2, abs=1e-12)


class TestUpperBound:
    """Test cases for upper_bound."""

    def test_symmetric_fifteen(self):
        """Test the bound at P1 = P2 = P3 = 15."""
        report = upper_bound(PowerProfile(15, 15, 15))
        assert report.upper_bound == pytest.approx(1.0, abs=1e-12)
        assert report.t1_opt == pytest.approx(0.5, abs=1e-12)
        assert not report.degenerate

    def test_zero_min_power(self):
        """Test a silent end node gives a zero bound."""
        report = upper_bound(PowerProfile(0, 7, 15))
        assert report.upper_bound == 0.0
        assert report.t1_opt == 1.0

    def test_degenerate(self):
        """Test the both-zero case is flagged."""
        report = upper_bound(PowerProfile(0, 0, 0))
        assert report.upper_bound == 0.0
        assert report.t1_opt == 0.5
        assert report.degenerate

    def test_downlink_asymptote(self):
        """Test the bound tends to the uplink rate 0.5 as P3 grows."""
        report = upper_bound(PowerProfile(1, 1, 1e300))
        assert report.upper_bound == pytest.approx(0.5, rel=1e-2)
        assert report.upper_bound < 0.5

    def test_equalization(self, rng):
        """Test both phases carry the same amount of information."""
        for pp in random_profiles(rng, 10000):
            r = upper_bound(pp)
            if r.uplink_rate > 0 and r.downlink_rate > 0:
                assert abs(r.t1_opt * r.uplink_rate - (1 - r.t1_opt) * r.downlink_rate) <= 1e-12
                assert 0 <= r.t1_opt <= 1

    def test_monotone_in_each_power(self, rng):
        """Test raising any power never lowers the bound."""
        for pp in random_profiles(rng, 2000):
            base = upper_bound(pp).upper_bound
            bumps = 1.0 + rng.uniform(0, 2, size=3)
            assert upper_bound(PowerProfile(pp.p1 * bumps[0], pp.p2, pp.p3)).upper_bound >= base
            assert upper_bound(PowerProfile(pp.p1, pp.p2 * bumps[1], pp.p3)).upper_bound >= base
            assert upper_bound(PowerProfile(pp.p1, pp.p2, pp.p3 * bumps[2])).upper_bound >= base

    def test_matches_combine_rates(self, rng):
        """Test the bound is combine_rates of the two phase capacities."""
        for pp in random_profiles(rng, 500):
            expected = combine_rates(shannon_rate(min(pp.p1, pp.p2)), shannon_rate(pp.p3))[0]
            assert upper_bound(pp).upper_bound == expected

    def test_closed_form(self, rng):
        """Test agreement with the closed-form product-over-sum expression."""
        for pp in random_profiles(rng, 500):
            a = math.log2(1 + min(pp.p1, pp.p2))
            b = math.log2(1 + pp.p3)
            assert upper_bound(pp).upper_bound == pytest.approx(0.5 * a * b / (a + b), rel=1e-12)


class TestSicRates:
    """Test cases for sic_rates."""

    def test_strong_dominates(self):
        """Test (1, 3) lands in the strong-dominates regime."""
        report = sic_rates(PowerProfile(1, 3, 0))
        assert report.rate_weak == pytest.approx(0.5)
        assert report.rate_strong == pytest.approx(0.5 * math.log2(2.5))
        assert report.rate_strong == pytest.approx(0.6610, abs=1e-4)
        assert report.regime is Regime.STRONG_DOMINATES
        assert report.min_rate == report.rate_weak

    def test_zero_powers(self):
        """Test silent nodes have zero rates."""
        report = sic_rates(PowerProfile(0, 0, 5))
        assert report.rate_strong == 0.0
        assert report.rate_weak == 0.0

    def test_intermediate(self):
        """Test equal unit powers land in the intermediate regime."""
        report = sic_rates(PowerProfile(1, 1, 0))
        assert report.rate_strong == pytest.approx(0.2925, abs=1e-4)
        assert report.rate_weak == pytest.approx(0.5)
        assert report.regime is Regime.INTERMEDIATE
        assert report.min_rate == report.rate_strong

    def test_order_independent(self):
        """Test the stronger node is always decoded first."""
        assert sic_rates(PowerProfile(3, 1, 0)) == sic_rates(PowerProfile(1, 3, 0))

    def test_dominance(self, rng):
        """Test SIC never beats the uplink cut-set rate."""
        for pp in random_profiles(rng, 5000):
            report = sic_rates(pp)
            assert report.min_rate <= shannon_rate(min(pp.p1, pp.p2)) + 1e-15
            if report.regime is Regime.STRONG_DOMINATES:
                assert report.min_rate == shannon_rate(min(pp.p1, pp.p2))


class TestLowSnrGap:
    """Test cases for low_snr_gap and its lower bound."""

    def test_equal_small_powers(self):
        """Test the gap at pw = ps = 0.01 is tiny and below 1% relative."""
        gap = low_snr_gap(0.01, 0.01)
        assert 6e-5 < gap < 8e-5
        assert gap / shannon_rate(0.01) < 0.01

    def test_zero(self):
        """Test zero power has zero gap."""
        assert low_snr_gap(0, 0) == 0.0

    def test_monotone_in_strong_power(self):
        """Test raising ps towards pw + pw^2 shrinks the gap."""
        assert 0 <= low_snr_gap(0.01, 0.0101) < low_snr_gap(0.01, 0.01)
        assert low_snr_gap(0.01, 0.01005) < low_snr_gap(0.01, 0.01)

    @pytest.mark.parametrize('pw,ps', [(0.01, 0.005), (0.01, 0.02), (1, 3)])
    def test_regime_violation(self, pw, ps):
        """Test powers outside the intermediate regime raise."""
        with pytest.raises(ValidationError) as exc_info:
            low_snr_gap(pw, ps)
        assert exc_info.value.code == 'regime'

    def test_lower_bound_holds(self):
        """Test the chain lower bound sits below the first-decoded rate."""
        for pw in (0.005, 0.01, 0.05, 0.1, 0.5, 1.0):
            for frac in np.linspace(0, 1, 11):
                ps = pw + frac * pw * pw
                rate = 0.5 * math.log2(1 + ps / (pw + 1))
                assert low_snr_lower_bound(pw) <= rate + 1e-15

    def test_relative_gap_shrinks_with_power(self):
        """Test SIC tightens towards the weak link capacity as power falls."""
        grid = [0.1, 0.05, 0.02, 0.01, 0.005]
        gaps = []
        for p in grid:
            min_rate = sic_rates(PowerProfile(p, p, 1)).min_rate
            gaps.append((shannon_rate(p) - min_rate) / shannon_rate(p))
        assert gaps[3] < 0.01
        assert all(a > b for a, b in zip(gaps, gaps[1:]))


class TestStrategies:
    """Test cases for exchange_rate and related helpers."""

    def test_equalize_powers(self):
        """Test the stronger end backs off."""
        assert equalize_powers(PowerProfile(2, 7, 9)) == PowerProfile(2, 2, 9)

    def test_ordering(self, rng):
        """Test SIC <= PNC = cut-set bound."""
        for pp in random_profiles(rng, 1000):
            bound = exchange_rate(pp, Strategy.CUT_SET_BOUND).rate
            assert exchange_rate(pp, Strategy.PNC_NETWORK_CODING).rate == bound
            assert exchange_rate(pp, Strategy.SIC_NETWORK_CODING).rate <= bound + 1e-15
            assert bound == upper_bound(pp).upper_bound

    def test_strategy_from_value(self):
        """Test strategies can be selected by value string."""
        report = exchange_rate(PowerProfile(1, 1, 1), 'SicNetworkCoding')
        assert report.strategy is Strategy.SIC_NETWORK_CODING

    def test_efficiency_low_and_high_snr(self):
        """Test SIC is near-optimal at low SNR and falls short at high SNR."""
        assert sic_efficiency(PowerProfile.symmetric(0.001)) > 0.999
        assert sic_efficiency(PowerProfile.symmetric(1000)) < 0.7

    def test_efficiency_zero_bound(self):
        """Test a zero bound counts as fully efficient."""
        assert sic_efficiency(PowerProfile(0, 0, 0)) == 1.0
