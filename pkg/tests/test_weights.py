"""
Tests for weight sequences and derived scalars
"""

import math

import numpy as np
import pytest

from src.weights import (
    ScalingConstants,
    WeightFileError,
    WeightSequence,
    WeightSequenceError,
    as_weight_array,
    build_from_cdf,
    build_iid,
    build_power_law,
    check_assumptions,
    derived_stats,
    lambda_for_p,
    p_lambda,
)

pytestmark = pytest.mark.unit


class TestBuilders:
    """Test cases for the weight sequence builders"""

    def test_last_power_law_weight_is_c(self):
        """w_n equals c for any n"""
        seq = build_power_law(1234, 2.5, 3.7)
        assert seq.weight(1234) == pytest.approx(2.5, rel=1e-15)

    def test_power_law_small_case(self):
        """n=4, c=1, tau=3.5 matches the formula elementwise"""
        seq = build_power_law(4, 1.0, 3.5)
        expected = [4 ** 0.4, 2 ** 0.4, (4 / 3) ** 0.4, 1.0]
        np.testing.assert_allclose(seq.w, expected, rtol=1e-14)

    def test_power_law_largest_weight(self):
        """n=80000, c=3, tau=3.05 gives w_1 = 3 * 80000^(1/2.05)"""
        seq = build_power_law(80000, 3.0, 3.05)
        assert seq.weight(1) == pytest.approx(3.0 * 80000 ** (1 / 2.05), rel=1e-12)

    @pytest.mark.parametrize("n,c,tau", [(1, 3.0, 3.5), (10, 0.0, 3.5), (10, 3.0, 4.0), (10, 3.0, 3.0)])
    def test_power_law_rejects_invalid_input(self, n, c, tau):
        """n < 2, c <= 0 and tau outside (3, 4) are rejected"""
        with pytest.raises(WeightSequenceError):
            build_power_law(n, c, tau)

    def test_pareto_inverse_tail(self):
        """u^(-alpha) gives ((n+1)/i)^alpha"""
        n, tau = 50, 3.5
        alpha = 1.0 / (tau - 1.0)
        seq = build_from_cdf(n, lambda u: u ** (-alpha), tau)
        i = np.arange(1, n + 1)
        np.testing.assert_allclose(seq.w, ((n + 1) / i) ** alpha, rtol=1e-13)

    def test_pareto_matches_power_law_up_to_factor(self):
        """Pareto weights equal power-law weights times ((n+1)/n)^alpha"""
        n, tau = 200, 3.4
        alpha = 1.0 / (tau - 1.0)
        pareto = build_from_cdf(n, lambda u: 3.0 * u ** (-alpha), tau)
        power = build_power_law(n, 3.0, tau)
        np.testing.assert_allclose(pareto.w, power.w * ((n + 1) / n) ** alpha, rtol=1e-12)

    def test_constant_inverse_tail(self):
        """A constant inverse tail gives equal weights"""
        seq = build_from_cdf(10, lambda u: 2.0, 3.5)
        assert np.all(seq.w == 2.0)

    def test_non_monotone_inverse_tail_rejected(self):
        """An increasing inverse tail is detected after sampling"""
        with pytest.raises(WeightSequenceError):
            build_from_cdf(10, lambda u: 1.0 + u, 3.5)

    def test_iid_weights_sorted(self, rng):
        """i.i.d. draws come back sorted nonincreasing"""
        seq = build_iid(100, lambda g, n: 1.0 + g.pareto(2.5, n), 3.5, rng)
        assert seq.n == 100
        assert np.all(np.diff(seq.w) <= 0)

    def test_sequence_rejects_increasing_weights(self):
        """Weights must be nonincreasing"""
        with pytest.raises(WeightSequenceError, match="nonincreasing"):
            WeightSequence(np.array([1.0, 2.0, 0.5]), 3.5)

    def test_sequence_rejects_nonpositive_weights(self):
        """Weights must be strictly positive"""
        with pytest.raises(WeightSequenceError):
            WeightSequence(np.array([1.0, 0.0]), 3.5)

    def test_sequence_is_read_only(self, small_seq):
        """The stored weights cannot be modified"""
        with pytest.raises(ValueError):
            small_seq.w[0] = 0.0

    def test_as_weight_array(self, small_seq):
        """Sequences and plain arrays are both accepted"""
        assert as_weight_array(small_seq) is small_seq.w
        np.testing.assert_array_equal(as_weight_array([1.0, 0.5]), [1.0, 0.5])


class TestDerivedStats:
    """Test cases for derived_stats and the critical-window parameter"""

    def test_scaling_constants(self):
        """alpha, rho and eta satisfy their defining identities"""
        consts = ScalingConstants.from_tau(3.5)
        assert consts.alpha == pytest.approx(1 / 2.5)
        assert consts.rho == pytest.approx(1.5 / 2.5)
        assert consts.eta == pytest.approx(0.5 / 2.5)

    def test_constant_weights(self):
        """All weights equal c: nu_n = c and p at lambda 0 is 1/c"""
        seq = WeightSequence(np.full(10, 2.0), 3.5)
        derived, view, _ = derived_stats(seq)
        assert derived.L_n == pytest.approx(20.0)
        assert derived.ell_n == pytest.approx(18.0)
        assert derived.sigma2 == pytest.approx(9 * 4.0 / 10)
        assert derived.nu_n == pytest.approx(2.0)
        assert view.p_lambda == pytest.approx(0.5)

    def test_three_vertices(self):
        """w=(2,1,1): ell=2, sigma2=2/3, nu=1"""
        seq = WeightSequence(np.array([2.0, 1.0, 1.0]), 3.5)
        derived, view, _ = derived_stats(seq)
        assert derived.ell_n == pytest.approx(2.0)
        assert derived.sigma2 == pytest.approx(2.0 / 3.0)
        assert derived.nu_n == pytest.approx(1.0)
        assert view.p_lambda == pytest.approx(1.0)

    def test_rescaled_second_moment(self, power_seq):
        """sum over i >= 2 of x_i^2 equals n^-eta"""
        _, view, consts = derived_stats(power_seq, 3.0)
        total = float(np.sum(view.x[1:] ** 2))
        assert total == pytest.approx(power_seq.n ** (-consts.eta), rel=1e-9)

    def test_theta_identity(self, power_seq):
        """(lambda + n^eta) x_j equals theta_j and (1 + lambda n^-eta) w_j / (n^alpha sigma2^(1/2))"""
        lam = 4.0
        derived, view, consts = derived_stats(power_seq, lam)
        n = power_seq.n
        np.testing.assert_allclose(view.theta_lambda, (lam + n ** consts.eta) * view.x, rtol=1e-12)
        direct = (1 + lam * n ** (-consts.eta)) * power_seq.w / (n ** consts.alpha * math.sqrt(derived.sigma2))
        np.testing.assert_allclose(view.theta_lambda, direct, rtol=1e-12)

    def test_p_lambda_increasing(self, power_seq):
        """lambda -> p_lambda is strictly increasing"""
        values = [p_lambda(power_seq, lam) for lam in (0.0, 0.5, 1.0, 5.0, 20.0)]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_p_lambda_at_zero(self, power_seq):
        """p at lambda 0 is 1/nu_n"""
        derived, view, _ = derived_stats(power_seq, 0.0)
        assert view.p_lambda == pytest.approx(1.0 / derived.nu_n)

    def test_clamped_probability_reported(self):
        """p above one is clamped and flagged, the raw value kept"""
        seq = WeightSequence(np.full(10, 0.5), 3.5)
        _, view, _ = derived_stats(seq, 0.0)
        assert view.clamped
        assert view.p_lambda == 1.0
        assert view.p_raw == pytest.approx(2.0)

    def test_lambda_for_p_inverts(self, power_seq):
        """lambda_for_p undoes p_lambda"""
        assert lambda_for_p(power_seq, p_lambda(power_seq, 7.5)) == pytest.approx(7.5, rel=1e-10)

    def test_negative_lambda_rejected(self, small_seq):
        """lambda must be nonnegative"""
        with pytest.raises(WeightSequenceError):
            derived_stats(small_seq, -1.0)


class TestAssumptions:
    """Test cases for check_assumptions"""

    def test_power_law_supercritical(self):
        """c=3, tau=3.5, n=10^4 is supercritical"""
        report = check_assumptions(build_power_law(10000, 3.0, 3.5), 3.0, 3.0)
        assert report.supercritical
        assert report.nu_n > 1.0

    def test_power_law_bounds_with_equality(self):
        """c = A1 = A2 satisfies the power-law bounds on i <= n/2"""
        report = check_assumptions(build_power_law(1000, 2.0, 3.5), 2.0, 2.0)
        assert report.power_law_bounds
        assert report.bound_violations == ()

    def test_constant_weights_violate_bounds_at_vertex_one(self):
        """Constant weights cannot follow (n/i)^alpha at i = 1"""
        report = check_assumptions(WeightSequence(np.full(10000, 3.0), 3.5), 1.0, 2.0)
        assert not report.power_law_bounds
        assert report.bound_violations[0] == 1
        assert not report.passed

    def test_proxies_and_interval(self, power_seq):
        """Ten theta proxies are reported with an ordered interval"""
        report = check_assumptions(power_seq, 1.0, 3.0)
        assert len(report.theta_proxies) == 10
        assert report.interval[0] > 0

    def test_invalid_constants_rejected(self, small_seq):
        """A1 must be positive and at most A2"""
        with pytest.raises(WeightSequenceError):
            check_assumptions(small_seq, 2.0, 1.0)


class TestWeightFiles:
    """Test cases for the one-column weight file"""

    def test_file_round_trip(self, weights_file, small_seq):
        """Weights survive writing with 17 significant digits"""
        loaded = WeightSequence.from_file(weights_file, 3.5)
        np.testing.assert_array_equal(loaded.w, small_seq.w)

    def test_missing_file(self, temp_dir):
        """A missing file is a weight file error"""
        with pytest.raises(WeightFileError, match="not found"):
            WeightSequence.from_file(temp_dir / "absent.txt", 3.5)

    def test_corrupted_file(self, temp_dir):
        """A non-numeric line names the line number"""
        path = temp_dir / "bad.txt"
        path.write_text("3.0\nabc\n1.0\n")
        with pytest.raises(WeightFileError, match=":2:"):
            WeightSequence.from_file(path, 3.5)

    def test_increasing_file_rejected(self, temp_dir):
        """Weights out of order are rejected as a file error"""
        path = temp_dir / "increasing.txt"
        path.write_text("1.0\n2.0\n")
        with pytest.raises(WeightFileError):
            WeightSequence.from_file(path, 3.5)
