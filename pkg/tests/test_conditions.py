"""
Tests for the sufficient-condition checkers
"""

import math

import numpy as np
import pytest
from scipy import special

from linquench.conditions import (
    BoundKind,
    ExtendedReal,
    check_bounded_growth,
    check_condition2,
    condition_report,
    hannan_sum,
    heyde_heuristic,
    maxwell_woodroofe_sum,
)
from linquench.counterexample import coefficients_of_f, counterexample_profile, mw_component_bounds
from linquench.errors import DegenerateProcessError, PreconditionError
from linquench.process import CoefficientSeq, max_abs_partial_sum, variance_profile


class TestCondition2:
    """Tests for the cond2 weight bound."""

    def test_iid_constant_is_two(self, iid_profile):
        """max_k n b_k^2 / sigma_bar_n^2 = n / (n - 1), largest at n = 2."""
        c, witness = check_condition2(iid_profile)
        assert c == 2.0
        assert witness == (2, 1)

    def test_iid_is_bounded(self, iid_profile):
        result = check_condition2(iid_profile)
        assert result.bounded
        assert result.slope < 0.1
        assert result.n_max == 1000

    def test_geometric_is_bounded(self, geometric_coefficients):
        result = check_condition2(variance_profile(geometric_coefficients, 4096))
        assert result.bounded
        assert math.isfinite(result.c)

    def test_coboundary_grows_linearly(self, coboundary_coefficients):
        """sigma_bar_n stays at 1, so the weights grow like n."""
        result = check_condition2(variance_profile(coboundary_coefficients, 4096))
        assert result.c == 4096.0
        assert result.witness == (4096, 1)
        assert result.slope == pytest.approx(1.0, abs=1e-6)
        assert not result.bounded

    def test_ties_go_to_smallest_k(self):
        """b_1 = b_2 = 1 tie; the witness names k = 1."""
        profile = variance_profile(CoefficientSeq.of([1.0, 0.0, -1.0]), 64)
        _, (n, k) = check_condition2(profile)
        assert k == 1

    def test_restricted_range(self, iid_profile):
        assert check_condition2(iid_profile, n_max=10).n_max == 10

    def test_scale_invariant(self, demo_spec):
        a = coefficients_of_f(demo_spec)
        scaled = CoefficientSeq.of([3.0 * v for v in a.values])
        c, witness = check_condition2(variance_profile(a, 1024, past_window=demo_spec.V_K))
        c3, witness3 = check_condition2(variance_profile(scaled, 1024, past_window=demo_spec.V_K))
        assert c3 == pytest.approx(c, rel=1e-12)
        assert witness3 == witness

    def test_all_zero_is_degenerate(self):
        with pytest.raises(DegenerateProcessError):
            check_condition2(variance_profile(CoefficientSeq.of([0.0]), 10))

    def test_n_max_too_small(self, iid_profile):
        with pytest.raises(PreconditionError):
            check_condition2(iid_profile, n_max=1)

    def test_n_max_beyond_profile(self, iid_profile):
        with pytest.raises(PreconditionError):
            check_condition2(iid_profile, n_max=2000)


class TestHannanAndMaxwellWoodroofe:
    """Tests for the Hannan sum and the Maxwell-Woodroofe partial sums."""

    def test_hannan_exact(self):
        assert hannan_sum(CoefficientSeq.of([1.0, -0.5])) == ExtendedReal.finite(1.5)

    def test_hannan_with_tail_is_lower_bound(self):
        result = hannan_sum(CoefficientSeq.of([1.0, -0.5], tail_l2=0.1))
        assert result.kind == BoundKind.LOWER_BOUND
        assert str(result) == ">=1.5"

    def test_iid_mw_partial(self, iid_profile):
        """||E(S_n|F_0)||_2 = 1, so the partial sum is sum_{n<=1000} n^{-3/2}."""
        partial, tail = maxwell_woodroofe_sum(iid_profile, 1000)
        expected = float(special.zeta(1.5, 1)) - float(special.zeta(1.5, 1001))
        assert partial == pytest.approx(expected, rel=1e-12)
        assert tail.kind == BoundKind.UNKNOWN

    def test_counterexample_tail_is_certified(self, failure_spec):
        profile = counterexample_profile(failure_spec, 2048)
        partial, tail = maxwell_woodroofe_sum(profile, 2048, failure_spec)
        assert tail.is_finite
        assert tail.value > 0
        assert partial + tail.value <= mw_component_bounds(failure_spec).total

    def test_partial_below_certificate(self, demo_spec):
        profile = counterexample_profile(demo_spec, 1024)
        partial, _ = maxwell_woodroofe_sum(profile, 1024, demo_spec)
        assert partial <= mw_component_bounds(demo_spec).total

    def test_counterexample_hannan_is_two(self, demo_spec, trends_spec):
        """|a_0| = 1 and the negative tail sums to sum_k gamma_k = 1."""
        result = hannan_sum(coefficients_of_f(demo_spec))
        assert result.is_finite
        assert result.value == pytest.approx(2.0, abs=1e-12)
        assert hannan_sum(coefficients_of_f(trends_spec)).value == pytest.approx(2.0 - 2 / 5, abs=1e-12)

    @pytest.mark.parametrize("name", ["geometric", "coboundary", "demo"])
    def test_partial_sums_below_hannan(self, request, name):
        if name == "demo":
            spec = request.getfixturevalue("demo_spec")
            a, profile = coefficients_of_f(spec), counterexample_profile(spec, 1024)
        else:
            a = request.getfixturevalue(f"{name}_coefficients")
            profile = variance_profile(a, 1024)
        assert max_abs_partial_sum(profile) <= hannan_sum(a).value + 1e-12

    @pytest.mark.slow
    def test_partial_below_certificate_to_1e5(self, demo_spec):
        profile = counterexample_profile(demo_spec, 10**5)
        partial, _ = maxwell_woodroofe_sum(profile, 10**5, demo_spec)
        assert partial <= mw_component_bounds(demo_spec).total

    def test_range_checked(self, iid_profile):
        with pytest.raises(PreconditionError):
            maxwell_woodroofe_sum(iid_profile, 5000)


class TestHeuristics:
    """Tests for the bounded-growth check and the Heyde heuristic."""

    def test_geometric_growth_holds(self, geometric_coefficients):
        check = check_bounded_growth(variance_profile(geometric_coefficients, 1024))
        assert check.holds
        assert check.b_sup == 1.875
        assert check.min_growth_ratio > 3.0

    def test_coboundary_growth_fails(self, coboundary_coefficients):
        assert not check_bounded_growth(variance_profile(coboundary_coefficients, 1024)).holds

    def test_heyde_limits(self, geometric_coefficients):
        heyde = heyde_heuristic(variance_profile(geometric_coefficients, 1024))
        assert heyde.b_limit == 1.875
        assert heyde.b_increment == 0.0
        assert heyde.variance_gap < 0.05


class TestConditionReport:
    """Tests for the combined report."""

    def test_iid_row(self, iid_profile):
        row = condition_report(iid_profile).to_row()
        assert row["cond2_c"] == 2.0
        assert row["cond2_n_max"] == 1000
        assert row["cond2_witness_n"] == 2
        assert row["hannan_sum"] == "1.0"
        assert row["mw_tail_bound"] == "unknown"
        assert row["max_abs_b"] == 1.0
        assert row["growth_holds"] is True

    def test_properties(self, iid_profile):
        report = condition_report(iid_profile, n_max=100)
        assert report.cond2_c == 2.0
        assert report.cond2_n_max == 100

    def test_text_mentions_every_checker(self, iid_profile):
        text = condition_report(iid_profile).to_text()
        for label in ("Hannan", "Maxwell-Woodroofe", "cond2", "Heyde"):
            assert label in text

    def test_counterexample_report(self, demo_spec):
        profile = counterexample_profile(demo_spec, 1024)
        row = condition_report(profile, spec=demo_spec).to_row()
        assert row["mw_tail_bound"] not in ("unknown", "inf")
        assert np.isfinite(row["mw_partial"])
