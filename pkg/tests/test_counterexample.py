"""
Tests for the counterexample construction.

Tests cover:
- The block-weight schedule and its identities
- Coefficients of f and the closed form of b_j
- Tower innovation normalization
- Schedule validation and the Maxwell-Woodroofe certificate
"""

import math

import numpy as np
import pytest
from scipy import special

from linquench.counterexample import (
    CounterexampleSpec,
    InnovationSpec,
    build_counterexample,
    closed_form_b,
    coefficients_of_f,
    component_coefficients,
    counterexample_profile,
    default_scheduled,
    gamma_identity_residuals,
    gamma_schedule,
    innovation_spec,
    mw_component_bounds,
    mw_tail_bound,
    raw_gamma,
    tower_normalizer,
    validate_schedule,
)
from linquench.errors import InvalidSpecError, PreconditionError
from linquench.process import partial_sums


# =============================================================================
# SCHEDULE
# =============================================================================

class TestGammaSchedule:
    """Tests for gamma_k = 2 / ((k+1)(k+2))."""

    def test_first_values(self):
        np.testing.assert_allclose(raw_gamma(3), [1 / 3, 1 / 6, 1 / 10], rtol=1e-15)

    def test_identities_hold(self):
        telescoping, identity = gamma_identity_residuals(200)
        assert telescoping < 1e-14
        assert identity < 1e-14

    def test_identities_hold_at_ten_thousand_blocks(self):
        telescoping, identity = gamma_identity_residuals(10_000)
        assert telescoping < 1e-12
        assert identity < 1e-12

    def test_product_formula_matches_closed_form(self):
        k = np.arange(1, 10_001, dtype=np.float64)
        assert np.max(np.abs(raw_gamma(10_000) - 2.0 / ((k + 1.0) * (k + 2.0)))) < 1e-14

    def test_renormalized_sums_to_one(self):
        assert math.fsum(gamma_schedule(5)) == pytest.approx(1.0, abs=1e-15)

    def test_raw_schedule_sums_below_one(self):
        assert math.fsum(gamma_schedule(5, renormalize=False)) == pytest.approx(1 - 2 / 7, abs=1e-15)

    def test_k_must_be_positive(self):
        with pytest.raises(PreconditionError):
            raw_gamma(0)


# =============================================================================
# COEFFICIENTS
# =============================================================================

class TestCoefficients:
    """Tests for a_i and b_j of the counterexample."""

    def test_support_and_nonzero_entries(self, failure_spec):
        a = coefficients_of_f(failure_spec)
        assert len(a.values) == 17
        assert a.values[0] == 1.0
        assert all(v != 0.0 for v in a.values)
        assert all(v < 0.0 for v in a.values[1:])

    def test_coefficients_sum_to_zero_when_renormalized(self, failure_spec):
        assert math.fsum(coefficients_of_f(failure_spec).values) == pytest.approx(0.0, abs=1e-15)

    def test_closed_form_b(self, demo_spec):
        b = partial_sums(coefficients_of_f(demo_spec), 400)
        for j in range(0, 401):
            assert b[j] == pytest.approx(closed_form_b(demo_spec, j), abs=1e-12)

    def test_component_coefficients(self):
        a = component_coefficients(4)
        assert a.values == (1.0, -0.25, -0.25, -0.25, -0.25)

    def test_default_kappa_and_schedule(self):
        spec = build_counterexample(K=3, V=[2, 4, 8], N=[1, 4, 16])
        assert spec.kappa == (2.0, 4.0, 8.0)
        assert spec.scheduled == (1,)
        assert default_scheduled(5) == (1, 3)

    def test_block(self, failure_spec):
        assert failure_spec.block(1) == (128, 512)
        with pytest.raises(InvalidSpecError):
            failure_spec.block(2)

    def test_to_dict(self, failure_spec):
        data = failure_spec.to_dict()
        assert data["V"] == [4, 16]
        assert data["scheduled"] == [1]


class TestSpecValidation:
    """Structural checks when a spec is built."""

    def test_v_must_double(self):
        with pytest.raises(InvalidSpecError):
            build_counterexample(K=2, V=[4, 6], N=[1])

    def test_too_many_towers(self):
        with pytest.raises(InvalidSpecError):
            build_counterexample(K=1, V=[4], N=[1, 4])

    def test_kappa_length(self):
        with pytest.raises(InvalidSpecError):
            build_counterexample(K=2, V=[4, 8], N=[1, 4], kappa=[1.0])

    def test_scheduled_range(self):
        with pytest.raises(InvalidSpecError):
            build_counterexample(K=2, V=[4, 8], N=[1, 4], scheduled=[3])

    def test_renormalized_gamma_checked(self):
        with pytest.raises(InvalidSpecError):
            CounterexampleSpec(K=2, gamma=(0.5, 0.4), V=(4, 8), N=(1,), d=2.0, kappa=(2.0,))


# =============================================================================
# INNOVATION
# =============================================================================

class TestInnovation:
    """Tests for the tower innovation."""

    def test_unit_norm(self, failure_spec, demo_spec):
        assert innovation_spec(failure_spec).norm_sq == pytest.approx(1.0, rel=1e-14)
        assert innovation_spec(demo_spec).norm_sq == pytest.approx(1.0, rel=1e-14)

    def test_heights_and_weights(self, failure_spec):
        inn = innovation_spec(failure_spec)
        assert inn.tower_heights == (512, 2048)
        assert inn.weight(1) == pytest.approx(tower_normalizer(2) * math.sqrt(128))
        assert inn.weight(2) == pytest.approx(tower_normalizer(2) * math.sqrt(512) / 2 ** 1.5)

    def test_iid_sign(self):
        inn = InnovationSpec.iid_sign()
        assert inn.is_iid
        assert inn.norm_sq == 1.0

    def test_mismatched_lengths(self):
        with pytest.raises(InvalidSpecError):
            InnovationSpec(K=2, weights=(1.0,), tower_heights=(1, 2), d=1.0)


# =============================================================================
# VALIDATION AND CERTIFICATE
# =============================================================================

class TestValidateSchedule:
    """Tests for validate_schedule."""

    def test_failure_spec_validates(self, failure_spec):
        report = validate_schedule(failure_spec, counterexample_profile(failure_spec, 2048))
        assert report.passed, report.to_text()
        assert report.check("gap", 1).margin > 0
        assert report.check("tower_mass").passed

    def test_large_kappa_breaks_gap(self):
        spec = build_counterexample(K=2, V=[4, 16], N=[128, 512], kappa=[100.0, 100.0])
        report = validate_schedule(spec, counterexample_profile(spec, 2048))
        assert not report.passed
        assert not report.check("gap", 1).passed

    def test_non_quadrupling_scales_fail(self):
        spec = build_counterexample(K=2, V=[4, 16], N=[128, 256], kappa=[4.0, 4.0])
        report = validate_schedule(spec, counterexample_profile(spec, 2048))
        assert not report.check("growth", 1).passed

    def test_short_profile_fails_without_raising(self, failure_spec):
        report = validate_schedule(failure_spec, counterexample_profile(failure_spec, 64))
        gap = report.check("gap", 1)
        assert not gap.passed
        assert math.isnan(gap.margin)

    def test_divergence_diagnostics(self, demo_spec):
        report = validate_schedule(demo_spec, counterexample_profile(demo_spec, 256))
        assert [k for k, _ in report.divergence] == [1, 2, 3]
        rows = report.to_rows()
        assert sum(1 for r in rows if r["constraint"] == "divergence_diagnostic") == 3

    def test_prefix_sums_match_closed_form(self, demo_spec, trends_spec):
        for spec in (demo_spec, trends_spec):
            report = validate_schedule(spec, counterexample_profile(spec, 512))
            check = report.check("closed_form_b")
            assert check.passed
            assert check.margin > 0


class TestMaxwellWoodroofeCertificate:
    """Tests for the per-component bounds."""

    def test_e_term(self, demo_spec):
        assert mw_component_bounds(demo_spec).e_term == pytest.approx(float(special.zeta(1.5, 1)))

    def test_total_adds_components(self, demo_spec):
        cert = mw_component_bounds(demo_spec)
        assert len(cert.components) == 3
        assert cert.total == pytest.approx(cert.e_term + sum(c.total for c in cert.components))
        for c in cert.components:
            assert c.constant == pytest.approx(c.total / c.gamma)

    def test_tail_bound_shrinks(self, demo_spec):
        assert mw_tail_bound(demo_spec, 4096) < mw_tail_bound(demo_spec, 256) < mw_tail_bound(demo_spec, 16)

    def test_tail_at_zero_is_whole_certificate(self, demo_spec):
        assert mw_tail_bound(demo_spec, 0) == pytest.approx(mw_component_bounds(demo_spec).total, rel=1e-12)
