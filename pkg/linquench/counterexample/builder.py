"""
Builds the counterexample process from its schedule.

    f = e + sum_k h_k,   h_k = -(gamma_k / V_k) sum_{i=1}^{V_k} U^{-i} e

so a_0 = 1 and a_i = -sum_{k: V_k >= i} gamma_k / V_k for 1 <= i <= V_K.
The innovation lives on J towers with atoms w_k = d sqrt(N_k) / k^{3/2}
and heights 4 N_k, with d = 2 (sum_{k<=J} k^{-3})^{-1/2} so that ||e||_2 = 1.
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np
from scipy import special

from ..process import CoefficientSeq, VarianceProfile, compensated_cumsum, variance_profile
from .models import (
    ConstraintCheck,
    CounterexampleSpec,
    InnovationSpec,
    MWCertificate,
    MWComponentBound,
    ValidationReport,
)
from .schedule import gamma_schedule, raw_gamma

logger = logging.getLogger(__name__)

# Largest |b_j - closed form| accepted from the compensated prefix sums.
CLOSED_FORM_TOL = 1e-12


def tower_normalizer(J: int) -> float:
    """d = 2 (sum_{k<=J} k^{-3})^{-1/2}."""
    return 2.0 / math.sqrt(math.fsum(k ** -3.0 for k in range(1, J + 1)))


def default_scheduled(J: int) -> tuple:
    """Odd tower indices that have a following tower."""
    return tuple(k for k in range(1, J + 1) if k % 2 == 1 and k + 1 <= J)


def build_counterexample(
    K: int,
    V: Sequence[int],
    N: Sequence[int],
    kappa: Optional[Sequence[float]] = None,
    renormalize: bool = True,
    scheduled: Optional[Sequence[int]] = None,
) -> CounterexampleSpec:
    """Assemble and structurally validate a CounterexampleSpec."""
    J = len(N)
    spec = CounterexampleSpec(
        K=int(K),
        gamma=gamma_schedule(int(K), renormalize) if K >= 1 else (),
        V=tuple(int(v) for v in V),
        N=tuple(int(n) for n in N),
        d=tower_normalizer(J) if J >= 1 else math.nan,
        kappa=tuple(float(x) for x in kappa) if kappa is not None else tuple(2.0 ** k for k in range(1, J + 1)),
        renormalize=renormalize,
        scheduled=tuple(int(k) for k in scheduled) if scheduled is not None else default_scheduled(J),
    )
    logger.debug(f"[counterexample] built K={spec.K} V={spec.V} N={spec.N} kappa={spec.kappa}")
    return spec


def coefficients_of_f(spec: CounterexampleSpec) -> CoefficientSeq:
    a = np.zeros(spec.V_K + 1, dtype=np.float64)
    a[0] = 1.0
    for g, v in zip(spec.gamma, spec.V):
        a[1: v + 1] -= g / v
    return CoefficientSeq.of(a.tolist())


def closed_form_b(spec: CounterexampleSpec, j: int) -> float:
    """b_j = 1 - sum_k gamma_k min(j-1, V_k) / V_k for j >= 1, b_0 = 0."""
    if j <= 0:
        return 0.0
    return 1.0 - math.fsum(g * min(j - 1, v) / v for g, v in zip(spec.gamma, spec.V))


def counterexample_profile(spec: CounterexampleSpec, n_max: int) -> VarianceProfile:
    return variance_profile(coefficients_of_f(spec), n_max, past_window=spec.V_K)


def component_coefficients(V: int) -> CoefficientSeq:
    """f_k = e - V^{-1} sum_{i=1}^{V} U^{-i} e."""
    return CoefficientSeq.of([1.0] + [-1.0 / V] * V)


def innovation_spec(spec: CounterexampleSpec) -> InnovationSpec:
    weights = tuple(spec.d * math.sqrt(n) / k ** 1.5 for k, n in enumerate(spec.N, start=1))
    return InnovationSpec(K=spec.J, weights=weights, tower_heights=spec.tower_heights, d=spec.d)


def validate_schedule(spec: CounterexampleSpec, profile: VarianceProfile) -> ValidationReport:
    """
    Check the schedule inequalities against the computed sigma_n.

    For each scheduled tower index k:
    - gap:      kappa_k sigma_{N_k} <= sqrt(N_k) / k^{3/2}
    - growth:   N_{k+1} = 4 N_k
    - doubling: sigma_{4 N_k} <= 2 sigma_{N_k}
    plus the global tower mass sum_k 1/(4 N_k) < 1/2, the block-length
    doubling V_{k+1} >= 2 V_k, and agreement of the computed b_j with the
    closed form up to j = V_K + 1.
    """
    report = ValidationReport()

    top = min(spec.V_K + 1, len(profile.b) - 1)
    deviation = max(abs(float(profile.b[j]) - closed_form_b(spec, j)) for j in range(top + 1))
    report.checks.append(
        ConstraintCheck("closed_form_b", None, deviation <= CLOSED_FORM_TOL, CLOSED_FORM_TOL - deviation)
    )

    for k in range(1, spec.K):
        margin = float(spec.V[k] - 2 * spec.V[k - 1])
        report.checks.append(ConstraintCheck("V_growth", k, margin >= 0, margin))

    for k in spec.scheduled:
        n_k = spec.N[k - 1]
        rhs = math.sqrt(n_k) / k ** 1.5
        if profile.covers(n_k):
            lhs = spec.kappa[k - 1] * profile.sigma(n_k)
            report.checks.append(ConstraintCheck("gap", k, lhs <= rhs, rhs - lhs))
        else:
            report.checks.append(
                ConstraintCheck("gap", k, False, math.nan, f"profile ends at n={profile.n_max} < N_k={n_k}")
            )

        if k + 1 <= spec.J:
            n_next = spec.N[k]
            report.checks.append(
                ConstraintCheck("growth", k, n_next == 4 * n_k, float(n_next - 4 * n_k),
                                "" if n_next == 4 * n_k else f"N_{k + 1}={n_next} != 4*N_{k}={4 * n_k}")
            )
        else:
            report.checks.append(ConstraintCheck("growth", k, False, math.nan, "no following tower"))

        if profile.covers(4 * n_k):
            lhs = profile.sigma(4 * n_k)
            rhs = 2.0 * profile.sigma(n_k)
            report.checks.append(ConstraintCheck("doubling", k, lhs <= rhs, rhs - lhs))
        else:
            report.checks.append(
                ConstraintCheck("doubling", k, False, math.nan,
                                f"profile ends at n={profile.n_max} < 4*N_k={4 * n_k}")
            )

    mass = math.fsum(1.0 / (4 * n) for n in spec.N)
    report.checks.append(ConstraintCheck("tower_mass", None, mass < 0.5, 0.5 - mass))

    gamma = raw_gamma(spec.K + 1)
    running = compensated_cumsum(gamma)
    for k in range(1, spec.K + 1):
        report.divergence.append((k, math.sqrt(spec.V[k - 1]) * (1.0 - float(running[k]))))

    if not report.passed:
        names = ", ".join(f"{c.name}(k={c.k})" for c in report.failures)
        logger.info(f"[schedule] validation failed: {names}")
    return report


def _inverse_sqrt_sum(lo: int, hi: int) -> float:
    """sum_{n=lo}^{hi} n^{-1/2}, zero for an empty range."""
    if hi < lo:
        return 0.0
    return math.fsum((1.0 / np.sqrt(np.arange(lo, hi + 1, dtype=np.float64))).tolist())


def mw_component_bounds(spec: CounterexampleSpec) -> MWCertificate:
    """
    Per-component Maxwell-Woodroofe bounds.

    ||E(S_n(h_k)|F_0)||_2 <= ||S_n(h_k)||_2 <= sqrt(2) gamma_k n / sqrt(V_k) for
    n <= V_k, and <= gamma_k sqrt(V_k) for every n, so

        C_k gamma_k = sqrt(2) gamma_k V_k^{-1/2} sum_{n<=V_k} n^{-1/2}
                      + gamma_k sqrt(V_k) zeta(3/2, V_k + 1)
    """
    components = []
    for k, (g, v) in enumerate(zip(spec.gamma, spec.V), start=1):
        head = math.sqrt(2.0) * g / math.sqrt(v) * _inverse_sqrt_sum(1, v)
        tail = g * math.sqrt(v) * float(special.zeta(1.5, v + 1))
        components.append(MWComponentBound(k=k, V=v, gamma=g, head=head, tail=tail))
    return MWCertificate(components=tuple(components), e_term=float(special.zeta(1.5, 1)))


def mw_tail_bound(spec: CounterexampleSpec, n_max: int) -> float:
    """Certified bound on sum_{n > n_max} ||E(S_n(f)|F_0)||_2 / n^{3/2}."""
    total = [float(special.zeta(1.5, n_max + 1))]
    for g, v in zip(spec.gamma, spec.V):
        head = math.sqrt(2.0) * g / math.sqrt(v) * _inverse_sqrt_sum(n_max + 1, v)
        tail = g * math.sqrt(v) * float(special.zeta(1.5, max(n_max, v) + 1))
        total.extend((head, tail))
    return math.fsum(total)
