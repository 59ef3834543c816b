"""
Statistical experiments for quenched and annealed limit behavior.

Every runner returns an ExperimentReport that depends only on its
arguments and seed. Runners that rest on a validated schedule refuse to
run (ScheduleRefusedError) when validation fails.
"""

import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np

from ..conditions import check_condition2
from ..counterexample import (
    CounterexampleSpec,
    InnovationSpec,
    coefficients_of_f,
    component_coefficients,
    counterexample_profile,
    innovation_spec,
    raw_gamma,
    validate_schedule,
)
from ..errors import DegenerateProcessError, PreconditionError, ScheduleRefusedError
from ..process import CoefficientSeq, VarianceProfile, sigma_nondecreasing, variance_profile
from ..sampler import (
    PathSample,
    ReplicatePool,
    SignStream,
    Stream,
    annealed_block_maxima,
    annealed_terminal_sums,
    conditional_law,
    derive_seed,
    force_bad_omega,
    innovation_window,
    path_sum,
    rng_for,
    sample_omega,
)
from .models import ExperimentReport, StatCheck
from .stats import exceedance, ks_statistic, lower_margin, sample_skewness, second_moment

logger = logging.getLogger(__name__)

CENTERED_ATOM_MASS = 0.5
UNCENTERED_ATOM_MASS = 0.25
CENTERED_MAX_FREQUENCY = 1.0 / 32.0
UNCENTERED_MAX_FREQUENCY = 1.0 / 64.0


def _window(a: CoefficientSeq, past_window: Optional[int]) -> int:
    return a.support_length if past_window is None else int(past_window)


# =============================================================================
# ANNEALED / QUENCHED CLT
# =============================================================================

def annealed_clt(
    a: CoefficientSeq,
    N: int,
    M: int,
    seed: int,
    innovation: Optional[InnovationSpec] = None,
    past_window: Optional[int] = None,
    ks_threshold: float = 0.05,
    pool: Optional[ReplicatePool] = None,
) -> ExperimentReport:
    """KS distance of S_N / sigma_N to N(0, 1), omega redrawn per replicate."""
    innovation = innovation or InnovationSpec.iid_sign()
    if M < 1000:
        raise PreconditionError(f"annealed_clt needs M >= 1000, got {M}")
    W = _window(a, past_window)
    profile = variance_profile(a, N, past_window=W)
    sigma_n = profile.sigma(N)
    if sigma_n <= 0:
        raise DegenerateProcessError(f"sigma_N vanishes at N={N}")

    draws = annealed_terminal_sums(a, innovation, N, M, seed, W, pool) / sigma_n
    ks = ks_statistic(draws)
    logger.info(f"[annealed] N={N} M={M} ks={ks:.4f}")

    report = ExperimentReport(
        name="annealed",
        params={"N": N, "M": M, "past_window": W, "ks_threshold": ks_threshold},
        seed=seed,
    )
    report.statistics.update(
        ks=ks,
        mean=float(np.mean(draws)),
        second_moment=float(np.mean(draws * draws)),
        sigma_n=sigma_n,
    )
    report.checks.append(StatCheck.below("ks", ks, ks_threshold))
    report.samples["annealed"] = draws
    return report


def quenched_clt_theorem1(
    a: CoefficientSeq,
    R: int,
    N: int,
    M: int,
    seed: int,
    innovation: Optional[InnovationSpec] = None,
    past_window: Optional[int] = None,
    ks_threshold: float = 0.05,
    slope_limit: float = 0.1,
    pool: Optional[ReplicatePool] = None,
) -> ExperimentReport:
    """
    Per-omega KS distance of (S_N - E(S_N|F_0)) / sigma_bar_N to N(0, 1).

    Runs only when the innovation is iid or the cond2 heuristic reports
    bounded weights.
    """
    innovation = innovation or InnovationSpec.iid_sign()
    W = _window(a, past_window)
    profile = variance_profile(a, N, past_window=W)
    if not innovation.is_iid:
        cond2 = check_condition2(profile, slope_limit=slope_limit)
        if not cond2.bounded:
            raise PreconditionError(
                f"cond2 weights look unbounded (c={cond2.c:.4g}, log-slope={cond2.slope:.3f}); "
                "quenched run needs iid innovations or bounded weights"
            )
    sigma_bar = profile.sigma_bar(N)
    if sigma_bar <= 0:
        raise DegenerateProcessError(f"sigma_bar_N vanishes at N={N}")

    rows = []
    first_sample = None
    for r in range(R):
        omega = sample_omega(innovation, derive_seed(seed, Stream.OMEGA, r), W)
        law = conditional_law(a, omega, N, M, derive_seed(seed, Stream.REPLICATE, r), innovation, profile, pool)
        x = law.centered_over_sigma_bar
        ks = ks_statistic(x)
        variance_ratio, _ = second_moment(x)
        skew, _ = sample_skewness(x)
        rows.append({
            "omega": r,
            "ks": ks,
            "variance_ratio": variance_ratio,
            "exact_variance_ratio": law.variance / (sigma_bar * sigma_bar),
            "skewness": skew,
            "cond_exp_over_sigma": law.cond_exp_normalized,
        })
        if first_sample is None:
            first_sample = x
        logger.info(f"[quenched] omega {r + 1}/{R} ks={ks:.4f}")

    ks_values = np.array([row["ks"] for row in rows])
    report = ExperimentReport(
        name="quenched",
        params={"R": R, "N": N, "M": M, "past_window": W, "ks_threshold": ks_threshold,
                "iid_innovation": innovation.is_iid},
        seed=seed,
    )
    report.statistics.update(
        ks_median=float(np.median(ks_values)),
        ks_max=float(np.max(ks_values)),
        ks_min=float(np.min(ks_values)),
        variance_ratio_mean=float(np.mean([row["variance_ratio"] for row in rows])),
        sigma_bar_n=sigma_bar,
        sigma_n=profile.sigma(N),
    )
    report.checks.append(StatCheck.below("ks_median", report.statistics["ks_median"], ks_threshold))
    report.tables["per_omega"] = rows
    if first_sample is not None:
        report.samples["quenched_omega0"] = first_sample
    return report


# =============================================================================
# COUNTEREXAMPLE FAILURE EXPERIMENTS
# =============================================================================

def _validated(spec: CounterexampleSpec, k: int, n_needed: int) -> VarianceProfile:
    """Profile for spec, refusing to continue unless the schedule validates for k."""
    if k not in spec.scheduled:
        raise ScheduleRefusedError(f"tower index {k} is not scheduled (scheduled: {list(spec.scheduled)})")
    profile = counterexample_profile(spec, max(n_needed, 4 * max(spec.N)))
    validation = validate_schedule(spec, profile)
    if not validation.passed:
        failed = ", ".join(f"{c.name}(k={c.k}, margin={c.margin:.4g})" for c in validation.failures)
        raise ScheduleRefusedError(f"schedule validation failed: {failed}")
    return profile


def quenched_failure_tail(
    spec: CounterexampleSpec,
    k: int,
    M: int,
    seed: int,
    N: Optional[int] = None,
    threshold: Optional[float] = None,
    pool: Optional[ReplicatePool] = None,
) -> ExperimentReport:
    """
    Conditional exceedance masses at omega = force_bad_omega(k, N).

    Reports m_omega(|S_N - E(S_N|F_0)| / sigma_N >= K) and m_omega(|S_N| / sigma_N >= K)
    at the configured K (default kappa_k / 2) and at the atom-matched
    K = w_k / sigma_N.
    """
    N = spec.N[k - 1] if N is None else int(N)
    profile = _validated(spec, k, N)
    a = coefficients_of_f(spec)
    innovation = innovation_spec(spec)
    W = spec.V_K
    threshold = spec.kappa[k - 1] / 2.0 if threshold is None else float(threshold)

    omega = force_bad_omega(innovation, k, N, derive_seed(seed, Stream.OMEGA, 0), W, spec.N)
    law = conditional_law(a, omega, N, M, derive_seed(seed, Stream.REPLICATE, 0), innovation, profile, pool)
    atom = innovation.weight(k) / law.sigma_n

    centered = law.centered_normalized
    uncentered = law.uncentered_normalized
    c_thr, c_thr_se = exceedance(centered, threshold)
    u_thr, u_thr_se = exceedance(uncentered, threshold)
    c_atom, c_atom_se = exceedance(centered, atom)
    u_atom, u_atom_se = exceedance(uncentered, atom)
    margin = 3.0 / (2.0 * math.sqrt(M))
    logger.info(f"[failure] k={k} N={N} centered@atom={c_atom:.4f} uncentered@atom={u_atom:.4f}")

    report = ExperimentReport(
        name="failure",
        params={"k": k, "N": N, "M": M, "threshold": threshold, "kappa_k": spec.kappa[k - 1]},
        seed=seed,
    )
    report.statistics.update(
        atom_threshold=atom,
        centered_mass=c_thr,
        centered_mass_se=c_thr_se,
        uncentered_mass=u_thr,
        uncentered_mass_se=u_thr_se,
        centered_atom_mass=c_atom,
        centered_atom_mass_se=c_atom_se,
        uncentered_atom_mass=u_atom,
        uncentered_atom_mass_se=u_atom_se,
        cond_exp_over_sigma=law.cond_exp_normalized,
        sigma_n=law.sigma_n,
        omega_draws=float(omega.draws),
    )
    report.checks.append(StatCheck.at_least("centered_atom_mass", c_atom, CENTERED_ATOM_MASS - margin))
    report.checks.append(StatCheck.at_least("uncentered_atom_mass", u_atom, UNCENTERED_ATOM_MASS - margin))
    report.samples["failure_centered"] = centered
    report.samples["failure_uncentered"] = uncentered
    return report


def wip_failure_max(
    spec: CounterexampleSpec,
    k: int,
    M: int,
    seed: int,
    threshold: Optional[float] = None,
    pool: Optional[ReplicatePool] = None,
) -> ExperimentReport:
    """
    Unconditional frequency of max_{N_k <= n < N_{k+1}} |S_n - E(S_n|F_0)| / sigma_{N_{k+1}} >= K,
    and of the same maximum for |S_n|.
    """
    lo, hi = spec.block(k)
    profile = _validated(spec, k, hi)
    a = coefficients_of_f(spec)
    innovation = innovation_spec(spec)
    threshold = spec.kappa[k - 1] / 2.0 if threshold is None else float(threshold)

    maxima = annealed_block_maxima(a, innovation, lo, hi, M, seed, spec.V_K, pool)
    sigma_hi = profile.sigma(hi)
    c_freq, c_se = exceedance(maxima[:, 0] / sigma_hi, threshold)
    u_freq, u_se = exceedance(maxima[:, 1] / sigma_hi, threshold)
    logger.info(f"[wip] k={k} block=[{lo}, {hi}) centered={c_freq:.4f} uncentered={u_freq:.4f}")

    report = ExperimentReport(
        name="wip",
        params={"k": k, "block_start": lo, "block_end": hi, "M": M, "threshold": threshold},
        seed=seed,
    )
    report.statistics.update(
        centered_max_frequency=c_freq,
        centered_max_frequency_se=c_se,
        uncentered_max_frequency=u_freq,
        uncentered_max_frequency_se=u_se,
        sigma_block_end=sigma_hi,
    )
    report.checks.append(
        StatCheck.at_least("centered_max_frequency", c_freq, lower_margin(CENTERED_MAX_FREQUENCY, c_se))
    )
    report.checks.append(
        StatCheck.at_least("uncentered_max_frequency", u_freq, lower_margin(UNCENTERED_MAX_FREQUENCY, u_se))
    )
    report.samples["wip_centered_max"] = maxima[:, 0] / sigma_hi
    return report


# =============================================================================
# ERGODIC AVERAGES AND VARIANCE TRENDS
# =============================================================================

def weighted_orbit_average(profile: VarianceProfile, values: np.ndarray, n: int) -> float:
    """sigma_bar_n^{-2} sum_{j=1}^{n-1} b_j^2 values[n-j], with values indexed by time."""
    denom = profile.sigma_bar_sq[n]
    if denom <= 0:
        raise DegenerateProcessError(f"sigma_bar_n vanishes at n={n}")
    weights = np.asarray(profile.b[1:n]) ** 2
    return float(np.dot(weights, values[n - 1:0:-1]) / denom)


def tn_convergence(
    a: CoefficientSeq,
    grid: Sequence[int],
    orbit_length: int,
    seed: int,
    innovation: Optional[InnovationSpec] = None,
    orbits: int = 10,
    past_window: Optional[int] = None,
    spread_limit: float = 0.05,
    slope_limit: float = 0.1,
) -> ExperimentReport:
    """
    Weighted ergodic averages T_n e^2 along independent orbits.

    Also checks, pointwise on the grid, the coboundary bound
    |T_n (g - g o T)| <= 2 A ||g|| sqrt(1 + c/n) / sigma_bar_n + c ||g|| / n
    with A^2 = sum_{i>=0} a_i^2 and c the cond2 constant over the grid, and
    that T_n maps the constant 1 to 1.
    """
    innovation = innovation or InnovationSpec.iid_sign()
    points = sorted(set(int(n) for n in grid))
    if not points or points[0] < 2:
        raise PreconditionError(f"grid must contain n >= 2 only, got {list(grid)}")
    if points[-1] > orbit_length:
        raise PreconditionError(f"grid reaches n={points[-1]} beyond orbit length {orbit_length}")
    W = _window(a, past_window)
    profile = variance_profile(a, points[-1], past_window=W)
    cond2 = check_condition2(profile, slope_limit=slope_limit)
    if not cond2.bounded:
        raise PreconditionError(f"cond2 weights look unbounded (log-slope={cond2.slope:.3f})")
    c = cond2.c
    A = math.sqrt(a.l2_norm_sq)

    averages = np.zeros((orbits, len(points)))
    coboundary_ratio = np.zeros((orbits, len(points)))
    for o in range(orbits):
        omega = sample_omega(innovation, derive_seed(seed, Stream.ORBIT, o), W)
        e, _ = innovation_window(omega, innovation, orbit_length + 1, SignStream(derive_seed(seed, Stream.FUTURE, o)))
        e_sq = e[W:] ** 2
        g = rng_for(seed, Stream.ORBIT, o, 1).uniform(-1.0, 1.0, size=orbit_length + 2)
        coboundary = g[:-1] - g[1:]
        for i, n in enumerate(points):
            averages[o, i] = weighted_orbit_average(profile, e_sq, n)
            g_sup = float(np.max(np.abs(g[1: n + 1])))
            bound = 2.0 * A * g_sup * math.sqrt(1.0 + c / n) / profile.sigma_bar(n) + c * g_sup / n
            coboundary_ratio[o, i] = abs(weighted_orbit_average(profile, coboundary, n)) / bound
        logger.info(f"[tn] orbit {o + 1}/{orbits} T_n={averages[o, -1]:.4f} at n={points[-1]}")

    ones = np.ones(points[-1] + 1)
    constant_deviation = max(abs(weighted_orbit_average(profile, ones, n) - 1.0) for n in points)
    spreads = averages.max(axis=0) - averages.min(axis=0)

    report = ExperimentReport(
        name="tn",
        params={"grid": points, "orbit_length": orbit_length, "orbits": orbits, "past_window": W,
                "spread_limit": spread_limit},
        seed=seed,
    )
    report.statistics.update(
        tn_mean=float(averages[:, -1].mean()),
        tn_spread=float(spreads[-1]),
        innovation_norm_sq=innovation.norm_sq,
        cond2_c=c,
        coboundary_max_ratio=float(coboundary_ratio.max()),
        constant_deviation=constant_deviation,
    )
    report.checks.append(StatCheck.below("tn_spread", float(spreads[-1]), spread_limit))
    report.checks.append(StatCheck.holds("coboundary_bound", bool(coboundary_ratio.max() <= 1.0 + 1e-12)))
    report.checks.append(StatCheck.below("constant_deviation", constant_deviation, 1e-10))
    report.tables["trajectory"] = [
        {"n": n, "tn_mean": float(averages[:, i].mean()), "tn_min": float(averages[:, i].min()),
         "tn_max": float(averages[:, i].max()), "spread": float(spreads[i]),
         "coboundary_max_ratio": float(coboundary_ratio[:, i].max())}
        for i, n in enumerate(points)
    ]
    return report


def ratio_trends(spec: CounterexampleSpec, sigma_ratio_band: float = 0.9) -> ExperimentReport:
    """
    sigma_n / sqrt(n), ||E(S_n|F_0)|| / sigma_n and sigma_bar_n / sigma_n on the
    V and N schedule points, with finite-n bands from configuration.

    sigma_bar_n / sigma_n must reach the band at V_K and may not fall from
    one block length to the next.
    """
    points = sorted(set(spec.V) | set(spec.N) | {4 * n for n in spec.N})
    n_max = points[-1]
    profile = counterexample_profile(spec, n_max)
    gamma = raw_gamma(spec.K + 2)

    rows = []
    for n in points:
        sigma = profile.sigma(n)
        rows.append({
            "n": n,
            "sigma_over_sqrt_n": sigma / math.sqrt(n),
            "cond_exp_over_sigma": profile.cond_exp_norm(n) / sigma,
            "sigma_bar_over_sigma": profile.sigma_bar(n) / sigma,
        })

    report = ExperimentReport(
        name="trends",
        params={"K": spec.K, "V": list(spec.V), "N": list(spec.N), "sigma_ratio_band": sigma_ratio_band},
        seed=0,
    )
    v_scaled = []
    v_ratios = []
    for k, v in enumerate(spec.V, start=1):
        sigma = profile.sigma(v)
        v_scaled.append(sigma / math.sqrt(v))
        v_ratios.append(profile.sigma_bar(v) / sigma)
        report.statistics[f"sigma_bar_over_sigma_at_V{k}"] = v_ratios[-1]
        report.statistics[f"sigma_over_sqrt_n_at_V{k}"] = sigma / math.sqrt(v)
        report.statistics[f"variance_scale_ratio_at_V{k}"] = sigma / (math.sqrt(v) * (k + 4) * float(gamma[k + 1]))
        report.statistics[f"projection_scale_ratio_at_V{k}"] = (
            profile.cond_exp_norm(v) / (float(gamma[k - 1] + gamma[k]) * math.sqrt(v))
        )

    components_ok = True
    for k, v in enumerate(spec.V, start=1):
        comp = variance_profile(component_coefficients(v), n_max)
        ns = np.arange(1, n_max + 1, dtype=np.float64)
        worst = float(np.max(comp.sigma_sq[1:] / (2.0 * ns)))
        report.statistics[f"component_norm_ratio_V{k}"] = math.sqrt(worst)
        components_ok = components_ok and worst <= 1.0 + 1e-12

    ratio_at_top = profile.sigma_bar(spec.V_K) / profile.sigma(spec.V_K)
    report.statistics["sigma_bar_over_sigma_at_V_K"] = ratio_at_top
    report.checks.append(StatCheck.at_least("sigma_bar_over_sigma_at_V_K", ratio_at_top, sigma_ratio_band))
    report.checks.append(
        StatCheck.holds("sigma_bar_over_sigma_nondecreasing", bool(np.all(np.diff(v_ratios) >= -1e-12)))
    )
    report.checks.append(
        StatCheck.holds("sigma_over_sqrt_n_decreasing", bool(np.all(np.diff(v_scaled) < 0)))
    )
    report.checks.append(StatCheck.holds("component_norms_within_sqrt_2n", components_ok))
    report.checks.append(StatCheck.holds("sigma_nondecreasing", sigma_nondecreasing(profile)))
    report.tables["trends"] = rows
    return report


def simulate(
    a: CoefficientSeq,
    N: int,
    seed: int,
    innovation: Optional[InnovationSpec] = None,
    past_window: Optional[int] = None,
) -> Tuple[PathSample, ExperimentReport]:
    """One path S_1..S_N and E(S_N|F_0) for a sampled omega."""
    innovation = innovation or InnovationSpec.iid_sign()
    W = _window(a, past_window)
    omega = sample_omega(innovation, derive_seed(seed, Stream.OMEGA, 0), W)
    path = path_sum(a, omega, N, innovation, seed=derive_seed(seed, Stream.FUTURE, 0))
    profile = variance_profile(a, N, past_window=W)

    report = ExperimentReport(name="simulate", params={"N": N, "past_window": W}, seed=seed)
    report.statistics.update(
        s_n=path.terminal,
        cond_exp=path.cond_exp,
        sigma_n=profile.sigma(N),
        innovations_used=float(path.innovations_used),
    )
    report.tables["path"] = [{"n": n, "S_n": float(s)} for n, s in enumerate(path.s, start=1)]
    return path, report
