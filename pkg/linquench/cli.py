"""
Command dispatch for the linquench command line.

run() loads and validates the spec file, resolves the linear process,
runs one command and only then creates the output directory and writes
artifacts. Configuration errors and refusals therefore leave nothing
behind.

Exit codes: 0 pass (or nothing to check), 1 a declared check failed,
2 usage, configuration or refusal error.
"""

import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from .conditions import condition_report
from .config import (
    ExperimentConfig,
    LinquenchConfig,
    ProcessConfig,
    apply_overrides,
    load_config,
    set_config,
    write_resolved_config,
)
from .counterexample import (
    CounterexampleSpec,
    InnovationSpec,
    build_counterexample,
    coefficients_of_f,
    counterexample_profile,
    innovation_spec,
    mw_component_bounds,
    validate_schedule,
)
from .errors import InvalidSpecError, LinquenchError, PreconditionError, ScheduleRefusedError, get_error_classifier
from .experiments import (
    ExperimentReport,
    Verdict,
    annealed_clt,
    quenched_clt_theorem1,
    quenched_failure_tail,
    ratio_trends,
    simulate,
    tn_convergence,
    wip_failure_max,
    write_report,
)
from .artifacts import write_csv, write_text
from .logging_config import setup_logging
from .process import CoefficientSeq, read_coefficients_csv, variance_profile, write_coefficients_csv
from .sampler import ReplicatePool, init_replicate_pool, shutdown_replicate_pool

logger = logging.getLogger(__name__)

Command = Literal["check", "build", "simulate", "annealed", "quenched", "failure", "wip", "tn", "trends"]

DEFAULT_N = 10_000


class RunConfig(BaseModel):
    """One command-line invocation."""
    model_config = ConfigDict(extra="forbid")

    command: Command
    spec_path: Optional[Path] = None
    seed: Optional[int] = Field(default=None, ge=0, lt=2 ** 64)  # overrides experiment.seed
    out_dir: Path = Path("out")
    overrides: List[str] = Field(default_factory=list)
    threads: Optional[int] = Field(default=None, ge=1)
    log_level: Optional[str] = None


@dataclass
class ResolvedProcess:
    coefficients: CoefficientSeq
    innovation: InnovationSpec
    past_window: int
    counterexample: Optional[CounterexampleSpec] = None

    def require_counterexample(self, command: str) -> CounterexampleSpec:
        if self.counterexample is None:
            raise PreconditionError(f"'{command}' needs a spec with process.kind: counterexample")
        return self.counterexample


@dataclass
class CommandResult:
    """Outcome of one command: a verdict plus a deferred artifact writer."""
    summary: str
    verdict: Verdict
    seed: int
    writers: List[Callable[[Path], List[Path]]] = field(default_factory=list)

    @classmethod
    def from_report(cls, report: ExperimentReport, svg: bool = False) -> "CommandResult":
        return cls(report.to_text(), report.verdict, report.seed, [lambda out: write_report(report, out, svg)])

    def write(self, out_dir: Path) -> List[Path]:
        written: List[Path] = []
        for writer in self.writers:
            written.extend(writer(out_dir))
        return written


# =============================================================================
# PROCESS RESOLUTION
# =============================================================================

_COUNTEREXAMPLE_KEYS = ("K", "V", "N", "kappa", "scheduled")


def resolve_process(process: ProcessConfig) -> ResolvedProcess:
    """Turn the process section into coefficients, an innovation model and a past window."""
    if process.kind == "counterexample":
        missing = [key for key in ("K", "V", "N") if getattr(process, key) is None]
        if missing:
            raise InvalidSpecError(f"counterexample spec is missing {', '.join(missing)}")
        if process.coefficients is not None or process.coefficients_csv is not None:
            raise InvalidSpecError("counterexample spec cannot also list coefficients")
        spec = build_counterexample(
            process.K, process.V, process.N,
            kappa=process.kappa,
            renormalize=process.renormalize,
            scheduled=process.scheduled,
        )
        innovation = innovation_spec(spec) if process.innovation == "tower" else InnovationSpec.iid_sign()
        W = spec.V_K if process.past_window is None else process.past_window
        return ResolvedProcess(coefficients_of_f(spec), innovation, W, spec)

    if process.innovation == "tower":
        raise InvalidSpecError("innovation 'tower' needs process.kind: counterexample")
    stray = [key for key in _COUNTEREXAMPLE_KEYS if getattr(process, key) is not None]
    if stray:
        raise InvalidSpecError(f"keys {', '.join(stray)} only apply to process.kind: counterexample")
    if (process.coefficients is None) == (process.coefficients_csv is None):
        raise InvalidSpecError("give exactly one of process.coefficients or process.coefficients_csv")

    if process.coefficients is not None:
        a = CoefficientSeq.of(process.coefficients, tail_l2=process.tail_l2)
    else:
        a = read_coefficients_csv(process.coefficients_csv, tail_l2=process.tail_l2)
    W = a.support_length if process.past_window is None else process.past_window
    return ResolvedProcess(a, InnovationSpec.iid_sign(), W)


def _tower_index(spec: CounterexampleSpec, experiment: ExperimentConfig) -> int:
    if experiment.k is not None:
        return experiment.k
    if not spec.scheduled:
        raise ScheduleRefusedError("no tower index is scheduled")
    return spec.scheduled[0]


# =============================================================================
# COMMANDS
# =============================================================================

def _check(process: ResolvedProcess, experiment: ExperimentConfig, pool: ReplicatePool) -> CommandResult:
    seed = experiment.seed
    spec = process.counterexample
    profile = variance_profile(process.coefficients, experiment.n_max, past_window=process.past_window)
    report = condition_report(profile, experiment.n_max, spec, experiment.growth_floor, experiment.slope_limit)
    row = report.to_row()
    summary = [report.to_text()]
    writers: List[Callable[[Path], List[Path]]] = [
        lambda out: [write_csv(out / "conditions.csv", list(row.keys()), [row], seed)],
    ]

    verdict = Verdict.INFO
    if spec is not None:
        validation = validate_schedule(spec, counterexample_profile(spec, 4 * max(spec.N)))
        certificate = mw_component_bounds(spec)
        cert_rows = [
            {"component": c.k, "V": c.V, "gamma": c.gamma, "head": c.head, "tail": c.tail,
             "total": c.total, "constant": c.constant}
            for c in certificate.components
        ]
        cert_rows.append({"component": "e", "total": certificate.e_term})
        cert_rows.append({"component": "all", "total": certificate.total})
        summary.append(validation.to_text())
        summary.append(f"Maxwell-Woodroofe certificate: {certificate.total!r}")
        writers.append(lambda out: [
            write_csv(out / "validation.csv", ("constraint", "k", "passed", "margin", "detail"),
                      validation.to_rows(), seed),
            write_csv(out / "mw_certificate.csv",
                      ("component", "V", "gamma", "head", "tail", "total", "constant"), cert_rows, seed),
        ])
        verdict = Verdict.PASS if validation.passed else Verdict.FAIL

    text = "\n".join(summary)
    writers.append(lambda out: [write_text(out / "summary.txt", text, seed)])
    return CommandResult(text, verdict, seed, writers)


def _build(process: ResolvedProcess, experiment: ExperimentConfig, pool: ReplicatePool) -> CommandResult:
    seed = experiment.seed
    a = process.coefficients
    nonzero = sum(1 for x in a.values if x != 0.0)
    text = f"Coefficient sequence: {len(a.values)} entries, {nonzero} nonzero, support length {a.support_length}"
    writers: List[Callable[[Path], List[Path]]] = [
        lambda out: [write_coefficients_csv(a, out / "coefficients.csv", seed)],
    ]
    spec = process.counterexample
    if spec is not None:
        validation = validate_schedule(spec, counterexample_profile(spec, 4 * max(spec.N)))
        text = text + "\n" + validation.to_text()
        writers.append(lambda out: [
            write_csv(out / "validation.csv", ("constraint", "k", "passed", "margin", "detail"),
                      validation.to_rows(), seed),
        ])
    return CommandResult(text, Verdict.INFO, seed, writers)


def _simulate(process: ResolvedProcess, experiment: ExperimentConfig, pool: ReplicatePool) -> CommandResult:
    _, report = simulate(
        process.coefficients, experiment.n or DEFAULT_N, experiment.seed, process.innovation, process.past_window
    )
    return CommandResult.from_report(report)


def _annealed(process: ResolvedProcess, experiment: ExperimentConfig, pool: ReplicatePool) -> CommandResult:
    report = annealed_clt(
        process.coefficients, experiment.n or DEFAULT_N, experiment.M, experiment.seed,
        innovation=process.innovation,
        past_window=process.past_window,
        ks_threshold=experiment.ks_threshold,
        pool=pool,
    )
    return CommandResult.from_report(report, experiment.ecdf_svg)


def _quenched(process: ResolvedProcess, experiment: ExperimentConfig, pool: ReplicatePool) -> CommandResult:
    report = quenched_clt_theorem1(
        process.coefficients, experiment.R, experiment.n or DEFAULT_N, experiment.M, experiment.seed,
        innovation=process.innovation,
        past_window=process.past_window,
        ks_threshold=experiment.ks_threshold,
        slope_limit=experiment.slope_limit,
        pool=pool,
    )
    return CommandResult.from_report(report, experiment.ecdf_svg)


def _failure(process: ResolvedProcess, experiment: ExperimentConfig, pool: ReplicatePool) -> CommandResult:
    spec = process.require_counterexample("failure")
    report = quenched_failure_tail(
        spec, _tower_index(spec, experiment), experiment.M, experiment.seed,
        N=experiment.n,
        threshold=experiment.threshold,
        pool=pool,
    )
    return CommandResult.from_report(report, experiment.ecdf_svg)


def _wip(process: ResolvedProcess, experiment: ExperimentConfig, pool: ReplicatePool) -> CommandResult:
    spec = process.require_counterexample("wip")
    report = wip_failure_max(
        spec, _tower_index(spec, experiment), experiment.M, experiment.seed,
        threshold=experiment.threshold,
        pool=pool,
    )
    return CommandResult.from_report(report, experiment.ecdf_svg)


def _tn(process: ResolvedProcess, experiment: ExperimentConfig, pool: ReplicatePool) -> CommandResult:
    report = tn_convergence(
        process.coefficients, experiment.grid, experiment.orbit_length, experiment.seed,
        innovation=process.innovation,
        orbits=experiment.orbits,
        past_window=process.past_window,
        spread_limit=experiment.spread_limit,
        slope_limit=experiment.slope_limit,
    )
    return CommandResult.from_report(report)


def _trends(process: ResolvedProcess, experiment: ExperimentConfig, pool: ReplicatePool) -> CommandResult:
    spec = process.require_counterexample("trends")
    report = ratio_trends(spec, experiment.sigma_ratio_band)
    report.seed = experiment.seed
    return CommandResult.from_report(report)


COMMANDS: Dict[str, Callable[[ResolvedProcess, ExperimentConfig, ReplicatePool], CommandResult]] = {
    "check": _check,
    "build": _build,
    "simulate": _simulate,
    "annealed": _annealed,
    "quenched": _quenched,
    "failure": _failure,
    "wip": _wip,
    "tn": _tn,
    "trends": _trends,
}


# =============================================================================
# ENTRY
# =============================================================================

def resolve_settings(config: RunConfig) -> LinquenchConfig:
    """Spec file plus --set overrides plus --seed / --threads, validated."""
    settings = apply_overrides(load_config(config.spec_path), config.overrides)
    if config.seed is not None:
        settings.experiment.seed = config.seed
    if config.threads is not None:
        settings.runtime.threads = config.threads
    return settings


def run(config: RunConfig, configure_logging: bool = False) -> int:
    """Run one command; returns the process exit status."""
    classifier = get_error_classifier()
    try:
        settings = resolve_settings(config)
        set_config(settings)
        if configure_logging:
            setup_logging(level=config.log_level, command=config.command, seed=settings.experiment.seed)
        process = resolve_process(settings.process)
        pool = init_replicate_pool(settings.runtime.threads, settings.runtime.chunk_size)
        try:
            result = COMMANDS[config.command](process, settings.experiment, pool)
            logger.debug(f"[pool] {pool.get_stats()}")
        finally:
            shutdown_replicate_pool()
    except LinquenchError as e:
        if classifier.is_refusal(e):
            logger.warning(f"[{config.command}] refused: {classifier.describe(e)}")
        elif classifier.is_config_error(e):
            logger.error(f"[{config.command}] bad configuration: {classifier.describe(e)}")
        else:
            logger.error(f"[{config.command}] {classifier.describe(e)}")
        print(f"linquench {config.command}: {classifier.describe(e)}", file=sys.stderr)
        return classifier.exit_code(e)

    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = [write_resolved_config(settings, out, settings.experiment.seed)]
    written.extend(result.write(out))
    logger.info(f"[{config.command}] verdict={result.verdict.value} artifacts={len(written)} out={out}")

    print(result.summary)
    return 1 if result.verdict == Verdict.FAIL else 0
