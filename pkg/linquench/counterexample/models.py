"""
Data models for the counterexample construction.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from ..artifacts import format_value
from ..errors import InvalidSpecError


@dataclass(frozen=True)
class CounterexampleSpec:
    """
    The full counterexample object.

    Block weights `gamma` and block lengths `V` have one entry per
    k = 1..K. Tower scales `N` have one entry per tower index k = 1..J
    with J <= K; tower k has height 4 N_k. `kappa` replaces 2^k in the
    gap inequality for desk-scale schedules, and `scheduled` lists the
    tower indices whose schedule constraints are enforced.
    """
    K: int
    gamma: Tuple[float, ...]
    V: Tuple[int, ...]
    N: Tuple[int, ...]
    d: float
    kappa: Tuple[float, ...]
    renormalize: bool = True
    scheduled: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.K < 1:
            raise InvalidSpecError(f"K must be at least 1, got {self.K}")
        if len(self.gamma) != self.K:
            raise InvalidSpecError(f"expected {self.K} gamma values, got {len(self.gamma)}")
        if len(self.V) != self.K:
            raise InvalidSpecError(f"expected {self.K} block lengths V, got {len(self.V)}")
        if self.V[0] < 1:
            raise InvalidSpecError(f"V_1 must be positive, got {self.V[0]}")
        for k in range(1, self.K):
            if self.V[k] < 2 * self.V[k - 1]:
                raise InvalidSpecError(
                    f"V must at least double: V_{k + 1}={self.V[k]} < 2*V_{k}={2 * self.V[k - 1]}"
                )
        if not 1 <= len(self.N) <= self.K:
            raise InvalidSpecError(f"need between 1 and K={self.K} tower scales N, got {len(self.N)}")
        if any(n < 1 for n in self.N):
            raise InvalidSpecError(f"tower scales must be positive, got {self.N}")
        if len(self.kappa) != len(self.N):
            raise InvalidSpecError(f"expected {len(self.N)} kappa values, got {len(self.kappa)}")
        if any(not math.isfinite(x) or x <= 0 for x in self.kappa):
            raise InvalidSpecError(f"kappa values must be positive, got {self.kappa}")
        for k in self.scheduled:
            if not 1 <= k <= len(self.N):
                raise InvalidSpecError(f"scheduled tower index {k} outside 1..{len(self.N)}")
        if self.renormalize and abs(math.fsum(self.gamma) - 1.0) > 1e-14 * self.K + 1e-15:
            raise InvalidSpecError(f"renormalized gamma must sum to 1, got {math.fsum(self.gamma)!r}")

    @property
    def J(self) -> int:
        return len(self.N)

    @property
    def V_K(self) -> int:
        return self.V[-1]

    @property
    def tower_heights(self) -> Tuple[int, ...]:
        return tuple(4 * n for n in self.N)

    def block(self, k: int) -> Tuple[int, int]:
        """Time block [N_k, N_{k+1}) of tower index k."""
        if not 1 <= k < self.J:
            raise InvalidSpecError(f"tower index {k} has no following tower (J={self.J})")
        return self.N[k - 1], self.N[k]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "K": self.K,
            "gamma": list(self.gamma),
            "V": list(self.V),
            "N": list(self.N),
            "d": self.d,
            "kappa": list(self.kappa),
            "renormalize": self.renormalize,
            "scheduled": list(self.scheduled),
        }


@dataclass(frozen=True)
class InnovationSpec:
    """
    Innovation e = sum_k w_k xi_k 1_{A_k} with A_k a tower base of height h_k.

    The iid sign innovation is the single channel w = 1, h = 1.
    """
    K: int
    weights: Tuple[float, ...]
    tower_heights: Tuple[int, ...]
    d: float

    def __post_init__(self):
        if self.K < 1 or len(self.weights) != self.K or len(self.tower_heights) != self.K:
            raise InvalidSpecError(
                f"innovation needs K >= 1 matching weights/heights, got K={self.K}, "
                f"{len(self.weights)} weights, {len(self.tower_heights)} heights"
            )
        if any(h < 1 for h in self.tower_heights):
            raise InvalidSpecError(f"tower heights must be positive, got {self.tower_heights}")

    @classmethod
    def iid_sign(cls) -> "InnovationSpec":
        return cls(K=1, weights=(1.0,), tower_heights=(1,), d=1.0)

    @property
    def is_iid(self) -> bool:
        return self.K == 1 and self.tower_heights == (1,)

    @property
    def norm_sq(self) -> float:
        """||e||_2^2 = sum_k w_k^2 / h_k."""
        return math.fsum(w * w / h for w, h in zip(self.weights, self.tower_heights))

    def weight(self, k: int) -> float:
        return self.weights[k - 1]

    def height(self, k: int) -> int:
        return self.tower_heights[k - 1]


@dataclass(frozen=True)
class ConstraintCheck:
    name: str
    k: Optional[int]
    passed: bool
    margin: float
    detail: str = ""


@dataclass
class ValidationReport:
    """Pass/fail per schedule inequality with the margins actually achieved."""
    checks: List[ConstraintCheck] = field(default_factory=list)
    divergence: List[Tuple[int, float]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[ConstraintCheck]:
        return [c for c in self.checks if not c.passed]

    def check(self, name: str, k: Optional[int] = None) -> ConstraintCheck:
        for c in self.checks:
            if c.name == name and c.k == k:
                return c
        raise KeyError((name, k))

    def to_rows(self) -> List[Dict[str, Any]]:
        rows = [
            {"constraint": c.name, "k": "" if c.k is None else c.k, "passed": c.passed,
             "margin": c.margin, "detail": c.detail}
            for c in self.checks
        ]
        rows.extend(
            {"constraint": "divergence_diagnostic", "k": k, "passed": "", "margin": value, "detail": ""}
            for k, value in self.divergence
        )
        return rows

    def to_text(self) -> str:
        lines = [f"Schedule validation: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            where = "" if c.k is None else f" k={c.k}"
            status = "ok  " if c.passed else "FAIL"
            suffix = f" ({c.detail})" if c.detail else ""
            lines.append(f"  [{status}] {c.name}{where} margin={format_value(c.margin)}{suffix}")
        for k, value in self.divergence:
            lines.append(f"  sqrt(V_{k}) * (1 - sum_(j<=k+1) gamma_j) = {format_value(value)}")
        return "\n".join(lines)


@dataclass(frozen=True)
class MWComponentBound:
    """Bound on sum_n ||E(S_n(h_k)|F_0)||_2 / n^{3/2} for one block component."""
    k: int
    V: int
    gamma: float
    head: float  # n <= V_k part
    tail: float  # n > V_k part

    @property
    def total(self) -> float:
        return self.head + self.tail

    @property
    def constant(self) -> float:
        """C with total = C * gamma_k."""
        return self.total / self.gamma if self.gamma else 0.0


@dataclass(frozen=True)
class MWCertificate:
    components: Tuple[MWComponentBound, ...]
    e_term: float  # zeta(3/2), from E(S_n(e)|F_0) = e

    @property
    def total(self) -> float:
        return self.e_term + math.fsum(c.total for c in self.components)
