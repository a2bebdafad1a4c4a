"""Accuracy and exploration-cost metrics.

Classifier outputs here are probability distributions over grasp types
rather than one-hot labels, so accuracy is measured as angular similarity:
1 - (2/pi) * angle between the two probability vectors. Nonnegative vectors
are at most pi/2 apart, so the score lands in [0, 1]. Dataset-level
accuracy is the mean per-sample similarity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence


class MetricsError(ValueError):
    pass


@dataclass(frozen=True)
class GraspDistribution:
    probabilities: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "probabilities", tuple(self.probabilities))
        if any(p < 0 for p in self.probabilities):
            raise MetricsError("probabilities must be >= 0")
        total = sum(self.probabilities)
        if abs(total - 1.0) > 1e-6:
            raise MetricsError(f"probabilities sum to {total}, expected 1")


@dataclass(frozen=True)
class AccuracyScore:
    value: float
    source: str = ""

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise MetricsError(f"accuracy {self.value} outside [0, 1]")


def angular_similarity(p: GraspDistribution, q: GraspDistribution) -> float:
    """1 - (2/pi)*arccos(cosine(p, q)); 1 for identical, 0 for orthogonal."""
    pv, qv = p.probabilities, q.probabilities
    if len(pv) != len(qv):
        raise MetricsError("distributions differ in dimension")
    dot = sum(a * b for a, b in zip(pv, qv))
    np_ = math.sqrt(sum(a * a for a in pv))
    nq = math.sqrt(sum(b * b for b in qv))
    if np_ == 0.0 or nq == 0.0:
        raise MetricsError("zero-norm distribution")
    cos = min(1.0, max(-1.0, dot / (np_ * nq)))
    return 1.0 - (2.0 / math.pi) * math.acos(cos)


def mean_angular_similarity(
    pairs: Iterable[tuple[GraspDistribution, GraspDistribution]],
) -> float:
    """Dataset-level accuracy: mean per-sample angular similarity."""
    values = [angular_similarity(p, q) for p, q in pairs]
    if not values:
        raise MetricsError("no samples")
    return sum(values) / len(values)


def relative_improvement(candidate: float, baseline: float) -> float:
    """Signed percentage change of ``candidate`` over ``baseline``."""
    if baseline <= 0:
        raise MetricsError("baseline must be > 0")
    return 100.0 * (candidate - baseline) / baseline


@dataclass(frozen=True)
class CostReport:
    """Exploration cost of the deadline-aware search vs. the exhaustive one."""

    baseline_candidates: int
    netcut_candidates: int
    baseline_hours: float
    netcut_hours: float

    @property
    def candidate_reduction_pct(self) -> float:
        if self.baseline_candidates == 0:
            return 0.0
        return 100.0 * (1.0 - self.netcut_candidates / self.baseline_candidates)

    @property
    def speedup(self) -> float:
        return self.baseline_hours / self.netcut_hours


def exploration_cost(
    baseline_candidates: int,
    netcut_candidates: int,
    *,
    unit_hours: float = 1.0,
    baseline_hours: float | None = None,
    netcut_hours: float | None = None,
) -> CostReport:
    """Total training hours per strategy and the resulting speedup.

    With equal per-candidate cost the speedup equals the candidate-count
    ratio; explicit per-strategy totals override the count * unit_hours
    default.
    """
    if baseline_candidates < 0 or netcut_candidates < 0:
        raise MetricsError("candidate counts must be >= 0")
    if baseline_hours is None:
        baseline_hours = baseline_candidates * unit_hours
    if netcut_hours is None:
        netcut_hours = netcut_candidates * unit_hours
    if netcut_hours <= 0:
        raise MetricsError("netcut exploration cost must be > 0")
    return CostReport(
        baseline_candidates=baseline_candidates,
        netcut_candidates=netcut_candidates,
        baseline_hours=baseline_hours,
        netcut_hours=netcut_hours,
    )
