"""Deadline-aware exploration of trimmed networks.

For each source network the cutpoint is advanced from 0 (layer by layer,
or block boundary by block boundary) until the first candidate whose
estimated latency meets the deadline; only those candidates are evaluated
for accuracy, and the most accurate one wins. The exhaustive blockwise
sweep is kept as the cost baseline and as the source of the full
latency/accuracy trade-off.

Feasibility compares estimated latency with ``<=`` (meeting the deadline
exactly counts). Accuracy ties between networks break toward the lower
estimated latency, then the lexicographically smaller network name.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .analytical import FeatureVector, SvrModel, extract_features
from .analytical import predict as predict_analytical
from .evaluator import Evaluator, MissingAccuracyError
from .metrics import CostReport, exploration_cost, relative_improvement
from .netmodel import (
    NetworkDescriptor,
    TrimmedNetworkSpec,
    block_cutpoints,
    enumerate_blockwise,
)
from .profiles import LatencyEstimate, ProfileTable, estimate_profiler


class ExplorerError(ValueError):
    pass


@dataclass(frozen=True)
class Deadline:
    value: float  # ms

    def __post_init__(self):
        if self.value <= 0:
            raise ExplorerError("deadline must be > 0")


@dataclass(frozen=True)
class ParetoPoint:
    trn: TrimmedNetworkSpec
    latency: float  # ms
    accuracy: float
    latency_source: str = "estimated"  # "measured" | "estimated"

    def __post_init__(self):
        if self.latency <= 0:
            raise ExplorerError(f"pareto point {self.trn.label}: latency must be > 0")


@dataclass(frozen=True)
class ChosenTrn:
    network: str
    feasible: bool
    trn: TrimmedNetworkSpec | None = None
    estimated_latency: float | None = None
    latency_method: str | None = None
    accuracy: float | None = None


@dataclass(frozen=True)
class ExplorationReport:
    deadline_ms: float
    granularity: str
    estimator: str
    chosen: tuple[ChosenTrn, ...]
    winner: ChosenTrn | None
    candidates_trained: int
    baseline_candidates: int
    cost: CostReport | None
    slack_ms: float | None
    gap_closed_pct: float | None
    offshelf_best: ChosenTrn | None = None

    @property
    def feasible(self) -> bool:
        return self.winner is not None


def _cutpoints(net: NetworkDescriptor, granularity: str) -> list[int]:
    if granularity == "blockwise":
        return block_cutpoints(net)
    if granularity == "layerwise":
        return list(range(net.layer_count))
    raise ExplorerError(f"unknown granularity {granularity!r}")


def make_estimator(
    estimator: str, model: SvrModel | None = None
) -> Callable[[NetworkDescriptor, ProfileTable, TrimmedNetworkSpec], LatencyEstimate]:
    """Bind the chosen latency-estimation method to one callable."""
    if estimator == "profiler":
        return lambda net, table, trn: estimate_profiler(table, trn)
    if estimator == "analytical":
        if model is None:
            raise ExplorerError("analytical estimation requires a trained model")
        return lambda net, table, trn: predict_analytical(
            model, extract_features(net, table, trn), trn
        )
    raise ExplorerError(f"unknown estimator {estimator!r}")


def first_feasible(
    net: NetworkDescriptor,
    table: ProfileTable,
    estimate,
    deadline: Deadline,
    granularity: str,
) -> tuple[TrimmedNetworkSpec, LatencyEstimate] | None:
    """Smallest cutpoint whose estimated latency meets the deadline."""
    for cp in _cutpoints(net, granularity):
        trn = TrimmedNetworkSpec(
            source=net.name,
            cutpoint=cp,
            granularity="blockwise" if granularity == "blockwise" else "layerwise",
        )
        est = estimate(net, table, trn)
        if est.value <= deadline.value:
            return trn, est
    return None


def netcut(
    nets: Sequence[NetworkDescriptor],
    tables: Mapping[str, ProfileTable],
    deadline: Deadline,
    evaluator: Evaluator,
    granularity: str = "blockwise",
    estimator: str = "profiler",
    model: SvrModel | None = None,
    unit_hours: float = 1.0,
) -> ExplorationReport:
    """Propose the most accurate trimmed network meeting the deadline.

    Evaluates at most one candidate per source network; networks with no
    feasible cutpoint are reported infeasible rather than failing the run.
    """
    estimate = make_estimator(estimator, model)
    chosen: list[ChosenTrn] = []
    for net in sorted(nets, key=lambda n: n.name):
        if net.name not in tables:
            raise ExplorerError(f"no profile table for network {net.name!r}")
        hit = first_feasible(net, tables[net.name], estimate, deadline, granularity)
        if hit is None:
            chosen.append(ChosenTrn(network=net.name, feasible=False))
            continue
        trn, est = hit
        accuracy = evaluator.evaluate(trn)
        chosen.append(
            ChosenTrn(
                network=net.name,
                feasible=True,
                trn=trn,
                estimated_latency=est.value,
                latency_method=est.method,
                accuracy=accuracy.value,
            )
        )

    feasible = [c for c in chosen if c.feasible]
    winner = None
    if feasible:
        winner = min(
            feasible, key=lambda c: (-c.accuracy, c.estimated_latency, c.network)
        )

    baseline = sum(len(enumerate_blockwise(net)) for net in nets)
    cost = (
        exploration_cost(baseline, len(feasible), unit_hours=unit_hours)
        if feasible
        else None
    )

    offshelf = _best_offshelf(nets, tables, deadline, evaluator)
    gap_closed = None
    if winner is not None and offshelf is not None and offshelf.accuracy:
        gap_closed = relative_improvement(winner.accuracy, offshelf.accuracy)

    return ExplorationReport(
        deadline_ms=deadline.value,
        granularity=granularity,
        estimator=estimator,
        chosen=tuple(chosen),
        winner=winner,
        candidates_trained=len(feasible),
        baseline_candidates=baseline,
        cost=cost,
        slack_ms=(deadline.value - winner.estimated_latency) if winner else None,
        gap_closed_pct=gap_closed,
        offshelf_best=offshelf,
    )


def _best_offshelf(
    nets: Sequence[NetworkDescriptor],
    tables: Mapping[str, ProfileTable],
    deadline: Deadline,
    evaluator: Evaluator,
) -> ChosenTrn | None:
    """Most accurate unmodified network whose measured latency is feasible.

    Off-the-shelf accuracies are inputs to the search, so missing entries
    only disable the gap comparison instead of failing the run.
    """
    best: ChosenTrn | None = None
    for net in sorted(nets, key=lambda n: n.name):
        table = tables.get(net.name)
        if table is None or table.measured_latency > deadline.value:
            continue
        trn = TrimmedNetworkSpec(source=net.name, cutpoint=0)
        try:
            accuracy = evaluator.evaluate(trn)
        except MissingAccuracyError:
            continue
        cand = ChosenTrn(
            network=net.name,
            feasible=True,
            trn=trn,
            estimated_latency=table.measured_latency,
            latency_method="measured",
            accuracy=accuracy.value,
        )
        if best is None or (-cand.accuracy, cand.estimated_latency, cand.network) < (
            -best.accuracy,
            best.estimated_latency,
            best.network,
        ):
            best = cand
    return best


def explore_blockwise(
    nets: Sequence[NetworkDescriptor],
    tables: Mapping[str, ProfileTable],
    evaluator: Evaluator,
) -> list[ParetoPoint]:
    """Exhaustive baseline: estimate and evaluate every blockwise TRN."""
    points: list[ParetoPoint] = []
    for net in sorted(nets, key=lambda n: n.name):
        if net.name not in tables:
            raise ExplorerError(f"no profile table for network {net.name!r}")
        table = tables[net.name]
        for trn in enumerate_blockwise(net):
            accuracy = evaluator.evaluate(trn)
            if trn.cutpoint == 0:
                latency, source = table.measured_latency, "measured"
            else:
                latency = estimate_profiler(table, trn).value
                source = "estimated"
            points.append(
                ParetoPoint(
                    trn=trn,
                    latency=latency,
                    accuracy=accuracy.value,
                    latency_source=source,
                )
            )
    return points


def pareto_frontier(points: Sequence[ParetoPoint]) -> list[ParetoPoint]:
    """Non-dominated points, sorted by latency ascending.

    p dominates q iff p.latency <= q.latency and p.accuracy >= q.accuracy
    with at least one strict; exact (latency, accuracy) duplicates collapse
    to the first candidate by (network, cutpoint).
    """
    unique: dict[tuple[float, float], ParetoPoint] = {}
    for pt in sorted(points, key=lambda p: (p.trn.source, p.trn.cutpoint)):
        unique.setdefault((pt.latency, pt.accuracy), pt)
    ordered = sorted(unique.values(), key=lambda p: (p.latency, -p.accuracy))
    frontier: list[ParetoPoint] = []
    best_acc = -1.0
    for pt in ordered:
        if pt.accuracy > best_acc:
            frontier.append(pt)
            best_acc = pt.accuracy
    return frontier


@dataclass(frozen=True)
class GapAnalysis:
    feasible: bool
    best: ParetoPoint | None
    slack_ms: float | None
    accuracy_gap: float


def gap_analysis(frontier: Sequence[ParetoPoint], deadline: Deadline) -> GapAnalysis:
    """Slack and accuracy gap at the deadline on an extracted frontier."""
    if not frontier:
        raise ExplorerError("empty frontier")
    feasible = [p for p in frontier if p.latency <= deadline.value]
    if not feasible:
        return GapAnalysis(feasible=False, best=None, slack_ms=None, accuracy_gap=0.0)
    best = max(feasible, key=lambda p: p.accuracy)
    above = [p for p in frontier if p.latency > deadline.value]
    gap = 0.0
    if above:
        cheapest = min(above, key=lambda p: p.latency)
        gap = cheapest.accuracy - best.accuracy
    return GapAnalysis(
        feasible=True,
        best=best,
        slack_ms=deadline.value - best.latency,
        accuracy_gap=gap,
    )
