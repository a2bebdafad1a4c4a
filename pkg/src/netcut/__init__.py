"""Deadline-aware selection of trimmed DNNs via latency estimation.

Given architecture descriptors and latency measurements for a set of
pretrained networks, this package constructs trimmed networks by removing
layers from the classification-head end, predicts their inference latency
with a profiler-based and an analytical (epsilon-SVR) estimator, and
searches for the most accurate trimmed network meeting a latency deadline
while evaluating only one candidate per source network.
"""

from .evaluator import AccuracyTable, Evaluator, EvaluatorConfig, evaluate, load_accuracy_table
from .explorer import (
    Deadline,
    ExplorationReport,
    GapAnalysis,
    ParetoPoint,
    explore_blockwise,
    gap_analysis,
    netcut,
    pareto_frontier,
)
from .metrics import (
    AccuracyScore,
    CostReport,
    GraspDistribution,
    angular_similarity,
    exploration_cost,
    mean_angular_similarity,
    relative_improvement,
)
from .netmodel import (
    BlockBoundary,
    LayerRecord,
    NetworkDescriptor,
    TrimmedNetworkSpec,
    enumerate_blockwise,
    enumerate_layerwise,
    load_descriptor,
    remove_layers,
    save_descriptor,
)
from .profiles import (
    LatencyEstimate,
    ProfileTable,
    estimate_profiler,
    load_profile,
    profiler_overhead_ratio,
    save_profile,
)

__version__ = "0.1.0"
