"""Device-agnostic features for the analytical latency model.

Totals are computed over the retained layers of the trimmed network;
``original_latency`` is always the unmodified network's measured latency,
which ties candidates from different source networks onto one scale.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..netmodel import NetworkDescriptor, TrimmedNetworkSpec
from ..profiles import ProfileTable

FEATURE_NAMES = (
    "original_latency",
    "total_flops",
    "total_params",
    "layer_count",
    "total_filter_size",
)


class FeatureError(ValueError):
    pass


@dataclass(frozen=True)
class FeatureVector:
    original_latency: float
    total_flops: float
    total_params: float
    layer_count: int
    total_filter_size: float

    def __post_init__(self):
        if self.layer_count < 1:
            raise FeatureError("a trimmed network retains at least one layer")
        if min(
            self.original_latency,
            self.total_flops,
            self.total_params,
            self.total_filter_size,
        ) < 0:
            raise FeatureError("feature components must be >= 0")

    def to_array(self) -> np.ndarray:
        return np.array(
            [
                self.original_latency,
                self.total_flops,
                self.total_params,
                float(self.layer_count),
                self.total_filter_size,
            ]
        )


def extract_features(
    net: NetworkDescriptor, table: ProfileTable, trn: TrimmedNetworkSpec
) -> FeatureVector:
    if trn.source != net.name or table.network != net.name:
        raise FeatureError(
            f"network names disagree: trn={trn.source!r} descriptor={net.name!r} "
            f"profile={table.network!r}"
        )
    retained = net.retained_layers(trn.cutpoint)
    if not retained:
        raise FeatureError(f"{trn.label} retains no layers")
    return FeatureVector(
        original_latency=table.measured_latency,
        total_flops=sum(l.flops for l in retained),
        total_params=sum(l.params for l in retained),
        layer_count=len(retained),
        total_filter_size=sum(l.filter_size for l in retained),
    )


def load_truth(path: str | Path) -> dict[tuple[str, int], float]:
    """Measured TRN latencies, CSV ``network,cutpoint,latency_ms``."""
    path = Path(path)
    truth: dict[tuple[str, int], float] = {}
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                key = (row["network"], int(row["cutpoint"]))
                if key in truth:
                    raise FeatureError(f"duplicate truth row for {key}")
                value = float(row["latency_ms"])
                if value <= 0:
                    raise FeatureError(f"non-positive latency for {key}")
                truth[key] = value
    except OSError as exc:
        raise FeatureError(f"cannot read truth file {path}: {exc}") from exc
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, FeatureError):
            raise
        raise FeatureError(f"bad truth row in {path}: {exc}") from exc
    return truth
