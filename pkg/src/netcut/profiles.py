"""Per-layer latency profiles and the profiler-based latency estimator.

A profile stores the measured end-to-end latency of the unmodified network
together with per-layer latencies recorded by an on-device profiler. The
estimator scales the measured latency by the retained fraction of the
summed per-layer latencies:

    estimate = measured * (1 - sum(removed) / sum(all))

A ratio is used because per-layer instrumentation overhead makes the layer
sum slightly exceed the measured end-to-end latency on real profiles.

Ingestion convention: latencies are in milliseconds, measured after GPU
warm-up (e.g. 200 warm-up inferences, latency averaged over a further 800
runs). Whether the classification head contributes to ``measured_latency``
is up to the measurement setup; layer rows cover feature-extraction layers
only. Collection itself is out of scope here.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from .netmodel import NetworkDescriptor, TrimmedNetworkSpec


class ProfileError(ValueError):
    """Raised for malformed or inconsistent profile data."""


@dataclass(frozen=True)
class ProfileTable:
    network: str
    device: str
    measured_latency: float  # ms, end-to-end, unmodified network
    layer_latencies: Mapping[int, float]  # ms per layer index

    def __post_init__(self):
        object.__setattr__(
            self, "layer_latencies", MappingProxyType(dict(self.layer_latencies))
        )
        if self.measured_latency <= 0:
            raise ProfileError(
                f"profile {self.network!r}: measured_latency must be > 0"
            )
        if not self.layer_latencies:
            raise ProfileError(f"profile {self.network!r}: no layer latencies")
        for idx, lat in self.layer_latencies.items():
            if lat < 0:
                raise ProfileError(
                    f"profile {self.network!r}: negative latency at index {idx}"
                )
        if all(v == 0 for v in self.layer_latencies.values()):
            raise ProfileError(
                f"profile {self.network!r}: all layer latencies are zero"
            )

    @property
    def layer_sum(self) -> float:
        return sum(self.layer_latencies.values())


@dataclass(frozen=True)
class LatencyEstimate:
    value: float  # ms
    method: str  # "profiler" | "analytical"
    trn: TrimmedNetworkSpec

    def __post_init__(self):
        if self.value < 0:
            raise ProfileError("latency estimate must be >= 0")


def _bind(table: ProfileTable, net: NetworkDescriptor) -> ProfileTable:
    """Check the profile's index set against the descriptor's."""
    want = {l.index for l in net.layers}
    have = set(table.layer_latencies)
    missing = sorted(want - have)
    extra = sorted(have - want)
    if missing:
        raise ProfileError(
            f"profile incomplete at index {missing[0]} for network {net.name!r}"
        )
    if extra:
        raise ProfileError(
            f"profile for {net.name!r} has extra layer index {extra[0]}"
        )
    if table.network != net.name:
        raise ProfileError(
            f"profile network {table.network!r} does not match descriptor "
            f"{net.name!r}"
        )
    return table


def profile_from_json(obj: dict) -> ProfileTable:
    try:
        raw = obj["layer_latencies"]
        latencies = {int(k): float(v) for k, v in raw.items()}
        return ProfileTable(
            network=str(obj["network"]),
            device=str(obj["device"]),
            measured_latency=float(obj["measured_latency_ms"]),
            layer_latencies=latencies,
        )
    except KeyError as exc:
        raise ProfileError(f"profile missing field {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ProfileError(f"profile has non-numeric entry: {exc}") from exc


def profile_to_json(table: ProfileTable) -> dict:
    return {
        "network": table.network,
        "device": table.device,
        "measured_latency_ms": table.measured_latency,
        "layer_latencies": {str(k): v for k, v in sorted(table.layer_latencies.items())},
    }


def load_profile(path: str | Path, net: NetworkDescriptor) -> ProfileTable:
    """Load a profile and validate it against ``net``.

    Accepts either the combined JSON form (``*.json``) or a CSV of
    ``index,latency_ms`` rows with a sidecar ``<stem>.meta.json`` holding
    ``{"network","device","measured_latency_ms"}``.
    """
    path = Path(path)
    if path.suffix == ".json":
        try:
            obj = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ProfileError(f"cannot read profile {path}: {exc}") from exc
        return _bind(profile_from_json(obj), net)

    sidecar = path.with_suffix(".meta.json")
    try:
        meta = json.loads(sidecar.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ProfileError(f"cannot read profile sidecar {sidecar}: {exc}") from exc
    latencies: dict[int, float] = {}
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                idx = int(row["index"])
                if idx in latencies:
                    raise ProfileError(f"duplicate profile row for index {idx}")
                latencies[idx] = float(row["latency_ms"])
    except OSError as exc:
        raise ProfileError(f"cannot read profile {path}: {exc}") from exc
    except (TypeError, ValueError, KeyError) as exc:
        raise ProfileError(f"bad profile row in {path}: {exc}") from exc
    try:
        table = ProfileTable(
            network=str(meta["network"]),
            device=str(meta["device"]),
            measured_latency=float(meta["measured_latency_ms"]),
            layer_latencies=latencies,
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ProfileError):
            raise
        raise ProfileError(f"bad profile sidecar {sidecar}: {exc}") from exc
    return _bind(table, net)


def save_profile(table: ProfileTable, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(profile_to_json(table), indent=2) + "\n", encoding="utf-8"
    )


def estimate_profiler(table: ProfileTable, trn: TrimmedNetworkSpec) -> LatencyEstimate:
    """Latency of a trimmed network from the profile's retained fraction."""
    if trn.source != table.network:
        raise ProfileError(
            f"TRN source {trn.source!r} does not match profile {table.network!r}"
        )
    absent = [i for i in trn.removed_indices if i not in table.layer_latencies]
    if absent:
        raise ProfileError(
            f"removed index {absent[0]} absent from profile {table.network!r}"
        )
    if not trn.removed_indices:
        return LatencyEstimate(table.measured_latency, "profiler", trn)
    removed = sum(table.layer_latencies[i] for i in trn.removed_indices)
    value = table.measured_latency * (1.0 - removed / table.layer_sum)
    return LatencyEstimate(max(value, 0.0), "profiler", trn)


def profiler_overhead_ratio(table: ProfileTable) -> float:
    """Layer-sum over measured latency; >= 1 on real instrumented profiles."""
    return table.layer_sum / table.measured_latency
