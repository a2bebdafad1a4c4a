"""Network architecture descriptors and layer-removal candidates.

Layers are indexed from the classification-head end: index 0 is the layer
closest to the head, the highest index is closest to the input. Descriptor
files list layers in this reverse-topological order. A cutpoint of ``n``
removes layers ``{0..n-1}``; cutpoint 0 is the unmodified network. A trimmed
network must retain at least one feature-extraction layer, so the
all-removed cutpoint is rejected.

Classification-head layers are never represented here; ``head_note`` is
free-text documentation of the replacement head.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable


class DescriptorError(ValueError):
    """Raised when a descriptor file or its invariants are invalid."""


@dataclass(frozen=True)
class LayerRecord:
    index: int
    name: str
    kind: str
    flops: float = 0.0
    params: float = 0.0
    filter_size: float = 0.0
    block_id: str | None = None

    def __post_init__(self):
        for f in ("flops", "params", "filter_size"):
            if getattr(self, f) < 0:
                raise DescriptorError(f"layer {self.name!r}: {f} must be >= 0")
        if self.index < 0:
            raise DescriptorError(f"layer {self.name!r}: index must be >= 0")


@dataclass(frozen=True)
class BlockBoundary:
    block_id: str
    first_index: int
    last_index: int

    def __post_init__(self):
        if self.first_index > self.last_index:
            raise DescriptorError(
                f"block {self.block_id!r}: first_index > last_index"
            )

    def __len__(self) -> int:
        return self.last_index - self.first_index + 1


@dataclass(frozen=True)
class NetworkDescriptor:
    name: str
    layers: tuple[LayerRecord, ...]
    blocks: tuple[BlockBoundary, ...] = ()
    head_note: str = ""

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        object.__setattr__(self, "blocks", tuple(self.blocks))
        self._validate()

    def _validate(self):
        if not self.layers:
            raise DescriptorError(f"network {self.name!r}: no layers")
        seen = set()
        for layer in self.layers:
            if layer.index in seen:
                raise DescriptorError(
                    f"network {self.name!r}: duplicate layer index {layer.index}"
                )
            seen.add(layer.index)
        if seen != set(range(len(self.layers))):
            raise DescriptorError(
                f"network {self.name!r}: layer indices not contiguous from 0"
            )

        block_ids = [b.block_id for b in self.blocks]
        if len(set(block_ids)) != len(block_ids):
            raise DescriptorError(f"network {self.name!r}: duplicate block_id")

        # Blocks must tile a prefix of the index range: sorted by
        # first_index they start at 0 and abut without gaps or overlap.
        ordered = sorted(self.blocks, key=lambda b: b.first_index)
        expected_start = 0
        for b in ordered:
            if b.first_index != expected_start:
                raise DescriptorError(
                    f"network {self.name!r}: block {b.block_id!r} starts at "
                    f"{b.first_index}, expected {expected_start}"
                )
            if b.last_index >= len(self.layers):
                raise DescriptorError(
                    f"network {self.name!r}: block {b.block_id!r} exceeds "
                    f"layer range"
                )
            expected_start = b.last_index + 1

        by_id = {b.block_id: b for b in self.blocks}
        for layer in self.layers:
            owner = next(
                (b for b in self.blocks if b.first_index <= layer.index <= b.last_index),
                None,
            )
            if layer.block_id is None:
                if owner is not None:
                    raise DescriptorError(
                        f"network {self.name!r}: layer {layer.index} lies in "
                        f"block {owner.block_id!r} but carries no block_id"
                    )
            else:
                if layer.block_id not in by_id:
                    raise DescriptorError(
                        f"network {self.name!r}: layer {layer.index} references "
                        f"unknown block {layer.block_id!r}"
                    )
                if owner is None or owner.block_id != layer.block_id:
                    raise DescriptorError(
                        f"network {self.name!r}: layer {layer.index} block_id "
                        f"{layer.block_id!r} does not match block ranges"
                    )

    @property
    def layer_count(self) -> int:
        return len(self.layers)

    def layer(self, index: int) -> LayerRecord:
        for rec in self.layers:
            if rec.index == index:
                return rec
        raise KeyError(index)

    def retained_layers(self, cutpoint: int) -> list[LayerRecord]:
        return [l for l in self.layers if l.index >= cutpoint]


@dataclass(frozen=True)
class TrimmedNetworkSpec:
    """One exploration candidate: a source network and a head-end cutpoint."""

    source: str
    cutpoint: int
    granularity: str = "layerwise"  # "layerwise" | "blockwise"
    removed_indices: frozenset[int] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.granularity not in ("layerwise", "blockwise"):
            raise DescriptorError(f"bad granularity {self.granularity!r}")
        if self.cutpoint < 0:
            raise DescriptorError("cutpoint must be >= 0")
        expected = frozenset(range(self.cutpoint))
        if self.removed_indices is None:
            object.__setattr__(self, "removed_indices", expected)
        elif frozenset(self.removed_indices) != expected:
            raise DescriptorError("removed_indices must equal {0..cutpoint-1}")

    @property
    def label(self) -> str:
        return f"{self.source}/cut{self.cutpoint}"


def remove_layers(net: NetworkDescriptor, cutpoint: int) -> TrimmedNetworkSpec:
    """Trim ``cutpoint`` layers from the head end of ``net``.

    Cutpoint 0 is the unmodified network; a cutpoint that would leave no
    feature-extraction layer is rejected.
    """
    if cutpoint < 0 or cutpoint > net.layer_count:
        raise DescriptorError(
            f"cutpoint {cutpoint} out of range for {net.name!r} "
            f"({net.layer_count} layers)"
        )
    if cutpoint == net.layer_count:
        raise DescriptorError(
            f"cutpoint {cutpoint} would leave {net.name!r} with no layers"
        )
    return TrimmedNetworkSpec(source=net.name, cutpoint=cutpoint)


def block_cutpoints(net: NetworkDescriptor) -> list[int]:
    """Block-aligned cutpoints, ascending, always starting at 0.

    Each cutpoint removes a union of whole blocks; the cutpoint that would
    empty the network is excluded.
    """
    cuts = [0]
    for b in sorted(net.blocks, key=lambda b: b.first_index):
        cp = b.last_index + 1
        if cp < net.layer_count:
            cuts.append(cp)
    return cuts


def enumerate_blockwise(net: NetworkDescriptor) -> list[TrimmedNetworkSpec]:
    """One candidate per block-aligned cutpoint, ascending from 0."""
    return [
        TrimmedNetworkSpec(source=net.name, cutpoint=cp, granularity="blockwise")
        for cp in block_cutpoints(net)
    ]


def enumerate_layerwise(net: NetworkDescriptor) -> list[TrimmedNetworkSpec]:
    """One candidate per cutpoint 0..layer_count-1."""
    return [
        TrimmedNetworkSpec(source=net.name, cutpoint=cp)
        for cp in range(net.layer_count)
    ]


def _layer_from_json(obj: dict) -> LayerRecord:
    try:
        return LayerRecord(
            index=int(obj["index"]),
            name=str(obj["name"]),
            kind=str(obj["kind"]),
            flops=float(obj.get("flops", 0)),
            params=float(obj.get("params", 0)),
            filter_size=float(obj.get("filter_size", 0)),
            block_id=obj.get("block_id"),
        )
    except KeyError as exc:
        raise DescriptorError(f"layer entry missing field {exc}") from exc


def descriptor_from_json(obj: dict) -> NetworkDescriptor:
    try:
        layers = tuple(_layer_from_json(l) for l in obj["layers"])
        blocks = tuple(
            BlockBoundary(
                block_id=str(b["block_id"]),
                first_index=int(b["first_index"]),
                last_index=int(b["last_index"]),
            )
            for b in obj.get("blocks", [])
        )
        return NetworkDescriptor(
            name=str(obj["name"]),
            layers=layers,
            blocks=blocks,
            head_note=str(obj.get("head_note", "")),
        )
    except KeyError as exc:
        raise DescriptorError(f"descriptor missing field {exc}") from exc


def descriptor_to_json(net: NetworkDescriptor) -> dict:
    return {
        "name": net.name,
        "head_note": net.head_note,
        "layers": [
            {
                "index": l.index,
                "name": l.name,
                "kind": l.kind,
                "flops": l.flops,
                "params": l.params,
                "filter_size": l.filter_size,
                "block_id": l.block_id,
            }
            for l in net.layers
        ],
        "blocks": [
            {
                "block_id": b.block_id,
                "first_index": b.first_index,
                "last_index": b.last_index,
            }
            for b in net.blocks
        ],
    }


def load_descriptor(path: str | Path) -> NetworkDescriptor:
    """Load and validate a descriptor JSON file."""
    path = Path(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DescriptorError(f"cannot read descriptor {path}: {exc}") from exc
    return descriptor_from_json(obj)


def save_descriptor(net: NetworkDescriptor, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(descriptor_to_json(net), indent=2) + "\n", encoding="utf-8"
    )


def trn_to_json(trn: TrimmedNetworkSpec) -> dict:
    return {
        "source": trn.source,
        "cutpoint": trn.cutpoint,
        "granularity": trn.granularity,
        "removed_indices": sorted(trn.removed_indices),
    }
