#!/usr/bin/env python3
"""Generate the bundled 7-network fixture family under tests/data/.

The family mirrors the scale of a realistic transfer-learning study: seven
source networks whose blockwise enumeration yields 148 candidates in
total. Latencies, layer statistics, TRN ground-truth latencies, and
recorded accuracies are synthetic but deterministic (fixed seed), smooth,
and mildly nonlinear, so the analytical estimator has something honest to
learn while the profiler-based estimator stays within a few percent.

Run from the repository root: python3 scripts/gen_fixtures.py
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parent.parent / "tests" / "data"

# name, block count, layers per block cycle, stem layers, L0 (ms),
# accuracy at cutpoint 0, accuracy decay, stem latency share
NETS = [
    ("mobilenetv1_0.25", 13, (2, 2, 2), 2, 0.22, 0.78, 0.50, 0.25),
    ("mobilenetv1_0.5", 13, (2, 2, 2), 2, 0.36, 0.81, 0.50, 0.25),
    ("mobilenetv2_1.0", 17, (3, 2, 3), 2, 1.10, 0.84, 0.45, 0.20),
    ("mobilenetv2_1.4", 17, (3, 2, 3), 2, 1.40, 0.86, 0.45, 0.20),
    ("inceptionv3", 11, (4, 3, 4), 3, 3.50, 0.88, 0.06, 0.18),
    ("resnet50", 16, (3, 3, 3), 3, 2.60, 0.87, 0.06, 0.18),
    ("densenet121", 54, (2, 2, 2), 3, 4.80, 0.89, 0.06, 0.15),
]

OVERHEAD = 1.05  # per-layer instrumentation inflates the layer sum by 5%
TRUTH_EXPONENT = 1.05  # mild nonlinearity of true TRN latency vs retained share
NOISE = 0.02
DEVICE = "jetson-xavier-sim"


def build_network(rng, name, blocks, cycle, stem, l0, stem_share):
    layers = []
    boundaries = []
    idx = 0
    for b in range(blocks):
        size = cycle[b % len(cycle)]
        boundaries.append(
            {"block_id": f"block{b:02d}", "first_index": idx, "last_index": idx + size - 1}
        )
        for k in range(size):
            layers.append((idx, f"block{b:02d}_conv{k}", "conv", f"block{b:02d}"))
            idx += 1
    for k in range(stem):
        layers.append((idx, f"stem_conv{k}", "conv", None))
        idx += 1

    n = len(layers)
    n_block = n - stem
    wb = rng.uniform(0.5, 1.5, size=n_block)
    ws = rng.uniform(0.5, 1.5, size=stem)
    shares = np.concatenate(
        [(1 - stem_share) * wb / wb.sum(), stem_share * ws / ws.sum()]
    )
    latencies = OVERHEAD * l0 * shares

    records = []
    for (i, lname, kind, block_id), lat in zip(layers, latencies):
        # FLOPs scale superlinearly and params sublinearly with the layer's
        # latency, so no single feature is linear in the target.
        flops = 2e10 * lat**1.2 * rng.uniform(1 - NOISE, 1 + NOISE)
        params = 2e7 * lat**0.5 * rng.uniform(1 - NOISE, 1 + NOISE)
        filt = 1e5 * lat**1.5 * rng.uniform(1 - NOISE, 1 + NOISE)
        records.append(
            {
                "index": i,
                "name": lname,
                "kind": kind,
                "flops": round(flops, 1),
                "params": round(params, 1),
                "filter_size": round(filt, 1),
                "block_id": block_id,
            }
        )
    descriptor = {
        "name": name,
        "head_note": "replaced head: GAP + 2x FC/ReLU + FC/softmax (5 classes)",
        "layers": records,
        "blocks": boundaries,
    }
    profile = {
        "network": name,
        "device": DEVICE,
        "measured_latency_ms": l0,
        "layer_latencies": {str(i): round(float(l), 6) for i, l in enumerate(latencies)},
    }
    return descriptor, profile, latencies


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(20210301)
    truth_rows = []
    accuracy_rows = []
    descriptor_paths = []
    profile_paths = []
    total_candidates = 0

    for name, blocks, cycle, stem, l0, a0, decay, stem_share in NETS:
        descriptor, profile, latencies = build_network(
            rng, name, blocks, cycle, stem, l0, stem_share
        )
        dpath = OUT / f"{name}.descriptor.json"
        ppath = OUT / f"{name}.profile.json"
        dpath.write_text(json.dumps(descriptor, indent=2) + "\n", encoding="utf-8")
        ppath.write_text(json.dumps(profile, indent=2) + "\n", encoding="utf-8")
        descriptor_paths.append(dpath.name)
        profile_paths.append(ppath.name)

        n = len(descriptor["layers"])
        cutpoints = [0] + [
            b["last_index"] + 1
            for b in descriptor["blocks"]
            if b["last_index"] + 1 < n
        ]
        total_candidates += len(cutpoints)
        total = latencies.sum()
        for cp in cutpoints:
            removed_share = latencies[:cp].sum() / total
            truth = l0 * (1.0 - removed_share) ** TRUTH_EXPONENT
            truth_rows.append((name, cp, round(float(truth), 6)))
            layer_frac = cp / n
            acc = a0 * (1.0 - decay * layer_frac**2)
            accuracy_rows.append((name, cp, round(float(acc), 4)))

    with (OUT / "accuracy.csv").open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["network", "cutpoint", "accuracy"])
        w.writerows(accuracy_rows)
    with (OUT / "truth.csv").open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["network", "cutpoint", "latency_ms"])
        w.writerows(truth_rows)

    config = {
        "descriptors": descriptor_paths,
        "profiles": profile_paths,
        "evaluator": {"backend": "table", "table_path": "accuracy.csv"},
        "estimator": "profiler",
        "deadline_ms": 0.9,
        "granularity": "blockwise",
        "output_dir": "out",
        "truth_path": "truth.csv",
        "model_path": "out/model.json",
        "unit_hours": 183 / 148,
        "training": {"epsilon": 0.001, "folds": 10, "train_fraction": 0.2},
    }
    (OUT / "config.json").write_text(
        json.dumps(config, indent=2) + "\n", encoding="utf-8"
    )
    print(f"wrote fixtures for {len(NETS)} networks, {total_candidates} blockwise candidates")


if __name__ == "__main__":
    main()
