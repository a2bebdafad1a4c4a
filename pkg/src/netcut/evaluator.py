"""Pluggable accuracy oracle for trimmed networks.

Two backends stand in for the retrain-and-evaluate step:

* ``table`` looks accuracies up in a CSV of pre-recorded measurements
  (``network,cutpoint,accuracy``), optionally interpolating linearly
  between the two nearest recorded cutpoints of the same network.
* ``external`` delegates to a user-supplied trainer command. The trimmed
  network spec is written to the child's stdin as JSON; the child prints a
  single decimal accuracy in [0, 1] and exits 0.
"""

from __future__ import annotations

import csv
import json
import shlex
import subprocess
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .metrics import AccuracyScore
from .netmodel import TrimmedNetworkSpec, trn_to_json


class EvaluatorError(RuntimeError):
    """Base class for evaluation failures; message carries the TRN identity."""


class MissingAccuracyError(EvaluatorError):
    pass


class ExternalCommandError(EvaluatorError):
    pass


@dataclass(frozen=True)
class AccuracyTable:
    entries: Mapping[tuple[str, int], float]
    provenance: str = ""

    def __post_init__(self):
        for (net, cp), acc in self.entries.items():
            if not 0.0 <= acc <= 1.0:
                raise ValueError(
                    f"accuracy {acc} for ({net}, {cp}) outside [0, 1]"
                )

    def cutpoints(self, network: str) -> list[int]:
        return sorted(cp for (net, cp) in self.entries if net == network)


@dataclass(frozen=True)
class EvaluatorConfig:
    backend: str  # "table" | "external"
    table_path: str | None = None
    interpolate: bool = False
    command: str | None = None
    timeout_s: float = 60.0
    jobs: int = 1

    def __post_init__(self):
        if self.backend == "table":
            if not self.table_path:
                raise ValueError("table backend requires table_path")
            if self.command:
                raise ValueError("exactly one backend may be configured")
        elif self.backend == "external":
            if not self.command:
                raise ValueError("external backend requires a command")
            if self.table_path:
                raise ValueError("exactly one backend may be configured")
        else:
            raise ValueError(f"unknown evaluator backend {self.backend!r}")
        if self.timeout_s <= 0:
            raise ValueError("timeout must be > 0")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")


def load_accuracy_table(path: str | Path) -> AccuracyTable:
    """Load a ``network,cutpoint,accuracy`` CSV."""
    path = Path(path)
    entries: dict[tuple[str, int], float] = {}
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                key = (row["network"], int(row["cutpoint"]))
                acc = float(row["accuracy"])
                if key in entries:
                    raise ValueError(f"duplicate accuracy row for {key}")
                if not 0.0 <= acc <= 1.0:
                    raise ValueError(f"accuracy {acc} for {key} outside [0, 1]")
                entries[key] = acc
    except OSError as exc:
        raise ValueError(f"cannot read accuracy table {path}: {exc}") from exc
    except (KeyError, TypeError) as exc:
        raise ValueError(f"bad accuracy row in {path}: {exc}") from exc
    return AccuracyTable(entries=entries, provenance=str(path))


class Evaluator:
    """Resolves TRN accuracies through the configured backend."""

    def __init__(self, config: EvaluatorConfig, table: AccuracyTable | None = None):
        self.config = config
        if config.backend == "table":
            self.table = table if table is not None else load_accuracy_table(config.table_path)
        else:
            self.table = None

    def evaluate(self, trn: TrimmedNetworkSpec) -> AccuracyScore:
        if self.config.backend == "table":
            return self._evaluate_table(trn)
        return self._evaluate_external(trn)

    def evaluate_many(self, trns: Iterable[TrimmedNetworkSpec]) -> list[AccuracyScore]:
        trns = list(trns)
        if self.config.backend == "external" and self.config.jobs > 1:
            with ThreadPoolExecutor(max_workers=self.config.jobs) as pool:
                return list(pool.map(self.evaluate, trns))
        return [self.evaluate(t) for t in trns]

    def _evaluate_table(self, trn: TrimmedNetworkSpec) -> AccuracyScore:
        key = (trn.source, trn.cutpoint)
        entries = self.table.entries
        if key in entries:
            return AccuracyScore(entries[key], source="table")
        if not self.config.interpolate:
            raise MissingAccuracyError(
                f"no recorded accuracy for {trn.label} and interpolation is off"
            )
        cps = self.table.cutpoints(trn.source)
        below = [c for c in cps if c < trn.cutpoint]
        above = [c for c in cps if c > trn.cutpoint]
        if not below or not above:
            raise MissingAccuracyError(
                f"cannot interpolate accuracy for {trn.label}: no surrounding "
                f"recorded cutpoints"
            )
        lo, hi = below[-1], above[0]
        a_lo = entries[(trn.source, lo)]
        a_hi = entries[(trn.source, hi)]
        frac = (trn.cutpoint - lo) / (hi - lo)
        return AccuracyScore(a_lo + frac * (a_hi - a_lo), source="table:interpolated")

    def _evaluate_external(self, trn: TrimmedNetworkSpec) -> AccuracyScore:
        payload = json.dumps(trn_to_json(trn))
        argv = shlex.split(self.config.command)
        try:
            proc = subprocess.run(
                argv,
                input=payload,
                capture_output=True,
                text=True,
                timeout=self.config.timeout_s,
            )
        except subprocess.TimeoutExpired as exc:
            raise ExternalCommandError(
                f"evaluator timed out after {self.config.timeout_s}s for {trn.label}"
            ) from exc
        except OSError as exc:
            raise ExternalCommandError(
                f"cannot run evaluator command for {trn.label}: {exc}"
            ) from exc
        if proc.returncode != 0:
            raise ExternalCommandError(
                f"evaluator exited {proc.returncode} for {trn.label}: "
                f"{proc.stderr.strip()}"
            )
        out = proc.stdout.strip()
        try:
            value = float(out)
        except ValueError as exc:
            raise ExternalCommandError(
                f"evaluator printed unparseable accuracy {out!r} for {trn.label}"
            ) from exc
        if not 0.0 <= value <= 1.0:
            raise ExternalCommandError(
                f"evaluator accuracy {value} outside [0, 1] for {trn.label}"
            )
        return AccuracyScore(value, source="external")


def evaluate(config: EvaluatorConfig, trn: TrimmedNetworkSpec) -> AccuracyScore:
    """One-shot convenience wrapper around :class:`Evaluator`."""
    return Evaluator(config).evaluate(trn)
