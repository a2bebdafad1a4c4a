"""Grid-search hyperparameter tuning with k-fold cross-validation.

Everything is deterministic: samples are sorted by target value and dealt
round-robin into folds, grid cells are scored in (gamma, c) order, and ties
fall to the smallest gamma, then the smallest c.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .svr import DEFAULT_EPSILON, SvrModel, train_svr

DEFAULT_GAMMA_GRID = (1e-3, 1e-2, 1e-1, 1.0, 10.0)
DEFAULT_C_GRID = (1.0, 1e2, 1e4, 1e6)
DEFAULT_FOLDS = 10
DEFAULT_TRAIN_FRACTION = 0.2


class TuningError(ValueError):
    pass


def relative_error(pred: float, truth: float) -> float:
    """Absolute relative error as a percentage; truth must be positive."""
    if truth <= 0:
        raise TuningError(f"truth must be > 0, got {truth}")
    return 100.0 * abs(pred - truth) / truth


@dataclass(frozen=True)
class TuningReport:
    grid: tuple[tuple[float, float], ...]  # (gamma, c) cells in scoring order
    fold_count: int
    cv_errors: tuple[float, ...]  # mean absolute relative error % per cell
    selected: tuple[float, float]
    kernel: str = "rbf"

    def __post_init__(self):
        best = min(self.cv_errors)
        sel_err = self.cv_errors[self.grid.index(self.selected)]
        if sel_err > best:
            raise TuningError("selected cell does not attain the minimum CV error")

    @property
    def selected_error(self) -> float:
        return self.cv_errors[self.grid.index(self.selected)]


def fold_assignment(y: np.ndarray, folds: int) -> list[np.ndarray]:
    """Round-robin fold indices over samples sorted by target value."""
    order = np.argsort(y, kind="stable")
    buckets: list[list[int]] = [[] for _ in range(folds)]
    for pos, idx in enumerate(order):
        buckets[pos % folds].append(int(idx))
    return [np.array(sorted(b), dtype=int) for b in buckets]


def split_train_test(
    y: np.ndarray, train_fraction: float = DEFAULT_TRAIN_FRACTION
) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic split: sort by target, deal every k-th sample to train.

    The default keeps 20% for training and tests on the remaining 80%.
    """
    if not 0.0 < train_fraction < 1.0:
        raise TuningError("train_fraction must be in (0, 1)")
    n = len(y)
    order = np.argsort(y, kind="stable")
    stride = max(int(round(1.0 / train_fraction)), 1)
    train_mask = np.zeros(n, dtype=bool)
    train_mask[order[::stride]] = True
    train = np.flatnonzero(train_mask)
    test = np.flatnonzero(~train_mask)
    if train.size < 2 or test.size == 0:
        raise TuningError("split leaves too few samples on one side")
    return train, test


def cv_error(
    x: np.ndarray,
    y: np.ndarray,
    gamma: float,
    c: float,
    epsilon: float,
    folds: int,
    kernel: str = "rbf",
) -> float:
    """Mean absolute relative CV error (%) for one grid cell."""
    assignment = fold_assignment(y, folds)
    fold_errors = []
    for held in assignment:
        if held.size == 0:
            continue
        mask = np.ones(len(y), dtype=bool)
        mask[held] = False
        if mask.sum() < 2:
            raise TuningError("fold leaves fewer than 2 training samples")
        model = train_svr(x[mask], y[mask], gamma, c, epsilon, kernel)
        preds = model.decision(x[held])
        fold_errors.append(
            float(np.mean([relative_error(p, t) for p, t in zip(preds, y[held])]))
        )
    return float(np.mean(fold_errors))


def grid_search_cv(
    x: np.ndarray,
    y: np.ndarray,
    gamma_grid: Sequence[float] = DEFAULT_GAMMA_GRID,
    c_grid: Sequence[float] = DEFAULT_C_GRID,
    epsilon: float = DEFAULT_EPSILON,
    folds: int = DEFAULT_FOLDS,
    kernel: str = "rbf",
) -> tuple[TuningReport, SvrModel]:
    """Scan the (gamma, c) grid, select by CV error, refit on all data."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    y = np.asarray(y, dtype=np.float64).ravel()
    if folds < 2:
        raise TuningError("need at least 2 folds")
    if folds > len(y):
        raise TuningError(f"{folds} folds exceed {len(y)} samples")
    if not gamma_grid or not c_grid:
        raise TuningError("grids must be non-empty")

    cells = [(g, c) for g in sorted(gamma_grid) for c in sorted(c_grid)]
    errors = [cv_error(x, y, g, c, epsilon, folds, kernel) for g, c in cells]
    best_idx = 0
    for idx in range(1, len(cells)):
        if errors[idx] < errors[best_idx]:
            best_idx = idx  # cells are (gamma, c)-sorted, so ties keep the first
    selected = cells[best_idx]
    report = TuningReport(
        grid=tuple(cells),
        fold_count=folds,
        cv_errors=tuple(errors),
        selected=selected,
        kernel=kernel,
    )
    model = train_svr(x, y, selected[0], selected[1], epsilon, kernel)
    return report, model


def tuning_report_to_json(report: TuningReport) -> dict:
    return {
        "kernel": report.kernel,
        "fold_count": report.fold_count,
        "cells": [
            {"gamma": g, "c": c, "cv_error_pct": e}
            for (g, c), e in zip(report.grid, report.cv_errors)
        ],
        "selected": {
            "gamma": report.selected[0],
            "c": report.selected[1],
            "cv_error_pct": report.selected_error,
        },
    }
