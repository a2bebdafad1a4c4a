"""Epsilon-SVR latency regressor with RBF and linear kernels.

Features are standardized to zero mean / unit variance before any kernel
evaluation; zero-variance components keep a standard deviation of 1, which
makes them inert. Raw feature magnitudes (FLOP counts around 1e9 against a
regularization constant of 1e6) are numerically unusable otherwise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from ._solver import solve

DEFAULT_EPSILON = 0.01  # ms; an order of magnitude below typical estimator error
MAX_ITER = 100_000
# Absolute KKT-gap tolerance cap. The relative rule 1e-6*C alone is far too
# loose at C=1e6 (a gap of 1.0 ms), so the cap keeps fits tight there.
TOL_CAP = 1e-4


class SvrError(ValueError):
    pass


def solver_tolerance(c: float) -> float:
    return max(min(1e-6 * c, TOL_CAP), 1e-12)


@dataclass(frozen=True)
class FeatureScaler:
    mean: tuple[float, ...]
    std: tuple[float, ...]

    def __post_init__(self):
        if any(s <= 0 for s in self.std):
            raise SvrError("scaler std components must be > 0")

    @classmethod
    def fit(cls, x: np.ndarray) -> "FeatureScaler":
        mean = x.mean(axis=0)
        std = x.std(axis=0)
        std = np.where(std > 0, std, 1.0)  # degenerate components become inert
        return cls(mean=tuple(mean.tolist()), std=tuple(std.tolist()))

    def transform(self, x: np.ndarray) -> np.ndarray:
        return (np.asarray(x, dtype=np.float64) - np.asarray(self.mean)) / np.asarray(self.std)


def rbf_kernel(a: np.ndarray, b: np.ndarray, gamma: float) -> np.ndarray:
    a = np.atleast_2d(a)
    b = np.atleast_2d(b)
    sq = (
        (a * a).sum(axis=1)[:, None]
        + (b * b).sum(axis=1)[None, :]
        - 2.0 * a @ b.T
    )
    return np.exp(-gamma * np.maximum(sq, 0.0))


def linear_kernel(a: np.ndarray, b: np.ndarray, gamma: float = 0.0) -> np.ndarray:
    return np.atleast_2d(a) @ np.atleast_2d(b).T


_KERNELS = {"rbf": rbf_kernel, "linear": linear_kernel}


@dataclass(frozen=True)
class SvrModel:
    kernel: str
    gamma: float
    c: float
    epsilon: float
    bias: float
    scaler: FeatureScaler
    support_vectors: tuple[tuple[float, ...], ...]  # already scaled
    dual_coefficients: tuple[float, ...]
    feature_min: tuple[float, ...] | None = None  # raw-feature training hull
    feature_max: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kernel not in _KERNELS:
            raise SvrError(f"unknown kernel {self.kernel!r}")
        if len(self.support_vectors) != len(self.dual_coefficients):
            raise SvrError("support vector / coefficient length mismatch")
        if any(abs(a) > self.c * (1 + 1e-9) for a in self.dual_coefficients):
            raise SvrError("dual coefficient violates the box constraint")
        if abs(sum(self.dual_coefficients)) > 1e-6 * self.c + 1e-12:
            raise SvrError("dual coefficients violate the equality constraint")

    def decision(self, raw_features: np.ndarray) -> np.ndarray:
        """Unclamped predictions for raw (unscaled) feature rows."""
        x = self.scaler.transform(np.atleast_2d(raw_features))
        if not self.support_vectors:
            return np.full(x.shape[0], self.bias)
        sv = np.asarray(self.support_vectors)
        k = _KERNELS[self.kernel](x, sv, self.gamma)
        return k @ np.asarray(self.dual_coefficients) + self.bias

    def outside_hull(self, raw_features: Sequence[float]) -> bool:
        """True when any component lies outside the training range."""
        if self.feature_min is None or self.feature_max is None:
            return False
        return any(
            v < lo or v > hi
            for v, lo, hi in zip(raw_features, self.feature_min, self.feature_max)
        )


def train_svr(
    x: np.ndarray,
    y: np.ndarray,
    gamma: float = 0.1,
    c: float = 1e6,
    epsilon: float = DEFAULT_EPSILON,
    kernel: str = "rbf",
) -> SvrModel:
    """Fit an epsilon-SVR on raw feature rows ``x`` against targets ``y``."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.shape[0] != y.shape[0]:
        raise SvrError("feature/target length mismatch")
    if x.shape[0] < 2:
        raise SvrError("need at least 2 training samples")
    if kernel == "rbf" and gamma <= 0:
        raise SvrError("gamma must be > 0 for the rbf kernel")
    if c <= 0 or epsilon < 0:
        raise SvrError("require c > 0 and epsilon >= 0")
    if kernel not in _KERNELS:
        raise SvrError(f"unknown kernel {kernel!r}")

    scaler = FeatureScaler.fit(x)
    xs = scaler.transform(x)
    k = _KERNELS[kernel](xs, xs, gamma)
    beta, bias, _, _ = solve(k, y, c, epsilon, solver_tolerance(c), MAX_ITER)

    keep = np.abs(beta) > 1e-12 * max(c, 1.0)
    # Re-zero the retained coefficients' tiny imbalance so the equality
    # constraint survives the support-vector cut exactly.
    coeffs = beta[keep]
    if coeffs.size and abs(coeffs.sum()) > 0:
        drop = beta[~keep].sum()
        coeffs = coeffs + drop / coeffs.size
    return SvrModel(
        kernel=kernel,
        gamma=gamma,
        c=c,
        epsilon=epsilon,
        bias=bias,
        scaler=scaler,
        support_vectors=tuple(map(tuple, xs[keep].tolist())),
        dual_coefficients=tuple(coeffs.tolist()),
        feature_min=tuple(x.min(axis=0).tolist()),
        feature_max=tuple(x.max(axis=0).tolist()),
    )


def model_to_json(model: SvrModel) -> dict:
    return {
        "kernel": model.kernel,
        "gamma": model.gamma,
        "c": model.c,
        "epsilon": model.epsilon,
        "bias": model.bias,
        "scaler": {"mean": list(model.scaler.mean), "std": list(model.scaler.std)},
        "support_vectors": [list(sv) for sv in model.support_vectors],
        "dual_coefficients": list(model.dual_coefficients),
        "feature_min": list(model.feature_min) if model.feature_min else None,
        "feature_max": list(model.feature_max) if model.feature_max else None,
    }


def model_from_json(obj: dict) -> SvrModel:
    try:
        return SvrModel(
            kernel=obj["kernel"],
            gamma=float(obj["gamma"]),
            c=float(obj["c"]),
            epsilon=float(obj["epsilon"]),
            bias=float(obj["bias"]),
            scaler=FeatureScaler(
                mean=tuple(obj["scaler"]["mean"]), std=tuple(obj["scaler"]["std"])
            ),
            support_vectors=tuple(map(tuple, obj["support_vectors"])),
            dual_coefficients=tuple(obj["dual_coefficients"]),
            feature_min=tuple(obj["feature_min"]) if obj.get("feature_min") else None,
            feature_max=tuple(obj["feature_max"]) if obj.get("feature_max") else None,
        )
    except KeyError as exc:
        raise SvrError(f"model file missing field {exc}") from exc


def save_model(model: SvrModel, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(model_to_json(model), indent=2) + "\n", encoding="utf-8"
    )


def load_model(path: str | Path) -> SvrModel:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SvrError(f"cannot read model {path}: {exc}") from exc
    return model_from_json(obj)
