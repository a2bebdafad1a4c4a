"""Device-agnostic analytical latency estimation (epsilon-SVR)."""

from ._solver import BACKEND as SMO_BACKEND
from .features import FEATURE_NAMES, FeatureError, FeatureVector, extract_features, load_truth
from .svr import (
    DEFAULT_EPSILON,
    FeatureScaler,
    SvrError,
    SvrModel,
    linear_kernel,
    load_model,
    model_from_json,
    model_to_json,
    rbf_kernel,
    save_model,
    train_svr,
)
from .tuning import (
    DEFAULT_C_GRID,
    DEFAULT_FOLDS,
    DEFAULT_GAMMA_GRID,
    DEFAULT_TRAIN_FRACTION,
    TuningError,
    TuningReport,
    cv_error,
    fold_assignment,
    grid_search_cv,
    relative_error,
    split_train_test,
    tuning_report_to_json,
)

from ..profiles import LatencyEstimate
from ..netmodel import TrimmedNetworkSpec


def predict(model: SvrModel, features: FeatureVector, trn: TrimmedNetworkSpec) -> LatencyEstimate:
    """Predict a TRN's latency; negative raw outputs clamp to zero."""
    value = float(model.decision(features.to_array())[0])
    return LatencyEstimate(max(value, 0.0), "analytical", trn)


__all__ = [
    "SMO_BACKEND",
    "FEATURE_NAMES",
    "FeatureError",
    "FeatureVector",
    "extract_features",
    "load_truth",
    "DEFAULT_EPSILON",
    "FeatureScaler",
    "SvrError",
    "SvrModel",
    "linear_kernel",
    "rbf_kernel",
    "load_model",
    "save_model",
    "model_from_json",
    "model_to_json",
    "train_svr",
    "predict",
    "DEFAULT_C_GRID",
    "DEFAULT_FOLDS",
    "DEFAULT_GAMMA_GRID",
    "DEFAULT_TRAIN_FRACTION",
    "TuningError",
    "TuningReport",
    "cv_error",
    "fold_assignment",
    "grid_search_cv",
    "relative_error",
    "split_train_test",
    "tuning_report_to_json",
]
