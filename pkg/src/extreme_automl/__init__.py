"""Ensembles of extreme learning machines with automated hyperparameter search.

Hidden layers are drawn from seeded generators and trained by a single
regularized least-squares solve; an ensemble of independently seeded members
averages raw scores. Hyperparameters (neuron count, regularization strength)
come from a fast or accurate grid scored by internal cross-validation.
"""

from .data import (
    AugmentationSpec,
    FeatureEncoder,
    FoldPlan,
    LabelCodec,
    ScalerStats,
    TableSchema,
    augment_duplicate_noise,
    encode_targets,
    kfold_split,
    load_csv,
    one_hot_encode,
    standardize_apply,
    standardize_fit,
    standardize_invert,
)
from .elm import ElmConfig, ElmModel, hidden_map, init_hidden_layer, predict_elm, train_elm
from .ensemble import (
    EnsembleModel,
    derive_member_seed,
    predict_labels,
    predict_regression,
    predict_scores,
    train_ensemble,
)
from .estimators import ExtremeAutoMLClassifier, ExtremeAutoMLRegressor
from .metrics import (
    ClassificationReport,
    ConfusionMatrix,
    RegressionReport,
    accuracy,
    confusion_matrix,
    f1_per_class,
    jaccard_per_class,
    jaccard_variance,
    pearson_r,
    rmse,
)
from .persistence import load_model, save_model
from .search import (
    Candidate,
    CandidateResult,
    SelectionReport,
    build_grid,
    evaluate_candidate,
    evaluate_grid,
    fit_automl,
    select_best,
)
from .solvers import pseudoinverse_solve, ridge_solve

__version__ = "0.1.0"

__all__ = [
    "AugmentationSpec",
    "Candidate",
    "CandidateResult",
    "ClassificationReport",
    "ConfusionMatrix",
    "ElmConfig",
    "ElmModel",
    "EnsembleModel",
    "ExtremeAutoMLClassifier",
    "ExtremeAutoMLRegressor",
    "FeatureEncoder",
    "FoldPlan",
    "LabelCodec",
    "RegressionReport",
    "ScalerStats",
    "SelectionReport",
    "TableSchema",
    "accuracy",
    "augment_duplicate_noise",
    "build_grid",
    "confusion_matrix",
    "derive_member_seed",
    "encode_targets",
    "evaluate_candidate",
    "evaluate_grid",
    "f1_per_class",
    "fit_automl",
    "hidden_map",
    "init_hidden_layer",
    "jaccard_per_class",
    "jaccard_variance",
    "kfold_split",
    "load_csv",
    "load_model",
    "one_hot_encode",
    "pearson_r",
    "predict_elm",
    "predict_labels",
    "predict_regression",
    "predict_scores",
    "pseudoinverse_solve",
    "ridge_solve",
    "rmse",
    "save_model",
    "select_best",
    "standardize_apply",
    "standardize_fit",
    "standardize_invert",
    "train_elm",
    "train_ensemble",
]
