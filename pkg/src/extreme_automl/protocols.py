"""Evaluation protocol runners.

Two protocols cover every workflow: a predefined train/test split and k-fold
cross-validation with optional training-fold augmentation. Both produce run
report dictionaries whose aggregate metrics are recomputable from the
embedded per-fold confusion matrices or prediction vectors.
"""

import numpy as np

from .data import AugmentationSpec, LabelCodec, augment_duplicate_noise, kfold_split
from .ensemble import derive_member_seed, predict_labels, predict_regression
from .metrics import ClassificationReport, ConfusionMatrix, RegressionReport, confusion_matrix
from .search import fit_automl
from .validation import check_task


def _fold_fit_seed(base_seed, fold):
    return derive_member_seed(base_seed, 2 * fold)


def _fold_augment_seed(base_seed, fold):
    return derive_member_seed(base_seed, 2 * fold + 1)


def _classification_fold_report(y_true_idx, y_pred_idx, k):
    cm = confusion_matrix(y_true_idx, y_pred_idx, k)
    return cm, ClassificationReport.from_confusion(cm)


def run_holdout(
    x_train,
    y_train,
    x_test,
    y_test,
    task,
    mode="fast",
    ensemble_size=7,
    seed=0,
    n_threads=None,
    dataset_id="holdout",
):
    """Fit on the training split, evaluate on the test split.

    Returns (model, report). ``training_seconds`` covers the fit only.
    """
    check_task(task)
    model, selection = fit_automl(
        x_train,
        y_train,
        task,
        mode=mode,
        ensemble_size=ensemble_size,
        seed=seed,
        n_threads=n_threads,
        scaler_provenance=f"{dataset_id}:train",
    )
    report = {
        "dataset": dataset_id,
        "protocol": "predefined-split",
        "mode": mode,
        "seed": seed,
        "ensemble_size": ensemble_size,
        "training_seconds": selection.total_seconds,
        "selection": selection.to_dict(),
    }
    if task == "classification":
        codec = LabelCodec(tuple(sorted(set(y_train) | set(y_test))))
        predicted = predict_labels(model, x_test)
        y_true_idx = [codec.index_of(label) for label in y_test]
        y_pred_idx = [codec.index_of(label) for label in predicted]
        cm, agg = _classification_fold_report(y_true_idx, y_pred_idx, codec.n_classes)
        report["classes"] = list(codec.classes)
        report["per_fold"] = [{"confusion_matrix": cm.counts.tolist()}]
        report["aggregate"] = agg.to_dict()
    else:
        predicted = predict_regression(model, x_test)
        agg = RegressionReport.from_predictions(np.asarray(y_test, dtype=np.float64), predicted)
        report["per_fold"] = [
            {
                "y_true": [float(v) for v in y_test],
                "y_pred": [float(v) for v in predicted],
            }
        ]
        report["aggregate"] = agg.to_dict()
    return model, report


def run_cross_validation(
    x,
    y,
    task,
    mode="fast",
    folds=5,
    augment=False,
    augmentation=AugmentationSpec(),
    ensemble_size=7,
    seed=0,
    n_threads=None,
    dataset_id="cv",
):
    """k-fold cross-validation; every sample is predicted exactly once.

    With ``augment``, each fold's training part is duplicated with bounded
    noise before fitting; test parts are never touched. Classification pools
    the confusion matrix over all folds; regression computes the correlation
    on the pooled whole-dataset predictions.
    """
    check_task(task)
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[0]
    plan = kfold_split(n, folds, seed)

    codec = None
    if task == "classification":
        codec = LabelCodec(tuple(sorted(set(y))))
        y_arr = np.asarray(y, dtype=object)
        pooled_pred_idx = np.full(n, -1, dtype=np.int64)
        pooled_true_idx = np.asarray([codec.index_of(label) for label in y], dtype=np.int64)
    else:
        y_arr = np.asarray(y, dtype=np.float64)
        pooled_pred = np.zeros(n)

    protocol = f"augmented-kfold({folds})" if augment else f"kfold({folds})"
    per_fold = []
    training_seconds = 0.0
    for fold in range(folds):
        tr = plan.train_indices(fold)
        te = plan.test_indices(fold)
        x_tr, y_tr = x[tr], y_arr[tr]
        if augment:
            x_tr, y_tr = augment_duplicate_noise(
                x_tr, y_tr, augmentation, seed=_fold_augment_seed(seed, fold)
            )
        model, selection = fit_automl(
            x_tr,
            list(y_tr),
            task,
            mode=mode,
            ensemble_size=ensemble_size,
            seed=_fold_fit_seed(seed, fold),
            n_threads=n_threads,
            scaler_provenance=f"{dataset_id}:fold-{fold}-train",
        )
        assert model.scaler.provenance == f"{dataset_id}:fold-{fold}-train"
        training_seconds += selection.total_seconds
        entry = {
            "fold": fold,
            "test_indices": te.tolist(),
            "selection": selection.to_dict(),
        }
        if task == "classification":
            predicted = predict_labels(model, x[te])
            pred_idx = np.asarray([codec.index_of(label) for label in predicted])
            pooled_pred_idx[te] = pred_idx
            cm, fold_report = _classification_fold_report(
                pooled_true_idx[te], pred_idx, codec.n_classes
            )
            entry["confusion_matrix"] = cm.counts.tolist()
            entry["metrics"] = fold_report.to_dict()
        else:
            predicted = predict_regression(model, x[te])
            pooled_pred[te] = predicted
            entry["y_true"] = y_arr[te].tolist()
            entry["y_pred"] = predicted.tolist()
            entry["metrics"] = RegressionReport.from_predictions(y_arr[te], predicted).to_dict()
        per_fold.append(entry)

    report = {
        "dataset": dataset_id,
        "protocol": protocol,
        "mode": mode,
        "seed": seed,
        "ensemble_size": ensemble_size,
        "folds": folds,
        "training_seconds": training_seconds,
        "per_fold": per_fold,
    }
    if task == "classification":
        pooled = ConfusionMatrix(
            np.sum([np.asarray(e["confusion_matrix"]) for e in per_fold], axis=0)
        )
        report["classes"] = list(codec.classes)
        report["aggregate"] = ClassificationReport.from_confusion(pooled).to_dict()
    else:
        report["aggregate"] = RegressionReport.from_predictions(y_arr, pooled_pred).to_dict()
        report["pooled_predictions"] = pooled_pred.tolist()
    return report
