"""Scikit-learn style estimators wrapping the AutoML trainer.

Both estimators run the full grid search on ``fit`` and keep the selection
report around for inspection. They compose with the usual ecosystem pieces
(`clone`, pipelines, cross-validation) through ``get_params``/``set_params``.
"""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .ensemble import predict_labels, predict_regression, predict_scores
from .search import fit_automl

# Class indices are encoded as fixed-width strings so the codec's sorted
# order matches the numeric order.
_LABEL_FMT = "{:06d}"


class _BaseExtremeAutoML(BaseEstimator):
    def __init__(
        self,
        mode="fast",
        ensemble_size=7,
        seed=0,
        inner_folds=5,
        weight_scale=1.0,
        activation="tanh",
        n_threads=None,
    ):
        self.mode = mode
        self.ensemble_size = ensemble_size
        self.seed = seed
        self.inner_folds = inner_folds
        self.weight_scale = weight_scale
        self.activation = activation
        self.n_threads = n_threads

    def _fit_kwargs(self):
        return dict(
            mode=self.mode,
            ensemble_size=self.ensemble_size,
            seed=self.seed,
            inner_folds=self.inner_folds,
            weight_scale=self.weight_scale,
            activation=self.activation,
            n_threads=self.n_threads,
        )


class ExtremeAutoMLClassifier(_BaseExtremeAutoML, ClassifierMixin):
    """Grid-searched ensemble of extreme learning machines for classification.

    Parameters
    ----------
    mode : {'fast', 'accurate'}, default='fast'
        Grid density; the accurate grid scores 10x the candidates.
    ensemble_size : int, default=7
        Number of independently seeded members in the final ensemble.
    seed : int, default=0
        Base seed; fixes fold assignment, member initialization, and
        therefore every prediction.
    inner_folds : int, default=5
        Folds of the internal cross-validation used for candidate scoring.
    weight_scale : float, default=1.0
        Half-width of the uniform hidden-weight distribution.
    activation : str, default='tanh'
        Hidden-layer activation name.
    n_threads : int or None, default=None
        Worker threads for candidate evaluation and member training
        (None: machine parallelism). Never changes numerical results.

    Attributes
    ----------
    classes_ : ndarray
        Sorted unique class labels seen during fit.
    model_ : EnsembleModel
        The trained ensemble.
    report_ : SelectionReport
        Grid, per-candidate scores, and the chosen configuration.
    """

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=np.float64)
        classes, y_idx = np.unique(y, return_inverse=True)
        if classes.shape[0] < 2:
            raise ValueError("classifier needs at least 2 classes in y")
        labels = [_LABEL_FMT.format(i) for i in y_idx]
        self.model_, self.report_ = fit_automl(
            X, labels, "classification", **self._fit_kwargs()
        )
        self.classes_ = classes
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "model_")
        X = check_array(X, dtype=np.float64)
        indices = [int(label) for label in predict_labels(self.model_, X)]
        return self.classes_[indices]

    def predict_scores(self, X):
        """Averaged raw member scores, columns aligned with ``classes_``."""
        check_is_fitted(self, "model_")
        X = check_array(X, dtype=np.float64)
        return predict_scores(self.model_, X)


class ExtremeAutoMLRegressor(_BaseExtremeAutoML, RegressorMixin):
    """Grid-searched ensemble of extreme learning machines for regression.

    See :class:`ExtremeAutoMLClassifier` for the shared parameters. The
    default ``score`` is the coefficient of determination from
    ``RegressorMixin``.
    """

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=np.float64, y_numeric=True)
        self.model_, self.report_ = fit_automl(
            X, np.asarray(y, dtype=np.float64), "regression", **self._fit_kwargs()
        )
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "model_")
        X = check_array(X, dtype=np.float64)
        return predict_regression(self.model_, X)
