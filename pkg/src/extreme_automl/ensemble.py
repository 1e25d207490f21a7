"""Fixed-size ELM ensembles with deterministic member seeding.

Members share every hyperparameter and differ only in their seed, which is
derived from the ensemble's base seed by an integer hash. Raw member scores
are combined by a uniform arithmetic mean before any decoding.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .data import LabelCodec, ScalerStats, standardize_apply
from .elm import ElmConfig, ElmModel, predict_elm, train_elm
from .validation import as_float_matrix, check_task

_MASK64 = (1 << 64) - 1

DEFAULT_ENSEMBLE_SIZE = 7


def derive_member_seed(base_seed, index):
    """Derive a member seed from ``(base_seed, index)``.

    splitmix64-style finalizer applied to ``base_seed ^ index``. The mixing is
    bijective, so for a fixed base seed distinct indices always yield distinct
    seeds.
    """
    z = ((base_seed & _MASK64) ^ (index & _MASK64)) & _MASK64
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def train_ensemble(x, y, config, ensemble_size, base_seed, n_threads=None):
    """Train ``ensemble_size`` ELMs that differ only in their derived seeds.

    Member ``i`` is trained with ``seed = derive_member_seed(base_seed, i)``;
    members are independent, so training may run on a thread pool without
    changing results.
    """
    if ensemble_size < 1:
        raise ValueError(f"ensemble_size must be >= 1, got {ensemble_size}")
    configs = [
        replace(config, seed=derive_member_seed(base_seed, i))
        for i in range(ensemble_size)
    ]
    if n_threads is not None and n_threads > 1 and ensemble_size > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            return list(pool.map(lambda cfg: train_elm(x, y, cfg), configs))
    return [train_elm(x, y, cfg) for cfg in configs]


@dataclass
class EnsembleModel:
    """A trained ensemble plus everything needed to score raw feature rows.

    ``feature_encoder`` is populated when the model was fit from a schema'd
    CSV (so raw tables can be featurized at prediction time) and is None for
    models fit directly from matrices.
    """

    members: list
    scaler: ScalerStats
    task: str
    codec: LabelCodec | None
    chosen_config: ElmConfig
    base_seed: int
    mode: str = "fast"
    feature_encoder: object | None = None

    def __post_init__(self):
        if not self.members:
            raise ValueError("ensemble needs at least one member")
        check_task(self.task)
        first = self.members[0]
        for member in self.members:
            same = (
                member.n_inputs == first.n_inputs
                and member.n_outputs == first.n_outputs
                and member.n_neurons == first.n_neurons
                and member.activation == first.activation
            )
            if not same:
                raise ValueError("ensemble members disagree on shape or activation")
        if self.task == "classification":
            if self.codec is None:
                raise ValueError("classification ensembles need a label codec")
            if self.codec.n_classes != first.n_outputs:
                raise ValueError("codec class count does not match member outputs")
        elif self.codec is not None:
            raise ValueError("regression ensembles must not carry a label codec")

    @property
    def ensemble_size(self):
        return len(self.members)

    @property
    def n_features(self):
        return self.members[0].n_inputs

    @property
    def n_outputs(self):
        return self.members[0].n_outputs


def predict_scores(model, x_raw):
    """Standardize ``x_raw`` with the stored scaler and average member scores."""
    x = as_float_matrix(x_raw, "x")
    if x.shape[1] != model.scaler.n_features:
        raise ValueError(
            f"x has {x.shape[1]} features but the model expects {model.scaler.n_features}"
        )
    xs = standardize_apply(x, model.scaler)
    stacked = np.stack([predict_elm(member, xs) for member in model.members])
    return stacked.mean(axis=0)


def predict_labels(model, x_raw):
    """Per row, the class whose averaged score is maximal (ties: lowest index)."""
    if model.task != "classification":
        raise RuntimeError("model was trained for regression; labels are undefined")
    scores = predict_scores(model, x_raw)
    indices = np.argmax(scores, axis=1)
    return [model.codec.decode(i) for i in indices]


def predict_regression(model, x_raw):
    """The averaged single-column score vector of a regression ensemble."""
    if model.task != "regression":
        raise RuntimeError("model was trained for classification; use predict_labels")
    scores = predict_scores(model, x_raw)
    if scores.shape[1] != 1:
        raise RuntimeError("regression model must have exactly one output column")
    return scores[:, 0]
