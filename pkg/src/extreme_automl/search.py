"""Automated hyperparameter selection for ELM ensembles.

A fast or accurate grid over (neurons, alpha) is scored by seeded inner
cross-validation with one ELM per fold, the best candidate is picked under a
documented tie-break, and the final ensemble is trained on the full sample
with the chosen configuration.
"""

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .data import encode_targets, kfold_split, standardize_apply, standardize_fit
from .elm import ElmConfig, get_activation, hidden_map, init_hidden_layer, predict_elm, train_elm
from .ensemble import (
    DEFAULT_ENSEMBLE_SIZE,
    EnsembleModel,
    derive_member_seed,
    train_ensemble,
)
from .solvers import _gram_solve, _ridge_svd, pseudoinverse_solve
from .validation import as_float_matrix, check_same_rows, check_task

SEARCH_MODES = ("fast", "accurate")

# (neuron axis points, alpha axis points); the accurate grid has 10x the
# candidates of the fast grid for every data shape.
_MODE_AXES = {"fast": (5, 4), "accurate": (20, 10)}

NEURONS_MIN = 16
NEURONS_MAX = 1024
NEURONS_TRAIN_FRACTION = 0.8
ALPHA_MIN = 1e-8
ALPHA_MAX = 1e2


def _check_mode(mode):
    if mode not in SEARCH_MODES:
        raise ValueError(f"mode must be one of {SEARCH_MODES}, got {mode!r}")


@dataclass(frozen=True)
class Candidate:
    neurons: int
    alpha: float

    def to_dict(self):
        return {"neurons": self.neurons, "alpha": self.alpha}


@dataclass(frozen=True)
class CandidateResult:
    candidate: Candidate
    fold_scores: tuple
    mean_score: float
    fit_seconds: float

    def to_dict(self):
        return {
            "candidate": self.candidate.to_dict(),
            "fold_scores": list(self.fold_scores),
            "mean_score": self.mean_score,
            "fit_seconds": self.fit_seconds,
        }


@dataclass(frozen=True)
class SelectionReport:
    mode: str
    grid: tuple
    results: tuple
    chosen: Candidate
    total_seconds: float
    search_seconds: float
    final_fit_seconds: float

    def to_dict(self):
        return {
            "mode": self.mode,
            "grid": [c.to_dict() for c in self.grid],
            "results": [r.to_dict() for r in self.results],
            "chosen": self.chosen.to_dict(),
            "total_seconds": self.total_seconds,
            "search_seconds": self.search_seconds,
            "final_fit_seconds": self.final_fit_seconds,
        }


def _log_spaced_ints(lo, hi, count):
    """``count`` log-spaced integers in [lo, hi], re-spread to be distinct
    whenever the range holds enough integers (duplicates otherwise)."""
    vals = [int(v) for v in np.clip(np.rint(np.geomspace(lo, hi, count)), lo, hi)]
    if hi - lo + 1 < count:
        return vals
    used = set()
    out = []
    for v in vals:
        w = v
        while w in used and w < hi:
            w += 1
        if w in used:
            w = v
            while w in used:
                w -= 1
        used.add(w)
        out.append(w)
    return sorted(out)


def build_grid(mode, n_train, n_features):
    """Candidate grid for one data shape.

    Neuron counts are log-spaced integers between 16 and
    ``min(1024, floor(0.8 * n_train))`` (clamped so the bounds stay ordered);
    alphas are log-spaced between 1e-8 and 1e2 inclusive. Fast mode emits
    5 x 4 = 20 candidates, accurate 20 x 10 = 200, in neuron-major order.
    """
    _check_mode(mode)
    if n_train < 2:
        raise ValueError(f"need at least 2 training rows to build a grid, got {n_train}")
    n_neuron_pts, n_alpha_pts = _MODE_AXES[mode]
    n_max = max(1, min(NEURONS_MAX, int(NEURONS_TRAIN_FRACTION * n_train)))
    n_min = min(NEURONS_MIN, n_max)
    neuron_counts = _log_spaced_ints(n_min, n_max, n_neuron_pts)
    alphas = [float(a) for a in np.geomspace(ALPHA_MIN, ALPHA_MAX, n_alpha_pts)]
    return [Candidate(m, a) for m in neuron_counts for a in alphas]


def _fold_score(task, y_true, y_pred):
    if task == "classification":
        return float(np.mean(np.argmax(y_pred, axis=1) == np.argmax(y_true, axis=1)))
    return -float(np.sqrt(np.mean((y_pred - y_true) ** 2)))


def _ridge_from_gram(h, y, gram, rhs, alpha):
    """Same solve path as ridge_solve, reusing a precomputed Gram matrix."""
    if alpha == 0:
        return pseudoinverse_solve(h, y)
    if gram is not None:
        beta = _gram_solve(gram, rhs, alpha)
        if beta is not None:
            return beta
    return _ridge_svd(h, y, alpha)


def evaluate_candidate(
    x,
    y,
    candidate,
    task,
    inner_folds,
    base_seed,
    weight_scale=1.0,
    activation="tanh",
):
    """Score one (neurons, alpha) candidate by seeded inner cross-validation.

    One single ELM per fold (not a full ensemble) is trained on the fold's
    training part; classification folds score accuracy, regression folds score
    negative RMSE. Fold membership depends only on ``(n, inner_folds,
    base_seed)`` and the fold-f ELM seed is ``derive_member_seed(base_seed,
    f)``, so results are fully reproducible.
    """
    x = as_float_matrix(x, "x")
    y = as_float_matrix(y, "y")
    check_same_rows(x, y, "x", "y")
    check_task(task)
    if inner_folds < 2:
        raise ValueError(f"inner_folds must be >= 2, got {inner_folds}")
    if x.shape[0] < inner_folds:
        raise ValueError(
            f"need at least as many rows as folds: {x.shape[0]} rows, {inner_folds} folds"
        )
    plan = kfold_split(x.shape[0], inner_folds, base_seed)
    start = time.perf_counter()
    scores = []
    for fold in range(inner_folds):
        tr = plan.train_indices(fold)
        va = plan.test_indices(fold)
        config = ElmConfig(
            neurons=candidate.neurons,
            alpha=candidate.alpha,
            activation=activation,
            weight_scale=weight_scale,
            seed=derive_member_seed(base_seed, fold),
        )
        model = train_elm(x[tr], y[tr], config)
        scores.append(_fold_score(task, y[va], predict_elm(model, x[va])))
    elapsed = time.perf_counter() - start
    return CandidateResult(candidate, tuple(scores), float(np.mean(scores)), elapsed)


def _evaluate_neuron_group(x, y, folds, neurons, alphas, task, base_seed, weight_scale, activation):
    """All-alpha scores for one neuron count, sharing the per-fold hidden maps.

    Bitwise-equal to calling evaluate_candidate per (neurons, alpha): the
    hidden layer seed ignores alpha, so weights, hidden responses, and Gram
    matrices are identical, and the solve goes through the same code path.
    """
    fold_scores = {a: [] for a in alphas}
    solve_seconds = {a: 0.0 for a in alphas}
    shared_seconds = 0.0
    for fold, (tr, va) in enumerate(folds):
        t0 = time.perf_counter()
        config = ElmConfig(
            neurons=neurons,
            alpha=0.0,
            activation=activation,
            weight_scale=weight_scale,
            seed=derive_member_seed(base_seed, fold),
        )
        weights, biases = init_hidden_layer(config, x.shape[1])
        h_tr = hidden_map(x[tr], weights, biases, activation)
        h_va = hidden_map(x[va], weights, biases, activation)
        y_tr = y[tr]
        y_va = y[va]
        if neurons <= h_tr.shape[0]:
            gram = h_tr.T @ h_tr
            rhs = h_tr.T @ y_tr
        else:
            gram = rhs = None
        shared_seconds += time.perf_counter() - t0
        for alpha in alphas:
            t1 = time.perf_counter()
            beta = _ridge_from_gram(h_tr, y_tr, gram, rhs, alpha)
            fold_scores[alpha].append(_fold_score(task, y_va, h_va @ beta))
            solve_seconds[alpha] += time.perf_counter() - t1
    amortized = shared_seconds / len(alphas)
    return {
        alpha: (tuple(fold_scores[alpha]), solve_seconds[alpha] + amortized)
        for alpha in alphas
    }


def _resolve_threads(n_threads):
    if n_threads is None:
        return os.cpu_count() or 1
    if n_threads < 1:
        raise ValueError(f"n_threads must be >= 1, got {n_threads}")
    return n_threads


def evaluate_grid(
    x,
    y,
    grid,
    task,
    inner_folds,
    base_seed,
    weight_scale=1.0,
    activation="tanh",
    n_threads=None,
):
    """Evaluate every grid candidate; results come back in grid order.

    Candidates sharing a neuron count reuse one hidden map per fold (the seed
    does not depend on alpha), which keeps the accurate grid tractable. Scores
    are identical to per-candidate evaluate_candidate calls, and the outcome
    does not depend on thread scheduling.
    """
    x = as_float_matrix(x, "x")
    y = as_float_matrix(y, "y")
    check_same_rows(x, y, "x", "y")
    check_task(task)
    if not grid:
        raise ValueError("grid must not be empty")
    if inner_folds < 2 or x.shape[0] < inner_folds:
        raise ValueError(
            f"need 2 <= inner_folds <= rows, got inner_folds={inner_folds}, rows={x.shape[0]}"
        )
    plan = kfold_split(x.shape[0], inner_folds, base_seed)
    folds = [(plan.train_indices(f), plan.test_indices(f)) for f in range(inner_folds)]

    groups = {}
    for candidate in grid:
        groups.setdefault(candidate.neurons, [])
        if candidate.alpha not in groups[candidate.neurons]:
            groups[candidate.neurons].append(candidate.alpha)

    def run_group(item):
        neurons, alphas = item
        return neurons, _evaluate_neuron_group(
            x, y, folds, neurons, alphas, task, base_seed, weight_scale, activation
        )

    n_threads = _resolve_threads(n_threads)
    if n_threads > 1 and len(groups) > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            scored = dict(pool.map(run_group, groups.items()))
    else:
        scored = dict(map(run_group, groups.items()))

    results = []
    for candidate in grid:
        fold_scores, seconds = scored[candidate.neurons][candidate.alpha]
        results.append(
            CandidateResult(candidate, fold_scores, float(np.mean(fold_scores)), seconds)
        )
    return results


def select_best(results, task):
    """The candidate with maximal mean score.

    Ties break toward fewer neurons, then larger alpha, then earlier grid
    order.
    """
    check_task(task)
    if not results:
        raise ValueError("cannot select from an empty result list")
    best = max(
        enumerate(results),
        key=lambda item: (
            item[1].mean_score,
            -item[1].candidate.neurons,
            item[1].candidate.alpha,
            -item[0],
        ),
    )
    return best[1].candidate


def fit_automl(
    x_raw,
    y_raw,
    task,
    mode="fast",
    ensemble_size=DEFAULT_ENSEMBLE_SIZE,
    seed=0,
    inner_folds=5,
    weight_scale=1.0,
    activation="tanh",
    n_threads=None,
    scaler_provenance="training-data",
):
    """Grid-search hyperparameters and train the final ensemble.

    Features are standardized with statistics fit on ``x_raw`` only, targets
    are encoded (one-hot for classification), every grid candidate is scored
    by inner cross-validation (``inner_folds``, capped at the sample count),
    and the winning configuration is used to train an ``ensemble_size``-member
    ensemble on all of ``x_raw``. Deterministic for fixed arguments.

    Returns
    -------
    (model, report) : (EnsembleModel, SelectionReport)
    """
    t_start = time.perf_counter()
    check_task(task)
    _check_mode(mode)
    get_activation(activation)
    x = as_float_matrix(x_raw, "features")
    n = x.shape[0]
    if n < 2:
        raise ValueError(f"need at least 2 training rows, got {n}")
    if x.shape[1] < 1:
        raise ValueError("need at least one feature column")
    if len(y_raw) != n:
        raise ValueError(f"got {n} feature rows but {len(y_raw)} targets")

    scaler = standardize_fit(x, provenance=scaler_provenance)
    xs = standardize_apply(x, scaler)
    if task == "classification":
        y_mat, codec = encode_targets(y_raw, task)
    else:
        values, codec = encode_targets(y_raw, task)
        y_mat = values.reshape(-1, 1)

    grid = build_grid(mode, n, xs.shape[1])
    folds = min(inner_folds, n)

    t_search = time.perf_counter()
    results = evaluate_grid(
        xs,
        y_mat,
        grid,
        task,
        folds,
        seed,
        weight_scale=weight_scale,
        activation=activation,
        n_threads=n_threads,
    )
    search_seconds = time.perf_counter() - t_search

    chosen = select_best(results, task)
    config = ElmConfig(
        neurons=chosen.neurons,
        alpha=chosen.alpha,
        activation=activation,
        weight_scale=weight_scale,
        seed=seed,
    )
    t_fit = time.perf_counter()
    members = train_ensemble(xs, y_mat, config, ensemble_size, seed, n_threads=n_threads)
    final_fit_seconds = time.perf_counter() - t_fit

    model = EnsembleModel(
        members=members,
        scaler=scaler,
        task=task,
        codec=codec,
        chosen_config=config,
        base_seed=seed,
        mode=mode,
    )
    report = SelectionReport(
        mode=mode,
        grid=tuple(grid),
        results=tuple(results),
        chosen=chosen,
        total_seconds=time.perf_counter() - t_start,
        search_seconds=search_seconds,
        final_fit_seconds=final_fit_seconds,
    )
    return model, report
