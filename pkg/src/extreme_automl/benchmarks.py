"""Desk-scale benchmark harness.

One suite per published benchmark dataset, each applying its documented
protocol: predefined split for the smartphone activity data, 5-fold
cross-validation (with or without duplicate-and-noise augmentation) for the
rest, and pooled Pearson correlation for the movie-revenue regression. The
harness never downloads anything; it validates user-supplied files (and their
checksums when a manifest is given) and fails with the expected filenames.
The ``synthetic`` suite runs entirely offline on generated data.
"""

import csv
import hashlib
import json
from pathlib import Path

import numpy as np

from .data import one_hot_encode
from .datasets import sine_wave, two_gaussian_blobs
from .metrics import rmse
from .protocols import run_cross_validation, run_holdout

SUITE_NAMES = ("har", "parkinsons", "qsar", "cnae9", "movies", "synthetic")

# Published reference metrics each suite's report is compared against.
SUITE_REFERENCES = {
    "har": {"accuracy": 0.9626},
    "parkinsons": {"accuracy": 0.9233},
    "qsar": {"accuracy": 0.9394},
    "cnae9": {"accuracy": 0.7721},
    "movies": {"pearson_r": 0.82},
    "synthetic": {},
}

_SUITE_FILES = {
    "har": (
        "har/train/X_train.txt",
        "har/train/y_train.txt",
        "har/test/X_test.txt",
        "har/test/y_test.txt",
    ),
    "parkinsons": ("parkinsons/pd_speech_features.csv",),
    "qsar": ("qsar/qsar_oral_toxicity.csv",),
    "cnae9": ("cnae9/CNAE-9.data",),
    "movies": ("movies/tmdb_5000_movies.csv",),
    "synthetic": (),
}

MOVIES_MIN_NAME_COUNT = 8


class MissingDataError(FileNotFoundError):
    """Required benchmark files are absent; the message lists them."""


def expected_files(suite, data_dir):
    return [Path(data_dir) / rel for rel in _SUITE_FILES[suite]]


def _require_files(suite, data_dir):
    paths = expected_files(suite, data_dir)
    missing = [str(p) for p in paths if not p.is_file()]
    if missing:
        raise MissingDataError(
            f"suite {suite!r} needs user-provided data files; missing: {missing}"
        )
    return paths


def verify_manifest(paths, manifest_path):
    """Check sha256 digests for every listed file present in the manifest."""
    with open(manifest_path, "r", encoding="utf-8") as fh:
        manifest = json.load(fh)
    for path in paths:
        digest = manifest.get(path.name)
        if digest is None:
            continue
        actual = hashlib.sha256(path.read_bytes()).hexdigest()
        if actual != digest:
            raise ValueError(
                f"{path}: sha256 {actual} does not match manifest value {digest}"
            )


def _load_har(data_dir):
    train_x, train_y, test_x, test_y = expected_files("har", data_dir)
    x_train = np.loadtxt(train_x)
    y_train = [str(int(v)) for v in np.loadtxt(train_y)]
    x_test = np.loadtxt(test_x)
    y_test = [str(int(v)) for v in np.loadtxt(test_y)]
    return x_train, y_train, x_test, y_test


def _load_parkinsons(data_dir):
    # Two header rows (feature-group names, then column names); integer id
    # column first, binary class label last.
    (path,) = expected_files("parkinsons", data_dir)
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    header = rows[1]
    if header[0].lower() != "id" or header[-1].lower() != "class":
        raise ValueError(f"{path}: unexpected column layout {header[:2]}...{header[-1]}")
    data = rows[2:]
    x = np.asarray([[float(v) for v in row[1:-1]] for row in data])
    y = [row[-1] for row in data]
    return x, y


def _load_qsar(data_dir):
    (path,) = expected_files("qsar", data_dir)
    x_rows = []
    y = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for row in csv.reader(fh, delimiter=";"):
            if not row:
                continue
            x_rows.append([float(v) for v in row[:-1]])
            y.append(row[-1])
    return np.asarray(x_rows), y


def _load_cnae9(data_dir):
    (path,) = expected_files("cnae9", data_dir)
    x_rows = []
    y = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for row in csv.reader(fh):
            if not row:
                continue
            y.append(row[0])
            x_rows.append([float(v) for v in row[1:]])
    return np.asarray(x_rows), y


def _json_names(cell):
    try:
        items = json.loads(cell) if cell else []
    except json.JSONDecodeError:
        return []
    return [str(item.get("name", "")) for item in items if isinstance(item, dict)]


def _load_movies(data_dir):
    """Movie metadata -> numeric features + revenue target.

    Rows need a positive budget and revenue. Numeric features: budget,
    runtime, release year and month. Categorical features: genres, original
    language, production companies, and (when the credits file is present)
    cast and crew names; name-like columns drop values seen fewer than
    MOVIES_MIN_NAME_COUNT times.
    """
    (path,) = expected_files("movies", data_dir)
    credits_path = Path(data_dir) / "movies/tmdb_5000_credits.csv"
    cast_by_id = {}
    crew_by_id = {}
    if credits_path.is_file():
        with open(credits_path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            for row in reader:
                movie_id = row.get("movie_id") or row.get("id") or ""
                cast_by_id[movie_id] = _json_names(row.get("cast", ""))
                crew_by_id[movie_id] = _json_names(row.get("crew", ""))

    numeric_rows = []
    revenue = []
    genre_lists = []
    language = []
    company_lists = []
    cast_lists = []
    crew_lists = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            try:
                budget = float(row.get("budget") or 0)
                rev = float(row.get("revenue") or 0)
            except ValueError:
                continue
            if budget <= 0 or rev <= 0:
                continue
            runtime = row.get("runtime") or ""
            try:
                runtime = float(runtime) if runtime else 0.0
            except ValueError:
                runtime = 0.0
            release = row.get("release_date") or ""
            year, month = 0.0, 0.0
            parts = release.split("-")
            if len(parts) >= 2 and parts[0].isdigit() and parts[1].isdigit():
                year, month = float(parts[0]), float(parts[1])
            numeric_rows.append([budget, runtime, year, month])
            revenue.append(rev)
            genre_lists.append(_json_names(row.get("genres", "")))
            language.append(row.get("original_language") or "")
            company_lists.append(_json_names(row.get("production_companies", "")))
            movie_id = row.get("id") or ""
            cast_lists.append(cast_by_id.get(movie_id, []))
            crew_lists.append(crew_by_id.get(movie_id, []))

    if not numeric_rows:
        raise ValueError(f"{path}: no rows with positive budget and revenue")

    blocks = [np.asarray(numeric_rows)]
    blocks.append(_multi_hot(genre_lists, min_frequency=1))
    lang_block, _ = one_hot_encode(language, min_frequency=MOVIES_MIN_NAME_COUNT)
    if lang_block.shape[1]:
        blocks.append(lang_block)
    for lists in (company_lists, cast_lists, crew_lists):
        block = _multi_hot(lists, min_frequency=MOVIES_MIN_NAME_COUNT)
        if block.shape[1]:
            blocks.append(block)
    return np.hstack([b for b in blocks if b.shape[1]]), np.asarray(revenue)


def _multi_hot(value_lists, min_frequency):
    """Indicator block for list-valued fields; rare values are discarded."""
    counts = {}
    order = []
    for values in value_lists:
        for v in set(values):
            if v not in counts:
                counts[v] = 0
                order.append(v)
            counts[v] += 1
    kept = [v for v in order if counts[v] >= min_frequency]
    col_of = {v: j for j, v in enumerate(kept)}
    out = np.zeros((len(value_lists), len(kept)))
    for i, values in enumerate(value_lists):
        for v in set(values):
            j = col_of.get(v)
            if j is not None:
                out[i, j] = 1.0
    return out


def run_synthetic_suite(mode="fast", seed=0, ensemble_size=7, n_threads=None):
    """Offline suite on generated data: blob classification + sine regression."""
    x_train, y_train = two_gaussian_blobs(n=400, seed=seed)
    x_test, y_test = two_gaussian_blobs(n=200, seed=seed + 1)
    _, cls_report = run_holdout(
        x_train,
        y_train,
        x_test,
        y_test,
        "classification",
        mode=mode,
        seed=seed,
        ensemble_size=ensemble_size,
        n_threads=n_threads,
        dataset_id="synthetic-blobs",
    )
    xr_train, yr_train = sine_wave(n=200, seed=seed)
    xr_test, yr_test = sine_wave(n=200, seed=seed + 1)
    _, reg_report = run_holdout(
        xr_train,
        yr_train,
        xr_test,
        yr_test,
        "regression",
        mode=mode,
        seed=seed,
        ensemble_size=ensemble_size,
        n_threads=n_threads,
        dataset_id="synthetic-sine",
    )
    return {"classification": cls_report, "regression": reg_report}


def run_benchmark(
    suite,
    data_dir=None,
    mode="accurate",
    seed=0,
    ensemble_size=7,
    n_threads=None,
    manifest=None,
):
    """Run one benchmark suite and return its report dictionary."""
    if suite not in SUITE_NAMES:
        raise ValueError(f"unknown suite {suite!r}; expected one of {SUITE_NAMES}")
    report = {"suite": suite, "reference": SUITE_REFERENCES[suite]}
    common = dict(mode=mode, seed=seed, ensemble_size=ensemble_size, n_threads=n_threads)

    if suite == "synthetic":
        report["runs"] = run_synthetic_suite(**common)
        return report

    if data_dir is None:
        raise MissingDataError(
            f"suite {suite!r} needs --data-dir pointing at user-provided files: "
            f"{list(_SUITE_FILES[suite])}"
        )
    paths = _require_files(suite, data_dir)
    if manifest is not None:
        verify_manifest(paths, manifest)

    if suite == "har":
        x_train, y_train, x_test, y_test = _load_har(data_dir)
        _, run = run_holdout(
            x_train, y_train, x_test, y_test, "classification", dataset_id="har", **common
        )
    elif suite == "parkinsons":
        x, y = _load_parkinsons(data_dir)
        run = run_cross_validation(
            x, y, "classification", folds=5, augment=True, dataset_id="parkinsons", **common
        )
    elif suite == "qsar":
        x, y = _load_qsar(data_dir)
        run = run_cross_validation(
            x, y, "classification", folds=5, augment=False, dataset_id="qsar", **common
        )
    elif suite == "cnae9":
        x, y = _load_cnae9(data_dir)
        run = run_cross_validation(
            x, y, "classification", folds=5, augment=True, dataset_id="cnae9", **common
        )
    else:  # movies
        x, y = _load_movies(data_dir)
        run = run_cross_validation(
            x, list(y), "regression", folds=5, augment=False, dataset_id="movies", **common
        )
    report["runs"] = {"main": run}
    return report
