"""Data ingestion and protocol mechanics.

CSV loading against a declared schema, one-hot encoding with rare-category
discarding, z-score standardization, seeded k-fold planning, and the
duplicate-with-noise augmentation used by the evaluation protocols.
"""

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from .validation import as_float_matrix

NUMERIC = "numeric"
CATEGORICAL = "categorical"
TARGET = "target"
IGNORE = "ignore"
_COLUMN_KINDS = (NUMERIC, CATEGORICAL, TARGET, IGNORE)

STD_FLOOR = 1e-12


class SchemaError(ValueError):
    """A table schema is malformed or does not match a file."""


class CsvParseError(ValueError):
    """A CSV cell or row could not be parsed; the message names the location."""


@dataclass(frozen=True)
class ColumnSpec:
    name: str
    kind: str

    def __post_init__(self):
        if self.kind not in _COLUMN_KINDS:
            raise SchemaError(
                f"column {self.name!r}: unknown kind {self.kind!r}; "
                f"expected one of {_COLUMN_KINDS}"
            )


@dataclass(frozen=True)
class TableSchema:
    """Ordered column declarations for one CSV file; at most one target."""

    columns: tuple

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise SchemaError(f"duplicate column names: {dupes}")
        targets = [c.name for c in self.columns if c.kind == TARGET]
        if len(targets) > 1:
            raise SchemaError(f"schema declares multiple target columns: {targets}")

    @property
    def names(self):
        return [c.name for c in self.columns]

    @property
    def target_column(self):
        for c in self.columns:
            if c.kind == TARGET:
                return c.name
        raise SchemaError("schema declares no target column")

    @property
    def has_target(self):
        return any(c.kind == TARGET for c in self.columns)

    @property
    def feature_columns(self):
        return [c for c in self.columns if c.kind in (NUMERIC, CATEGORICAL)]

    def to_dict(self):
        return {"columns": [{"name": c.name, "kind": c.kind} for c in self.columns]}

    @classmethod
    def from_dict(cls, obj):
        try:
            cols = [ColumnSpec(str(c["name"]), str(c["kind"])) for c in obj["columns"]]
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"malformed schema document: {exc}") from None
        return cls(tuple(cols))

    @classmethod
    def from_json_file(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            try:
                obj = json.load(fh)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"{path}: not valid JSON: {exc}") from None
        return cls.from_dict(obj)


@dataclass
class RawTable:
    """Typed columns loaded from one CSV file."""

    schema: TableSchema
    numeric: dict
    categorical: dict
    target: list
    n_rows: int


def load_csv(path, schema):
    """Load a CSV file against ``schema``.

    The header must match the schema's column names exactly (order included).
    Numeric parse failures and missing cells are hard errors naming the row
    and column; target values are kept as raw strings.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvParseError(f"{path}: file is empty") from None
        if header != schema.names:
            raise SchemaError(
                f"{path}: header {header} does not match schema columns {schema.names}"
            )
        numeric = {c.name: [] for c in schema.columns if c.kind == NUMERIC}
        categorical = {c.name: [] for c in schema.columns if c.kind == CATEGORICAL}
        target = []
        n_rows = 0
        for row_index, row in enumerate(reader, start=1):
            if len(row) != len(schema.columns):
                raise CsvParseError(
                    f"{path}: row {row_index}: expected {len(schema.columns)} fields, "
                    f"got {len(row)}"
                )
            for spec, cell in zip(schema.columns, row):
                if spec.kind == IGNORE:
                    continue
                if spec.kind == NUMERIC:
                    if cell == "":
                        raise CsvParseError(
                            f"{path}: row {row_index}, column {spec.name!r}: missing value"
                        )
                    try:
                        value = float(cell)
                    except ValueError:
                        raise CsvParseError(
                            f"{path}: row {row_index}, column {spec.name!r}: "
                            f"cannot parse {cell!r} as a number"
                        ) from None
                    if not np.isfinite(value):
                        raise CsvParseError(
                            f"{path}: row {row_index}, column {spec.name!r}: "
                            f"non-finite value {cell!r}"
                        )
                    numeric[spec.name].append(value)
                elif spec.kind == CATEGORICAL:
                    categorical[spec.name].append(cell)
                else:  # target
                    if cell == "":
                        raise CsvParseError(
                            f"{path}: row {row_index}, column {spec.name!r}: missing target"
                        )
                    target.append(cell)
            n_rows += 1
    if n_rows == 0:
        raise CsvParseError(f"{path}: no data rows")
    numeric = {name: np.asarray(vals, dtype=np.float64) for name, vals in numeric.items()}
    return RawTable(schema, numeric, categorical, target, n_rows)


def one_hot_encode(values, min_frequency=1):
    """One-hot indicator matrix with rare categories discarded.

    Categories occurring fewer than ``min_frequency`` times get no column;
    their rows encode to all zeros. Kept categories map to columns in
    first-appearance order.
    """
    if min_frequency < 1:
        raise ValueError(f"min_frequency must be >= 1, got {min_frequency}")
    order = []
    counts = {}
    for v in values:
        if v not in counts:
            counts[v] = 0
            order.append(v)
        counts[v] += 1
    kept = [c for c in order if counts[c] >= min_frequency]
    col_of = {c: j for j, c in enumerate(kept)}
    out = np.zeros((len(values), len(kept)))
    for i, v in enumerate(values):
        j = col_of.get(v)
        if j is not None:
            out[i, j] = 1.0
    return out, kept


@dataclass(frozen=True)
class ScalerStats:
    """Per-feature means and (floored) standard deviations.

    ``provenance`` names the data the stats were fit on, so training paths
    can assert that no test-fold statistic leaked in.
    """

    means: np.ndarray
    stds: np.ndarray
    provenance: str = "unspecified"

    def __post_init__(self):
        if self.means.shape != self.stds.shape or self.means.ndim != 1:
            raise ValueError("means and stds must be 1-D arrays of equal length")
        if not (self.stds > 0).all():
            raise ValueError("stds must be positive after flooring")

    @property
    def n_features(self):
        return self.means.shape[0]


def standardize_fit(x, provenance="training-data"):
    """Fit column means and stds (population, floored at ``STD_FLOOR``)."""
    x = as_float_matrix(x, "x")
    if x.shape[0] < 1:
        raise ValueError("cannot fit scaler statistics on an empty matrix")
    means = x.mean(axis=0)
    stds = np.maximum(x.std(axis=0), STD_FLOOR)
    return ScalerStats(means, stds, provenance)


def standardize_apply(x, stats):
    """Apply fit-time statistics: ``(x - means) / stds`` per column."""
    x = as_float_matrix(x, "x")
    if x.shape[1] != stats.n_features:
        raise ValueError(
            f"x has {x.shape[1]} features but scaler was fit on {stats.n_features}"
        )
    return (x - stats.means) / stats.stds


def standardize_invert(x, stats):
    """Undo :func:`standardize_apply`."""
    x = as_float_matrix(x, "x")
    if x.shape[1] != stats.n_features:
        raise ValueError(
            f"x has {x.shape[1]} features but scaler was fit on {stats.n_features}"
        )
    return x * stats.stds + stats.means


@dataclass(frozen=True)
class FoldPlan:
    """A partition of ``[0, n)`` into ``k`` folds of near-equal size."""

    n: int
    k: int
    assignment: np.ndarray

    def train_indices(self, fold):
        return np.flatnonzero(self.assignment != fold)

    def test_indices(self, fold):
        return np.flatnonzero(self.assignment == fold)


def kfold_split(n, k, seed=0):
    """Seeded shuffle followed by round-robin fold assignment.

    Fold sizes differ by at most one; deterministic for fixed ``(n, k, seed)``.
    """
    if k < 2 or k > n:
        raise ValueError(f"fold count must satisfy 2 <= k <= n, got k={k}, n={n}")
    rng = np.random.Generator(np.random.Philox(key=seed))
    perm = rng.permutation(n)
    assignment = np.empty(n, dtype=np.int64)
    assignment[perm] = np.arange(n) % k
    return FoldPlan(n, k, assignment)


@dataclass(frozen=True)
class AugmentationSpec:
    """Duplicate the sample and perturb the copies by bounded uniform noise."""

    duplication_factor: int = 2
    noise_fraction: float = 0.001

    def __post_init__(self):
        if self.duplication_factor < 1:
            raise ValueError("duplication_factor must be >= 1")
        if not 0 <= self.noise_fraction < 1:
            raise ValueError("noise_fraction must be in [0, 1)")


def augment_duplicate_noise(x, y, spec=AugmentationSpec(), seed=0):
    """Return ``duplication_factor * n`` rows: originals first, then noisy copies.

    Each copied feature value is perturbed by an i.i.d. uniform draw in
    ``[-noise_fraction * sigma_j, +noise_fraction * sigma_j]`` where
    ``sigma_j`` is the column's standard deviation in the original data.
    Targets are copied unchanged. Callers apply this to training folds only.
    """
    x = as_float_matrix(x, "x")
    y = np.asarray(y)
    if y.shape[0] != x.shape[0]:
        raise ValueError("x and y must have the same number of rows")
    if spec.duplication_factor == 1:
        return x.copy(), y.copy()
    sigma = x.std(axis=0)
    rng = np.random.Generator(np.random.Philox(key=seed))
    blocks = [x]
    for _ in range(spec.duplication_factor - 1):
        noise = rng.uniform(-1.0, 1.0, size=x.shape) * (spec.noise_fraction * sigma)
        blocks.append(x + noise)
    x_out = np.vstack(blocks)
    y_out = np.concatenate([y] * spec.duplication_factor, axis=0)
    return x_out, y_out


@dataclass(frozen=True)
class LabelCodec:
    """Maps class labels to one-hot columns and back; classes stay ordered."""

    classes: tuple

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))
        if not self.classes:
            raise ValueError("codec needs at least one class")
        if len(set(self.classes)) != len(self.classes):
            raise ValueError("class labels must be distinct")
        object.__setattr__(
            self, "_index", {label: i for i, label in enumerate(self.classes)}
        )

    @property
    def n_classes(self):
        return len(self.classes)

    def index_of(self, label):
        try:
            return self._index[label]
        except KeyError:
            raise ValueError(f"unknown class label {label!r}") from None

    def decode(self, index):
        return self.classes[index]

    def encode(self, labels):
        out = np.zeros((len(labels), self.n_classes))
        for i, label in enumerate(labels):
            out[i, self.index_of(label)] = 1.0
        return out


def encode_targets(labels, task):
    """Encode raw targets for training.

    Classification: one-hot {0,1} matrix plus a codec over the sorted distinct
    labels. Regression: a finite float vector (codec is None).
    """
    if task == "classification":
        classes = sorted(set(labels))
        if len(classes) < 2:
            raise ValueError(
                f"classification needs at least 2 distinct classes, got {classes}"
            )
        codec = LabelCodec(tuple(classes))
        return codec.encode(labels), codec
    if task == "regression":
        values = np.asarray(labels, dtype=np.float64)
        if values.ndim != 1:
            raise ValueError("regression targets must be a flat vector")
        if values.size and not np.isfinite(values).all():
            raise ValueError("regression targets contain NaN or infinite values")
        return values, None
    raise ValueError(f"task must be 'classification' or 'regression', got {task!r}")


@dataclass(frozen=True)
class EncodedColumn:
    name: str
    kind: str
    categories: tuple = ()


@dataclass(frozen=True)
class FeatureEncoder:
    """Fitted mapping from a table's feature columns to a dense matrix.

    Numeric columns pass through in schema order; each categorical column
    becomes a one-hot block whose category list was fixed at fit time, so
    unseen categories encode to all-zero indicators at prediction time.
    """

    columns: tuple
    min_frequency: int = 1

    @classmethod
    def fit(cls, table, min_frequency=1):
        encoded = []
        for spec in table.schema.feature_columns:
            if spec.kind == NUMERIC:
                encoded.append(EncodedColumn(spec.name, NUMERIC))
            else:
                _, cats = one_hot_encode(table.categorical[spec.name], min_frequency)
                encoded.append(EncodedColumn(spec.name, CATEGORICAL, tuple(cats)))
        return cls(tuple(encoded), min_frequency)

    @property
    def feature_names(self):
        names = []
        for col in self.columns:
            if col.kind == NUMERIC:
                names.append(col.name)
            else:
                names.extend(f"{col.name}={c}" for c in col.categories)
        return names

    @property
    def n_features(self):
        return len(self.feature_names)

    def transform(self, table):
        missing = [
            c.name
            for c in self.columns
            if (c.kind == NUMERIC and c.name not in table.numeric)
            or (c.kind == CATEGORICAL and c.name not in table.categorical)
        ]
        if missing:
            raise SchemaError(
                f"data is missing feature columns required by the model: {missing}"
            )
        blocks = []
        for col in self.columns:
            if col.kind == NUMERIC:
                blocks.append(table.numeric[col.name].reshape(-1, 1))
            else:
                values = table.categorical[col.name]
                block = np.zeros((len(values), len(col.categories)))
                col_of = {c: j for j, c in enumerate(col.categories)}
                for i, v in enumerate(values):
                    j = col_of.get(v)
                    if j is not None:
                        block[i, j] = 1.0
                blocks.append(block)
        if not blocks:
            raise SchemaError("encoder has no feature columns")
        return np.hstack(blocks)

    def to_dict(self):
        return {
            "min_frequency": self.min_frequency,
            "columns": [
                {"name": c.name, "kind": c.kind, "categories": list(c.categories)}
                for c in self.columns
            ],
        }

    @classmethod
    def from_dict(cls, obj):
        cols = tuple(
            EncodedColumn(c["name"], c["kind"], tuple(c.get("categories", ())))
            for c in obj["columns"]
        )
        return cls(cols, int(obj.get("min_frequency", 1)))
