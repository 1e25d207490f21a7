"""Seeded synthetic datasets for tests, examples, and the offline benchmark suite."""

import csv

import numpy as np


def two_gaussian_blobs(n=400, center=(2.0, 2.0), sigma=0.5, seed=0):
    """Two Gaussian clusters at +/-center; labels are 'pos' and 'neg'.

    Returns (features of shape (n, d), list of n label strings).
    """
    rng = np.random.Generator(np.random.Philox(key=seed))
    center = np.asarray(center, dtype=np.float64)
    n_pos = n // 2
    pos = rng.normal(loc=center, scale=sigma, size=(n_pos, center.shape[0]))
    neg = rng.normal(loc=-center, scale=sigma, size=(n - n_pos, center.shape[0]))
    x = np.vstack([pos, neg])
    labels = ["pos"] * n_pos + ["neg"] * (n - n_pos)
    perm = rng.permutation(n)
    return x[perm], [labels[i] for i in perm]


def sine_wave(n=200, x_range=(-np.pi, np.pi), noise=0.0, seed=0):
    """y = sin(x) sampled uniformly on x_range, with optional Gaussian noise.

    Returns (features of shape (n, 1), targets of shape (n,)).
    """
    rng = np.random.Generator(np.random.Philox(key=seed))
    x = rng.uniform(x_range[0], x_range[1], size=(n, 1))
    y = np.sin(x[:, 0])
    if noise > 0:
        y = y + rng.normal(scale=noise, size=n)
    return x, y


def write_csv_dataset(path, x, y, target_name="target", feature_prefix="x"):
    """Write a feature matrix plus target column as a schema-compatible CSV."""
    x = np.asarray(x, dtype=np.float64)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        names = [f"{feature_prefix}{j}" for j in range(x.shape[1])]
        writer.writerow(names + [target_name])
        for row, target in zip(x, y):
            writer.writerow([repr(float(v)) for v in row] + [str(target)])


def matrix_schema_dict(n_features, target_name="target", feature_prefix="x"):
    """Schema document matching :func:`write_csv_dataset` output."""
    columns = [
        {"name": f"{feature_prefix}{j}", "kind": "numeric"} for j in range(n_features)
    ]
    columns.append({"name": target_name, "kind": "target"})
    return {"columns": columns}
