import numpy as np
import pytest

from extreme_automl.data import (
    AugmentationSpec,
    ColumnSpec,
    CsvParseError,
    FeatureEncoder,
    LabelCodec,
    SchemaError,
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


def _schema(*cols):
    return TableSchema(tuple(ColumnSpec(n, k) for n, k in cols))


def _write(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


BASIC = _schema(("x0", "numeric"), ("x1", "numeric"), ("label", "target"))


class TestSchema:
    def test_duplicate_names_rejected(self):
        with pytest.raises(SchemaError, match="duplicate"):
            _schema(("a", "numeric"), ("a", "target"))

    def test_multiple_targets_rejected(self):
        with pytest.raises(SchemaError, match="multiple target"):
            _schema(("a", "target"), ("b", "target"))

    def test_unknown_kind_rejected(self):
        with pytest.raises(SchemaError, match="unknown kind"):
            _schema(("a", "float"))

    def test_missing_target_raises_on_access(self):
        schema = _schema(("a", "numeric"))
        assert not schema.has_target
        with pytest.raises(SchemaError, match="no target"):
            schema.target_column

    def test_round_trip_dict(self):
        schema = _schema(("a", "numeric"), ("b", "categorical"), ("y", "target"))
        assert TableSchema.from_dict(schema.to_dict()) == schema


class TestLoadCsv:
    def test_basic_shapes(self, tmp_path):
        path = _write(tmp_path, "x0,x1,label\n1,2,a\n3,4,b\n5,6,a\n")
        table = load_csv(path, BASIC)
        assert table.n_rows == 3
        assert np.array_equal(table.numeric["x0"], [1.0, 3.0, 5.0])
        assert table.target == ["a", "b", "a"]

    def test_parse_error_names_cell(self, tmp_path):
        path = _write(tmp_path, "x0,x1,label\n1,abc,a\n")
        with pytest.raises(CsvParseError, match=r"row 1, column 'x1'.*'abc'"):
            load_csv(path, BASIC)

    def test_missing_value_is_hard_error(self, tmp_path):
        path = _write(tmp_path, "x0,x1,label\n1,,a\n")
        with pytest.raises(CsvParseError, match="missing value"):
            load_csv(path, BASIC)

    def test_header_mismatch(self, tmp_path):
        path = _write(tmp_path, "a,b,c\n1,2,3\n")
        with pytest.raises(SchemaError, match="header"):
            load_csv(path, BASIC)

    def test_empty_data_section(self, tmp_path):
        path = _write(tmp_path, "x0,x1,label\n")
        with pytest.raises(CsvParseError, match="no data rows"):
            load_csv(path, BASIC)

    def test_short_row(self, tmp_path):
        path = _write(tmp_path, "x0,x1,label\n1,2\n")
        with pytest.raises(CsvParseError, match="expected 3 fields"):
            load_csv(path, BASIC)

    def test_quoted_fields(self, tmp_path):
        schema = _schema(("x0", "numeric"), ("name", "categorical"), ("y", "target"))
        path = _write(tmp_path, 'x0,name,y\n1,"Smith, Jo",a\n2,plain,b\n')
        table = load_csv(path, schema)
        assert table.categorical["name"] == ["Smith, Jo", "plain"]

    def test_non_finite_rejected(self, tmp_path):
        path = _write(tmp_path, "x0,x1,label\nnan,2,a\n")
        with pytest.raises(CsvParseError, match="non-finite"):
            load_csv(path, BASIC)


class TestOneHot:
    def test_basic(self):
        mat, cats = one_hot_encode(["a", "b", "a"], min_frequency=1)
        assert cats == ["a", "b"]
        assert np.array_equal(mat, [[1, 0], [0, 1], [1, 0]])

    def test_rare_discarded(self):
        mat, cats = one_hot_encode(["a", "b", "a"], min_frequency=2)
        assert cats == ["a"]
        assert np.array_equal(mat, [[1], [0], [1]])

    def test_row_sums(self):
        values = ["a", "b", "c", "a", "b", "a"]
        mat, _ = one_hot_encode(values, min_frequency=2)
        sums = mat.sum(axis=1)
        assert np.array_equal(sums, [1, 1, 0, 1, 1, 1])  # 'c' rows all zero

    def test_min_frequency_validated(self):
        with pytest.raises(ValueError):
            one_hot_encode(["a"], min_frequency=0)


class TestScaler:
    def test_fit_apply_normalizes(self):
        rng = np.random.Generator(np.random.Philox(key=15))
        x = rng.normal(loc=3.0, scale=2.5, size=(100, 4))
        stats = standardize_fit(x)
        xs = standardize_apply(x, stats)
        assert np.abs(xs.mean(axis=0)).max() < 1e-10
        assert np.abs(xs.std(axis=0) - 1).max() < 1e-10

    def test_constant_column_floored_to_zeros(self):
        x = np.column_stack([np.ones(10), np.arange(10.0)])
        stats = standardize_fit(x)
        xs = standardize_apply(x, stats)
        assert np.array_equal(xs[:, 0], np.zeros(10))
        assert stats.stds[0] > 0

    def test_apply_uses_fit_time_stats_only(self):
        x_fit = np.array([[0.0], [2.0]])
        stats = standardize_fit(x_fit)
        out = standardize_apply(np.array([[4.0]]), stats)
        assert np.allclose(out, [[3.0]])  # (4 - 1) / 1

    def test_invert_round_trip(self):
        rng = np.random.Generator(np.random.Philox(key=16))
        x = rng.normal(size=(50, 3)) * 7 + 2
        stats = standardize_fit(x)
        back = standardize_invert(standardize_apply(x, stats), stats)
        assert np.abs(back - x).max() < 1e-10

    def test_provenance_recorded(self):
        stats = standardize_fit(np.ones((2, 1)), provenance="fold-0-train")
        assert stats.provenance == "fold-0-train"

    def test_width_mismatch(self):
        stats = standardize_fit(np.ones((3, 2)))
        with pytest.raises(ValueError, match="features"):
            standardize_apply(np.ones((3, 4)), stats)


class TestKFold:
    def test_partition_and_balance(self):
        plan = kfold_split(10, 5, seed=1)
        folds = [set(plan.test_indices(f).tolist()) for f in range(5)]
        assert all(len(f) == 2 for f in folds)
        assert set().union(*folds) == set(range(10))

    def test_uneven_sizes(self):
        plan = kfold_split(11, 5, seed=2)
        sizes = sorted(len(plan.test_indices(f)) for f in range(5))
        assert sizes == [2, 2, 2, 2, 3]

    def test_deterministic(self):
        a = kfold_split(37, 4, seed=9)
        b = kfold_split(37, 4, seed=9)
        assert np.array_equal(a.assignment, b.assignment)

    def test_seed_changes_assignment(self):
        a = kfold_split(37, 4, seed=9)
        b = kfold_split(37, 4, seed=10)
        assert not np.array_equal(a.assignment, b.assignment)

    def test_bad_k_rejected(self):
        with pytest.raises(ValueError):
            kfold_split(5, 6)
        with pytest.raises(ValueError):
            kfold_split(5, 1)


class TestAugmentation:
    def test_doubling_preserves_originals(self):
        rng = np.random.Generator(np.random.Philox(key=17))
        x = rng.normal(size=(100, 3))
        y = np.arange(100)
        x2, y2 = augment_duplicate_noise(x, y, AugmentationSpec(), seed=3)
        assert x2.shape == (200, 3)
        assert np.array_equal(x2[:100], x)
        assert np.array_equal(y2, np.concatenate([y, y]))

    def test_factor_one_is_identity(self):
        x = np.ones((4, 2))
        y = np.array(["a", "b", "a", "b"], dtype=object)
        x2, y2 = augment_duplicate_noise(x, y, AugmentationSpec(duplication_factor=1), seed=0)
        assert np.array_equal(x2, x) and np.array_equal(y2, y)

    def test_noise_bounded_by_fraction_of_std(self):
        rng = np.random.Generator(np.random.Philox(key=18))
        x = rng.normal(size=(200, 4)) * np.array([1.0, 10.0, 0.1, 5.0])
        spec = AugmentationSpec()
        x2, _ = augment_duplicate_noise(x, np.zeros(200), spec, seed=4)
        sigma = x.std(axis=0)
        deltas = np.abs(x2[200:] - x)
        assert np.all(deltas <= spec.noise_fraction * sigma + 1e-15)
        assert deltas.max() > 0  # noise was actually applied

    def test_invalid_spec(self):
        with pytest.raises(ValueError):
            AugmentationSpec(duplication_factor=0)
        with pytest.raises(ValueError):
            AugmentationSpec(noise_fraction=1.0)


class TestTargets:
    def test_one_hot_encoding(self):
        mat, codec = encode_targets(["a", "b", "a"], "classification")
        assert codec.classes == ("a", "b")
        assert np.array_equal(mat, [[1, 0], [0, 1], [1, 0]])

    def test_round_trip(self):
        labels = ["red", "green", "blue", "green"]
        mat, codec = encode_targets(labels, "classification")
        decoded = [codec.decode(int(i)) for i in np.argmax(mat, axis=1)]
        assert decoded == labels

    def test_single_class_rejected(self):
        with pytest.raises(ValueError, match="2 distinct"):
            encode_targets(["a", "a", "a"], "classification")

    def test_regression_passthrough(self):
        values, codec = encode_targets([1.5, 2.5], "regression")
        assert codec is None
        assert np.array_equal(values, [1.5, 2.5])

    def test_codec_rejects_unknown(self):
        codec = LabelCodec(("a", "b"))
        with pytest.raises(ValueError, match="unknown class"):
            codec.index_of("z")


class TestFeatureEncoder:
    def test_mixed_columns(self, tmp_path):
        schema = _schema(
            ("v", "numeric"), ("color", "categorical"), ("id", "ignore"), ("y", "target")
        )
        path = _write(tmp_path, "v,color,id,y\n1,red,7,a\n2,blue,8,b\n3,red,9,a\n")
        table = load_csv(path, schema)
        enc = FeatureEncoder.fit(table)
        x = enc.transform(table)
        assert enc.feature_names == ["v", "color=red", "color=blue"]
        assert np.array_equal(x, [[1, 1, 0], [2, 0, 1], [3, 1, 0]])

    def test_unknown_category_encodes_to_zero(self, tmp_path):
        schema = _schema(("color", "categorical"), ("y", "target"))
        train = load_csv(_write(tmp_path, "color,y\nred,a\nblue,b\n", "t.csv"), schema)
        enc = FeatureEncoder.fit(train)
        other = load_csv(_write(tmp_path, "color,y\ngreen,a\n", "o.csv"), schema)
        assert np.array_equal(enc.transform(other), [[0, 0]])

    def test_dict_round_trip(self, tmp_path):
        schema = _schema(("v", "numeric"), ("c", "categorical"), ("y", "target"))
        table = load_csv(_write(tmp_path, "v,c,y\n1,p,a\n2,q,b\n"), schema)
        enc = FeatureEncoder.fit(table, min_frequency=1)
        assert FeatureEncoder.from_dict(enc.to_dict()) == enc
