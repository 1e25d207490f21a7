import numpy as np
import pytest

from extreme_automl.metrics import (
    ClassificationReport,
    ConfusionMatrix,
    RegressionReport,
    accuracy,
    confusion_matrix,
    empty_class_mask,
    f1_per_class,
    jaccard_per_class,
    jaccard_variance,
    pearson_r,
    rmse,
)


def test_confusion_perfect_is_diagonal():
    cm = confusion_matrix([0, 1, 2, 1], [0, 1, 2, 1], 3)
    assert np.array_equal(cm.counts, np.diag([1, 2, 1]))


def test_confusion_hand_tally():
    cm = confusion_matrix([0, 0, 1, 1], [0, 1, 0, 1], 2)
    assert np.array_equal(cm.counts, [[1, 1], [1, 1]])
    assert cm.total == 4


def test_confusion_rejects_empty_and_bad_labels():
    with pytest.raises(ValueError):
        confusion_matrix([], [], 2)
    with pytest.raises(ValueError, match="outside"):
        confusion_matrix([0, 2], [0, 1], 2)
    with pytest.raises(ValueError, match="length"):
        confusion_matrix([0, 1], [0], 2)


def test_accuracy_values():
    assert accuracy(confusion_matrix([0, 1], [0, 1], 2)) == 1.0
    assert accuracy(confusion_matrix([0, 0, 1, 1], [0, 1, 0, 1], 2)) == 0.5
    assert accuracy(ConfusionMatrix(np.array([[0, 3], [0, 0]]))) == 0.0


def test_accuracy_empty_matrix_rejected():
    with pytest.raises(ValueError, match="no samples"):
        accuracy(ConfusionMatrix(np.zeros((2, 2), dtype=int)))


def test_jaccard_hand_values():
    cm = confusion_matrix([0, 0, 1, 1], [0, 1, 0, 1], 2)
    assert np.allclose(jaccard_per_class(cm), [1 / 3, 1 / 3])


def test_jaccard_perfect():
    cm = confusion_matrix([0, 1, 2], [0, 1, 2], 3)
    assert np.array_equal(jaccard_per_class(cm), [1.0, 1.0, 1.0])


def test_empty_class_convention():
    cm = confusion_matrix([0, 1], [0, 1], 3)  # class 2 absent, never predicted
    jac = jaccard_per_class(cm)
    f1 = f1_per_class(cm)
    flags = empty_class_mask(cm)
    assert jac[2] == 1.0 and f1[2] == 1.0
    assert list(flags) == [False, False, True]


def test_f1_hand_values():
    cm = confusion_matrix([0, 0, 1, 1], [0, 1, 0, 1], 2)
    f1 = f1_per_class(cm)
    assert np.allclose(f1, [0.5, 0.5])
    # algebraic identity with the overlap score
    assert np.allclose(jaccard_per_class(cm), f1 / (2 - f1))


def test_f1_zero_when_no_true_positives():
    cm = ConfusionMatrix(np.array([[0, 2], [1, 3]]))
    assert f1_per_class(cm)[0] == 0.0


def test_jaccard_f1_identity_and_ranking_random():
    rng = np.random.Generator(np.random.Philox(key=13))
    for _ in range(100):
        k = int(rng.integers(2, 6))
        cm = ConfusionMatrix(rng.integers(0, 20, size=(k, k)))
        if cm.total == 0:
            continue
        jac = jaccard_per_class(cm)
        f1 = f1_per_class(cm)
        mask = ~empty_class_mask(cm)
        assert np.allclose(jac[mask], f1[mask] / (2 - f1[mask]), atol=1e-12)
        assert np.all(jac[mask] <= f1[mask] + 1e-12)
        assert np.array_equal(np.argsort(jac, kind="stable"), np.argsort(f1, kind="stable"))


def test_variance_conventions():
    assert jaccard_variance([0.5, 0.5, 0.5]) == 0.0
    assert jaccard_variance([0.0, 1.0]) == 0.25  # population variance
    assert jaccard_variance([1 / 3, 1 / 3]) == 0.0
    with pytest.raises(ValueError):
        jaccard_variance([])


def test_pearson_exact_cases():
    y = np.array([1.0, 2.0, 3.0])
    assert pearson_r(y, y) == pytest.approx(1.0)
    assert pearson_r(y, -y) == pytest.approx(-1.0)
    assert pearson_r(y, 2 * y) == pytest.approx(1.0)


def test_pearson_affine_invariance():
    rng = np.random.Generator(np.random.Philox(key=14))
    y = rng.normal(size=50)
    y_hat = rng.normal(size=50)
    r = pearson_r(y, y_hat)
    assert pearson_r(3.0 * y + 1.0, y_hat) == pytest.approx(r, abs=1e-12)
    assert pearson_r(y, 0.5 * y_hat - 4.0) == pytest.approx(r, abs=1e-12)


def test_pearson_degenerate_inputs():
    with pytest.raises(ValueError, match="zero variance"):
        pearson_r([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
    with pytest.raises(ValueError, match="at least 2"):
        pearson_r([1.0], [2.0])


def test_classification_report_consistency():
    cm = confusion_matrix([0, 0, 1, 1, 2], [0, 1, 1, 1, 0], 3)
    report = ClassificationReport.from_confusion(cm)
    jac = jaccard_per_class(cm)
    assert report.accuracy == accuracy(cm)
    assert report.jaccard_min == jac.min()
    assert report.jaccard_variance == pytest.approx(np.var(jac), abs=1e-12)
    assert sum(np.diag(cm.counts)) / cm.total == report.accuracy


def test_regression_report():
    y = np.array([1.0, 2.0, 3.0, 4.0])
    y_hat = np.array([1.1, 1.9, 3.2, 3.8])
    report = RegressionReport.from_predictions(y, y_hat)
    assert report.pearson_r == pytest.approx(pearson_r(y, y_hat))
    assert report.rmse == pytest.approx(rmse(y, y_hat))
