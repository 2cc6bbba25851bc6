import numpy as np
import pytest

import oracles
from eegstrata import (ConfigError, DataError, FeatureMatrix, KNNClassifier,
                       NaiveBayesClassifier, RandomForestClassifier,
                       euclidean_distance, knn_fit_predict, make_classifier,
                       nb_fit, rf_fit)


def _fm(values, labels):
    values = np.asarray(values, dtype=float)
    names = tuple(f"f{i}" for i in range(values.shape[1]))
    return FeatureMatrix(names=names, values=values, labels=np.asarray(labels))


def _blobs(seed, n_per_class=20, d=3, separation=6.0, scale=1.0):
    rng = np.random.default_rng(seed)
    c0 = rng.normal(0.0, scale, size=(n_per_class, d))
    c1 = rng.normal(separation, scale, size=(n_per_class, d))
    values = np.vstack([c0, c1])
    labels = np.array([0] * n_per_class + [1] * n_per_class)
    return _fm(values, labels)


def test_euclidean_distance():
    assert euclidean_distance([0, 0], [3, 4]) == pytest.approx(5.0)
    assert euclidean_distance([1.5, -2.0, 7.0], [1.5, -2.0, 7.0]) == 0.0
    rng = np.random.default_rng(0)
    a, b = rng.standard_normal((2, 10))
    ref = sum((float(u) - float(v)) ** 2 for u, v in zip(a, b)) ** 0.5
    assert euclidean_distance(a, b) == pytest.approx(ref, abs=1e-12)
    with pytest.raises(DataError):
        euclidean_distance([1, 2], [1, 2, 3])


def test_knn_exact_match_wins_at_k1():
    fm = _blobs(1)
    model = KNNClassifier(k=1).fit(fm)
    pred = model.predict(fm.values)
    assert np.array_equal(pred, fm.labels)


def test_knn_k_equals_n_returns_majority():
    values = np.arange(10, dtype=float)[:, None]
    labels = np.array([1, 1, 1, 1, 1, 1, 0, 0, 0, 0])
    fm = _fm(values, labels)
    pred = KNNClassifier(k=10).fit(fm).predict([[100.0], [-5.0]])
    assert np.array_equal(pred, [1, 1])


def test_knn_agrees_with_brute_force():
    rng = np.random.default_rng(2)
    fm = _blobs(2, n_per_class=15, separation=2.0)
    queries = rng.normal(1.0, 2.0, size=(25, 3))
    for k in (1, 3, 5):
        model = KNNClassifier(k=k, standardize=False).fit(fm)
        got = model.predict(queries)
        ref = [oracles.knn_brute(fm.values, fm.labels, q, k) for q in queries]
        assert np.array_equal(got, ref)


def test_knn_distance_tie_prefers_lower_train_index():
    values = np.array([[0.0, 5.0], [0.0, 5.0], [9.0, 5.0]])
    fm = _fm(values, [1, 0, 0])
    pred = KNNClassifier(k=1, standardize=False).fit(fm).predict([[0.0, 5.0]])
    assert pred[0] == 1


def test_knn_vote_tie_prefers_label_zero():
    fm = _fm([[0.0], [1.0]], [1, 0])
    pred = KNNClassifier(k=2).fit(fm).predict([[0.5]])
    assert pred[0] == 0


def test_knn_standardization_changes_the_answer():
    # f0 carries a huge, misleading scale; z-scoring restores the tie and
    # the tie rule then prefers the class-0 training row
    fm = _fm([[0.0, 0.0], [100.0, 1.0]], [0, 1])
    raw = KNNClassifier(k=1, standardize=False).fit(fm).predict([[100.0, 0.0]])
    scaled = KNNClassifier(k=1, standardize=True).fit(fm).predict([[100.0, 0.0]])
    assert raw[0] == 1
    assert scaled[0] == 0


def test_knn_validation():
    fm = _blobs(3)
    with pytest.raises(ConfigError):
        KNNClassifier(k=0)
    with pytest.raises(ConfigError):
        KNNClassifier(k=fm.n_rows + 1).fit(fm)
    with pytest.raises(DataError):
        KNNClassifier().fit(_fm([[1.0], [2.0]], [0, 0]))


def test_nb_separable_blobs():
    fm = _blobs(4, n_per_class=30)
    model = NaiveBayesClassifier().fit(fm)
    assert np.array_equal(model.predict(fm.values), fm.labels)


def test_nb_prior_dominates_uninformative_features():
    rng = np.random.default_rng(5)
    values = rng.standard_normal((100, 4))
    labels = np.array([0] * 90 + [1] * 10)
    model = NaiveBayesClassifier().fit(_fm(values, labels))
    pred = model.predict(rng.standard_normal((200, 4)))
    assert pred.mean() < 0.2


def test_nb_log_posterior_matches_oracle():
    rng = np.random.default_rng(6)
    fm = _blobs(6, n_per_class=12, d=4, separation=1.5)
    model = NaiveBayesClassifier().fit(fm)
    queries = rng.standard_normal((8, 4))
    got = model.log_posterior(queries)
    for i, q in enumerate(queries):
        ref = oracles.nb_log_scores(fm.values, fm.labels, q)
        assert got[i, 0] == pytest.approx(ref[0], abs=1e-9)
        assert got[i, 1] == pytest.approx(ref[1], abs=1e-9)


def test_nb_validation():
    with pytest.raises(ConfigError):
        NaiveBayesClassifier(var_floor=0.0)
    with pytest.raises(DataError):
        NaiveBayesClassifier().fit(_fm([[1.0], [2.0]], [1, 1]))


def test_single_tree_matches_reference_tree():
    rng = np.random.default_rng(7)
    values = rng.normal(size=(20, 3))
    labels = (values[:, 0] + 0.5 * values[:, 2] > 0).astype(int)
    if labels.min() == labels.max():  # pragma: no cover - seed is fixed
        pytest.fail("fixture must contain both classes")
    fm = _fm(values, labels)
    model = RandomForestClassifier(n_trees=1, seed=0, max_features="all",
                                   bootstrap=False).fit(fm)
    ref = oracles.reference_tree(values, labels)
    queries = np.vstack([values, rng.normal(size=(40, 3))])
    got = model.predict(queries)
    expected = [oracles.reference_tree_predict(ref, q) for q in queries]
    assert np.array_equal(got, expected)


def test_rf_fits_separable_training_data():
    fm = _blobs(8, n_per_class=25)
    model = RandomForestClassifier(seed=1).fit(fm)
    assert np.array_equal(model.predict(fm.values), fm.labels)


def test_rf_same_seed_same_predictions():
    fm = _blobs(9, separation=1.0)
    queries = np.random.default_rng(9).normal(0.5, 1.0, size=(30, 3))
    a = RandomForestClassifier(n_trees=15, seed=4).fit(fm).predict(queries)
    b = RandomForestClassifier(n_trees=15, seed=4).fit(fm).predict(queries)
    assert np.array_equal(a, b)


def test_rf_label_flip_equivariance():
    fm = _blobs(10, n_per_class=15)
    flipped = FeatureMatrix(names=fm.names, values=fm.values, labels=1 - fm.labels)
    queries = np.random.default_rng(10).normal(3.0, 2.0, size=(20, 3))
    pred = RandomForestClassifier(n_trees=5, seed=2).fit(fm).predict(queries)
    pred_flipped = RandomForestClassifier(n_trees=5, seed=2).fit(flipped).predict(queries)
    assert np.array_equal(pred_flipped, 1 - pred)


def test_tree_invariant_to_monotone_feature_transforms():
    # order statistics drive every split, so cubing the inputs must not
    # change predictions on the training rows themselves
    rng = np.random.default_rng(11)
    values = rng.normal(size=(30, 2))
    labels = (values.sum(axis=1) > 0).astype(int)
    cubed = values ** 3
    a = RandomForestClassifier(n_trees=1, seed=0, max_features="all",
                               bootstrap=False).fit(_fm(values, labels)).predict(values)
    b = RandomForestClassifier(n_trees=1, seed=0, max_features="all",
                               bootstrap=False).fit(_fm(cubed, labels)).predict(cubed)
    assert np.array_equal(a, b)


def test_rf_validation():
    with pytest.raises(ConfigError):
        RandomForestClassifier(n_trees=0)
    with pytest.raises(ConfigError):
        RandomForestClassifier(max_features="log2")
    with pytest.raises(DataError):
        RandomForestClassifier().fit(_fm([[1.0], [2.0], [3.0]], [0, 1, 2]))


def test_functional_wrappers():
    fm = _blobs(12)
    assert np.array_equal(knn_fit_predict(fm, fm.values, k=1), fm.labels)
    nb = nb_fit(fm)
    assert np.array_equal(nb.predict(fm.values), fm.labels)
    rf = rf_fit(fm, n_trees=5, seed=0)
    assert np.array_equal(rf.predict(fm.values), fm.labels)


def test_make_classifier():
    assert make_classifier("knn", k=5).k == 5
    assert make_classifier("nb").kind == "nb"
    assert make_classifier("rf", n_trees=7).n_trees == 7
    with pytest.raises(ConfigError):
        make_classifier("svm")
    with pytest.raises(ConfigError):
        make_classifier("knn", trees=5)
