from __future__ import annotations

import json

import numpy as np
import pytest

from hmcbench.learners import (ClassifierSpec, ConstantModel,
                               DegenerateLabelsError, fit, fit_constant,
                               fit_ova, fit_single_multiclass, model_summary,
                               predict_labels, prune_accuracy_path)


def make_xor(n_per_blob, rng, spread=0.8):
    centers = [(-2, -2, 0), (2, 2, 0), (-2, 2, 1), (2, -2, 1)]
    X, y = [], []
    for cx, cy, label in centers:
        X.append(np.column_stack([rng.normal(cx, spread, n_per_blob),
                                  rng.normal(cy, spread, n_per_blob)]))
        y.append(np.full(n_per_blob, label))
    return np.concatenate(X), np.concatenate(y)


def test_spec_validation():
    with pytest.raises(ValueError):
        ClassifierSpec(kind="svm")
    with pytest.raises(ValueError):
        ClassifierSpec(cart_cp_grid=(0.1, 0.5))  # not decreasing
    with pytest.raises(ValueError):
        ClassifierSpec(cart_cp_grid=())
    with pytest.raises(ValueError):
        ClassifierSpec(cart_min_split=5, cart_min_bucket=9)


def test_cart_separable_single_split():
    rng = np.random.default_rng(0)
    x = np.concatenate([rng.uniform(-5, -0.5, 100), rng.uniform(0.5, 5, 100)])
    y = (x > 0).astype(int)
    model = fit(ClassifierSpec(kind="cart"), x.reshape(-1, 1), y)
    assert np.mean(predict_labels(model, x.reshape(-1, 1)) == y) == 1.0
    assert model.n_leaves() == 2


def test_logistic_separated_hits_iteration_cap():
    rng = np.random.default_rng(1)
    x = np.concatenate([rng.uniform(-5, -0.5, 100), rng.uniform(0.5, 5, 100)])
    y = (x > 0).astype(int)
    model = fit(ClassifierSpec(kind="logistic"), x.reshape(-1, 1), y)
    assert not model.converged
    assert model.n_iter == model.spec.logistic_max_iter
    assert np.mean(predict_labels(model, x.reshape(-1, 1)) == y) == 1.0


def test_logistic_converges_on_overlap():
    rng = np.random.default_rng(2)
    x = rng.normal(size=400)
    y = (rng.uniform(size=400) < 1 / (1 + np.exp(-2 * x))).astype(int)
    model = fit(ClassifierSpec(kind="logistic"), x.reshape(-1, 1), y)
    assert model.converged
    assert 1.0 < model.coef[1] < 3.5


def test_xor_logistic_fails_cart_succeeds():
    # logistic has no linear separator on XOR blobs; cart carves the quadrants
    logi_accs, cart_accs = [], []
    for seed in range(10):
        rng = np.random.default_rng(seed)
        X, y = make_xor(500, rng)
        Xt, yt = make_xor(100, rng)
        logi = fit(ClassifierSpec(kind="logistic"), X, y)
        cart = fit(ClassifierSpec(kind="cart"), X, y)
        logi_accs.append(np.mean(predict_labels(logi, Xt) == yt))
        cart_accs.append(np.mean(predict_labels(cart, Xt) == yt))
    assert 0.4 <= np.mean(logi_accs) <= 0.6
    assert np.mean(cart_accs) >= 0.9


def test_degenerate_labels_raise():
    X = np.zeros((10, 2))
    with pytest.raises(DegenerateLabelsError):
        fit(ClassifierSpec(), X, np.zeros(10, dtype=int))
    with pytest.raises(DegenerateLabelsError):
        fit(ClassifierSpec(), X[:1], np.array([0]))


def test_constant_model_laplace():
    model = fit_constant(np.ones(8, dtype=int), class_arity=2, n_features=3)
    proba = model.predict_proba(np.zeros((5, 3)))
    np.testing.assert_allclose(proba, np.tile([1 / 10, 9 / 10], (5, 1)))
    assert predict_labels(model, np.zeros((5, 3))).tolist() == [1] * 5


def test_predict_proba_rows_sum_to_one():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(200, 3))
    y = rng.integers(0, 3, 200)
    model = fit_single_multiclass(ClassifierSpec(kind="cart"), X, y)
    proba = model.predict_proba(rng.normal(size=(50, 3)))
    np.testing.assert_allclose(proba.sum(axis=1), 1.0, atol=1e-9)
    assert proba.min() >= 0.0


def test_cart_leaf_laplace_smoothing():
    # constant features force a single leaf holding counts (3, 1)
    X = np.zeros((4, 1))
    y = np.array([0, 0, 0, 1])
    model = fit(ClassifierSpec(kind="cart"), X, y)
    np.testing.assert_allclose(model.predict_proba(np.zeros((2, 1))),
                               [[4 / 6, 2 / 6]] * 2)


def test_feature_count_mismatch():
    rng = np.random.default_rng(4)
    X = rng.normal(size=(50, 2))
    y = (X[:, 0] > 0).astype(int)
    model = fit(ClassifierSpec(kind="cart"), X, y)
    with pytest.raises(ValueError, match="feature count"):
        model.predict_proba(rng.normal(size=(5, 3)))


def test_cart_structure_constraints():
    rng = np.random.default_rng(5)
    X = rng.normal(size=(500, 4))
    y = ((X[:, 0] + X[:, 1] * X[:, 2]) > 0).astype(int)
    spec = ClassifierSpec(kind="cart", cart_min_split=30, cart_min_bucket=10,
                          cart_max_depth=4)
    model = fit(spec, X, y)
    assert model.max_depth() <= 4
    tree = model.tree
    reach = {0}
    for i in range(tree.n_nodes):
        if i in reach and not model.is_leaf[i]:
            n_rows = tree.counts[i].sum()
            assert n_rows >= 30
            reach |= {int(tree.left[i]), int(tree.right[i])}
        elif i in reach:
            assert tree.counts[i].sum() >= 10


def test_cart_pruning_monotone_training_accuracy():
    rng = np.random.default_rng(6)
    X = rng.normal(size=(400, 3))
    y = ((X[:, 0] > 0) ^ (X[:, 1] > 0.5)).astype(int)
    accs = prune_accuracy_path(ClassifierSpec(kind="cart"), X, y, 2)
    # grid is decreasing in cp, so training accuracy must be nondecreasing
    for simpler, fuller in zip(accs, accs[1:]):
        assert fuller >= simpler - 1e-12


def test_cart_cp_one_collapses_to_root():
    rng = np.random.default_rng(7)
    X = rng.normal(size=(200, 2))
    y = (X[:, 0] > 0).astype(int)
    model = fit(ClassifierSpec(kind="cart", cart_cp_grid=(1.0,)), X, y)
    assert model.n_leaves() == 1


def test_cart_deterministic():
    rng = np.random.default_rng(8)
    X = rng.normal(size=(300, 3))
    y = rng.integers(0, 2, 300)
    a = fit(ClassifierSpec(kind="cart"), X, y)
    b = fit(ClassifierSpec(kind="cart"), X, y)
    probe = rng.normal(size=(40, 3))
    np.testing.assert_array_equal(a.predict_proba(probe), b.predict_proba(probe))
    assert a.chosen_cp == b.chosen_cp


def test_single_multiclass_three_classes_separable():
    rng = np.random.default_rng(9)
    x = np.concatenate([rng.uniform(0, 1, 60), rng.uniform(2, 3, 60),
                        rng.uniform(4, 5, 60)])
    y = np.repeat([0, 1, 2], 60)
    model = fit_single_multiclass(ClassifierSpec(kind="cart"), x.reshape(-1, 1), y)
    assert np.mean(predict_labels(model, x.reshape(-1, 1)) == y) == 1.0


def test_single_multiclass_logistic_rejected_beyond_binary():
    X = np.arange(12, dtype=float).reshape(-1, 1)
    y = np.repeat([0, 1, 2], 4)
    with pytest.raises(ValueError, match="binary"):
        fit_single_multiclass(ClassifierSpec(kind="logistic"), X, y)


def test_ova_two_class_matches_single_binary():
    rng = np.random.default_rng(10)
    X = rng.normal(size=(150, 2))
    y = (X[:, 0] + X[:, 1] > 0.2).astype(int)
    probe = rng.normal(size=(60, 2))
    ova = fit_ova(ClassifierSpec(kind="cart"), X, y)
    single = fit(ClassifierSpec(kind="cart"), X, y)
    np.testing.assert_array_equal(ova.predict(probe),
                                  predict_labels(single, probe))


def test_ova_blobs(blob_dataset):
    ds = blob_dataset
    ova = fit_ova(ClassifierSpec(kind="cart"), ds.features, ds.labels)
    assert np.mean(ova.predict(ds.features) == ds.labels) >= 0.95
    scores = ova.predict_scores(ds.features)
    assert scores.shape == (ds.n_rows, 4)


def test_ova_handles_missing_class_with_constant():
    X = np.arange(20, dtype=float).reshape(-1, 1)
    y = np.repeat([0, 2], 10)  # class 1 absent
    ova = fit_ova(ClassifierSpec(kind="cart"), X, y, n_classes=3)
    assert isinstance(ova.models[1], ConstantModel)
    assert set(np.unique(ova.predict(X))) <= {0, 2}


def test_model_summary_json_serializable():
    rng = np.random.default_rng(11)
    X = rng.normal(size=(100, 2))
    y = (X[:, 0] > 0).astype(int)
    for kind in ("cart", "logistic"):
        summary = model_summary(fit(ClassifierSpec(kind=kind), X, y))
        text = json.dumps(summary)
        assert kind in text
    cart_summary = model_summary(fit(ClassifierSpec(kind="cart"), X, y))
    assert "chosen_cp" in cart_summary


def test_logistic_loglik_never_decreases_much():
    # step halving keeps each iterate within tolerance of monotone
    rng = np.random.default_rng(12)
    X = rng.normal(size=(250, 2))
    y = (X @ [1.0, -2.0] + rng.normal(size=250) > 0).astype(int)
    from hmcbench.learners.logistic import _log_likelihood, fit_logistic

    spec = ClassifierSpec(kind="logistic", logistic_max_iter=50)
    model = fit_logistic(spec, X, y)
    design = np.column_stack([np.ones(250), X])
    ll_fit = _log_likelihood(design @ model.coef, y)
    ll_zero = _log_likelihood(design @ np.zeros(3), y)
    assert ll_fit >= ll_zero
