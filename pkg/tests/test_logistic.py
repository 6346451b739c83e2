import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from histoclass.config import LogisticFitParams
from histoclass.data import Diagnosis
from histoclass.errors import DataError
from histoclass.logistic import (
    LogisticModel,
    fit_arrays,
    gradient,
    logit_fit,
    logit_predict,
    objective,
    predict_proba,
    sigmoid,
)

from conftest import PROPERTY_EXAMPLES, make_dataset


def central_difference(f, theta, h=1e-5):
    g = np.zeros_like(theta)
    for i in range(theta.size):
        e = np.zeros_like(theta)
        e[i] = h
        g[i] = (f(theta + e) - f(theta - e)) / (2 * h)
    return g


def fd_gradient(w, b, X, y, l2):
    theta = np.append(w, b)
    d = len(w)
    return central_difference(lambda t: objective(t[:d], t[d], X, y, l2), theta)


def grad_close(analytic, numeric, rel=1e-4):
    scale = max(1.0, np.max(np.abs(numeric)))
    return np.max(np.abs(analytic - numeric)) <= rel * scale


def model(w, b):
    return LogisticModel(tuple(f"f{i}" for i in range(len(w))), tuple(w), b, True, 0, 0.0)


def test_intercept_only_matches_base_rate():
    y = np.array([1] * 30 + [0] * 70)
    w, b, converged, *_ = fit_arrays(np.zeros((100, 0)), y)
    assert converged and w.size == 0
    assert b == pytest.approx(math.log(30 / 70), abs=1e-6)


def test_separable_1d_weight_positive():
    X = np.array([[0.0], [0.1], [0.2], [0.8], [0.9], [1.0]])
    ds = make_dataset(X, "NNNAAA")
    m = logit_fit(ds, LogisticFitParams(l2=1e-2))
    assert m.weights[0] > 0
    assert m.converged


def test_converged_fit_has_small_gradient_matching_fd():
    rng = np.random.default_rng(0)
    X = rng.uniform(size=(80, 3))
    y = (X @ [2.0, -1.0, 0.5] + rng.normal(0, 0.5, 80) > 0.7).astype(int)
    ds = make_dataset(X, ["A" if v else "N" for v in y])
    m = logit_fit(ds)
    assert m.converged and m.grad_norm < 1e-6
    w = np.array(m.weights)
    gw, gb = gradient(w, m.intercept, X, y, 1e-6)
    assert np.max(np.abs(np.append(gw, gb))) < 1e-6
    assert grad_close(np.append(gw, gb), fd_gradient(w, m.intercept, X, y, 1e-6))


def test_fit_errors():
    with pytest.raises(DataError, match="both classes"):
        logit_fit(make_dataset([[0.1], [0.2]], "AA"))


@settings(max_examples=PROPERTY_EXAMPLES)
@given(
    seed=st.integers(0, 10**6),
    n=st.integers(2, 30),
    d=st.integers(1, 4),
    l2=st.sampled_from([0.0, 1e-6, 0.1, 1.0]),
)
def test_gradient_matches_finite_differences(seed, n, d, l2):
    rng = np.random.default_rng(seed)
    X = rng.uniform(size=(n, d))
    y = rng.integers(0, 2, size=n).astype(float)
    w = rng.normal(0, 2, size=d)
    b = float(rng.normal(0, 2))
    gw, gb = gradient(w, b, X, y, l2)
    assert grad_close(np.append(gw, gb), fd_gradient(w, b, X, y, l2))


@settings(max_examples=PROPERTY_EXAMPLES)
@given(seed=st.integers(0, 10**6), n=st.integers(4, 40), d=st.integers(1, 3))
def test_objective_history_non_decreasing(seed, n, d):
    rng = np.random.default_rng(seed)
    X = rng.uniform(size=(n, d))
    y = rng.integers(0, 2, size=n)
    y[0], y[1] = 0, 1
    *_, history = fit_arrays(X, y)
    assert all(b >= a for a, b in zip(history, history[1:]))


def test_duplicating_training_set_keeps_optimum():
    rng = np.random.default_rng(3)
    X = rng.uniform(size=(50, 2))
    y = (X[:, 0] + rng.normal(0, 0.3, 50) > 0.5).astype(int)
    params = LogisticFitParams(l2=0.0, grad_tol=1e-10)
    w1, b1, *_ = fit_arrays(X, y, params)
    w2, b2, *_ = fit_arrays(np.vstack([X, X]), np.concatenate([y, y]), params)
    assert np.allclose(w1, w2, atol=1e-6) and b1 == pytest.approx(b2, abs=1e-6)


def test_predict_proba_values():
    assert predict_proba(model([0.0], 0.0), [3.0]) == 0.5
    assert predict_proba(model([0.0], math.log(3)), [1.0]) == pytest.approx(0.75, abs=1e-15)
    p = predict_proba(model([1.0], 0.0), [-1000.0])
    assert 0 < p < 1e-300 and not math.isnan(p)
    assert predict_proba(model([1.0], 0.0), [1000.0]) < 1.0


@settings(max_examples=PROPERTY_EXAMPLES)
@given(st.floats(-1e300, 1e300))
def test_proba_strictly_inside_unit_interval(score):
    p = predict_proba(model([1.0], 0.0), [score])
    assert 0 < p < 1


def test_sigmoid_no_overflow_warning():
    with np.errstate(over="raise"):
        s = sigmoid(np.array([-1e4, 0.0, 1e4]))
    assert s.tolist() == [0.0, 0.5, 1.0]


@pytest.mark.parametrize(
    "b, expected",
    [(0.0, (Diagnosis.A, 0.5)), (math.log(9), (Diagnosis.A, 0.9)), (math.log(0.25), (Diagnosis.N, 0.8))],
)
def test_logit_predict_rules(b, expected):
    label, confidence = logit_predict(model([0.0], b), [0.0])
    assert label is expected[0]
    assert confidence == pytest.approx(expected[1], abs=1e-12)


def test_schema_mismatch():
    with pytest.raises(DataError):
        predict_proba(model([1.0, 2.0], 0.0), [1.0])
