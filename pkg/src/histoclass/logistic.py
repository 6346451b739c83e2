"""L2-penalised logistic regression fitted by damped Newton ascent.

The class coding is A = 1, N = 0, so ``predict_proba`` returns P(A | x).
The intercept is not penalised.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import LogisticFitParams
from .data import Dataset, Diagnosis
from .errors import DataError, NumericalError


@dataclass(frozen=True)
class LogisticModel:
    schema: tuple[str, ...]
    weights: tuple[float, ...]
    intercept: float
    converged: bool
    iterations: int
    grad_norm: float
    objective_history: tuple[float, ...] = field(default=(), compare=False, repr=False)

    @property
    def name(self) -> str:
        return "logistic"

    def score(self, x) -> float:
        x = np.asarray(x, dtype=float).ravel()
        if x.size != len(self.weights):
            raise DataError(
                f"schema mismatch: model expects {len(self.weights)} features, got {x.size}"
            )
        return float(np.dot(self.weights, x) + self.intercept)

    def predict(self, x) -> tuple[Diagnosis, float]:
        return logit_predict(self, x)


def sigmoid(z):
    """Overflow-safe logistic function."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def objective(w, b, X, y, l2):
    """Penalised log-likelihood ``sum(y*s - log(1 + e^s)) - l2/2 * |w|^2``."""
    s = X @ w + b
    return float(np.sum(y * s - np.logaddexp(0.0, s)) - 0.5 * l2 * np.dot(w, w))


def gradient(w, b, X, y, l2):
    """Gradient of :func:`objective` as ``(d/dw, d/db)``."""
    r = y - sigmoid(X @ w + b)
    return X.T @ r - l2 * w, float(r.sum())


def _hessian(w, b, X, l2):
    p = sigmoid(X @ w + b)
    v = p * (1.0 - p)
    Z = np.hstack([X, np.ones((X.shape[0], 1))])
    H = -(Z.T * v) @ Z
    d = X.shape[1]
    H[np.arange(d), np.arange(d)] -= l2
    return H


def fit_arrays(X, y, params: LogisticFitParams | None = None):
    """Fit on a raw design matrix; returns ``(w, b, converged, iters, gnorm, history)``.

    ``X`` may have zero columns, giving an intercept-only model.
    """
    params = params or LogisticFitParams()
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or X.shape[0] != y.size:
        raise DataError("X must be (n, d) with one label per row")
    if y.size == 0:
        raise DataError("empty training set")
    if y.min() == y.max():
        raise DataError("logistic regression needs both classes in training data")

    d = X.shape[1]
    w = np.zeros(d)
    b = 0.0
    f = objective(w, b, X, y, params.l2)
    history = [f]
    it = 0
    gw, gb = gradient(w, b, X, y, params.l2)
    gnorm = max(np.max(np.abs(gw), initial=0.0), abs(gb))
    while it < params.max_iter:
        if gnorm < params.grad_tol:
            break
        it += 1
        g = np.append(gw, gb)
        H = _hessian(w, b, X, params.l2)
        try:
            step = -np.linalg.solve(H, g)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(-H, g, rcond=None)[0]
        if not np.all(np.isfinite(step)) or np.dot(step, g) <= 0:
            step = g  # fall back to steepest ascent
        t = 1.0
        while t > 1e-12:
            w_new, b_new = w + t * step[:d], b + t * step[d]
            f_new = objective(w_new, b_new, X, y, params.l2)
            if np.isfinite(f_new) and f_new >= f:
                break
            t *= 0.5
        else:
            break  # no ascent step available at working precision
        w, b, f = w_new, b_new, f_new
        if not np.isfinite(f):
            raise NumericalError("non-finite objective")
        history.append(f)
        gw, gb = gradient(w, b, X, y, params.l2)
        gnorm = max(np.max(np.abs(gw), initial=0.0), abs(gb))
    converged = bool(gnorm < params.grad_tol)
    if not (np.all(np.isfinite(w)) and np.isfinite(b)):
        raise NumericalError("non-finite coefficients")
    return w, float(b), converged, it, float(gnorm), tuple(history)


def logit_fit(train: Dataset, params: LogisticFitParams | None = None) -> LogisticModel:
    w, b, converged, iters, gnorm, history = fit_arrays(train.X, train.y, params)
    return LogisticModel(
        schema=train.schema,
        weights=tuple(float(v) for v in w),
        intercept=b,
        converged=converged,
        iterations=iters,
        grad_norm=gnorm,
        objective_history=history,
    )


_P_MIN = float(np.finfo(float).tiny)
_P_MAX = 1.0 - float(np.finfo(float).epsneg)


def predict_proba(m: LogisticModel, sample) -> float:
    p = float(sigmoid(np.array([m.score(sample)]))[0])
    # keep p strictly inside (0, 1) once exp() saturates
    return min(max(p, _P_MIN), _P_MAX)


def logit_predict(m: LogisticModel, sample, threshold: float = 0.5) -> tuple[Diagnosis, float]:
    p = predict_proba(m, sample)
    label = Diagnosis.A if p >= threshold else Diagnosis.N
    return label, max(p, 1.0 - p)
