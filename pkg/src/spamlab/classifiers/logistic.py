"""L2-penalized logistic regression, fit by damped Newton iterations.

Objective (intercept unpenalized):

    NLL(w, b) = sum_i [log(1 + exp(z_i)) - y_i * z_i] + (lambda/2) * ||w||^2
    z_i = w . x_i + b

With lambda > 0 the objective is strictly convex and the optimum is finite
even when a feature perfectly separates the classes. Newton steps fall back
to halved steps (and finally to the gradient direction) whenever a full step
would increase the objective, so the NLL trace is non-increasing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from ..corpus import Label
from ..textfeat import FeatureMatrix, FeatureVector
from .common import (
    SingleClassCorpusError,
    TrainConfig,
    ZeroFeaturesError,
    as_xy,
    check_dimension,
    label_from_score,
    vector_values,
)


@dataclass(frozen=True, eq=False)
class LogisticModel:
    weights: np.ndarray
    intercept: float
    lambda_: float
    converged: bool
    iterations: int
    nll_path: tuple[float, ...] = field(default=(), repr=False)

    @property
    def n_features(self) -> int:
        return len(self.weights)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    # exp(-softplus(-z)): stable for large |z|.
    return np.exp(-np.logaddexp(0.0, -z))


def nll_and_grad(
    X: np.ndarray, y: np.ndarray, w: np.ndarray, b: float, lambda_: float
) -> tuple[float, np.ndarray, float]:
    """Penalized NLL plus its analytic gradient (exposed for oracle tests)."""
    z = X @ w + b
    nll = float(np.sum(np.logaddexp(0.0, z) - y * z) + 0.5 * lambda_ * np.dot(w, w))
    p = _sigmoid(z)
    grad_w = X.T @ (p - y) + lambda_ * w
    grad_b = float(np.sum(p - y))
    return nll, grad_w, grad_b


def fit_logistic(matrix: FeatureMatrix, config: TrainConfig = TrainConfig()) -> LogisticModel:
    X, y = as_xy(matrix)
    n, p = X.shape
    if p == 0:
        raise ZeroFeaturesError()
    if y.sum() in (0, n):
        raise SingleClassCorpusError()

    lam = config.lambda_
    Xb = np.hstack([X, np.ones((n, 1))])
    theta = np.zeros(p + 1)
    penalty_diag = np.append(np.full(p, lam), 0.0)

    def objective(t: np.ndarray) -> float:
        z = Xb @ t
        return float(np.sum(np.logaddexp(0.0, z) - y * z) + 0.5 * lam * np.dot(t[:p], t[:p]))

    def gradient(t: np.ndarray) -> np.ndarray:
        z = Xb @ t
        return Xb.T @ (_sigmoid(z) - y) + penalty_diag * t

    nll = objective(theta)
    path = [nll]
    iterations = 0
    converged = False

    for _ in range(config.max_iter):
        grad = gradient(theta)
        if np.max(np.abs(grad)) < config.tol:
            converged = True
            break
        z = Xb @ theta
        prob = _sigmoid(z)
        weights_ = prob * (1.0 - prob)
        hessian = Xb.T @ (weights_[:, None] * Xb) + np.diag(penalty_diag)
        try:
            direction = np.linalg.solve(hessian, -grad)
        except np.linalg.LinAlgError:
            direction = -grad

        step = _descend(objective, theta, direction, nll)
        if step is None:
            # Newton direction failed to improve; try plain steepest descent.
            step = _descend(objective, theta, -grad, nll)
        if step is None:
            break
        theta, nll = step
        path.append(nll)
        iterations += 1

    if not converged:
        converged = bool(np.max(np.abs(gradient(theta))) < config.tol)
    return LogisticModel(
        weights=theta[:p].copy(),
        intercept=float(theta[p]),
        lambda_=lam,
        converged=converged,
        iterations=iterations,
        nll_path=tuple(path),
    )


def _descend(objective, theta, direction, current) -> tuple[np.ndarray, float] | None:
    """Backtracking halving; None when every step length increases the NLL.

    Equal-NLL steps are accepted: near the optimum the objective change drops
    below float resolution while the Newton step still shrinks the gradient.
    """
    scale = 1.0
    for _ in range(60):
        candidate = theta + scale * direction
        value = objective(candidate)
        if np.isfinite(value) and value <= current:
            return candidate, value
        scale *= 0.5
    return None


def predict_logistic(
    model: LogisticModel,
    x: Union[FeatureVector, Sequence[bool]],
    threshold: float = 0.5,
) -> tuple[Label, float]:
    values = vector_values(x)
    check_dimension(values, model.n_features)
    z = float(model.weights @ np.array(values, dtype=float) + model.intercept)
    probability = float(np.exp(-np.logaddexp(0.0, -z)))
    return label_from_score(probability, threshold), probability
