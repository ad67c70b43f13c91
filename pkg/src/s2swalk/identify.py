"""Online identification of linear step-to-step dynamics.

Two parameterizations share one update rule.  The state form fits

    x[k] = A x[k-1] + B u[k-1] + C,

the output form additionally fits the realized step size y = D x + E u + F.
Parameters are packed so that the prediction is theta.T @ phi with the
regressor phi = [p, v, u, 1]:

    state form   theta (4, 2):  theta.T = [A | B | C]
    output form  theta (4, 3):  theta.T = [[A | B | C], [D | E | F]]

The update is the normalized projection rule

    theta <- theta + Gamma phi (phi.T phi + eps)^-1 (z - theta.T phi).T

which with Gamma = I and eps = 0 interpolates the newest sample exactly, and
for Gamma = gamma * I with 0 < gamma < 2 never increases the parameter error
on noiseless data.  `horizon_update` is the multi-sample generalization over
a window of recent regressors; with a single column it reduces exactly to
the per-sample rule.
"""
from dataclasses import dataclass, replace

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError
from sklearn.utils.validation import check_array

from .errors import InvalidArgumentError
from .hlip import GaitParams, hlip_s2s
from .validation import as_finite_array, as_finite_float, require

REGRESSOR_DIM = 4
_MIN_DENOM = 1e-12


def regressor(x_prev, u_prev: float) -> np.ndarray:
    """Regressor [p, v, u, 1] built from the previous pre-impact state and
    the step size commanded during the completed step."""
    x_prev = as_finite_array("x_prev", x_prev, (2,))
    u_prev = as_finite_float("u_prev", u_prev)
    return np.array([x_prev[0], x_prev[1], u_prev, 1.0])


def predict(theta, phi) -> np.ndarray:
    """Model prediction theta.T @ phi."""
    theta = as_finite_array("theta", theta)
    if theta.ndim != 2 or theta.shape[0] != REGRESSOR_DIM:
        raise InvalidArgumentError(
            f"theta must be ({REGRESSOR_DIM}, m), got {theta.shape}")
    phi = as_finite_array("phi", phi, (REGRESSOR_DIM,))
    return theta.T @ phi


def _as_gain(gamma, n):
    """Normalize the adaptation gain to either a scalar or an SPD matrix."""
    if np.isscalar(gamma):
        g = as_finite_float("gamma", gamma)
        require(g > 0, "gamma must be positive")
        return g
    g = as_finite_array("gamma", gamma, (n, n))
    if not np.allclose(g, g.T, atol=1e-12):
        raise InvalidArgumentError("gamma must be symmetric")
    if np.min(np.linalg.eigvalsh(g)) <= 0:
        raise InvalidArgumentError("gamma must be positive definite")
    return g


def projection_update(theta, phi, z, gamma=0.2, eps=1e-8):
    """One projection update from a single (phi, z) sample.

    Returns (new_theta, applied).  The input block is never mutated; when the
    normalization phi.T phi + eps is below 1e-12 the update is skipped and
    applied is False.
    """
    theta = as_finite_array("theta", theta)
    phi = as_finite_array("phi", phi, (theta.shape[0],))
    z = as_finite_array("z", z, (theta.shape[1],))
    eps = as_finite_float("eps", eps)
    require(eps >= 0, "eps must be nonnegative")
    gain = _as_gain(gamma, theta.shape[0])
    denom = float(phi @ phi) + eps
    if denom < _MIN_DENOM:
        return theta.copy(), False
    residual = z - theta.T @ phi
    direction = gain * phi if np.isscalar(gain) else gain @ phi
    return theta + np.outer(direction, residual) / denom, True


def horizon_update(theta, phis, zs, gamma=0.2, eps=1e-8):
    """Projection update over a window of q recent samples.

    phis stacks regressors as columns (4, q); zs stacks the matching
    measurements as rows (q, m).  Partial windows simply pass fewer columns.
    """
    theta = as_finite_array("theta", theta)
    phis = as_finite_array("phis", phis)
    if phis.ndim == 1:
        phis = phis[:, None]
    if phis.shape[0] != theta.shape[0]:
        raise InvalidArgumentError(
            f"phis must have {theta.shape[0]} rows, got {phis.shape}")
    q = phis.shape[1]
    require(q >= 1, "window must hold at least one sample")
    zs = as_finite_array("zs", zs)
    if zs.ndim == 1:
        zs = zs[None, :]
    if zs.shape != (q, theta.shape[1]):
        raise InvalidArgumentError(
            f"zs must have shape ({q}, {theta.shape[1]}), got {zs.shape}")
    eps = as_finite_float("eps", eps)
    require(eps >= 0, "eps must be nonnegative")
    gain = _as_gain(gamma, theta.shape[0])
    gram = phis.T @ phis + eps * np.eye(q)
    if q == 1 and gram[0, 0] < _MIN_DENOM:
        return theta.copy(), False
    residual = zs - phis.T @ theta
    try:
        solved = np.linalg.solve(gram, residual)
    except np.linalg.LinAlgError:
        return theta.copy(), False
    direction = gain * phis if np.isscalar(gain) else gain @ phis
    return theta + direction @ solved, True


def pack_state(a, b, c) -> np.ndarray:
    """Pack state-form blocks into theta (4, 2) with theta.T = [A | B | C]."""
    a = as_finite_array("a", a, (2, 2))
    b = as_finite_array("b", b, (2,))
    c = as_finite_array("c", c, (2,))
    return np.column_stack([a, b, c]).T


def state_blocks(theta):
    """Unpack (A, B, C) from a packed block of either form."""
    theta = as_finite_array("theta", theta)
    tt = theta.T
    return tt[:2, :2].copy(), tt[:2, 2].copy(), tt[:2, 3].copy()


def pack_output(a, b, c, d, e, f) -> np.ndarray:
    """Pack output-form blocks into theta (4, 3)."""
    d = as_finite_array("d", d, (2,))
    e = as_finite_float("e", e)
    f = as_finite_float("f", f)
    state_rows = pack_state(a, b, c).T          # (2, 4)
    out_row = np.array([[d[0], d[1], e, f]])    # (1, 4)
    return np.vstack([state_rows, out_row]).T


def output_blocks(theta):
    """Unpack (A, B, C, D, E, F) from a packed output-form block."""
    theta = as_finite_array("theta", theta, (REGRESSOR_DIM, 3))
    tt = theta.T
    a, b, c = tt[:2, :2].copy(), tt[:2, 2].copy(), tt[:2, 3].copy()
    return a, b, c, tt[2, :2].copy(), float(tt[2, 2]), float(tt[2, 3])


def initial_state_theta(gait: GaitParams) -> np.ndarray:
    """State-form block initialized from the H-LIP map with zero offset."""
    mats = hlip_s2s(gait)
    return pack_state(mats.a, mats.b, np.zeros(2))


def initial_output_theta(gait: GaitParams) -> np.ndarray:
    """Output-form block: H-LIP state blocks plus identity pass-through
    (D = 0, E = 1, F = 0) for the realized step size."""
    mats = hlip_s2s(gait)
    return pack_output(mats.a, mats.b, np.zeros(2), np.zeros(2), 1.0, 0.0)


@dataclass(frozen=True)
class LegModels:
    """Per-stance-leg parameter blocks for period-2 gaits.

    Updates replace exactly one block and leave the other bit-identical;
    period-1 gaits simply never touch the right slot.
    """

    left: np.ndarray
    right: np.ndarray

    @classmethod
    def init(cls, theta0: np.ndarray) -> "LegModels":
        return cls(left=theta0.copy(), right=theta0.copy())

    def for_leg(self, leg: str) -> np.ndarray:
        if leg == "L":
            return self.left
        if leg == "R":
            return self.right
        raise InvalidArgumentError(f"leg must be 'L' or 'R', got {leg!r}")

    def with_leg(self, leg: str, theta: np.ndarray) -> "LegModels":
        if leg == "L":
            return replace(self, left=theta)
        if leg == "R":
            return replace(self, right=theta)
        raise InvalidArgumentError(f"leg must be 'L' or 'R', got {leg!r}")


class ProjectionRegressor(BaseEstimator):
    """Incremental multi-output linear regressor using the projection rule.

    Follows the scikit-learn estimator API so the identifier composes with
    the wider ecosystem: `partial_fit` consumes rows one at a time in order,
    `fit` resets and then consumes, `predict` applies the current estimate.
    A constant bias feature is appended internally when fit_intercept is
    True, mirroring the trailing 1 of the step regressor.
    """

    def __init__(self, gamma: float = 0.2, eps: float = 1e-8,
                 fit_intercept: bool = True):
        self.gamma = gamma
        self.eps = eps
        self.fit_intercept = fit_intercept

    def _regressors(self, X: np.ndarray) -> np.ndarray:
        if self.fit_intercept:
            return np.hstack([X, np.ones((X.shape[0], 1))])
        return X

    def partial_fit(self, X, y) -> "ProjectionRegressor":
        X = check_array(X, dtype=float)
        y = np.asarray(y, dtype=float)
        single_output = y.ndim == 1
        if single_output:
            y = y[:, None]
        if y.shape[0] != X.shape[0]:
            raise InvalidArgumentError("X and y must have matching rows")
        n_params = X.shape[1] + (1 if self.fit_intercept else 0)
        if not hasattr(self, "theta_"):
            self.theta_ = np.zeros((n_params, y.shape[1]))
            self.n_features_in_ = X.shape[1]
            self._single_output_ = single_output
        elif X.shape[1] != self.n_features_in_:
            raise InvalidArgumentError(
                f"expected {self.n_features_in_} features, got {X.shape[1]}")
        phis = self._regressors(X)
        for i in range(X.shape[0]):
            self.theta_, _ = projection_update(
                self.theta_, phis[i], y[i], gamma=self.gamma, eps=self.eps)
        return self

    def fit(self, X, y) -> "ProjectionRegressor":
        for attr in ("theta_", "n_features_in_", "_single_output_"):
            if hasattr(self, attr):
                delattr(self, attr)
        return self.partial_fit(X, y)

    def predict(self, X) -> np.ndarray:
        if not hasattr(self, "theta_"):
            raise NotFittedError(
                "this ProjectionRegressor instance is not fitted yet")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise InvalidArgumentError(
                f"expected {self.n_features_in_} features, got {X.shape[1]}")
        out = self._regressors(X) @ self.theta_
        return out.ravel() if self._single_output_ else out
