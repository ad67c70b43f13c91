"""Feedback gain synthesis from the current model estimate.

Gains follow the convention u = k @ x (so stability means the spectral
radius of A + B k is below one).  Deadbeat design places both closed-loop
eigenvalues at zero via Ackermann's formula; the LQR design solves the
discrete algebraic Riccati equation by fixed-point iteration.
"""
from dataclasses import dataclass

import numpy as np

from .errors import (InvalidArgumentError, RiccatiDivergenceError,
                     UncontrollableModelError)
from .validation import as_finite_array, as_finite_float, require


@dataclass(frozen=True)
class FeedbackGain:
    k: np.ndarray                        # row gain, u = k @ x
    method: str                          # "deadbeat" or "lqr"
    closed_loop_spectral_radius: float


def spectral_radius(m) -> float:
    """Largest eigenvalue magnitude of a square matrix."""
    m = as_finite_array("m", np.atleast_2d(m))
    if m.shape[0] != m.shape[1]:
        raise InvalidArgumentError(f"m must be square, got {m.shape}")
    return float(np.max(np.abs(np.linalg.eigvals(m))))


def controllability_matrix(a, b) -> np.ndarray:
    """[b, a b, ..., a^(n-1) b] for a single-input pair."""
    a = as_finite_array("a", a)
    b = as_finite_array("b", b)
    if b.ndim == 2:
        b = b.ravel()
    n = a.shape[0]
    if a.shape != (n, n) or b.shape != (n,):
        raise InvalidArgumentError("a must be (n, n) and b (n,)")
    cols = [b]
    for _ in range(n - 1):
        cols.append(a @ cols[-1])
    return np.column_stack(cols)


def controllability_ok(a, b, tol: float = 1e-8) -> bool:
    """True when the controllability matrix has condition number <= 1/tol."""
    tol = as_finite_float("tol", tol)
    require(tol > 0, "tol must be positive")
    cond = np.linalg.cond(controllability_matrix(a, b))
    return bool(np.isfinite(cond) and cond <= 1.0 / tol)


def deadbeat_gain(a, b, tol: float = 1e-8) -> FeedbackGain:
    """Deadbeat gain for a 2-state single-input pair.

    Ackermann's formula with desired characteristic polynomial s^2 gives
    k = -[0, 1] @ [b, a b]^-1 @ a^2, making A + B k nilpotent of index <= 2.
    When a^2 is numerically zero the open loop is already deadbeat and k = 0
    regardless of conditioning; otherwise an ill-conditioned controllability
    matrix raises UncontrollableModelError.
    """
    a = as_finite_array("a", a, (2, 2))
    b = as_finite_array("b", np.ravel(b), (2,))
    a2 = a @ a
    if np.linalg.norm(a2) <= 1e-12:
        k = np.zeros(2)
    else:
        if not controllability_ok(a, b, tol):
            raise UncontrollableModelError(
                "controllability matrix of (a, b) is ill conditioned")
        ctrb = controllability_matrix(a, b)
        k = -np.array([0.0, 1.0]) @ np.linalg.solve(ctrb, a2)
    rho = spectral_radius(a + np.outer(b, k))
    return FeedbackGain(k=k, method="deadbeat",
                        closed_loop_spectral_radius=rho)


def dlqr_gain(a, b, q=None, r=None, tol: float = 1e-12,
              max_iter: int = 50_000):
    """Infinite-horizon discrete LQR gain.

    Iterates P <- Q + A'PA - A'PB (R + B'PB)^-1 B'PA from P = Q until the
    update falls below tol, then returns (FeedbackGain, P) with
    k = -(R + B'PB)^-1 B'PA.  Raises RiccatiDivergenceError when the
    iteration does not settle within max_iter or the closed loop is not
    Schur stable.
    """
    a = as_finite_array("a", np.atleast_2d(a))
    n = a.shape[0]
    if a.shape != (n, n):
        raise InvalidArgumentError(f"a must be square, got {a.shape}")
    b = as_finite_array("b", b)
    if b.ndim == 1:
        b = b[:, None]
    if b.shape[0] != n:
        raise InvalidArgumentError(f"b must have {n} rows, got {b.shape}")
    m = b.shape[1]
    q = np.eye(n) if q is None else as_finite_array("q", np.atleast_2d(q), (n, n))
    r = np.eye(m) if r is None else as_finite_array("r", np.atleast_2d(r), (m, m))
    if np.min(np.linalg.eigvalsh((q + q.T) / 2)) < -1e-10:
        raise InvalidArgumentError("q must be positive semidefinite")
    if np.min(np.linalg.eigvalsh((r + r.T) / 2)) <= 0:
        raise InvalidArgumentError("r must be positive definite")

    p = q.copy()
    for _ in range(max_iter):
        btpb = r + b.T @ p @ b
        k = -np.linalg.solve(btpb, b.T @ p @ a)
        p_next = q + a.T @ p @ (a + b @ k)
        p_next = (p_next + p_next.T) / 2
        if np.max(np.abs(p_next - p)) <= tol:
            p = p_next
            break
        p = p_next
    else:
        raise RiccatiDivergenceError(
            f"Riccati iteration did not converge in {max_iter} steps")

    k = -np.linalg.solve(r + b.T @ p @ b, b.T @ p @ a)
    rho = spectral_radius(a + b @ k)
    if rho >= 1.0:
        raise RiccatiDivergenceError(
            f"converged Riccati solution is not stabilizing (rho = {rho:.6f})")
    k_out = k.ravel() if m == 1 else k
    return FeedbackGain(k=k_out, method="lqr",
                        closed_loop_spectral_radius=rho), p
