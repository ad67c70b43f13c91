"""Per-step targets and foot-placement control laws.

Orbit targets pair desired step sizes with the periodic pre-impact states of
the current model estimate.  Stance labels name the leg about to take the
step: the left target (u*_L, x*_L) is what the controller uses while the
left leg is in stance.  Period-2 fixed points solve the two-step composition
of the alternating per-leg maps; choosing one step size via `u_offset`
resolves the orbit's non-uniqueness.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import (DegenerateFeedforwardError, InvalidArgumentError,
                     SingularModelError)
from .gains import FeedbackGain
from .hlip import GaitParams
from .identify import initial_state_theta, output_blocks, state_blocks
from .validation import as_finite_array, as_finite_float, require

_COND_LIMIT = 1e8


@dataclass(frozen=True)
class OrbitTarget:
    """Desired step size(s) and model fixed point(s) for a P1 or P2 orbit."""

    kind: str                      # "P1" | "P2"
    v_des: float
    u_star: float | None = None
    x_star: np.ndarray | None = None
    u_star_left: float | None = None
    u_star_right: float | None = None
    x_star_left: np.ndarray | None = None
    x_star_right: np.ndarray | None = None

    def u_for(self, stance: str) -> float:
        if self.kind == "P1":
            return self.u_star
        return self.u_star_left if stance == "L" else self.u_star_right

    def x_for(self, stance: str) -> np.ndarray:
        if self.kind == "P1":
            return self.x_star
        return self.x_star_left if stance == "L" else self.x_star_right


def _solve_conditioned(m, rhs, what):
    if np.linalg.cond(m) > _COND_LIMIT:
        raise SingularModelError(f"{what} is near singular")
    return np.linalg.solve(m, rhs)


def p1_fixed_point(theta, u_star: float) -> np.ndarray:
    """Period-1 fixed point x* = (I - A)^-1 (B u* + C) of the estimate."""
    a, b, c = state_blocks(theta)
    u_star = as_finite_float("u_star", u_star)
    return _solve_conditioned(np.eye(2) - a, b * u_star + c, "I - A")


def p2_fixed_points(theta_left, theta_right, u_star_left: float,
                    u_star_right: float):
    """Period-2 fixed points of the alternating left/right maps.

    Stepping with the left-stance model from x*_L (step size u*_L) reaches
    x*_R, and stepping with the right-stance model from x*_R (u*_R) returns
    to x*_L.
    """
    a_l, b_l, c_l = state_blocks(theta_left)
    a_r, b_r, c_r = state_blocks(theta_right)
    u_l = as_finite_float("u_star_left", u_star_left)
    u_r = as_finite_float("u_star_right", u_star_right)
    x_l = _solve_conditioned(
        np.eye(2) - a_r @ a_l,
        a_r @ (b_l * u_l) + b_r * u_r + a_r @ c_l + c_r,
        "I - A_R A_L")
    x_r = _solve_conditioned(
        np.eye(2) - a_l @ a_r,
        a_l @ (b_r * u_r) + b_l * u_l + a_l @ c_r + c_l,
        "I - A_L A_R")
    return x_l, x_r


def p1_orbit(theta, v_des: float, period: float) -> OrbitTarget:
    """Period-1 target: u* = v_des * T and its model fixed point."""
    v_des = as_finite_float("v_des", v_des)
    period = as_finite_float("period", period)
    require(period > 0, "period must be positive")
    u_star = v_des * period
    return OrbitTarget(kind="P1", v_des=v_des, u_star=u_star,
                       x_star=p1_fixed_point(theta, u_star))


def p2_orbit(theta_left, theta_right, v_des: float, period: float,
             u_offset: float = 0.2) -> OrbitTarget:
    """Period-2 target with u*_L + u*_R = 2 v_des T and u*_L - u*_R fixed by
    the offset that selects the particular orbit."""
    v_des = as_finite_float("v_des", v_des)
    period = as_finite_float("period", period)
    require(period > 0, "period must be positive")
    u_offset = as_finite_float("u_offset", u_offset)
    u_l = v_des * period + u_offset
    u_r = 2.0 * v_des * period - u_l
    x_l, x_r = p2_fixed_points(theta_left, theta_right, u_l, u_r)
    return OrbitTarget(kind="P2", v_des=v_des,
                       u_star_left=u_l, u_star_right=u_r,
                       x_star_left=x_l, x_star_right=x_r)


def nominal_orbit(gait: GaitParams, v_des: float, kind: str = "P1",
                  u_offset: float = 0.2) -> OrbitTarget:
    """Orbit target of the nominal H-LIP model (zero offset block)."""
    theta0 = initial_state_theta(gait)
    if kind == "P1":
        return p1_orbit(theta0, v_des, gait.period)
    if kind == "P2":
        return p2_orbit(theta0, theta0, v_des, gait.period, u_offset)
    raise InvalidArgumentError(f"kind must be 'P1' or 'P2', got {kind!r}")


def _gain_for(gain, stance):
    if isinstance(gain, FeedbackGain):
        return gain
    return gain[stance]


def state_tracking_control(x, target: OrbitTarget, gain,
                           stance: str = "L") -> float:
    """u = u* + k (x - x*) with the stance leg's target and gain.

    `gain` is a FeedbackGain or a {"L": ..., "R": ...} mapping for per-leg
    gains on period-2 orbits.
    """
    x = as_finite_array("x", x, (2,))
    g = _gain_for(gain, stance)
    return float(target.u_for(stance) + g.k @ (x - target.x_for(stance)))


@dataclass(frozen=True)
class OutputFeedforward:
    """Feedforward terms of the output-tracking law u = k x + k_f r + b_f."""

    k_f: float
    b_f: float
    m_matrix: np.ndarray  # (2,), (D + E k)(I - A - B k)^-1


def output_feedforward(theta, gain: FeedbackGain, r: float,
                       r_threshold: float = 1e-6) -> OutputFeedforward:
    """Feedforward making the model's closed-loop equilibrium output equal r.

    Substituting u = k x + c into the state estimate gives the equilibrium
    x_e = (I - A - B k)^-1 (B c + C) whose predicted output is
    (M B + E) c + M C + F with M = (D + E k)(I - A - B k)^-1; solving for c
    and splitting it into k_f r (r away from zero) or b_f (r near zero)
    yields the two branches, which agree at the model equilibrium.
    """
    a, b, c, d, e, f = output_blocks(theta)
    r = as_finite_float("r", r)
    r_threshold = as_finite_float("r_threshold", r_threshold)
    closed = np.eye(2) - a - np.outer(b, gain.k)
    if np.linalg.cond(closed) > _COND_LIMIT:
        raise DegenerateFeedforwardError("closed-loop matrix is near singular")
    m_row = np.linalg.solve(closed.T, d + e * gain.k)
    denom = float(m_row @ b + e)
    if abs(denom) <= 1e-10:
        raise DegenerateFeedforwardError(
            "feedforward denominator M B + E is near zero")
    c_term = (r - f - float(m_row @ c)) / denom
    if abs(r) <= r_threshold:
        return OutputFeedforward(k_f=0.0, b_f=c_term, m_matrix=m_row)
    return OutputFeedforward(k_f=c_term / r, b_f=0.0, m_matrix=m_row)


def output_tracking_control(x, gain: FeedbackGain, ff: OutputFeedforward,
                            r: float) -> float:
    """u = k x + k_f r + b_f."""
    x = as_finite_array("x", x, (2,))
    return float(gain.k @ x + ff.k_f * float(r) + ff.b_f)


def bias_equilibrium(a, b, c, k, bias, x_ref, u_ref) -> np.ndarray:
    """Closed-loop fixed point under a constant measurement offset.

    For the loop x+ = A x + B (u_ref + k (x + bias - x_ref)) + C this is
    (I - A - B k)^-1 (B k bias - B k x_ref + B u_ref + C).
    """
    a = as_finite_array("a", a, (2, 2))
    b = as_finite_array("b", np.ravel(b), (2,))
    c = as_finite_array("c", c, (2,))
    k = as_finite_array("k", k, (2,))
    bias = as_finite_array("bias", bias, (2,))
    x_ref = as_finite_array("x_ref", x_ref, (2,))
    u_ref = as_finite_float("u_ref", u_ref)
    bk = np.outer(b, k)
    return _solve_conditioned(
        np.eye(2) - a - bk,
        bk @ bias - bk @ x_ref + b * u_ref + c,
        "I - A - B k")


def saturate_step(u: float, u_max: float) -> float:
    """Clamp a commanded step size to [-u_max, u_max]."""
    u = as_finite_float("u", u)
    u_max = as_finite_float("u_max", u_max)
    require(u_max > 0, "u_max must be positive")
    return math.copysign(u_max, u) if abs(u) > u_max else u
