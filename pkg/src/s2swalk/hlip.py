"""Hybrid linear inverted pendulum (H-LIP) step-to-step model.

The model alternates a passive single-support phase (SSP), where the
horizontal COM obeys p'' = lam^2 * p about the stance pivot, and a
double-support phase (DSP) where the COM travels at constant velocity.
Sampling the horizontal COM state x = [p, v] just before foot strike
("pre-impact") gives a discrete step-to-step (S2S) map that is exactly
linear in the state and the step size u:

    x[k+1] = A @ x[k] + B * u[k]

Event ordering, used as the single convention throughout the package: at
touchdown the stance pivot advances by the step size (p -> p - u, velocity
continuous), then DSP, then SSP until the next pre-impact event.  With that
ordering,

    A = M_ssp(t_ssp) @ M_dsp(t_dsp),    B = -M_ssp(t_ssp) @ [1, 0]

where M_ssp is the closed-form SSP flow and M_dsp(t) = [[1, t], [0, 1]].
`integrate_hlip_step` realizes the same map by fixed-step RK4 integration
and serves as the numerical oracle for the closed form.
"""
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import FallDetected, InvalidArgumentError
from .validation import as_finite_array, as_finite_float, require


@dataclass(frozen=True)
class GaitParams:
    """Gait timing and geometry; lam = sqrt(gravity / z_com) is derived."""

    z_com: float
    t_ssp: float
    t_dsp: float = 0.0
    gravity: float = 9.81

    def __post_init__(self):
        for name in ("z_com", "t_ssp", "t_dsp", "gravity"):
            as_finite_float(name, getattr(self, name))
        require(self.z_com > 0, "z_com must be positive")
        require(self.t_ssp > 0, "t_ssp must be positive")
        require(self.t_dsp >= 0, "t_dsp must be nonnegative")
        require(self.gravity > 0, "gravity must be positive")

    @property
    def lam(self) -> float:
        return math.sqrt(self.gravity / self.z_com)

    @property
    def period(self) -> float:
        """Nominal step duration T = t_ssp + t_dsp."""
        return self.t_ssp + self.t_dsp


class HlipMatrices(NamedTuple):
    a: np.ndarray  # (2, 2) state matrix
    b: np.ndarray  # (2,) input (step size) matrix


def ssp_transition(lam: float, t: float) -> np.ndarray:
    """Closed-form flow of p'' = lam^2 p over time t.

    Returns [[cosh(lam t), sinh(lam t)/lam], [lam sinh(lam t), cosh(lam t)]],
    which has unit determinant for every lam, t.
    """
    lam = as_finite_float("lam", lam)
    t = as_finite_float("t", t)
    require(lam > 0, "lam must be positive")
    require(t >= 0, "t must be nonnegative")
    c, s = math.cosh(lam * t), math.sinh(lam * t)
    return np.array([[c, s / lam], [lam * s, c]])


def dsp_transition(t: float) -> np.ndarray:
    """Constant-velocity drift over the double-support duration."""
    t = as_finite_float("t", t)
    require(t >= 0, "t must be nonnegative")
    return np.array([[1.0, t], [0.0, 1.0]])


def hlip_s2s(gait: GaitParams) -> HlipMatrices:
    """Closed-form pre-impact-to-pre-impact map of the H-LIP."""
    if not isinstance(gait, GaitParams):
        raise InvalidArgumentError("gait must be a GaitParams")
    m_ssp = ssp_transition(gait.lam, gait.t_ssp)
    a = m_ssp @ dsp_transition(gait.t_dsp)
    b = -m_ssp @ np.array([1.0, 0.0])
    return HlipMatrices(a, b)


def flow_ssp(p: float, v: float, lam2: float, accel: float, duration: float,
             dt: float, limit: float | None = None) -> tuple[float, float]:
    """Fixed-step RK4 integration of p'' = lam2 * p + accel.

    The step count is duration/dt rounded to the nearest integer (at least
    one), so halving dt doubles the step count exactly.  When `limit` is set,
    exceeding it in |p| or |v| raises FallDetected.
    """
    if dt <= 0:
        raise InvalidArgumentError("dt must be positive")
    n = max(1, round(duration / dt))
    h = duration / n
    h6 = h / 6.0
    for _ in range(n):
        k1p = v
        k1v = lam2 * p + accel
        p2 = p + 0.5 * h * k1p
        v2 = v + 0.5 * h * k1v
        k2p = v2
        k2v = lam2 * p2 + accel
        p3 = p + 0.5 * h * k2p
        v3 = v + 0.5 * h * k2v
        k3p = v3
        k3v = lam2 * p3 + accel
        p4 = p + h * k3p
        v4 = v + h * k3v
        k4p = v4
        k4v = lam2 * p4 + accel
        p += h6 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        v += h6 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        if limit is not None and (abs(p) > limit or abs(v) > limit):
            raise FallDetected(
                f"state left the walking regime (|p| or |v| > {limit})")
    return p, v


def integrate_hlip_step(x, u: float, gait: GaitParams,
                        dt: float = 1e-4) -> np.ndarray:
    """One hybrid step by numerical integration (oracle for hlip_s2s).

    Applies the touchdown shift, drifts through DSP at constant velocity,
    then integrates the SSP dynamics with fixed-step RK4.
    """
    x = as_finite_array("x", x, (2,))
    u = as_finite_float("u", u)
    p, v = x[0] - u, x[1]
    p += v * gait.t_dsp
    p, v = flow_ssp(p, v, gait.lam ** 2, 0.0, gait.t_ssp, dt)
    return np.array([p, v])


def stepping_control(x, x_ref, u_ref: float, k) -> float:
    """Linear foot-placement law u = u_ref + k @ (x - x_ref)."""
    x = as_finite_array("x", x, (2,))
    x_ref = as_finite_array("x_ref", x_ref, (2,))
    u_ref = as_finite_float("u_ref", u_ref)
    k = as_finite_array("k", k, (2,))
    return float(u_ref + k @ (x - x_ref))
