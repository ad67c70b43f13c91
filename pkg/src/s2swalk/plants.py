"""Ground-truth surrogate plants with disturbance knobs.

Two plant kinds share one interface.  The linear plant evolves an exact
affine map x+ = A x + B y + C (driven by the realized step size y); the
hybrid plant integrates the single-support pendulum dynamics each step.
Disturbance knobs map physical scenarios onto the reduced model:

    lambda_scale          unknown load / modified mass (scales the pendulum
                          frequency actually experienced by the robot)
    accel_ext             external horizontal drag force as F / m_total,
                          constant or ramped per step
    meas_bias             constant state-estimation offset on [p, v]
    output_map            low-level tracking error: realized step size
                          y = d @ x + e * u_cmd + f
    slope_kappa           unknown slope: actual single-support duration
                          t_ssp + slope_kappa * u_cmd
    process/meas noise    optional Gaussian disturbances, off by default

Every plant owns its RNG; a fixed seed makes trajectories bit-identical.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import FallDetected, InvalidArgumentError
from .hlip import GaitParams, flow_ssp
from .validation import as_finite_array, as_finite_float, require

FALL_LIMIT = 1e3


@dataclass(frozen=True)
class RampSchedule:
    """Linear ramp from start to end over ramp_steps, constant afterwards."""

    start: float
    end: float
    ramp_steps: int

    def __post_init__(self):
        as_finite_float("start", self.start)
        as_finite_float("end", self.end)
        require(self.ramp_steps >= 1, "ramp_steps must be >= 1")


@dataclass(frozen=True)
class HoldSchedule:
    """Piecewise-constant schedule: value of the latest breakpoint <= k."""

    points: tuple

    def __post_init__(self):
        require(len(self.points) >= 1, "schedule needs at least one point")
        steps = [p[0] for p in self.points]
        require(steps[0] == 0, "first breakpoint must be at step 0")
        require(steps == sorted(steps), "breakpoints must be ascending")
        for _, value in self.points:
            as_finite_float("schedule value", value)


def eval_schedule(schedule, k: int) -> float:
    """Evaluate a float, RampSchedule, or HoldSchedule at step index k."""
    if isinstance(schedule, RampSchedule):
        if k >= schedule.ramp_steps:
            return float(schedule.end)
        frac = k / schedule.ramp_steps
        return float(schedule.start + (schedule.end - schedule.start) * frac)
    if isinstance(schedule, HoldSchedule):
        value = schedule.points[0][1]
        for step, v in schedule.points:
            if step <= k:
                value = v
            else:
                break
        return float(value)
    return as_finite_float("schedule", schedule)


@dataclass(frozen=True)
class OutputMap:
    """Realized step size y = d @ x + e * u_cmd + f."""

    d: tuple = (0.0, 0.0)
    e: float = 1.0
    f: float = 0.0

    def __post_init__(self):
        as_finite_array("d", self.d, (2,))
        require(as_finite_float("e", self.e) > 0, "e must be positive")
        as_finite_float("f", self.f)


@dataclass(frozen=True)
class PlantConfig:
    kind: str = "hybrid_lip"         # "linear" | "hybrid_lip"
    gait: GaitParams | None = None   # defaults to the scenario gait
    true_a: tuple | None = None      # linear kind; None -> H-LIP matrices
    true_b: tuple | None = None
    true_c: tuple | None = None
    lambda_scale: float = 1.0
    accel_ext: object = 0.0          # float | RampSchedule
    meas_bias: tuple = (0.0, 0.0)
    output_map: OutputMap = field(default_factory=OutputMap)
    slope_kappa: float = 0.0
    process_noise_sigma: tuple = (0.0, 0.0)
    meas_noise_sigma: tuple = (0.0, 0.0)
    seed: int | None = None
    dt: float = 1e-3

    def __post_init__(self):
        if self.kind not in ("linear", "hybrid_lip"):
            raise InvalidArgumentError(
                f"kind must be 'linear' or 'hybrid_lip', got {self.kind!r}")
        require(self.dt > 0, "dt must be positive")
        require(self.lambda_scale > 0, "lambda_scale must be positive")
        as_finite_array("meas_bias", self.meas_bias, (2,))
        as_finite_array("process_noise_sigma", self.process_noise_sigma, (2,))
        as_finite_array("meas_noise_sigma", self.meas_noise_sigma, (2,))


@dataclass(frozen=True)
class PlantOutput:
    x_true_next: np.ndarray
    x_meas_next: np.ndarray
    y_actual: float        # realized step size
    t_step: float          # realized step duration


class _PlantBase:
    def __init__(self, cfg: PlantConfig, gait: GaitParams):
        self.cfg = cfg
        self.gait = cfg.gait if cfg.gait is not None else gait
        if self.gait is None:
            raise InvalidArgumentError("plant needs gait parameters")
        self.rng = np.random.default_rng(cfg.seed)
        self._bias = np.asarray(cfg.meas_bias, dtype=float)
        self._proc_sigma = np.asarray(cfg.process_noise_sigma, dtype=float)
        self._meas_sigma = np.asarray(cfg.meas_noise_sigma, dtype=float)
        d = np.asarray(cfg.output_map.d, dtype=float)
        self._out = (d, float(cfg.output_map.e), float(cfg.output_map.f))

    def measure(self, x_true) -> np.ndarray:
        x = np.asarray(x_true, dtype=float)
        noise = 0.0
        if np.any(self._meas_sigma > 0):
            noise = self.rng.normal(0.0, 1.0, 2) * self._meas_sigma
        return x + self._bias + noise

    def _realized_step(self, x_true, u_cmd: float) -> float:
        d, e, f = self._out
        return float(d @ x_true + e * u_cmd + f)

    def _process_noise(self) -> np.ndarray:
        if np.any(self._proc_sigma > 0):
            return self.rng.normal(0.0, 1.0, 2) * self._proc_sigma
        return np.zeros(2)


class LinearPlant(_PlantBase):
    """Exact affine step map driven by the realized step size."""

    def __init__(self, cfg: PlantConfig, gait: GaitParams):
        super().__init__(cfg, gait)
        from .hlip import hlip_s2s
        mats = hlip_s2s(self.gait)
        self.a = (np.asarray(cfg.true_a, dtype=float)
                  if cfg.true_a is not None else mats.a)
        self.b = (np.asarray(cfg.true_b, dtype=float).ravel()
                  if cfg.true_b is not None else mats.b)
        self.c = (np.asarray(cfg.true_c, dtype=float)
                  if cfg.true_c is not None else np.zeros(2))
        as_finite_array("true_a", self.a, (2, 2))
        as_finite_array("true_b", self.b, (2,))
        as_finite_array("true_c", self.c, (2,))

    def step(self, x_true, u_cmd: float, k: int) -> PlantOutput:
        x = np.asarray(x_true, dtype=float)
        y = self._realized_step(x, u_cmd)
        accel = eval_schedule(self.cfg.accel_ext, k)
        w = np.array([0.0, accel * self.gait.period]) + self._process_noise()
        x_next = self.a @ x + self.b * y + self.c + w
        if np.any(np.abs(x_next) > FALL_LIMIT):
            raise FallDetected("linear plant state diverged")
        return PlantOutput(x_true_next=x_next,
                           x_meas_next=self.measure(x_next),
                           y_actual=y, t_step=self.gait.period)


class HybridLipPlant(_PlantBase):
    """Hybrid pendulum plant integrated one step at a time."""

    def step(self, x_true, u_cmd: float, k: int) -> PlantOutput:
        g = self.gait
        x = np.asarray(x_true, dtype=float)
        y = self._realized_step(x, u_cmd)
        t_ssp = g.t_ssp + self.cfg.slope_kappa * u_cmd
        if t_ssp <= 0.01 * g.t_ssp:
            raise FallDetected("single-support duration collapsed")
        lam = g.lam * self.cfg.lambda_scale
        accel = eval_schedule(self.cfg.accel_ext, k)
        p, v = x[0] - y, x[1]
        p += v * g.t_dsp
        p, v = flow_ssp(p, v, lam * lam, accel, t_ssp, self.cfg.dt,
                        limit=FALL_LIMIT)
        x_next = np.array([p, v]) + self._process_noise()
        return PlantOutput(x_true_next=x_next,
                           x_meas_next=self.measure(x_next),
                           y_actual=y, t_step=t_ssp + g.t_dsp)


def make_plant(cfg: PlantConfig, gait: GaitParams | None = None):
    if cfg.kind == "linear":
        return LinearPlant(cfg, gait)
    return HybridLipPlant(cfg, gait)
