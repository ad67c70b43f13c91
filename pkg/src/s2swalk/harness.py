"""Per-step walking loop, scenario configuration, and metrics.

Each episode runs its channels (e.g. sagittal P1, lateral P2) independently.
Within one step the phases run in a fixed order, stamped with sequence
numbers so the ordering is assertable from the records:

    1. read the measured pre-impact state
    2. adaptive controllers update the completed step's parameter block
    3. synthesize the stance leg's feedback gain from the accepted estimate
    4. refresh the desired step size and model fixed points
    5. evaluate the configured controller and saturate the command
    6. advance the plant

The baseline controller skips adaptation and uses the nominal model's gain
and targets throughout.  An update that breaks the controllability check is
kept for estimation but rolled back for control ("freeze"), so gains are
always synthesized from the last controllable estimate.

Velocity bookkeeping: the per-step velocity error is |y_k - u*_k| / T with T
the nominal period, i.e. the realized step size against the stance target.
For period-1 orbits this equals |mean step velocity - v_des| whenever the
plant realizes nominal timing.
"""
import copy
from collections import deque
from dataclasses import dataclass, field, replace as dc_replace

import numpy as np

from .errors import (ConfigError, DegenerateFeedforwardError, FallDetected,
                     SingularModelError, UncontrollableModelError)
from .gains import FeedbackGain, controllability_ok, deadbeat_gain, dlqr_gain
from .hlip import GaitParams
from .identify import (LegModels, horizon_update, initial_output_theta,
                       initial_state_theta, predict, projection_update,
                       regressor, state_blocks)
from .plants import HoldSchedule, PlantConfig, eval_schedule, make_plant
from .stepping import (OrbitTarget, output_feedforward,
                       output_tracking_control, p1_orbit, p2_orbit,
                       saturate_step, state_tracking_control)

CONTROLLERS = ("baseline_hlip", "adaptive_state", "adaptive_output")
ORBITS = ("P1", "P2")


@dataclass
class EstimatorOptions:
    gamma: float = 0.2
    eps: float = 1e-8
    window: int = 1
    freeze_on_uncontrollable: bool = True


@dataclass
class GainOptions:
    method: str = "deadbeat"      # "deadbeat" | "lqr"
    lqr_q: float = 1.0            # scalar weights, Q = lqr_q * I, R = lqr_r
    lqr_r: float = 1.0
    cond_tol: float = 1e-8


@dataclass
class ChannelConfig:
    name: str
    plant: PlantConfig
    orbit: str = "P1"
    u_offset: float = 0.2
    v_des: object = 0.0           # float | HoldSchedule
    x0: tuple = (0.0, 0.0)


@dataclass
class ScenarioConfig:
    name: str
    gait: GaitParams
    channels: list
    controller: str = "adaptive_state"
    n_steps: int = 200
    seed: int = 0
    estimator: EstimatorOptions = field(default_factory=EstimatorOptions)
    gains: GainOptions = field(default_factory=GainOptions)
    u_max: float = 0.8
    schema_version: int = 1


@dataclass
class StepRecord:
    channel: str
    step: int
    stance: str
    x_meas: np.ndarray
    x_true: np.ndarray
    u_raw: float
    u_cmd: float
    y_actual: float
    u_star: float
    x_star: np.ndarray
    gain: np.ndarray
    k_f: float | None
    b_f: float | None
    theta: np.ndarray             # stance block snapshot, flattened theta.T
    residual: float | None
    saturated: bool
    status: str                   # "ok" | "fall"
    t_step: float
    seq_update: int
    seq_gain: int
    seq_target: int
    seq_control: int


@dataclass
class Metrics:
    channel: str
    steps: int
    fell: bool
    ss_velocity_error: float
    settling_step: int | None
    max_velocity_error: float
    prediction_rms: float | None
    saturation_fraction: float

    SETTLE_BAND = 0.05            # m/s
    STEADY_FRACTION = 0.2


def validate_config(cfg: ScenarioConfig):
    if cfg.controller not in CONTROLLERS:
        raise ConfigError(
            f"controller must be one of {CONTROLLERS}, got {cfg.controller!r}")
    if cfg.n_steps < 1:
        raise ConfigError("n_steps must be >= 1")
    if not cfg.channels:
        raise ConfigError("scenario needs at least one channel")
    if len(cfg.channels) > 2:
        raise ConfigError("at most two channels are supported")
    names = [ch.name for ch in cfg.channels]
    if len(set(names)) != len(names):
        raise ConfigError("channel names must be unique")
    for ch in cfg.channels:
        if ch.orbit not in ORBITS:
            raise ConfigError(
                f"orbit must be one of {ORBITS}, got {ch.orbit!r}")
    if cfg.gains.method not in ("deadbeat", "lqr"):
        raise ConfigError(
            f"gain method must be 'deadbeat' or 'lqr', got {cfg.gains.method!r}")
    if cfg.u_max <= 0:
        raise ConfigError("u_max must be positive")
    if cfg.estimator.window < 1:
        raise ConfigError("estimator window must be >= 1")


def stance_of(k: int, orbit: str) -> str:
    """Stance leg taking step k; period-2 alternates starting Left."""
    if orbit == "P2":
        return "L" if k % 2 == 0 else "R"
    return "L"


def _channel_seed(cfg: ScenarioConfig, name: str) -> int:
    import zlib
    return (cfg.seed * 1000003 + zlib.crc32(name.encode())) % 2**31


def _make_gain(cfg: ScenarioConfig, a, b) -> FeedbackGain:
    if cfg.gains.method == "lqr":
        gain, _ = dlqr_gain(a, b, q=cfg.gains.lqr_q * np.eye(2),
                            r=np.array([[cfg.gains.lqr_r]]))
        return gain
    return deadbeat_gain(a, b, tol=cfg.gains.cond_tol)


def accept_for_control(theta_new, freeze: bool, tol: float) -> bool:
    """Whether an updated block may drive gain/target synthesis.

    With the freeze policy enabled, estimates whose (A, B) pair fails the
    controllability check keep updating but are rolled back for control.
    """
    if not freeze:
        return True
    a_new, b_new, _ = state_blocks(theta_new)
    return controllability_ok(a_new, b_new, tol)


def _orbit_from(models: LegModels, ch: ChannelConfig, v_des: float,
                period: float) -> OrbitTarget:
    if ch.orbit == "P2":
        return p2_orbit(models.left, models.right, v_des, period,
                        ch.u_offset)
    return p1_orbit(models.left, v_des, period)


def _run_channel(cfg: ScenarioConfig, ch: ChannelConfig):
    adaptive = cfg.controller != "baseline_hlip"
    output_form = cfg.controller == "adaptive_output"
    gait = ch.plant.gait if ch.plant.gait is not None else cfg.gait
    period = gait.period

    plant_cfg = ch.plant
    if plant_cfg.seed is None:
        plant_cfg = dc_replace(plant_cfg, seed=_channel_seed(cfg, ch.name))
    plant = make_plant(plant_cfg, gait)

    theta0 = (initial_output_theta(gait) if output_form
              else initial_state_theta(gait))
    models = LegModels.init(theta0)
    accepted = LegModels.init(theta0)
    nominal = LegModels.init(initial_state_theta(gait))
    gain0 = _make_gain(cfg, *state_blocks(theta0)[:2])
    last_gain = {"L": gain0, "R": gain0}
    last_target = None
    windows = {"L": deque(maxlen=cfg.estimator.window),
               "R": deque(maxlen=cfg.estimator.window)}

    x_true = np.asarray(ch.x0, dtype=float)
    x_meas = plant.measure(x_true)
    prev = None                   # (x_meas, u_cmd, y_actual)
    records = []
    fell = False
    seq = 0

    def tick():
        nonlocal seq
        seq += 1
        return seq

    for k in range(cfg.n_steps):
        stance = stance_of(k, ch.orbit)
        residual = None

        # 2. parameter update for the completed step
        if adaptive and prev is not None:
            completed = stance_of(k - 1, ch.orbit)
            phi = regressor(prev[0], prev[1])
            z = (np.array([x_meas[0], x_meas[1], prev[2]])
                 if output_form else x_meas)
            block = models.for_leg(completed)
            residual = float(np.linalg.norm(z - predict(block, phi)))
            if cfg.estimator.window > 1:
                windows[completed].append((phi, z))
                phis = np.column_stack([p for p, _ in windows[completed]])
                zs = np.vstack([zz for _, zz in windows[completed]])
                theta_new, _ = horizon_update(
                    block, phis, zs, cfg.estimator.gamma, cfg.estimator.eps)
            else:
                theta_new, _ = projection_update(
                    block, phi, z, cfg.estimator.gamma, cfg.estimator.eps)
            models = models.with_leg(completed, theta_new)
            if accept_for_control(theta_new,
                                  cfg.estimator.freeze_on_uncontrollable,
                                  cfg.gains.cond_tol):
                accepted = accepted.with_leg(completed, theta_new)
        seq_update = tick()

        # 3. gain from the accepted estimate (baseline keeps the nominal gain)
        if adaptive:
            a_c, b_c, _ = state_blocks(accepted.for_leg(stance))
            try:
                gain = _make_gain(cfg, a_c, b_c)
            except UncontrollableModelError:
                gain = last_gain[stance]
            last_gain[stance] = gain
        else:
            gain = gain0
        seq_gain = tick()

        # 4. desired step size and fixed points from the freshest estimate
        v_des = eval_schedule(ch.v_des, k)
        target_models = accepted if adaptive else nominal
        try:
            target = _orbit_from(target_models, ch, v_des, period)
            last_target = target
        except SingularModelError:
            if last_target is None:
                raise
            target = last_target
        seq_target = tick()

        # 5. control law
        k_f = b_f = None
        if output_form:
            r = target.u_for(stance)
            try:
                ff = output_feedforward(accepted.for_leg(stance), gain, r)
                u_raw = output_tracking_control(x_meas, gain, ff, r)
                k_f, b_f = ff.k_f, ff.b_f
            except DegenerateFeedforwardError:
                u_raw = state_tracking_control(x_meas, target, gain, stance)
        else:
            u_raw = state_tracking_control(x_meas, target, gain, stance)
        seq_control = tick()

        u_cmd = saturate_step(u_raw, cfg.u_max)
        saturated = u_cmd != u_raw

        # 6. plant advance
        status = "ok"
        try:
            out = plant.step(x_true, u_cmd, k)
        except FallDetected:
            fell = True
            status = "fall"
            out = None

        records.append(StepRecord(
            channel=ch.name, step=k, stance=stance,
            x_meas=x_meas.copy(), x_true=x_true.copy(),
            u_raw=float(u_raw), u_cmd=float(u_cmd),
            y_actual=float(out.y_actual) if out else float("nan"),
            u_star=float(target.u_for(stance)),
            x_star=np.asarray(target.x_for(stance), dtype=float).copy(),
            gain=np.asarray(gain.k, dtype=float).copy(),
            k_f=k_f, b_f=b_f,
            theta=(models.for_leg(stance) if adaptive else theta0).T.ravel().copy(),
            residual=residual, saturated=saturated, status=status,
            t_step=float(out.t_step) if out else float("nan"),
            seq_update=seq_update, seq_gain=seq_gain,
            seq_target=seq_target, seq_control=seq_control))

        if out is None:
            break
        prev = (x_meas.copy(), float(u_cmd), float(out.y_actual))
        x_true, x_meas = out.x_true_next, out.x_meas_next

    return records, _metrics(ch.name, records, period, fell)


def _metrics(name: str, records, period: float, fell: bool) -> Metrics:
    errs = [abs(r.y_actual - r.u_star) / period
            for r in records if r.status == "ok"]
    if not errs:
        return Metrics(channel=name, steps=len(records), fell=fell,
                       ss_velocity_error=float("nan"), settling_step=None,
                       max_velocity_error=float("nan"), prediction_rms=None,
                       saturation_fraction=1.0 if records else 0.0)
    tail = errs[-max(1, int(len(errs) * Metrics.STEADY_FRACTION)):]
    settling = None
    for i in range(len(errs)):
        if all(e <= Metrics.SETTLE_BAND for e in errs[i:]):
            settling = i
            break
    residuals = [r.residual for r in records if r.residual is not None]
    pred_rms = (float(np.sqrt(np.mean(np.square(residuals))))
                if residuals else None)
    sat = sum(1 for r in records if r.saturated) / len(records)
    return Metrics(channel=name, steps=len(records), fell=fell,
                   ss_velocity_error=float(np.mean(tail)),
                   settling_step=settling,
                   max_velocity_error=float(np.max(errs)),
                   prediction_rms=pred_rms,
                   saturation_fraction=float(sat))


def run_episode(cfg: ScenarioConfig):
    """Run every channel of a scenario; returns (records, metrics by channel)."""
    validate_config(cfg)
    records = []
    metrics = {}
    for ch in cfg.channels:
        recs, m = _run_channel(cfg, ch)
        records.extend(recs)
        metrics[ch.name] = m
    return records, metrics


def with_controller(cfg: ScenarioConfig, controller: str) -> ScenarioConfig:
    out = copy.deepcopy(cfg)
    out.controller = controller
    return out


def compare(cfg: ScenarioConfig, controllers):
    """Run one scenario under several controllers with a shared seed.

    Returns a list of (controller, channel, Metrics) rows in a stable order.
    """
    controllers = list(controllers)
    if not controllers:
        raise ConfigError("compare needs at least one controller")
    for c in controllers:
        if c not in CONTROLLERS:
            raise ConfigError(f"unknown controller {c!r}")
    rows = []
    for controller in controllers:
        _, metrics = run_episode(with_controller(cfg, controller))
        for ch in cfg.channels:
            rows.append((controller, ch.name, metrics[ch.name]))
    return rows


def set_by_path(cfg: ScenarioConfig, path: str, value) -> ScenarioConfig:
    """Return a copy of cfg with the dotted attribute path replaced.

    Numeric path segments index into lists, e.g.
    "channels.0.plant.lambda_scale".  Frozen dataclasses along the path are
    rebuilt via dataclasses.replace.
    """
    from dataclasses import is_dataclass
    parts = path.split(".")
    cfg = copy.deepcopy(cfg)

    def assign(obj, idx):
        name = parts[idx]
        if name.isdigit():
            if not isinstance(obj, list) or int(name) >= len(obj):
                raise ConfigError(f"bad index {name!r} in parameter path {path!r}")
            i = int(name)
            if idx == len(parts) - 1:
                obj[i] = value
            else:
                obj[i] = assign(obj[i], idx + 1)
            return obj
        if not hasattr(obj, name):
            raise ConfigError(f"unknown parameter path segment {name!r} in {path!r}")
        if idx == len(parts) - 1:
            new_child = value
        else:
            new_child = assign(getattr(obj, name), idx + 1)
        if is_dataclass(obj) and getattr(obj, "__dataclass_params__").frozen:
            return dc_replace(obj, **{name: new_child})
        setattr(obj, name, new_child)
        return obj

    return assign(cfg, 0)


def sweep(cfg: ScenarioConfig, path: str, values, workers: int = 1):
    """Evaluate Metrics over a parameter grid.

    Every cell runs with the scenario's own seed, so results depend only on
    the parameter value, not on execution order.  Returns a list of
    (value, metrics by channel) pairs in the order of `values`.
    """
    values = list(values)
    if not values:
        raise ConfigError("sweep needs at least one value")
    cells = [set_by_path(cfg, path, v) for v in values]
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda c: run_episode(c)[1], cells))
    else:
        results = [run_episode(c)[1] for c in cells]
    return list(zip(values, results))
