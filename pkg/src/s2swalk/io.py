"""CSV logging and the YAML scenario-config schema (schema_version 1).

The record CSV has a fixed header; floats are written with repr so files
round-trip bit-identically, empty cells mean "not applicable".  theta_0..11
hold the stance leg's parameter block flattened row-major as theta.T, i.e.
[A11, A12, B1, C1, A21, A22, B2, C2, D1, D2, E, F]; state-form runs leave
the last four columns empty.
"""
import csv

import yaml

from .errors import ConfigError
from .harness import (ChannelConfig, EstimatorOptions, GainOptions,
                      ScenarioConfig)
from .hlip import GaitParams
from .plants import HoldSchedule, OutputMap, PlantConfig, RampSchedule

CSV_COLUMNS = [
    "channel", "step", "stance",
    "x_meas_p", "x_meas_v", "x_true_p", "x_true_v",
    "u_raw", "u_cmd", "y_actual", "u_star", "x_star_p", "x_star_v",
    "gain_p", "gain_v", "k_f", "b_f",
    "residual", "saturated", "status", "t_step",
    "seq_update", "seq_gain", "seq_target", "seq_control",
] + [f"theta_{i}" for i in range(12)]

METRICS_COLUMNS = [
    "scenario", "controller", "channel", "steps", "fell",
    "ss_velocity_error", "settling_step", "max_velocity_error",
    "prediction_rms", "saturation_fraction",
]


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(float(value))  # shortest round-trip form
    return str(value)


def write_csv(records, path: str):
    """Write step records with the fixed documented header."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in records:
            theta = list(r.theta) + [None] * (12 - len(r.theta))
            writer.writerow([_cell(v) for v in [
                r.channel, r.step, r.stance,
                r.x_meas[0], r.x_meas[1], r.x_true[0], r.x_true[1],
                r.u_raw, r.u_cmd, r.y_actual, r.u_star,
                r.x_star[0], r.x_star[1],
                r.gain[0], r.gain[1], r.k_f, r.b_f,
                r.residual, r.saturated, r.status, r.t_step,
                r.seq_update, r.seq_gain, r.seq_target, r.seq_control,
            ] + theta])


def write_metrics_csv(rows, path: str):
    """Write (scenario, controller, Metrics) rows as the summary table."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(METRICS_COLUMNS)
        for scenario, controller, m in rows:
            writer.writerow([_cell(v) for v in [
                scenario, controller, m.channel, m.steps, m.fell,
                m.ss_velocity_error, m.settling_step, m.max_velocity_error,
                m.prediction_rms, m.saturation_fraction,
            ]])


def _check_keys(d, allowed, context):
    if not isinstance(d, dict):
        raise ConfigError(f"{context} must be a mapping")
    for key in d:
        if key not in allowed:
            raise ConfigError(f"unknown key: {context}.{key}")


def _get(d, key, default, context, required=False):
    if key not in d:
        if required:
            raise ConfigError(f"missing key: {context}.{key}")
        return default
    return d[key]


def _gait_from(d, context):
    _check_keys(d, {"z_com", "t_ssp", "t_dsp", "gravity"}, context)
    try:
        return GaitParams(
            z_com=float(_get(d, "z_com", None, context, required=True)),
            t_ssp=float(_get(d, "t_ssp", None, context, required=True)),
            t_dsp=float(_get(d, "t_dsp", 0.0, context)),
            gravity=float(_get(d, "gravity", 9.81, context)))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad gait parameters at {context}: {exc}") from exc


def _schedule_from(value, context):
    if isinstance(value, dict):
        if "hold" in value:
            _check_keys(value, {"hold"}, context)
            points = tuple((int(s), float(v)) for s, v in value["hold"])
            return HoldSchedule(points)
        if "ramp" in value:
            _check_keys(value, {"ramp"}, context)
            r = value["ramp"]
            _check_keys(r, {"start", "end", "steps"}, f"{context}.ramp")
            return RampSchedule(start=float(r["start"]), end=float(r["end"]),
                                ramp_steps=int(r["steps"]))
        raise ConfigError(f"{context} must be a number, hold, or ramp")
    try:
        return float(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad schedule at {context}: {exc}") from exc


def _schedule_to(value):
    if isinstance(value, HoldSchedule):
        return {"hold": [[int(s), float(v)] for s, v in value.points]}
    if isinstance(value, RampSchedule):
        return {"ramp": {"start": value.start, "end": value.end,
                         "steps": value.ramp_steps}}
    return float(value)


_PLANT_KEYS = {"kind", "gait", "true_a", "true_b", "true_c", "lambda_scale",
               "accel_ext", "meas_bias", "output_map", "slope_kappa",
               "process_noise_sigma", "meas_noise_sigma", "seed", "dt"}


def _plant_from(d, context):
    _check_keys(d, _PLANT_KEYS, context)
    out_map = OutputMap()
    if "output_map" in d:
        om = d["output_map"]
        _check_keys(om, {"d", "e", "f"}, f"{context}.output_map")
        out_map = OutputMap(d=tuple(float(v) for v in om.get("d", (0.0, 0.0))),
                            e=float(om.get("e", 1.0)),
                            f=float(om.get("f", 0.0)))
    gait = d.get("gait")
    seed = d.get("seed")
    return PlantConfig(
        kind=str(_get(d, "kind", "hybrid_lip", context)),
        gait=_gait_from(gait, f"{context}.gait") if gait is not None else None,
        true_a=(tuple(tuple(float(v) for v in row) for row in d["true_a"])
                if d.get("true_a") is not None else None),
        true_b=(tuple(float(v) for v in d["true_b"])
                if d.get("true_b") is not None else None),
        true_c=(tuple(float(v) for v in d["true_c"])
                if d.get("true_c") is not None else None),
        lambda_scale=float(_get(d, "lambda_scale", 1.0, context)),
        accel_ext=_schedule_from(_get(d, "accel_ext", 0.0, context),
                                 f"{context}.accel_ext"),
        meas_bias=tuple(float(v) for v in _get(d, "meas_bias", (0.0, 0.0),
                                               context)),
        output_map=out_map,
        slope_kappa=float(_get(d, "slope_kappa", 0.0, context)),
        process_noise_sigma=tuple(float(v) for v in _get(
            d, "process_noise_sigma", (0.0, 0.0), context)),
        meas_noise_sigma=tuple(float(v) for v in _get(
            d, "meas_noise_sigma", (0.0, 0.0), context)),
        seed=int(seed) if seed is not None else None,
        dt=float(_get(d, "dt", 1e-3, context)))


def _plant_to(p: PlantConfig):
    d = {"kind": p.kind, "lambda_scale": p.lambda_scale,
         "accel_ext": _schedule_to(p.accel_ext),
         "meas_bias": list(p.meas_bias),
         "output_map": {"d": list(p.output_map.d), "e": p.output_map.e,
                        "f": p.output_map.f},
         "slope_kappa": p.slope_kappa,
         "process_noise_sigma": list(p.process_noise_sigma),
         "meas_noise_sigma": list(p.meas_noise_sigma),
         "seed": p.seed, "dt": p.dt}
    if p.gait is not None:
        d["gait"] = _gait_to(p.gait)
    if p.true_a is not None:
        d["true_a"] = [list(row) for row in p.true_a]
    if p.true_b is not None:
        d["true_b"] = list(p.true_b)
    if p.true_c is not None:
        d["true_c"] = list(p.true_c)
    return d


def _gait_to(g: GaitParams):
    return {"z_com": g.z_com, "t_ssp": g.t_ssp, "t_dsp": g.t_dsp,
            "gravity": g.gravity}


def config_from_dict(d) -> ScenarioConfig:
    top_keys = {"schema_version", "name", "gait", "controller", "n_steps",
                "seed", "u_max", "estimator", "gains", "channels"}
    _check_keys(d, top_keys, "config")
    version = _get(d, "schema_version", None, "config", required=True)
    if int(version) != 1:
        raise ConfigError(f"unsupported schema_version {version!r}")
    gait = _gait_from(_get(d, "gait", None, "config", required=True),
                      "config.gait")
    est = EstimatorOptions()
    if "estimator" in d:
        e = d["estimator"]
        _check_keys(e, {"gamma", "eps", "window", "freeze_on_uncontrollable"},
                    "config.estimator")
        est = EstimatorOptions(
            gamma=float(e.get("gamma", est.gamma)),
            eps=float(e.get("eps", est.eps)),
            window=int(e.get("window", est.window)),
            freeze_on_uncontrollable=bool(
                e.get("freeze_on_uncontrollable",
                      est.freeze_on_uncontrollable)))
    gains = GainOptions()
    if "gains" in d:
        g = d["gains"]
        _check_keys(g, {"method", "lqr_q", "lqr_r", "cond_tol"},
                    "config.gains")
        gains = GainOptions(method=str(g.get("method", gains.method)),
                            lqr_q=float(g.get("lqr_q", gains.lqr_q)),
                            lqr_r=float(g.get("lqr_r", gains.lqr_r)),
                            cond_tol=float(g.get("cond_tol", gains.cond_tol)))
    channels_raw = _get(d, "channels", None, "config", required=True)
    if not isinstance(channels_raw, list) or not channels_raw:
        raise ConfigError("config.channels must be a non-empty list")
    channels = []
    for i, ch in enumerate(channels_raw):
        context = f"config.channels.{i}"
        _check_keys(ch, {"name", "orbit", "u_offset", "v_des", "x0", "plant"},
                    context)
        channels.append(ChannelConfig(
            name=str(_get(ch, "name", None, context, required=True)),
            orbit=str(_get(ch, "orbit", "P1", context)),
            u_offset=float(_get(ch, "u_offset", 0.2, context)),
            v_des=_schedule_from(_get(ch, "v_des", 0.0, context),
                                 f"{context}.v_des"),
            x0=tuple(float(v) for v in _get(ch, "x0", (0.0, 0.0), context)),
            plant=_plant_from(_get(ch, "plant", None, context, required=True),
                              f"{context}.plant")))
    return ScenarioConfig(
        name=str(_get(d, "name", "custom", "config")),
        gait=gait,
        channels=channels,
        controller=str(_get(d, "controller", "adaptive_state", "config")),
        n_steps=int(_get(d, "n_steps", 200, "config")),
        seed=int(_get(d, "seed", 0, "config")),
        estimator=est, gains=gains,
        u_max=float(_get(d, "u_max", 0.8, "config")))


def config_to_dict(cfg: ScenarioConfig):
    return {
        "schema_version": cfg.schema_version,
        "name": cfg.name,
        "gait": _gait_to(cfg.gait),
        "controller": cfg.controller,
        "n_steps": cfg.n_steps,
        "seed": cfg.seed,
        "u_max": cfg.u_max,
        "estimator": {
            "gamma": cfg.estimator.gamma, "eps": cfg.estimator.eps,
            "window": cfg.estimator.window,
            "freeze_on_uncontrollable":
                cfg.estimator.freeze_on_uncontrollable},
        "gains": {"method": cfg.gains.method, "lqr_q": cfg.gains.lqr_q,
                  "lqr_r": cfg.gains.lqr_r, "cond_tol": cfg.gains.cond_tol},
        "channels": [{
            "name": ch.name, "orbit": ch.orbit, "u_offset": ch.u_offset,
            "v_des": _schedule_to(ch.v_des), "x0": list(ch.x0),
            "plant": _plant_to(ch.plant)} for ch in cfg.channels],
    }


def load_config(path: str) -> ScenarioConfig:
    with open(path) as fh:
        try:
            data = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ConfigError(f"could not parse {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path} does not hold a config mapping")
    return config_from_dict(data)


def dump_config(cfg: ScenarioConfig, path: str):
    with open(path, "w") as fh:
        yaml.safe_dump(config_to_dict(cfg), fh, sort_keys=False)
