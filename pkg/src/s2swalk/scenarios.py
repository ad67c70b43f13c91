"""Built-in disturbance scenarios and the deterministic suite runner.

Physical disturbances are mapped onto reduced-order plant knobs; the mapping
is qualitative by construction and documented per scenario:

    velocity_tracking_*   mild pendulum-frequency mismatch (lambda_scale)
                          so the nominal model is imperfect
    unknown_load          10 kg on a 33.3 kg robot -> lambda_scale
                          sqrt(1 + 10/33.3) plus a derated output map
    mass_inertia          2.5x leg mass-inertia -> low-level tracking error,
                          realized step y = 0.8 u + 0.02 on the exact plant
    biased_estimation     +0.4 m/s offset on the measured velocity
    drag_force*           ramped horizontal acceleration F / 33.3 kg over
                          5 s of steps; the sagittal case also tightens the
                          step limit to 0.2 m (kinematic stand-in) so the
                          nominal controller cannot counter the drag
    slope_up / slope_down impact-time sensitivity of +-0.1 s per meter of
                          commanded step
"""
import os

from .harness import (ChannelConfig, ScenarioConfig, run_episode,
                      with_controller)
from .hlip import GaitParams
from .plants import HoldSchedule, OutputMap, PlantConfig, RampSchedule

ROBOT_MASS_KG = 33.3
GAIT_MAIN = GaitParams(z_com=0.75, t_ssp=0.3)
GAIT_ALT = GaitParams(z_com=0.65, t_ssp=0.4)

# controllers worth comparing per scenario, used by the suite runner
SCENARIO_CONTROLLERS = {
    "velocity_tracking_t03": ("baseline_hlip", "adaptive_state"),
    "velocity_tracking_t04": ("baseline_hlip", "adaptive_state"),
    "unknown_load": ("baseline_hlip", "adaptive_state"),
    "mass_inertia": ("adaptive_state", "adaptive_output"),
    "biased_estimation": ("baseline_hlip", "adaptive_state",
                          "adaptive_output"),
    "drag_force": ("baseline_hlip", "adaptive_state"),
    "drag_force_lateral": ("baseline_hlip", "adaptive_state"),
    "slope_up": ("baseline_hlip", "adaptive_state"),
    "slope_down": ("baseline_hlip", "adaptive_state"),
}


def _ramp_steps(seconds: float, gait: GaitParams) -> int:
    import math
    return math.ceil(seconds / gait.period)


def builtin_scenarios() -> dict:
    """Named scenario configurations; override the controller per run."""
    drag_sagittal = 100.0 / ROBOT_MASS_KG
    drag_lateral = 50.0 / ROBOT_MASS_KG
    scenarios = {}

    scenarios["velocity_tracking_t03"] = ScenarioConfig(
        name="velocity_tracking_t03", gait=GAIT_MAIN, n_steps=160, seed=11,
        channels=[ChannelConfig(
            name="sagittal", orbit="P1",
            v_des=HoldSchedule(((0, 0.0), (10, 0.3), (60, 0.6), (110, 0.3))),
            plant=PlantConfig(kind="hybrid_lip", lambda_scale=1.08, seed=101))])

    scenarios["velocity_tracking_t04"] = ScenarioConfig(
        name="velocity_tracking_t04", gait=GAIT_ALT, n_steps=160, seed=12,
        channels=[ChannelConfig(
            name="lateral", orbit="P2", u_offset=0.2,
            v_des=HoldSchedule(((0, 0.0), (10, 0.1), (60, -0.1), (110, 0.0))),
            plant=PlantConfig(kind="hybrid_lip", lambda_scale=1.08, seed=102))])

    scenarios["unknown_load"] = ScenarioConfig(
        name="unknown_load", gait=GAIT_MAIN, n_steps=160, seed=13,
        channels=[ChannelConfig(
            name="sagittal", orbit="P1",
            v_des=HoldSchedule(((0, 0.0), (10, 0.3), (60, 0.6))),
            plant=PlantConfig(
                kind="hybrid_lip",
                lambda_scale=(1.0 + 10.0 / ROBOT_MASS_KG) ** 0.5,
                output_map=OutputMap(e=0.95, f=0.01), seed=103))])

    scenarios["mass_inertia"] = ScenarioConfig(
        name="mass_inertia", gait=GAIT_MAIN, n_steps=300, seed=14,
        controller="adaptive_output",
        channels=[ChannelConfig(
            name="sagittal", orbit="P1",
            v_des=HoldSchedule(((0, 0.0), (5, 0.5))),
            plant=PlantConfig(kind="linear",
                              output_map=OutputMap(e=0.8, f=0.02),
                              seed=104))])

    scenarios["biased_estimation"] = ScenarioConfig(
        name="biased_estimation", gait=GAIT_MAIN, n_steps=200, seed=15,
        channels=[ChannelConfig(
            name="sagittal", orbit="P1", v_des=0.5,
            plant=PlantConfig(kind="linear", meas_bias=(0.0, 0.4),
                              seed=105))])

    scenarios["drag_force"] = ScenarioConfig(
        name="drag_force", gait=GAIT_MAIN, n_steps=140, seed=16, u_max=0.2,
        channels=[ChannelConfig(
            name="sagittal", orbit="P1", v_des=0.0,
            plant=PlantConfig(
                kind="hybrid_lip",
                accel_ext=RampSchedule(0.0, drag_sagittal,
                                       _ramp_steps(5.0, GAIT_MAIN)),
                seed=106))])

    scenarios["drag_force_lateral"] = ScenarioConfig(
        name="drag_force_lateral", gait=GAIT_MAIN, n_steps=140, seed=17,
        u_max=0.4,
        channels=[ChannelConfig(
            name="lateral", orbit="P2", u_offset=0.1, v_des=0.0,
            plant=PlantConfig(
                kind="hybrid_lip",
                accel_ext=RampSchedule(0.0, drag_lateral,
                                       _ramp_steps(5.0, GAIT_MAIN)),
                seed=107))])

    for name, kappa in (("slope_up", 0.1), ("slope_down", -0.1)):
        scenarios[name] = ScenarioConfig(
            name=name, gait=GAIT_MAIN, n_steps=150,
            seed=18 if kappa > 0 else 19,
            channels=[ChannelConfig(
                name="sagittal", orbit="P1",
                v_des=HoldSchedule(((0, 0.2), (50, 0.5), (100, 0.8))),
                plant=PlantConfig(kind="hybrid_lip", slope_kappa=kappa,
                                  seed=108 if kappa > 0 else 109))])

    return scenarios


def run_suite(out_dir: str) -> list:
    """Run every built-in scenario under its comparison controllers.

    Writes one record CSV per (scenario, controller, channel) plus a single
    metrics summary; returns the sorted list of written paths.  Output is
    bit-identical across reruns because every seed is pinned in the configs.
    """
    from .io import write_csv, write_metrics_csv

    os.makedirs(out_dir, exist_ok=True)
    paths = []
    metric_rows = []
    for name, cfg in builtin_scenarios().items():
        for controller in SCENARIO_CONTROLLERS[name]:
            records, metrics = run_episode(with_controller(cfg, controller))
            for ch in cfg.channels:
                path = os.path.join(out_dir,
                                    f"{name}__{controller}__{ch.name}.csv")
                write_csv([r for r in records if r.channel == ch.name], path)
                paths.append(path)
                metric_rows.append((name, controller, metrics[ch.name]))
    summary = os.path.join(out_dir, "metrics.csv")
    write_metrics_csv(metric_rows, summary)
    paths.append(summary)
    return sorted(paths)
