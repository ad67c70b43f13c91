import numpy as np
import pytest

from s2swalk.errors import FallDetected, InvalidArgumentError
from s2swalk.hlip import GaitParams, hlip_s2s
from s2swalk.plants import (HoldSchedule, OutputMap, PlantConfig,
                            RampSchedule, eval_schedule, make_plant)

GAIT = GaitParams(z_com=0.75, t_ssp=0.3)
HLIP = hlip_s2s(GAIT)


class TestSchedules:
    @pytest.mark.parametrize("k,expected", [(0, 0.0), (8, 50.0), (16, 100.0),
                                            (30, 100.0)])
    def test_ramp_interpolates_then_holds(self, k, expected):
        sched = RampSchedule(start=0.0, end=100.0, ramp_steps=16)
        assert eval_schedule(sched, k) == expected

    def test_constant(self):
        assert eval_schedule(1.5, 7) == 1.5

    def test_hold_schedule(self):
        sched = HoldSchedule(((0, 0.0), (10, 0.3), (60, 0.6)))
        assert eval_schedule(sched, 0) == 0.0
        assert eval_schedule(sched, 9) == 0.0
        assert eval_schedule(sched, 10) == 0.3
        assert eval_schedule(sched, 100) == 0.6

    def test_hold_validation(self):
        with pytest.raises(InvalidArgumentError):
            HoldSchedule(((5, 0.0),))
        with pytest.raises(InvalidArgumentError):
            HoldSchedule(((0, 0.0), (10, 0.3), (5, 0.1)))

    def test_ramp_validation(self):
        with pytest.raises(InvalidArgumentError):
            RampSchedule(0.0, 1.0, 0)


class TestLinearPlant:
    def test_nominal_reduces_to_hlip_map(self):
        plant = make_plant(PlantConfig(kind="linear", seed=0), GAIT)
        x = np.array([0.05, 0.3])
        x_ref = x.copy()
        rng = np.random.default_rng(1)
        for k in range(50):
            u = 0.15 + 0.05 * rng.standard_normal()
            out = plant.step(x, u, k)
            x_ref = HLIP.a @ x_ref + HLIP.b * u
            np.testing.assert_allclose(out.x_true_next, x_ref, atol=1e-12)
            np.testing.assert_array_equal(out.x_meas_next, out.x_true_next)
            assert out.y_actual == u
            x = out.x_true_next
            # keep the open-loop test bounded
            if np.linalg.norm(x) > 1.0:
                x = np.array([0.05, 0.3])
                x_ref = x.copy()

    def test_output_map_arithmetic(self):
        cfg = PlantConfig(kind="linear", output_map=OutputMap(e=0.8, f=0.02))
        plant = make_plant(cfg, GAIT)
        out = plant.step(np.zeros(2), 0.1, 0)
        assert out.y_actual == pytest.approx(0.1, abs=1e-15)

    def test_measurement_bias(self):
        cfg = PlantConfig(kind="linear", meas_bias=(0.0, 0.4))
        plant = make_plant(cfg, GAIT)
        out = plant.step(np.zeros(2), 0.0, 0)
        np.testing.assert_allclose(out.x_meas_next - out.x_true_next,
                                   [0.0, 0.4])

    def test_accel_enters_velocity_channel(self):
        cfg = PlantConfig(kind="linear", accel_ext=2.0)
        plant = make_plant(cfg, GAIT)
        out = plant.step(np.zeros(2), 0.0, 0)
        np.testing.assert_allclose(out.x_true_next,
                                   [0.0, 2.0 * GAIT.period], atol=1e-15)

    def test_seeded_noise_is_reproducible(self):
        cfg = PlantConfig(kind="linear", process_noise_sigma=(0.01, 0.01),
                          meas_noise_sigma=(0.005, 0.005), seed=42)
        runs = []
        for _ in range(2):
            plant = make_plant(cfg, GAIT)
            x = np.zeros(2)
            stream = []
            for k in range(30):
                out = plant.step(x, 0.1, k)
                stream.append((out.x_true_next.tobytes(),
                               out.x_meas_next.tobytes()))
                x = np.clip(out.x_true_next, -0.5, 0.5)
            runs.append(stream)
        assert runs[0] == runs[1]

    def test_divergence_raises(self):
        plant = make_plant(PlantConfig(kind="linear"), GAIT)
        with pytest.raises(FallDetected):
            x = np.array([500.0, 900.0])
            for k in range(10):
                x = plant.step(x, 0.0, k).x_true_next


class TestHybridPlant:
    def test_nominal_matches_closed_form(self):
        plant = make_plant(PlantConfig(kind="hybrid_lip"), GAIT)
        rng = np.random.default_rng(2)
        for k in range(50):
            x = rng.uniform(-0.4, 0.4, 2)
            u = rng.uniform(-0.4, 0.4)
            out = plant.step(x, u, k)
            np.testing.assert_allclose(out.x_true_next,
                                       HLIP.a @ x + HLIP.b * u, atol=1e-6)
            assert out.t_step == GAIT.period

    def test_slope_changes_step_timing_proportionally(self):
        cfg = PlantConfig(kind="hybrid_lip", slope_kappa=0.1)
        plant = make_plant(cfg, GAIT)
        for u in (-0.2, 0.0, 0.3):
            out = plant.step(np.array([0.0, 0.1]), u, 0)
            assert out.t_step == pytest.approx(GAIT.t_ssp + 0.1 * u)

    def test_lambda_scale_changes_flow(self):
        cfg = PlantConfig(kind="hybrid_lip", lambda_scale=1.2)
        plant = make_plant(cfg, GAIT)
        scaled_gait = GaitParams(z_com=GAIT.z_com / 1.2 ** 2,
                                 t_ssp=GAIT.t_ssp)
        mats = hlip_s2s(scaled_gait)
        x = np.array([0.1, 0.2])
        out = plant.step(x, 0.05, 0)
        np.testing.assert_allclose(out.x_true_next,
                                   mats.a @ x + mats.b * 0.05, atol=1e-6)

    def test_blowup_detected(self):
        plant = make_plant(PlantConfig(kind="hybrid_lip"), GAIT)
        with pytest.raises(FallDetected):
            x = np.array([900.0, 900.0])
            for k in range(20):
                x = plant.step(x, 0.0, k).x_true_next

    def test_collapsed_timing_detected(self):
        cfg = PlantConfig(kind="hybrid_lip", slope_kappa=1.0)
        plant = make_plant(cfg, GAIT)
        with pytest.raises(FallDetected):
            plant.step(np.zeros(2), -0.35, 0)

    def test_discrepancy_from_best_linear_fit_is_bounded(self):
        # with bounded knobs the gap to the best affine fit stays bounded
        cfg = PlantConfig(kind="hybrid_lip", lambda_scale=1.1,
                          accel_ext=1.0, slope_kappa=0.05)
        plant = make_plant(cfg, GAIT)
        rng = np.random.default_rng(3)
        samples = []
        for k in range(2000):
            x = rng.uniform(-0.4, 0.4, 2)
            u = rng.uniform(-0.4, 0.4)
            out = plant.step(x, u, k)
            samples.append((x, u, out.x_true_next))
        phi = np.array([[x[0], x[1], u, 1.0] for x, u, _ in samples])
        nxt = np.array([nx for _, _, nx in samples])
        coef, *_ = np.linalg.lstsq(phi, nxt, rcond=None)
        resid = nxt - phi @ coef
        sup = np.max(np.linalg.norm(resid, axis=1))
        assert np.isfinite(sup)
        assert sup < 1.0


class TestPlantConfigValidation:
    def test_bad_kind(self):
        with pytest.raises(InvalidArgumentError):
            PlantConfig(kind="full_dynamics")

    def test_output_map_requires_positive_e(self):
        with pytest.raises(InvalidArgumentError):
            OutputMap(e=0.0)

    def test_missing_gait(self):
        with pytest.raises(InvalidArgumentError):
            make_plant(PlantConfig(kind="linear"), None)
