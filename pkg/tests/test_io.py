import csv

import pytest
import yaml

from s2swalk.errors import ConfigError
from s2swalk.harness import run_episode, with_controller
from s2swalk.io import (CSV_COLUMNS, config_from_dict, config_to_dict,
                        dump_config, load_config, write_csv,
                        write_metrics_csv)
from s2swalk.plants import HoldSchedule, RampSchedule
from s2swalk.scenarios import builtin_scenarios


def minimal_dict(**overrides):
    d = {
        "schema_version": 1,
        "name": "mini",
        "gait": {"z_com": 0.75, "t_ssp": 0.3},
        "channels": [{
            "name": "sagittal",
            "plant": {"kind": "linear"},
        }],
    }
    d.update(overrides)
    return d


class TestConfigSchema:
    def test_minimal_config_defaults(self):
        cfg = config_from_dict(minimal_dict())
        assert cfg.controller == "adaptive_state"
        assert cfg.estimator.gamma == 0.2
        assert cfg.gains.method == "deadbeat"
        assert cfg.u_max == 0.8
        assert cfg.channels[0].orbit == "P1"

    def test_round_trip_is_idempotent(self):
        for name, cfg in builtin_scenarios().items():
            again = config_from_dict(config_to_dict(cfg))
            assert again == cfg, name

    def test_file_round_trip(self, tmp_path):
        cfg = builtin_scenarios()["drag_force"]
        path = tmp_path / "drag.yaml"
        dump_config(cfg, str(path))
        assert load_config(str(path)) == cfg

    def test_unknown_top_level_key_named(self):
        with pytest.raises(ConfigError, match="config.bogus"):
            config_from_dict(minimal_dict(bogus=1))

    def test_unknown_nested_key_named(self):
        d = minimal_dict()
        d["channels"][0]["plant"]["friction"] = 0.5
        with pytest.raises(ConfigError, match="channels.0.plant.friction"):
            config_from_dict(d)

    def test_missing_gait_named(self):
        d = minimal_dict()
        del d["gait"]
        with pytest.raises(ConfigError, match="config.gait"):
            config_from_dict(d)

    def test_schema_version_checked(self):
        with pytest.raises(ConfigError, match="schema_version"):
            config_from_dict(minimal_dict(schema_version=2))

    def test_schedules_parse(self):
        d = minimal_dict()
        d["channels"][0]["v_des"] = {"hold": [[0, 0.0], [10, 0.5]]}
        d["channels"][0]["plant"]["accel_ext"] = {
            "ramp": {"start": 0.0, "end": 3.0, "steps": 17}}
        cfg = config_from_dict(d)
        assert cfg.channels[0].v_des == HoldSchedule(((0, 0.0), (10, 0.5)))
        assert cfg.channels[0].plant.accel_ext == RampSchedule(0.0, 3.0, 17)

    def test_bad_schedule_named(self):
        d = minimal_dict()
        d["channels"][0]["v_des"] = {"linear": []}
        with pytest.raises(ConfigError, match="v_des"):
            config_from_dict(d)

    def test_malformed_yaml_reported(self, tmp_path):
        path = tmp_path / "broken.yaml"
        path.write_text("gait: [unbalanced")
        with pytest.raises(ConfigError):
            load_config(str(path))

    def test_non_mapping_rejected(self, tmp_path):
        path = tmp_path / "list.yaml"
        path.write_text("- 1\n- 2\n")
        with pytest.raises(ConfigError):
            load_config(str(path))

    def test_runnable_after_round_trip(self, tmp_path):
        cfg = builtin_scenarios()["biased_estimation"]
        path = tmp_path / "bias.yaml"
        dump_config(cfg, str(path))
        _, metrics = run_episode(load_config(str(path)))
        assert metrics["sagittal"].ss_velocity_error <= 1e-6


class TestRecordCsv:
    def run_and_write(self, tmp_path, controller="adaptive_state"):
        cfg = with_controller(builtin_scenarios()["biased_estimation"],
                              controller)
        cfg.n_steps = 25
        records, _ = run_episode(cfg)
        path = tmp_path / "records.csv"
        write_csv(records, str(path))
        with open(path) as fh:
            rows = list(csv.reader(fh))
        return records, rows

    def test_header_and_row_count(self, tmp_path):
        records, rows = self.run_and_write(tmp_path)
        assert rows[0] == CSV_COLUMNS
        assert len(rows) - 1 == len(records) == 25

    def test_floats_round_trip(self, tmp_path):
        records, rows = self.run_and_write(tmp_path)
        header = rows[0]
        for record, row in zip(records, rows[1:]):
            cells = dict(zip(header, row))
            assert float(cells["u_cmd"]) == record.u_cmd
            assert float(cells["x_true_p"]) == record.x_true[0]
            assert float(cells["theta_0"]) == record.theta[0]

    def test_state_form_leaves_output_columns_empty(self, tmp_path):
        _, rows = self.run_and_write(tmp_path)
        cells = dict(zip(rows[0], rows[1]))
        assert cells["theta_8"] == ""
        assert cells["k_f"] == ""

    def test_output_form_fills_all_parameters(self, tmp_path):
        _, rows = self.run_and_write(tmp_path, controller="adaptive_output")
        cells = dict(zip(rows[0], rows[2]))
        assert cells["theta_11"] != ""
        assert cells["k_f"] != ""

    def test_metrics_csv(self, tmp_path):
        cfg = builtin_scenarios()["biased_estimation"]
        cfg.n_steps = 25
        _, metrics = run_episode(cfg)
        path = tmp_path / "metrics.csv"
        write_metrics_csv([("bias", cfg.controller, m)
                           for m in metrics.values()], str(path))
        with open(path) as fh:
            rows = list(csv.reader(fh))
        assert len(rows) == 2
        assert rows[1][0] == "bias"
