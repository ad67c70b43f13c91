// Synthetic record CSVs in the harness schema, for tests that must not
// depend on the simulator being installed.
import { mkdtempSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";

export const CSV_COLUMNS = [
  "channel", "step", "stance",
  "x_meas_p", "x_meas_v", "x_true_p", "x_true_v",
  "u_raw", "u_cmd", "y_actual", "u_star", "x_star_p", "x_star_v",
  "gain_p", "gain_v", "k_f", "b_f",
  "residual", "saturated", "status", "t_step",
  "seq_update", "seq_gain", "seq_target", "seq_control",
  ...Array.from({ length: 12 }, (_, i) => `theta_${i}`),
];

export interface FixtureOptions {
  steps?: number;
  outputForm?: boolean;
  fallAtLastStep?: boolean;
  dropColumns?: string[];
}

export function writeFixtureCsv(options: FixtureOptions = {}): string {
  const { steps = 20, outputForm = false, fallAtLastStep = false,
          dropColumns = [] } = options;
  const columns = CSV_COLUMNS.filter((c) => !dropColumns.includes(c));
  const lines = [columns.join(",")];
  for (let k = 0; k < steps; k++) {
    const falling = fallAtLastStep && k === steps - 1;
    const u = 0.15 + 0.1 * Math.exp(-k / 3);
    const row: Record<string, string> = {
      channel: "sagittal",
      step: String(k),
      stance: k % 2 === 0 ? "L" : "R",
      x_meas_p: String(0.07 + 0.01 * Math.sin(k)),
      x_meas_v: String(0.5 + 0.02 * Math.cos(k)),
      x_true_p: String(0.07),
      x_true_v: String(0.5),
      u_raw: String(u),
      u_cmd: String(u),
      y_actual: falling ? "nan" : String(0.8 * u + 0.02),
      u_star: "0.15",
      x_star_p: "0.075",
      x_star_v: "0.548",
      gain_p: "1.0",
      gain_v: "0.348",
      k_f: outputForm ? "0.77" : "",
      b_f: outputForm ? "0.0" : "",
      residual: k === 0 ? "" : "0.001",
      saturated: "0",
      status: falling ? "fall" : "ok",
      t_step: falling ? "nan" : "0.3",
      seq_update: String(4 * k + 1),
      seq_gain: String(4 * k + 2),
      seq_target: String(4 * k + 3),
      seq_control: String(4 * k + 4),
    };
    for (let i = 0; i < 12; i++) {
      const stateBlock = i < 8;
      row[`theta_${i}`] =
        stateBlock || outputForm ? String(1.6 - 0.01 * k + 0.1 * i) : "";
    }
    lines.push(columns.map((c) => row[c]).join(","));
  }
  const dir = mkdtempSync(join(tmpdir(), "s2splot-"));
  const file = join(dir, "fixture.csv");
  writeFileSync(file, lines.join("\n") + "\n");
  return file;
}
