// The three figure builders working on harness record CSVs.
import { RunData, finitePairs, numbers, requireColumns } from "./csv.js";
import { PALETTE, Panel, Series, renderFigure } from "./svg.js";

const VELOCITY_COLUMNS = ["step", "y_actual", "u_star", "t_step"];
const STEP_COLUMNS = ["step", "u_cmd", "y_actual", "u_star"];
const THETA_STATE = Array.from({ length: 8 }, (_, i) => `theta_${i}`);
const THETA_OUTPUT = Array.from({ length: 4 }, (_, i) => `theta_${i + 8}`);
const THETA_LABELS = [
  "A11", "A12", "B1", "C1", "A21", "A22", "B2", "C2", "D1", "D2", "E", "F",
];

/** Per-step average velocity: realized step size over realized duration. */
function velocity(run: RunData): Array<[number, number]> {
  const steps = numbers(run, "step");
  const y = numbers(run, "y_actual");
  const t = numbers(run, "t_step");
  return finitePairs(steps, y.map((v, i) => v / t[i]));
}

function reference(run: RunData): Array<[number, number]> {
  const steps = numbers(run, "step");
  const uStar = numbers(run, "u_star");
  const t = numbers(run, "t_step");
  return finitePairs(steps, uStar.map((v, i) => v / t[i]));
}

/**
 * Overlay the target velocity with the realized velocity of each run
 * (typically the same scenario under different controllers).
 */
export function renderVelocityComparison(runs: RunData[]): string {
  if (runs.length === 0) throw new Error("no input runs given");
  for (const run of runs) requireColumns(run, VELOCITY_COLUMNS);
  const series: Series[] = [
    {
      label: "target",
      points: reference(runs[0]),
      color: "#222222",
      dash: "5 3",
    },
  ];
  runs.forEach((run, i) => {
    series.push({
      label: run.label,
      points: velocity(run),
      color: PALETTE[i % PALETTE.length],
    });
  });
  const panel: Panel = {
    title: "Velocity tracking",
    xLabel: "step",
    yLabel: "velocity (m/s)",
    series,
  };
  return renderFigure([panel]);
}

/** Commanded and realized step sizes against the per-step target. */
export function renderStepSizes(run: RunData): string {
  requireColumns(run, STEP_COLUMNS);
  const steps = numbers(run, "step");
  const target: Series = {
    label: "target u*",
    points: finitePairs(steps, numbers(run, "u_star")),
    color: "#222222",
    dash: "5 3",
  };
  const commanded: Panel = {
    title: `Commanded step size (${run.label})`,
    xLabel: "step",
    yLabel: "u_cmd (m)",
    series: [
      target,
      {
        label: "commanded",
        points: finitePairs(steps, numbers(run, "u_cmd")),
        color: PALETTE[0],
      },
    ],
  };
  const actual: Panel = {
    title: "Actual step size",
    xLabel: "step",
    yLabel: "y (m)",
    series: [
      target,
      {
        label: "actual",
        points: finitePairs(steps, numbers(run, "y_actual")),
        color: PALETTE[1],
      },
    ],
  };
  return renderFigure([commanded, actual]);
}

/**
 * Flattened parameter estimates per step.  Dashed reference lines mark the
 * step-0 values, i.e. the nominal-model initialization.
 */
export function renderParameterTraces(run: RunData): string {
  requireColumns(run, ["step", ...THETA_STATE]);
  const steps = numbers(run, "step");
  const hasOutputBlock = THETA_OUTPUT.every(
    (c) => run.columns.includes(c) && run.rows.some((r) => r[c] !== ""),
  );
  const columns = hasOutputBlock ? [...THETA_STATE, ...THETA_OUTPUT] : THETA_STATE;

  const series: Series[] = [];
  const refLines = [];
  for (let i = 0; i < columns.length; i++) {
    const values = numbers(run, columns[i]);
    const color = PALETTE[i % PALETTE.length];
    series.push({
      label: THETA_LABELS[i],
      points: finitePairs(steps, values),
      color,
      width: 1.1,
    });
    if (Number.isFinite(values[0])) {
      refLines.push({ y: values[0], color });
    }
  }
  const panel: Panel = {
    title: `Parameter estimates (${run.label}); dashed: initial model`,
    xLabel: "step",
    yLabel: "parameter value",
    series,
    refLines,
  };
  return renderFigure([panel]);
}
