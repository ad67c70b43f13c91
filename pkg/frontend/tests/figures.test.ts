import { describe, expect, it } from "vitest";
import { MissingColumnError, loadRun } from "../src/csv.js";
import {
  renderParameterTraces,
  renderStepSizes,
  renderVelocityComparison,
} from "../src/figures.js";
import { writeFixtureCsv } from "./helpers.js";

describe("renderVelocityComparison", () => {
  it("overlays target and one series per run", () => {
    const a = loadRun(writeFixtureCsv(), "baseline");
    const b = loadRun(writeFixtureCsv(), "adaptive");
    const svg = renderVelocityComparison([a, b]);
    expect(svg).toContain("<svg");
    expect(svg).toContain("target");
    expect(svg).toContain("baseline");
    expect(svg).toContain("adaptive");
    expect(svg).toContain("Velocity tracking");
  });

  it("works for a single run", () => {
    const svg = renderVelocityComparison([loadRun(writeFixtureCsv())]);
    expect((svg.match(/<path /g) ?? []).length).toBe(2); // target + one run
  });

  it("rejects an empty run list", () => {
    expect(() => renderVelocityComparison([])).toThrow(/no input runs/);
  });

  it("skips fall rows instead of plotting NaN", () => {
    const run = loadRun(writeFixtureCsv({ steps: 6, fallAtLastStep: true }));
    const svg = renderVelocityComparison([run]);
    expect(svg).not.toContain("NaN");
  });

  it("names a missing column", () => {
    const run = loadRun(writeFixtureCsv({ dropColumns: ["t_step"] }));
    expect(() => renderVelocityComparison([run])).toThrowError(
      MissingColumnError,
    );
    expect(() => renderVelocityComparison([run])).toThrow(/"t_step"/);
  });

  it("is deterministic for identical inputs", () => {
    const file = writeFixtureCsv();
    const one = renderVelocityComparison([loadRun(file)]);
    const two = renderVelocityComparison([loadRun(file)]);
    expect(one).toBe(two);
  });
});

describe("renderStepSizes", () => {
  it("renders commanded and actual panels", () => {
    const svg = renderStepSizes(loadRun(writeFixtureCsv(), "load"));
    expect(svg).toContain("Commanded step size (load)");
    expect(svg).toContain("Actual step size");
    expect(svg).toContain("commanded");
    expect(svg).toContain("actual");
  });

  it("names a missing column", () => {
    const run = loadRun(writeFixtureCsv({ dropColumns: ["u_cmd"] }));
    expect(() => renderStepSizes(run)).toThrow(/"u_cmd"/);
  });
});

describe("renderParameterTraces", () => {
  it("plots the state block with initial-value reference lines", () => {
    const svg = renderParameterTraces(loadRun(writeFixtureCsv()));
    for (const label of ["A11", "B1", "C2"]) {
      expect(svg).toContain(`>${label}</text>`);
    }
    expect(svg).not.toContain(">E</text>"); // state form: no output block
    expect(svg).toContain("dashed: initial model");
    expect(svg).toContain('stroke-dasharray="2 3"');
  });

  it("adds the output block when present", () => {
    const svg = renderParameterTraces(
      loadRun(writeFixtureCsv({ outputForm: true })),
    );
    expect(svg).toContain(">E</text>");
    expect(svg).toContain(">F</text>");
  });

  it("names a missing column", () => {
    const run = loadRun(writeFixtureCsv({ dropColumns: ["theta_3"] }));
    expect(() => renderParameterTraces(run)).toThrow(/"theta_3"/);
  });
});
