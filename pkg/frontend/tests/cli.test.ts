import { existsSync, mkdtempSync, readFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { afterEach, describe, expect, it, vi } from "vitest";
import { main, parseArgs } from "../src/cli.js";
import { writeFixtureCsv } from "./helpers.js";

function outPath(): string {
  return join(mkdtempSync(join(tmpdir(), "s2splot-out-")), "fig.svg");
}

afterEach(() => {
  vi.restoreAllMocks();
});

describe("parseArgs", () => {
  it("splits comma-separated inputs and labels", () => {
    const args = parseArgs([
      "velocity-comparison", "--in", "a.csv,b.csv", "--out", "f.svg",
      "--labels", "base,adapt",
    ]);
    expect(args.inputs).toEqual(["a.csv", "b.csv"]);
    expect(args.labels).toEqual(["base", "adapt"]);
  });

  it.each([
    [["velocity-comparison", "--out", "f.svg"], /--in is required/],
    [["velocity-comparison", "--in", "a.csv"], /--out is required/],
    [["velocity-comparison", "--in"], /missing value/],
    [["velocity-comparison", "--bogus", "x", "--in", "a", "--out", "b"],
     /unknown flag/],
    [[], /usage/],
  ])("rejects bad argv %j", (argv, pattern) => {
    expect(() => parseArgs(argv as string[])).toThrow(pattern);
  });
});

describe("main", () => {
  it("writes an SVG and returns 0", () => {
    const log = vi.spyOn(console, "log").mockImplementation(() => {});
    const out = outPath();
    const code = main([
      "step-sizes", "--in", writeFixtureCsv(), "--out", out,
    ]);
    expect(code).toBe(0);
    expect(existsSync(out)).toBe(true);
    expect(readFileSync(out, "utf8")).toContain("<svg");
    expect(log).toHaveBeenCalled();
  });

  it("renders a multi-input velocity comparison", () => {
    vi.spyOn(console, "log").mockImplementation(() => {});
    const out = outPath();
    const inputs = [writeFixtureCsv(), writeFixtureCsv()].join(",");
    const code = main([
      "velocity-comparison", "--in", inputs, "--out", out,
      "--labels", "baseline,adaptive",
    ]);
    expect(code).toBe(0);
    expect(readFileSync(out, "utf8")).toContain("adaptive");
  });

  it("reports a missing column by name and returns 1", () => {
    const err = vi.spyOn(console, "error").mockImplementation(() => {});
    const code = main([
      "parameter-traces",
      "--in", writeFixtureCsv({ dropColumns: ["theta_5"] }),
      "--out", outPath(),
    ]);
    expect(code).toBe(1);
    expect(err.mock.calls.flat().join(" ")).toContain('"theta_5"');
  });

  it("rejects an unknown figure", () => {
    const err = vi.spyOn(console, "error").mockImplementation(() => {});
    expect(main(["pie-chart", "--in", "a.csv", "--out", "b.svg"])).toBe(1);
    expect(err.mock.calls.flat().join(" ")).toContain("unknown figure");
  });

  it("rejects multiple inputs for single-run figures", () => {
    vi.spyOn(console, "error").mockImplementation(() => {});
    const inputs = [writeFixtureCsv(), writeFixtureCsv()].join(",");
    expect(main(["step-sizes", "--in", inputs, "--out", outPath()])).toBe(1);
  });

  it("fails cleanly on a nonexistent file", () => {
    vi.spyOn(console, "error").mockImplementation(() => {});
    expect(main([
      "step-sizes", "--in", "/no/such/file.csv", "--out", outPath(),
    ])).toBe(1);
  });
});
