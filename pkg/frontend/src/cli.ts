#!/usr/bin/env node
// s2splot <figure> --in a.csv[,b.csv...] --out figure.svg [--labels a,b]
import { writeFileSync } from "fs";
import { MissingColumnError, loadRun } from "./csv.js";
import {
  renderParameterTraces,
  renderStepSizes,
  renderVelocityComparison,
} from "./figures.js";

const USAGE = `usage: s2splot <figure> --in <csv[,csv...]> --out <file.svg> [--labels a,b,...]

figures:
  velocity-comparison   overlay target and realized velocities (multi input)
  step-sizes            commanded and actual step sizes vs target (one input)
  parameter-traces      flattened parameter estimates per step (one input)
`;

interface Args {
  figure: string;
  inputs: string[];
  out: string;
  labels: string[];
}

export function parseArgs(argv: string[]): Args {
  const [figure, ...rest] = argv;
  if (!figure || figure === "--help" || figure === "-h") {
    throw new Error(USAGE);
  }
  let inputs: string[] = [];
  let out = "";
  let labels: string[] = [];
  for (let i = 0; i < rest.length; i++) {
    const flag = rest[i];
    const value = rest[i + 1];
    if (value === undefined) throw new Error(`missing value for ${flag}\n${USAGE}`);
    if (flag === "--in") inputs = value.split(",").filter(Boolean);
    else if (flag === "--out") out = value;
    else if (flag === "--labels") labels = value.split(",").filter(Boolean);
    else throw new Error(`unknown flag ${flag}\n${USAGE}`);
    i++;
  }
  if (inputs.length === 0) throw new Error(`--in is required\n${USAGE}`);
  if (!out) throw new Error(`--out is required\n${USAGE}`);
  return { figure, inputs, out, labels };
}

const FIGURES = ["velocity-comparison", "step-sizes", "parameter-traces"];

export function render(args: Args): string {
  if (!FIGURES.includes(args.figure)) {
    throw new Error(`unknown figure ${args.figure}\n${USAGE}`);
  }
  if (args.figure !== "velocity-comparison" && args.inputs.length !== 1) {
    throw new Error(`${args.figure} takes exactly one --in file`);
  }
  const runs = args.inputs.map((file, i) => loadRun(file, args.labels[i]));
  switch (args.figure) {
    case "velocity-comparison":
      return renderVelocityComparison(runs);
    case "step-sizes":
      return renderStepSizes(runs[0]);
    default:
      return renderParameterTraces(runs[0]);
  }
}

export function main(argv: string[]): number {
  try {
    const args = parseArgs(argv);
    writeFileSync(args.out, render(args));
    console.log(`wrote ${args.out}`);
    return 0;
  } catch (err) {
    if (err instanceof MissingColumnError) {
      console.error(`error: ${err.message}`);
    } else {
      console.error(err instanceof Error ? err.message : String(err));
    }
    return 1;
  }
}

if (process.argv[1] && /cli\.(ts|js)$/.test(process.argv[1])) {
  process.exit(main(process.argv.slice(2)));
}
