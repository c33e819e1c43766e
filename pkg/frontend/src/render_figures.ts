#!/usr/bin/env node
/**
 * render_figures <artifact_dir> --out <dir> [--compare <distribution.csv>]
 *
 * Reads the CSV artifacts of one optimization run and writes one SVG per
 * panel: objective.svg, distribution.svg, trajectory.svg, and (with
 * --compare) compare.svg overlaying a second distribution.
 */

import * as fs from "node:fs";
import * as path from "node:path";
import {
  SchemaError,
  parseDistribution,
  parseGenerations,
  parseTrajectory,
} from "./csv.js";
import {
  comparePanel,
  distributionPanel,
  objectivePanel,
  trajectoryPanel,
} from "./panels.js";

interface Args {
  artifactDir: string;
  outDir: string;
  compare?: string;
}

function parseArgs(argv: string[]): Args {
  let artifactDir: string | undefined;
  let outDir: string | undefined;
  let compare: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--out") {
      outDir = argv[++i];
    } else if (arg === "--compare") {
      compare = argv[++i];
    } else if (arg.startsWith("--")) {
      throw new Error(`unknown option ${arg}`);
    } else if (artifactDir === undefined) {
      artifactDir = arg;
    } else {
      throw new Error(`unexpected argument ${arg}`);
    }
  }
  if (artifactDir === undefined || outDir === undefined) {
    throw new Error("usage: render_figures <artifact_dir> --out <dir> [--compare <csv>]");
  }
  return { artifactDir, outDir, compare };
}

function readArtifact(dir: string, name: string): string {
  const file = path.join(dir, name);
  if (!fs.existsSync(file)) {
    throw new SchemaError(`missing artifact ${file}`);
  }
  return fs.readFileSync(file, "utf8");
}

export function renderAll(args: Args): string[] {
  fs.mkdirSync(args.outDir, { recursive: true });
  const written: string[] = [];
  const write = (name: string, svg: string): void => {
    const target = path.join(args.outDir, name);
    fs.writeFileSync(target, svg, { encoding: "utf8" });
    written.push(target);
  };

  const gens = parseGenerations(readArtifact(args.artifactDir, "generations.csv"));
  const dist = parseDistribution(readArtifact(args.artifactDir, "distribution.csv"));
  const traj = parseTrajectory(readArtifact(args.artifactDir, "trajectory.csv"));
  write("objective.svg", objectivePanel(gens));
  write("distribution.svg", distributionPanel(dist));
  write("trajectory.svg", trajectoryPanel(traj));

  if (args.compare !== undefined) {
    const other = parseDistribution(
      fs.readFileSync(args.compare, "utf8"),
      path.basename(args.compare),
    );
    write("compare.svg", comparePanel(other, dist));
  }
  return written;
}

function main(): void {
  let args: Args;
  try {
    args = parseArgs(process.argv.slice(2));
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    process.exit(2);
  }
  try {
    for (const file of renderAll(args)) {
      console.log(`wrote ${file}`);
    }
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      process.exit(2);
    }
    throw err;
  }
}

if (process.argv[1] !== undefined && import.meta.url === `file://${process.argv[1]}`) {
  main();
}
