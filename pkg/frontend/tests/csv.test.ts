import * as fs from "node:fs";
import * as path from "node:path";
import { describe, expect, it } from "vitest";
import {
  SchemaError,
  parseBestParams,
  parseDistribution,
  parseGenerations,
  parseTrajectory,
} from "../src/csv";

const FIXTURES = path.join(__dirname, "fixtures");
const read = (...parts: string[]): string =>
  fs.readFileSync(path.join(FIXTURES, ...parts), "utf8");

describe("parseGenerations", () => {
  it("parses a real run artifact", () => {
    const table = parseGenerations(read("run", "generations.csv"));
    expect(table.generation.length).toBe(101); // initial population + 100
    expect(table.generation[0]).toBe(0);
    expect(table.generation.at(-1)).toBe(100);
    // elitism makes the best curve non-increasing
    for (let i = 1; i < table.bestJ.length; i++) {
      expect(table.bestJ[i]).toBeLessThanOrEqual(table.bestJ[i - 1]);
    }
    // the population average never beats the best individual
    for (let i = 0; i < table.bestJ.length; i++) {
      expect(table.avgJ[i]).toBeGreaterThanOrEqual(table.bestJ[i]);
    }
  });

  it("round-trips 17-digit floats exactly", () => {
    const text = "generation,best_J,avg_J\n0,0.32181329403292885,0.44749173062179243\n";
    const table = parseGenerations(text);
    expect(table.bestJ[0]).toBe(0.32181329403292885);
  });

  it("rejects a header-only file", () => {
    expect(() => parseGenerations("generation,best_J,avg_J\n")).toThrow(
      /no data rows/,
    );
  });

  it("names the offending column on header mismatch", () => {
    expect(() => parseGenerations("generation,fitness,avg_J\n0,1,2\n")).toThrow(
      /best_J/,
    );
  });

  it("names the column holding a non-numeric cell", () => {
    expect(() =>
      parseGenerations("generation,best_J,avg_J\n0,oops,0.5\n"),
    ).toThrow(/'best_J'.*'oops'/);
  });

  it("throws SchemaError instances", () => {
    expect(() => parseGenerations("")).toThrow(SchemaError);
  });
});

describe("parseDistribution", () => {
  it("parses run and reference fixtures", () => {
    const run = parseDistribution(read("run", "distribution.csv"));
    expect(run.k.length).toBe(run.n.length);
    expect(run.k.length).toBeGreaterThan(1);
    const planck = parseDistribution(read("planck", "distribution.csv"));
    // thermal occupation decreases with k
    for (let i = 1; i < planck.n.length; i++) {
      expect(planck.n[i]).toBeLessThan(planck.n[i - 1]);
    }
  });

  it("rejects extra columns", () => {
    expect(() => parseDistribution("k,n_k,extra\n1,2,3\n")).toThrow(/extra/);
  });
});

describe("parseTrajectory", () => {
  it("parses the run fixture with dim inferred from the header", () => {
    const traj = parseTrajectory(read("run", "trajectory.csv"));
    expect(traj.dim).toBe(4);
    expect(traj.populations[0]).toEqual([1, 0, 0, 0]);
    // every recorded state is normalized
    for (const row of traj.populations) {
      const total = row.reduce((a, b) => a + b, 0);
      expect(Math.abs(total - 1)).toBeLessThan(1e-9);
    }
  });

  it("rejects a misnamed population column", () => {
    expect(() =>
      parseTrajectory("t,rho_11,rho_23,max_offdiag\n0,1,0,0\n"),
    ).toThrow(/rho_22/);
  });

  it("rejects a missing max_offdiag column", () => {
    expect(() => parseTrajectory("t,rho_11,rho_22\n0,1,0\n")).toThrow(
      /max_offdiag/,
    );
  });
});

describe("parseBestParams", () => {
  it("parses the run fixture", () => {
    const params = parseBestParams(read("run", "best_params.csv"));
    expect(params.index[0]).toBe(1);
    expect(params.index.length).toBe(params.centers.length);
    expect(params.widths.every((w) => w > 0)).toBe(true);
  });

  it("names the offending column", () => {
    expect(() => parseBestParams("i,center,D_i\n1,2,3\n")).toThrow(/k_i/);
  });
});
